#include "manynet/reproduction.hpp"

namespace manynet {

Genome mutateOffspring(Genome child, InnovationRegistry& registry, Rng& rng, const ReproductionRates& rates) {
    if (rng.chance(rates.weightMutateProb)) child = mutateWeights(child, rng, rates.weights);
    if (rng.chance(rates.addConnectionProb)) child = mutateAddConnection(child, registry, rng);
    if (rng.chance(rates.addNodeProb)) child = mutateAddNode(child, registry, rng);
    child.trace.reset();
    child.speciesId = -1;
    return child;
}

Genome mutateStructural(const Genome& genome, InnovationRegistry& registry, Rng& rng) {
    const bool connectionFirst = rng.chance(0.5);
    Genome result = connectionFirst ? mutateAddConnection(genome, registry, rng) : mutateAddNode(genome, registry, rng);
    if (result.connections.size() == genome.connections.size()) // no-op, try the other operator
        result = connectionFirst ? mutateAddNode(genome, registry, rng) : mutateAddConnection(genome, registry, rng);
    result.trace.reset();
    result.speciesId = -1;
    return result;
}

} // namespace manynet
