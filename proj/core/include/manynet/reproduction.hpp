#pragma once

#include "manynet/genome.hpp"

namespace manynet {

/// Offspring mutation rates shared by the population-based searches.
struct ReproductionRates {
    double crossoverProb = 0.75;
    double weightMutateProb = 0.8;
    double addConnectionProb = 0.05;
    double addNodeProb = 0.03;
    WeightMutationConfig weights;
};

/// Independent weight/add-connection/add-node rolls on a fresh child.
Genome mutateOffspring(Genome child, InnovationRegistry& registry, Rng& rng, const ReproductionRates& rates);

/// Exactly one structural mutation: node split or new connection (coin flip,
/// falling back to the other when the first is impossible).
Genome mutateStructural(const Genome& genome, InnovationRegistry& registry, Rng& rng);

} // namespace manynet
