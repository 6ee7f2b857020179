#include "manynet/preference.hpp"

#include <stdexcept>

#include "manynet/game.hpp"

namespace manynet {

std::optional<SecondaryCriterion> parseCriterion(const std::string& name) {
    if (name == "species") return SecondaryCriterion::SpeciesSize;
    if (name == "compat") return SecondaryCriterion::CompatDistance;
    if (name == "novelty") return SecondaryCriterion::Novelty;
    return std::nullopt;
}

std::string criterionName(SecondaryCriterion criterion) {
    switch (criterion) {
    case SecondaryCriterion::SpeciesSize: return "species";
    case SecondaryCriterion::CompatDistance: return "compat";
    case SecondaryCriterion::Novelty: return "novelty";
    }
    return "?";
}

double secondaryScore(const Genome& genome, SecondaryCriterion criterion, const PreferenceContext& context) {
    switch (criterion) {
    case SecondaryCriterion::SpeciesSize: {
        if (!context.species) throw std::logic_error("secondaryScore: species table missing");
        if (genome.speciesId < 0) throw std::logic_error("secondaryScore: genome not speciated");
        for (const auto& species : *context.species)
            if (species.id == genome.speciesId) return -static_cast<double>(species.members.size());
        throw std::logic_error("secondaryScore: genome's species not in table");
    }
    case SecondaryCriterion::CompatDistance: {
        if (!context.population) throw std::logic_error("secondaryScore: population missing");
        double sum = 0.0;
        int peers = 0;
        for (const auto& other : *context.population) {
            if (&other == &genome || (genome.id >= 0 && other.id == genome.id)) continue;
            sum += compatibilityDistance(genome, other, context.coeffs);
            ++peers;
        }
        return peers > 0 ? sum / peers : 0.0;
    }
    case SecondaryCriterion::Novelty: {
        if (!context.archive || !context.rng) throw std::logic_error("secondaryScore: novelty context missing");
        if (!genome.trace) throw std::logic_error("secondaryScore: genome has no evaluation");
        const std::vector<double> behavior = genome.trace->behaviorDescriptor();
        std::vector<const std::vector<double>*> peers;
        std::vector<std::vector<double>> peerStorage;
        if (context.population) {
            peerStorage.reserve(context.population->size());
            for (const auto& other : *context.population) {
                if (&other == &genome || (genome.id >= 0 && other.id == genome.id)) continue;
                if (!other.trace) continue;
                peerStorage.push_back(other.trace->behaviorDescriptor());
            }
            for (const auto& stored : peerStorage) peers.push_back(&stored);
        }
        return noveltyScore(behavior, *context.archive, peers, *context.rng);
    }
    }
    return 0.0;
}

bool isBetterThanWorst(double candidateFitness, double candidateSecondary, double incumbentFitness,
                       double incumbentSecondary, bool* decidedBySecondary) {
    if (decidedBySecondary) *decidedBySecondary = false;
    if (candidateFitness < incumbentFitness) return true;
    if (candidateFitness > incumbentFitness) return false;
    if (decidedBySecondary) *decidedBySecondary = true;
    return candidateSecondary > incumbentSecondary;
}

} // namespace manynet
