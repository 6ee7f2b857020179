#pragma once

#include "manynet/preference.hpp"
#include "manynet/reproduction.hpp"
#include "manynet/search.hpp"
#include "manynet/species.hpp"

namespace manynet {

struct MosaConfig {
    int populationSize = 50;
    SecondaryCriterion criterion = SecondaryCriterion::SpeciesSize;
    ReproductionRates rates;
    SpeciationConfig speciation;
    BehaviorArchive noveltyDefaults; // k and addProbability for the Novelty criterion
};

/// Pareto dominance under minimization: x is no worse everywhere and
/// strictly better somewhere.
bool dominates(const std::vector<double>& x, const std::vector<double>& y);

/// Preference sorting: front 0 holds, per objective, the candidate with the
/// lowest fitness (ties broken by the higher secondary score, then input
/// order); the remaining candidates are ranked by NSGA-II style
/// non-dominated sorting. With no objectives every candidate lands in one
/// front. fitness[i][j]: candidate i, objective j.
std::vector<std::vector<int>> preferenceSorting(const std::vector<std::vector<double>>& fitness,
                                                const std::vector<double>& secondary);

struct MosaState {
    std::vector<Genome> population;
    std::vector<Species> species;
    std::vector<int> rank;          // last sorting, parallel to population
    std::vector<double> secondary;  // last snapshot, parallel to population
    BehaviorArchive noveltyArchive;
    InnovationRegistry registry;

    MosaState(int featureCount, int actionCount) : registry(featureCount, actionCount) {}
};

MosaState mosaInit(SearchContext& ctx, const MosaConfig& config);

/// Tournament parents with same-species partners (population-wide when the
/// species is a singleton), NEAT crossover and mutation.
std::vector<Genome> generateOffspring(SearchContext& ctx, const MosaConfig& config, MosaState& state, int count);

/// One generation: offspring evaluated and archived, parents and offspring
/// speciated together, preference-sorted fronts fill the next population,
/// the overflowing front truncated by the secondary criterion.
void mosaStep(SearchContext& ctx, const MosaConfig& config, MosaState& state);

SearchResult runMosa(const GameSpec& spec, const MosaConfig& config, const SearchLimits& limits, std::uint64_t seed);

} // namespace manynet
