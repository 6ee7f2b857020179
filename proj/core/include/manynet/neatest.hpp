#pragma once

#include "manynet/reproduction.hpp"
#include "manynet/search.hpp"
#include "manynet/species.hpp"

namespace manynet {

/// Iterative single-objective baseline: one coverage objective at a time,
/// classic NEAT with fitness sharing, target switch on stagnation.
struct NeatestConfig {
    int populationSize = 150;
    int stagnationGenerations = 10;
    ReproductionRates rates;
    SpeciationConfig speciation;
};

struct NeatestState {
    std::vector<Genome> population;
    std::vector<Species> species;
    int target = -1;
    double bestTargetFitness = 0.0;
    int stagnantGenerations = 0;
    std::map<int, int> attemptCounts;
    InnovationRegistry registry;

    NeatestState(int featureCount, int actionCount) : registry(featureCount, actionCount) {}
};

/// Among the reachable uncovered objectives, picks the one with the lowest
/// fitness observed in any prior evaluation; never-priced objectives rank by
/// CDG depth (shallower first). Ties by attempt count, then randomly.
/// Returns -1 when everything is covered.
int selectTarget(SearchContext& ctx, const std::map<int, int>& attemptCounts, Rng& rng);

NeatestState neatestInit(SearchContext& ctx, const NeatestConfig& config);

/// One NEAT generation toward the current target: speciated reproduction
/// with fitness sharing, collateral coverage committed for every offspring,
/// stagnation-triggered target switches (logged as events).
void neatestStep(SearchContext& ctx, const NeatestConfig& config, NeatestState& state);

SearchResult runNeatest(const GameSpec& spec, const NeatestConfig& config, const SearchLimits& limits,
                        std::uint64_t seed);

} // namespace manynet
