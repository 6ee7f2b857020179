#pragma once

#include "manynet/reproduction.hpp"
#include "manynet/search.hpp"

namespace manynet {

struct NewsdConfig {
    int populationSize = 50;
    int noviceGenerations = 3;
    int maxTopologies = 20;
    // Per-parent operator rolls while topologies may still grow; a parent
    // that receives no mutation is crossed with a random second parent.
    double structuralProb = 0.25;
    double weightProb = 0.65;
    WeightMutationConfig weights;
};

using TopologySignature = std::vector<int>; // sorted innovation numbers

struct TopologyRecord {
    int memberCount = 0;
    int creationGeneration = 0;
};

TopologySignature topologySignature(const Genome& genome);

/// Proportional draw over non-negative weights.
int rouletteIndex(const std::vector<double>& weights, Rng& rng);

struct NewsdState {
    std::vector<Genome> population;
    std::map<TopologySignature, TopologyRecord> records;
    int generation = 0;
    InnovationRegistry registry;

    NewsdState(int featureCount, int actionCount) : registry(featureCount, actionCount) {}
};

/// Best genome per subproblem (ties to the lower genome id), as indices.
std::vector<int> eliteSet(SearchContext& ctx, const std::vector<Genome>& population,
                          const std::vector<int>& subproblems);

/// Genomes whose topology is at most noviceGenerations old.
std::vector<int> protectedSet(const std::vector<Genome>& population,
                              const std::map<TopologySignature, TopologyRecord>& records, int generation,
                              int noviceGenerations);

/// Elite and protected genomes first (protected truncated newest-first when
/// they overflow), remaining slots filled by drawing a random subproblem and
/// a genome by 1/(1+f) roulette, without replacement.
std::vector<int> selection(SearchContext& ctx, const std::vector<int>& elite, const std::vector<int>& protectedIdx,
                           const std::vector<Genome>& population, const std::vector<int>& subproblems,
                           int populationSize);

/// One offspring per parent: structural or weight mutation while the
/// topology cap allows growth (weight-only once reached); an unmutated
/// parent is crossed with a uniformly random second parent. Offspring are
/// evaluated and committed; topology records grow as children appear.
std::vector<Genome> reproduction(SearchContext& ctx, const NewsdConfig& config, NewsdState& state,
                                 const std::vector<int>& parents, const std::vector<int>& subproblems);

/// Protected genomes enter first, then the floor(populationSize/#subproblems)
/// best per subproblem, then random-subproblem champions; no duplicate
/// admissions. Updates member counts and advances the generation.
void populationUpdate(SearchContext& ctx, const NewsdConfig& config, NewsdState& state,
                      const std::vector<Genome>& parents, const std::vector<Genome>& offspring,
                      const std::vector<int>& subproblems);

void newsdStep(SearchContext& ctx, const NewsdConfig& config, NewsdState& state);

SearchResult runNewsd(const GameSpec& spec, const NewsdConfig& config, const SearchLimits& limits,
                      std::uint64_t seed);

} // namespace manynet
