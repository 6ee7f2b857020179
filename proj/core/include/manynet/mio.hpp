#pragma once

#include <limits>

#include "manynet/preference.hpp"
#include "manynet/reproduction.hpp"
#include "manynet/search.hpp"
#include "manynet/species.hpp"

namespace manynet {

inline constexpr long kCounterInfinity = std::numeric_limits<long>::max();

struct MioConfig {
    double randomProb = 0.5;     // P_r at search start
    double structuralProb = 0.5; // P_st at search start
    int mutationCount = 5;       // m
    int archiveSize = 20;        // A_m
    double focusFraction = 1.0;  // F; with 1 the focus values are reached only at budget exhaustion
    SecondaryCriterion criterion = SecondaryCriterion::Novelty;
    WeightMutationConfig weights;
    SpeciationConfig speciation;
    BehaviorArchive noveltyDefaults;
};

/// h_k = 1/(1+f); 1 exactly when the objective is reached.
double heuristicScore(double fitness);

/// Current values of the dynamically shrinking parameters.
struct MioParams {
    double randomProb = 0.5;
    double structuralProb = 0.5;
    int mutationCount = 5;
    int archiveSize = 20;
};

/// Linear interpolation toward the focus values (P_r -> 0, P_st -> 0,
/// archive -> 1, m -> 2*m) as budgetFraction approaches the focus fraction.
MioParams interpolateParams(const MioConfig& config, double budgetFraction);

struct ObjectiveArchive {
    struct Member {
        Genome genome;
        double heuristic = 0.0;
    };
    std::vector<Member> members; // sorted by heuristic, best first
    long counter = kCounterInfinity;
    double bestHeuristic = -1.0;
};

struct CounterEvent {
    enum class Kind { Sampled, ResetImprovement, ResetChildUnlock };
    Kind kind = Kind::Sampled;
    int objective = -1;
    long counterAfter = 0;
};

struct MioState {
    std::map<int, ObjectiveArchive> archives; // objective id -> archive
    SpeciesPool pool;
    BehaviorArchive noveltyArchive;
    InnovationRegistry registry;
    MioParams current;
    std::vector<Genome> ladderRound; // mutants of the round in progress
    bool logCounters = false;
    std::vector<CounterEvent> counterLog;

    MioState(const MioConfig& config, int featureCount, int actionCount)
        : pool(config.speciation),
          noveltyArchive(config.noveltyDefaults),
          registry(featureCount, actionCount),
          current(interpolateParams(config, 0.0)) {}
};

struct SourceSelection {
    bool searchComplete = false;
    bool generateNew = false;
    int objective = -1;
    std::vector<Genome> genomes; // one per species when sampled
};

/// Random generation with probability P_r (forced while every reachable
/// archive is empty) targeting a uniformly random reachable uncovered
/// objective; otherwise samples one genome per species from the nonempty
/// archive with the lowest counter (ties to the lowest objective id) and
/// increments that counter.
SourceSelection selectSource(SearchContext& ctx, const MioConfig& config, MioState& state);

/// Alg.-3-style archive update for one evaluated mutant: robust suite
/// commits unlock CDG children (counters to zero, archives seeded with this
/// round's covering mutants); otherwise insert below the size limit or
/// replace the worst member when better by fitness, then secondary.
void archiveUpdate(SearchContext& ctx, const MioConfig& config, MioState& state, const Genome& mutant);

/// Up to m mutations: at most one structural (probability P_st, taken
/// first, its mutant unconditionally the next base), the rest weight
/// mutations hill-climbing on the target objective. Sampled bases stop
/// early once the target is covered; generated bases always run all m.
void mutationLadder(SearchContext& ctx, const MioConfig& config, MioState& state, const Genome& base, int target,
                    bool wasSampled);

void updateParameters(const MioConfig& config, MioState& state, double budgetFraction);

/// One select-source/ladder/parameter-update cycle.
void mioIteration(SearchContext& ctx, const MioConfig& config, MioState& state);

SearchResult runMio(const GameSpec& spec, const MioConfig& config, const SearchLimits& limits, std::uint64_t seed);

} // namespace manynet
