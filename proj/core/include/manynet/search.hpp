#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <vector>

#include "manynet/objectives.hpp"
#include "manynet/suite.hpp"

namespace manynet {

struct SeriesRow {
    long evaluationIndex = 0;
    int coveredStatements = 0;
    int coveredBranches = 0;
    bool operator==(const SeriesRow&) const = default;
};
using RunSeries = std::vector<SeriesRow>;

struct ImprovementEvent {
    long evaluationIndex = 0;
    std::vector<int> improvedObjectives; // reachable uncovered objectives whose best fitness dropped
};

struct TargetSwitchEvent {
    long evaluationIndex = 0;
    int objectiveId = -1;
    int stagnantGenerations = 0;
};

struct RunEvents {
    std::vector<ImprovementEvent> improvements;
    std::vector<TargetSwitchEvent> targetSwitches;
    long replacementDecisions = 0;    // archive-full replacement comparisons
    long replacementsBySecondary = 0; // of those, decided on a fitness tie
};

struct SearchLimits {
    long budgetEvaluations = 2000;
    int robustnessExecutions = 10;
    std::ostream* traceDump = nullptr; // per-tick statement dump of every episode
};

struct SearchResult {
    DynamicTestSuite suite;
    RunSeries series;
    RunEvents events;
    std::vector<CoverageObjective> objectives;
    long evaluationsUsed = 0;
    long robustnessEpisodes = 0;
    bool won = false;
};

/// Per-run world shared by every algorithm: the game, its objectives, the
/// suite under construction, the evaluation budget, and the seed streams.
/// Search seeds and robustness seeds come from disjoint streams. The budget
/// counts fitness evaluations (one episode each); robustness executions are
/// tracked separately.
class SearchContext {
public:
    SearchContext(const GameSpec& spec, const SearchLimits& limits, std::uint64_t seed);

    const GameSpec& spec() const { return *spec_; }
    const Cdg& cdg() const { return cdg_; }
    const std::vector<CoverageObjective>& objectives() const { return objectives_; }
    std::vector<CoverageObjective>& objectives() { return objectives_; }
    DynamicTestSuite& suite() { return suite_; }
    Rng& decisions() { return decisions_; }

    long evaluationsUsed() const { return evaluations_; }
    long remainingBudget() const { return limits_.budgetEvaluations - evaluations_; }
    bool budgetExhausted() const { return evaluations_ >= limits_.budgetEvaluations; }
    bool allCovered() const;
    bool done() const { return budgetExhausted() || allCovered(); }
    int robustnessExecutions() const { return limits_.robustnessExecutions; }

    long newGenomeId() { return nextGenomeId_++; }

    /// One episode on a fresh search seed; attaches the trace, consumes one
    /// evaluation, and logs objective improvements.
    void evaluate(Genome& genome);

    /// Robustness-gated suite commit of everything the genome's last trace
    /// newly covers. Returns the newly covered objective ids.
    std::vector<int> commitCoverage(const Genome& genome);

    /// Appends one series row; call exactly once per evaluation, after its
    /// commits.
    void recordProgress();

    /// Convenience wrapper for the common evaluate -> commit -> record cycle.
    std::vector<int> evaluateCommitRecord(Genome& genome);

    double fitnessOf(const Genome& genome, int objectiveId) const;
    std::vector<int> reachable() const { return reachableUncovered(objectives_); }
    double bestFitnessSeen(int objectiveId) const;

    SearchResult takeResult();

    RunSeries series;
    RunEvents events;

private:
    const GameSpec* spec_;
    SearchLimits limits_;
    Cdg cdg_;
    std::vector<CoverageObjective> objectives_;
    DynamicTestSuite suite_;
    Rng decisions_;
    Rng episodeSeeds_;
    Rng robustnessSeeds_;
    std::map<int, double> bestFitness_;
    long evaluations_ = 0;
    long robustnessEpisodes_ = 0;
    long nextGenomeId_ = 0;
};

} // namespace manynet
