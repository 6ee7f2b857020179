#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "manynet/mio.hpp"
#include "manynet/mosa.hpp"
#include "manynet/neatest.hpp"
#include "manynet/newsd.hpp"

namespace manynet {

enum class Algorithm { Neatest, Mio, Mosa, Newsd };

std::optional<Algorithm> parseAlgorithm(const std::string& name); // neatest | mio | mosa | newsd
std::string algorithmName(Algorithm algorithm);

/// Invalid user input (unknown game, unknown algorithm, malformed file).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    Algorithm algorithm = Algorithm::Mosa;
    std::string gameId = "coinmaze";
    SecondaryCriterion criterion = SecondaryCriterion::SpeciesSize;
    long budgetEvaluations = 2000;
    int repetitions = 30;
    int robustnessExecutions = 10;
    std::uint64_t masterSeed = 1;
};

struct RunReport {
    int repetition = 0;
    RunSeries series;
    DynamicTestSuite suite;
    RunEvents events;
    long evaluationsUsed = 0;
    long robustnessEpisodes = 0;
    bool won = false;
    int finalStatements = 0, totalStatements = 0;
    int finalBranches = 0, totalBranches = 0;

    double branchCoverage() const {
        return totalBranches > 0 ? static_cast<double>(finalBranches) / totalBranches : 1.0;
    }
    double statementCoverage() const {
        return totalStatements > 0 ? static_cast<double>(finalStatements) / totalStatements : 1.0;
    }
};

/// Dispatches to the chosen search with that algorithm's default
/// hyperparameters and the given secondary criterion.
SearchResult runAlgorithm(const GameSpec& spec, Algorithm algorithm, SecondaryCriterion criterion,
                          const SearchLimits& limits, std::uint64_t seed);

RunReport makeReport(const GameSpec& spec, SearchResult result, int repetition);

/// repetitions independent runs seeded masterSeed + repetition index.
/// Throws UsageError for an unknown game id.
std::vector<RunReport> runExperiment(const ExperimentConfig& config);

/// One series CSV, one summary CSV, and one suite file per repetition,
/// under <dir>/<game>__<algorithm>__*. Returns the written paths.
std::vector<std::string> writeReports(const std::string& dir, const ExperimentConfig& config,
                                      const std::vector<RunReport>& reports);

struct ComparisonRow {
    std::string game;
    std::string algorithm;
    double meanBranchCoverage = 0.0;
    double medianBranchCoverage = 0.0;
    int wins = 0;
    double a12 = 0.5; // vs the baseline algorithm
    double p = 1.0;
};

/// Per-algorithm summary rows against the baseline (neatest when present,
/// otherwise the first entry).  Requires >= 2 algorithms with equal
/// repetition counts.
std::vector<ComparisonRow> compareAlgorithms(const std::string& gameId,
                                             const std::map<Algorithm, std::vector<RunReport>>& byAlgorithm);

std::string formatComparisonCsv(const std::vector<ComparisonRow>& rows);

struct ReplayReport {
    struct Row {
        int objectiveId = -1;
        int successes = 0;
        int executions = 0;
    };
    std::vector<Row> rows;
    bool allPassed = true;
};

/// Re-runs every stored network under fresh seeds and reports per-objective
/// success counts.
ReplayReport replaySuite(const DynamicTestSuite& suite, const GameSpec& spec, int executions, std::uint64_t seed,
                         std::ostream* traceDump = nullptr);

} // namespace manynet
