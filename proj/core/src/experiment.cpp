#include "manynet/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "manynet/stats.hpp"

namespace manynet {

std::optional<Algorithm> parseAlgorithm(const std::string& name) {
    if (name == "neatest") return Algorithm::Neatest;
    if (name == "mio") return Algorithm::Mio;
    if (name == "mosa") return Algorithm::Mosa;
    if (name == "newsd") return Algorithm::Newsd;
    return std::nullopt;
}

std::string algorithmName(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::Neatest: return "neatest";
    case Algorithm::Mio: return "mio";
    case Algorithm::Mosa: return "mosa";
    case Algorithm::Newsd: return "newsd";
    }
    return "?";
}

SearchResult runAlgorithm(const GameSpec& spec, Algorithm algorithm, SecondaryCriterion criterion,
                          const SearchLimits& limits, std::uint64_t seed) {
    switch (algorithm) {
    case Algorithm::Neatest: {
        NeatestConfig config;
        return runNeatest(spec, config, limits, seed);
    }
    case Algorithm::Mio: {
        MioConfig config;
        config.criterion = criterion;
        return runMio(spec, config, limits, seed);
    }
    case Algorithm::Mosa: {
        MosaConfig config;
        config.criterion = criterion;
        return runMosa(spec, config, limits, seed);
    }
    case Algorithm::Newsd: {
        NewsdConfig config;
        return runNewsd(spec, config, limits, seed);
    }
    }
    throw UsageError("unknown algorithm");
}

RunReport makeReport(const GameSpec& spec, SearchResult result, int repetition) {
    (void)spec;
    RunReport report;
    report.repetition = repetition;
    report.series = std::move(result.series);
    report.suite = std::move(result.suite);
    report.events = std::move(result.events);
    report.evaluationsUsed = result.evaluationsUsed;
    report.robustnessEpisodes = result.robustnessEpisodes;
    report.won = result.won;
    report.finalStatements = coveredCount(result.objectives, CoverageObjective::Kind::Statement);
    report.totalStatements = totalCount(result.objectives, CoverageObjective::Kind::Statement);
    report.finalBranches = coveredCount(result.objectives, CoverageObjective::Kind::Branch);
    report.totalBranches = totalCount(result.objectives, CoverageObjective::Kind::Branch);
    return report;
}

std::vector<RunReport> runExperiment(const ExperimentConfig& config) {
    const GameSpec* spec = nullptr;
    try {
        spec = &builtinGame(config.gameId);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (config.budgetEvaluations < 1) throw UsageError("budget must be >= 1");
    if (config.repetitions < 1) throw UsageError("repetitions must be >= 1");

    SearchLimits limits{config.budgetEvaluations, config.robustnessExecutions};
    std::vector<RunReport> reports;
    reports.reserve(config.repetitions);
    for (int rep = 0; rep < config.repetitions; ++rep) {
        SearchResult result = runAlgorithm(*spec, config.algorithm, config.criterion, limits,
                                           config.masterSeed + static_cast<std::uint64_t>(rep));
        reports.push_back(makeReport(*spec, std::move(result), rep));
    }
    return reports;
}

namespace {

std::string fixed6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

std::vector<std::string> writeReports(const std::string& dir, const ExperimentConfig& config,
                                      const std::vector<RunReport>& reports) {
    const std::string stem = dir + "/" + config.gameId + "__" + algorithmName(config.algorithm);
    std::vector<std::string> written;

    {
        const std::string path = stem + "__series.csv";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << "repetition,evaluationIndex,coveredStatements,coveredBranches\n";
        for (const auto& report : reports)
            for (const auto& row : report.series)
                out << report.repetition << ',' << row.evaluationIndex << ',' << row.coveredStatements << ','
                    << row.coveredBranches << '\n';
        written.push_back(path);
    }
    {
        const std::string path = stem + "__summary.csv";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << "repetition,evaluationsUsed,robustnessEpisodes,finalStatements,totalStatements,finalBranches,"
               "totalBranches,statementCoverage,branchCoverage,win\n";
        for (const auto& report : reports)
            out << report.repetition << ',' << report.evaluationsUsed << ',' << report.robustnessEpisodes << ','
                << report.finalStatements << ',' << report.totalStatements << ',' << report.finalBranches << ','
                << report.totalBranches << ',' << fixed6(report.statementCoverage()) << ','
                << fixed6(report.branchCoverage()) << ',' << (report.won ? 1 : 0) << '\n';
        written.push_back(path);
    }
    for (const auto& report : reports) {
        const std::string path = stem + "__rep" + std::to_string(report.repetition) + ".suite";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << formatSuite(report.suite);
        written.push_back(path);
    }
    return written;
}

std::vector<ComparisonRow> compareAlgorithms(const std::string& gameId,
                                             const std::map<Algorithm, std::vector<RunReport>>& byAlgorithm) {
    if (byAlgorithm.size() < 2) throw std::invalid_argument("compareAlgorithms: need >= 2 algorithms");
    const std::size_t repetitions = byAlgorithm.begin()->second.size();
    for (const auto& [algorithm, reports] : byAlgorithm)
        if (reports.size() != repetitions)
            throw std::invalid_argument("compareAlgorithms: unequal repetition counts");

    const Algorithm baseline =
        byAlgorithm.count(Algorithm::Neatest) ? Algorithm::Neatest : byAlgorithm.begin()->first;
    std::vector<double> baselineCoverage;
    for (const auto& report : byAlgorithm.at(baseline)) baselineCoverage.push_back(report.branchCoverage());

    std::vector<ComparisonRow> rows;
    for (const auto& [algorithm, reports] : byAlgorithm) {
        ComparisonRow row;
        row.game = gameId;
        row.algorithm = algorithmName(algorithm);
        std::vector<double> coverage;
        for (const auto& report : reports) {
            coverage.push_back(report.branchCoverage());
            row.meanBranchCoverage += report.branchCoverage();
            row.wins += report.won ? 1 : 0;
        }
        row.meanBranchCoverage /= static_cast<double>(reports.size());
        std::vector<double> sorted = coverage;
        std::sort(sorted.begin(), sorted.end());
        row.medianBranchCoverage = sorted.size() % 2 == 1
                                       ? sorted[sorted.size() / 2]
                                       : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
        row.a12 = varghaDelaneyA12(coverage, baselineCoverage);
        row.p = mannWhitneyU(coverage, baselineCoverage).p;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string formatComparisonCsv(const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    out << "game,algorithm,meanBranchCov,medianBranchCov,wins,a12,p\n";
    for (const auto& row : rows)
        out << row.game << ',' << row.algorithm << ',' << fixed6(row.meanBranchCoverage) << ','
            << fixed6(row.medianBranchCoverage) << ',' << row.wins << ',' << fixed6(row.a12) << ','
            << fixed6(row.p) << '\n';
    return out.str();
}

ReplayReport replaySuite(const DynamicTestSuite& suite, const GameSpec& spec, int executions, std::uint64_t seed,
                         std::ostream* traceDump) {
    if (suite.gameId != spec.id)
        throw UsageError("suite was recorded for game '" + suite.gameId + "', not '" + spec.id + "'");
    const Cdg cdg = buildCdg(spec);
    const auto objectives = buildObjectives(spec, cdg);

    ReplayReport report;
    Rng root(seed);
    for (const auto& [objectiveId, entry] : suite.entries) {
        if (objectiveId < 0 || objectiveId >= static_cast<int>(objectives.size()))
            throw UsageError("suite entry references unknown objective " + std::to_string(objectiveId));
        ReplayReport::Row row;
        row.objectiveId = objectiveId;
        row.executions = executions;
        Rng seeds = root.fork(static_cast<std::uint64_t>(objectiveId));
        for (int i = 0; i < executions; ++i) {
            EpisodeOptions options;
            options.traceDump = traceDump;
            const ExecutionTrace trace = runEpisode(spec, entry.genome, seeds.nextUint64(), options);
            if (coveredByTrace(objectives[objectiveId], trace)) ++row.successes;
        }
        if (row.successes != executions) report.allPassed = false;
        report.rows.push_back(row);
    }
    return report;
}

} // namespace manynet
