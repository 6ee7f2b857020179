// Command-line front end: seeded search runs, batch experiments with CSV
// reports, suite replay verification, and the game catalogue.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "manynet/experiment.hpp"
#include "manynet/game_text.hpp"

using namespace manynet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitVerification = 3;

struct CommonOptions {
    std::string algorithm = "mosa";
    std::string game = "coinmaze";
    std::string secondary = "species";
    long budgetEvals = 2000;
    int repetitions = 30;
    std::uint64_t seed = 1;
    int robustnessExecutions = 10;
    std::string out = "out";
    bool trace = false;
    std::string gameFile; // optional external game description
};

void addRunFlags(CLI::App* cmd, CommonOptions& options, bool withRepetitions) {
    cmd->add_option("--algorithm", options.algorithm, "Search algorithm: neatest | mio | mosa | newsd");
    cmd->add_option("--game", options.game, "Built-in game id (see list-games)");
    cmd->add_option("--game-file", options.gameFile, "Load the game from a description file instead");
    cmd->add_option("--secondary", options.secondary, "Secondary criterion: species | compat | novelty");
    cmd->add_option("--budget-evals", options.budgetEvals, "Fitness-evaluation budget per run");
    if (withRepetitions) cmd->add_option("--repetitions", options.repetitions, "Independent repetitions");
    cmd->add_option("--seed", options.seed, "Master seed");
    cmd->add_option("--robustness-executions", options.robustnessExecutions,
                    "Randomised executions a covering network must survive");
    cmd->add_option("--out", options.out, "Output directory");
    cmd->add_flag("--trace", options.trace, "Dump one line per tick with executed statement ids (verbose)");
}

GameSpec loadGame(const CommonOptions& options) {
    if (!options.gameFile.empty()) {
        std::ifstream in(options.gameFile);
        if (!in) throw UsageError("cannot open game file '" + options.gameFile + "'");
        return parseGameSpec(in);
    }
    try {
        return builtinGame(options.game);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

Algorithm algorithmOf(const CommonOptions& options) {
    const auto algorithm = parseAlgorithm(options.algorithm);
    if (!algorithm) throw UsageError("unknown algorithm '" + options.algorithm + "'");
    return *algorithm;
}

SecondaryCriterion criterionOf(const CommonOptions& options) {
    const auto criterion = parseCriterion(options.secondary);
    if (!criterion) throw UsageError("unknown secondary criterion '" + options.secondary + "'");
    return *criterion;
}

int cmdRun(const CommonOptions& options) {
    const GameSpec spec = loadGame(options);
    SearchLimits limits{options.budgetEvals, options.robustnessExecutions};
    limits.traceDump = options.trace ? &std::cerr : nullptr;

    SearchResult result = runAlgorithm(spec, algorithmOf(options), criterionOf(options), limits, options.seed);
    const RunReport report = makeReport(spec, std::move(result), 0);

    std::filesystem::create_directories(options.out);
    const std::string suitePath =
        options.out + "/" + spec.id + "__" + options.algorithm + "__seed" + std::to_string(options.seed) + ".suite";
    std::ofstream suiteOut(suitePath);
    suiteOut << formatSuite(report.suite);

    std::cout << "game=" << spec.id << " algorithm=" << options.algorithm << " seed=" << options.seed << "\n"
              << "evaluations=" << report.evaluationsUsed << " robustnessEpisodes=" << report.robustnessEpisodes
              << "\n"
              << "statements=" << report.finalStatements << "/" << report.totalStatements
              << " branches=" << report.finalBranches << "/" << report.totalBranches << " win=" << report.won
              << "\n"
              << "suite=" << suitePath << " (" << report.suite.entries.size() << " objectives)\n";
    return kExitOk;
}

int cmdExperiment(const CommonOptions& options) {
    if (!options.gameFile.empty())
        throw UsageError("experiment runs on built-in games; use run for external game files");

    ExperimentConfig config;
    config.algorithm = algorithmOf(options);
    config.criterion = criterionOf(options);
    config.gameId = options.game;
    config.budgetEvaluations = options.budgetEvals;
    config.repetitions = options.repetitions;
    config.robustnessExecutions = options.robustnessExecutions;
    config.masterSeed = options.seed;

    const auto reports = runExperiment(config);
    std::filesystem::create_directories(options.out);
    const auto written = writeReports(options.out, config, reports);

    double meanBranch = 0.0;
    int wins = 0;
    for (const auto& report : reports) {
        meanBranch += report.branchCoverage();
        wins += report.won ? 1 : 0;
    }
    meanBranch /= static_cast<double>(reports.size());
    std::cout << "game=" << config.gameId << " algorithm=" << algorithmName(config.algorithm)
              << " repetitions=" << config.repetitions << " meanBranchCoverage=" << meanBranch << " wins=" << wins
              << "\n";
    for (const auto& path : written) std::cout << "wrote " << path << "\n";
    return kExitOk;
}

int cmdReplay(const CommonOptions& options, const std::string& suitePath) {
    const GameSpec spec = loadGame(options);
    std::ifstream in(suitePath);
    if (!in) throw UsageError("cannot open suite file '" + suitePath + "'");
    DynamicTestSuite suite;
    try {
        suite = parseSuite(in);
    } catch (const std::runtime_error& e) {
        throw UsageError(std::string(e.what()) + " [" + suitePath + "]");
    }

    const auto report = replaySuite(suite, spec, options.robustnessExecutions, options.seed,
                                    options.trace ? &std::cerr : nullptr);
    for (const auto& row : report.rows)
        std::cout << "objective " << row.objectiveId << ": " << row.successes << "/" << row.executions << "\n";
    std::cout << (report.allPassed ? "all objectives verified" : "verification FAILED") << "\n";
    return report.allPassed ? kExitOk : kExitVerification;
}

int cmdListGames() {
    for (const auto& game : builtinGames()) {
        const Cdg cdg = buildCdg(game);
        const auto objectives = buildObjectives(game, cdg);
        std::cout << game.id << ": statements=" << totalCount(objectives, CoverageObjective::Kind::Statement)
                  << " branches=" << totalCount(objectives, CoverageObjective::Kind::Branch)
                  << " features=" << game.featureCount() << " actions=" << game.actions.size()
                  << " ticks=" << game.episodeTicks << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"many-objective neuroevolution test generation for instrumented mini-games"};
    app.require_subcommand(1);

    CommonOptions options;
    std::string suitePath;

    CLI::App* run = app.add_subcommand("run", "One seeded search run; writes the resulting suite");
    addRunFlags(run, options, false);

    CLI::App* experiment = app.add_subcommand("experiment", "Repeated seeded runs with CSV reports");
    addRunFlags(experiment, options, true);

    CLI::App* replay = app.add_subcommand("replay", "Re-verify a stored suite under fresh seeds");
    replay->add_option("suite", suitePath, "Suite file to verify")->required();
    addRunFlags(replay, options, false);

    app.add_subcommand("list-games", "List the built-in games");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // help and friends
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (run->parsed()) return cmdRun(options);
        if (experiment->parsed()) return cmdExperiment(options);
        if (replay->parsed()) return cmdReplay(options, suitePath);
        return cmdListGames();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
