#include "manynet/suite.hpp"

#include <istream>
#include <sstream>
#include <stdexcept>

namespace manynet {

bool robustnessCheck(const GameSpec& spec, const Genome& genome, const CoverageObjective& objective,
                     int executions, Rng& seedStream) {
    if (executions < 1) throw std::invalid_argument("robustnessCheck: executions must be >= 1");
    for (int i = 0; i < executions; ++i) {
        const ExecutionTrace trace = runEpisode(spec, genome, seedStream.nextUint64());
        if (!coveredByTrace(objective, trace)) return false;
    }
    return true;
}

std::vector<int> updateSuiteOnCoverage(DynamicTestSuite& suite, const Genome& genome, const ExecutionTrace& trace,
                                       std::vector<CoverageObjective>& objectives, const Cdg& cdg,
                                       const GameSpec& spec, int executions, Rng& robustnessSeeds,
                                       long* episodesSpent) {
    (void)cdg;
    // Candidates: uncovered objectives the trace reaches whose parent is
    // covered, or becomes covered by this very trace (fixed point so that a
    // parent and child reached together commit in one batch).
    std::vector<int> candidates;
    std::vector<bool> isCandidate(objectives.size(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& objective : objectives) {
            if (objective.covered || isCandidate[objective.id]) continue;
            if (!coveredByTrace(objective, trace)) continue;
            const bool parentOk =
                objective.parent < 0 || objectives[objective.parent].covered || isCandidate[objective.parent];
            if (!parentOk) continue;
            isCandidate[objective.id] = true;
            candidates.push_back(objective.id);
            changed = true;
        }
    }
    if (candidates.empty()) return {};

    // One batch of fresh seeds verifies all candidates together.
    std::vector<std::uint64_t> seeds;
    seeds.reserve(executions);
    for (int i = 0; i < executions; ++i) seeds.push_back(robustnessSeeds.nextUint64());

    std::vector<int> hits(candidates.size(), 0);
    for (const std::uint64_t seed : seeds) {
        const ExecutionTrace verification = runEpisode(spec, genome, seed);
        for (std::size_t c = 0; c < candidates.size(); ++c)
            if (coveredByTrace(objectives[candidates[c]], verification)) ++hits[c];
    }
    if (episodesSpent) *episodesSpent += executions;

    std::vector<int> committed;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (hits[c] != executions) continue;
        const int id = candidates[c];
        objectives[id].covered = true;
        DynamicTestSuite::Entry entry;
        entry.objectiveId = id;
        entry.genome = genome;
        entry.genome.trace.reset();
        entry.verificationSeeds = seeds;
        const auto& objective = objectives[id];
        entry.coveringTick = objective.kind == CoverageObjective::Kind::Statement
                                 ? trace.firstExecutedTick.at(objective.stmtId)
                                 : trace.branchFirstTick.at({objective.stmtId, objective.outcome});
        suite.entries[id] = std::move(entry);
        committed.push_back(id);
    }
    return committed;
}

namespace {

[[noreturn]] void parseFail(int lineNo, const std::string& what) {
    throw std::runtime_error("suite parse error at line " + std::to_string(lineNo) + ": " + what);
}

} // namespace

std::string formatSuite(const DynamicTestSuite& suite) {
    std::ostringstream out;
    out << "suite v1\n";
    out << "game " << suite.gameId << "\n";
    out << "entries " << suite.entries.size() << "\n";
    for (const auto& [id, entry] : suite.entries) {
        out << "entry " << id << " tick " << entry.coveringTick << "\n";
        out << "seeds";
        for (const auto seed : entry.verificationSeeds) out << " " << seed;
        out << "\n";
        out << formatGenome(entry.genome);
    }
    return out.str();
}

DynamicTestSuite parseSuite(std::istream& in) {
    int lineNo = 0;
    auto nextLine = [&](std::string& line) {
        if (!std::getline(in, line)) parseFail(lineNo, "unexpected end of input");
        ++lineNo;
    };

    std::string line, word;
    nextLine(line);
    if (line != "suite v1") parseFail(lineNo, "expected 'suite v1'");

    DynamicTestSuite suite;
    nextLine(line);
    {
        std::istringstream ls(line);
        if (!(ls >> word >> suite.gameId) || word != "game") parseFail(lineNo, "expected 'game <id>'");
    }
    std::size_t count = 0;
    nextLine(line);
    {
        std::istringstream ls(line);
        if (!(ls >> word >> count) || word != "entries") parseFail(lineNo, "expected 'entries <count>'");
    }

    for (std::size_t i = 0; i < count; ++i) {
        DynamicTestSuite::Entry entry;
        nextLine(line);
        {
            std::istringstream ls(line);
            std::string tickWord;
            if (!(ls >> word >> entry.objectiveId >> tickWord >> entry.coveringTick) || word != "entry" ||
                tickWord != "tick")
                parseFail(lineNo, "expected 'entry <objective> tick <tick>'");
        }
        nextLine(line);
        {
            std::istringstream ls(line);
            if (!(ls >> word) || word != "seeds") parseFail(lineNo, "expected 'seeds ...'");
            std::uint64_t seed = 0;
            while (ls >> seed) entry.verificationSeeds.push_back(seed);
        }
        try {
            entry.genome = parseGenome(in, lineNo);
        } catch (const std::runtime_error& e) {
            parseFail(lineNo, std::string("in record for objective ") + std::to_string(entry.objectiveId) + ": " +
                                  e.what());
        }
        suite.entries[entry.objectiveId] = std::move(entry);
    }
    return suite;
}

DynamicTestSuite parseSuite(const std::string& text) {
    std::istringstream in(text);
    return parseSuite(in);
}

} // namespace manynet
