#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "manynet/genome.hpp"
#include "manynet/objectives.hpp"

namespace manynet {

/// The artifact of a run: for every reliably covered objective, the covering
/// network and the seeds it was verified under.
struct DynamicTestSuite {
    struct Entry {
        int objectiveId = -1;
        Genome genome;
        std::vector<std::uint64_t> verificationSeeds;
        int coveringTick = 0;
    };
    std::string gameId;
    std::map<int, Entry> entries; // objective id -> entry

    bool contains(int objectiveId) const { return entries.count(objectiveId) > 0; }
};

/// True iff the genome's episode covers the objective under `executions`
/// fresh seeds from the stream, all of them.
bool robustnessCheck(const GameSpec& spec, const Genome& genome, const CoverageObjective& objective,
                     int executions, Rng& seedStream);

/// Commits a genome that reached previously uncovered reachable objectives:
/// one robustness batch of `executions` fresh seeds verifies every objective
/// the trace newly reaches (including children unlocked by the same trace);
/// passing objectives are marked covered and receive a copy of the genome.
/// Returns the newly covered objective ids.
std::vector<int> updateSuiteOnCoverage(DynamicTestSuite& suite, const Genome& genome, const ExecutionTrace& trace,
                                       std::vector<CoverageObjective>& objectives, const Cdg& cdg,
                                       const GameSpec& spec, int executions, Rng& robustnessSeeds,
                                       long* episodesSpent = nullptr);

std::string formatSuite(const DynamicTestSuite& suite);
DynamicTestSuite parseSuite(std::istream& in);
DynamicTestSuite parseSuite(const std::string& text);

} // namespace manynet
