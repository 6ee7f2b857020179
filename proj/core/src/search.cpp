#include "manynet/search.hpp"

#include <stdexcept>

namespace manynet {

SearchContext::SearchContext(const GameSpec& spec, const SearchLimits& limits, std::uint64_t seed)
    : spec_(&spec),
      limits_(limits),
      cdg_(buildCdg(spec)),
      objectives_(buildObjectives(spec, cdg_)),
      decisions_(Rng(seed).fork(1)),
      episodeSeeds_(Rng(seed).fork(2)),
      robustnessSeeds_(Rng(seed).fork(3)) {
    suite_.gameId = spec.id;
    if (limits_.budgetEvaluations < 1) throw std::invalid_argument("SearchContext: budget must be >= 1");
}

bool SearchContext::allCovered() const {
    for (const auto& objective : objectives_)
        if (!objective.covered) return false;
    return true;
}

void SearchContext::evaluate(Genome& genome) {
    if (genome.id < 0) genome.id = newGenomeId();
    EpisodeOptions options;
    options.traceDump = limits_.traceDump;
    genome.trace =
        std::make_shared<const ExecutionTrace>(runEpisode(*spec_, genome, episodeSeeds_.nextUint64(), options));
    ++evaluations_;

    ImprovementEvent event;
    event.evaluationIndex = evaluations_;
    for (const int id : reachable()) {
        const double f = objectiveFitness(*genome.trace, objectives_[id], cdg_);
        auto it = bestFitness_.find(id);
        if (it == bestFitness_.end() || f < it->second) {
            bestFitness_[id] = f;
            event.improvedObjectives.push_back(id);
        }
    }
    if (!event.improvedObjectives.empty()) events.improvements.push_back(std::move(event));
}

std::vector<int> SearchContext::commitCoverage(const Genome& genome) {
    if (!genome.trace) throw std::logic_error("commitCoverage: genome was never evaluated");
    return updateSuiteOnCoverage(suite_, genome, *genome.trace, objectives_, cdg_, *spec_,
                                 limits_.robustnessExecutions, robustnessSeeds_, &robustnessEpisodes_);
}

void SearchContext::recordProgress() {
    series.push_back({evaluations_, coveredCount(objectives_, CoverageObjective::Kind::Statement),
                      coveredCount(objectives_, CoverageObjective::Kind::Branch)});
}

std::vector<int> SearchContext::evaluateCommitRecord(Genome& genome) {
    evaluate(genome);
    auto covered = commitCoverage(genome);
    recordProgress();
    return covered;
}

double SearchContext::fitnessOf(const Genome& genome, int objectiveId) const {
    if (!genome.trace) throw std::logic_error("fitnessOf: genome was never evaluated");
    return objectiveFitness(*genome.trace, objectives_[objectiveId], cdg_);
}

double SearchContext::bestFitnessSeen(int objectiveId) const {
    auto it = bestFitness_.find(objectiveId);
    return it == bestFitness_.end() ? std::numeric_limits<double>::infinity() : it->second;
}

SearchResult SearchContext::takeResult() {
    SearchResult result;
    result.suite = std::move(suite_);
    result.series = std::move(series);
    result.events = std::move(events);
    result.objectives = objectives_;
    result.evaluationsUsed = evaluations_;
    result.robustnessEpisodes = robustnessEpisodes_;
    for (const auto& objective : result.objectives) {
        if (objective.kind == CoverageObjective::Kind::Statement && objective.covered &&
            spec_->winningStatementIds.count(objective.stmtId))
            result.won = true;
    }
    return result;
}

} // namespace manynet
