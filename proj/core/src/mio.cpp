#include "manynet/mio.hpp"

#include <algorithm>
#include <cmath>

namespace manynet {

double heuristicScore(double fitness) { return 1.0 / (1.0 + fitness); }

MioParams interpolateParams(const MioConfig& config, double budgetFraction) {
    const double f = config.focusFraction;
    const double t = f <= 0.0 ? 1.0 : std::min(1.0, std::max(0.0, budgetFraction) / f);
    MioParams params;
    params.randomProb = config.randomProb * (1.0 - t);
    params.structuralProb = config.structuralProb * (1.0 - t);
    params.mutationCount = static_cast<int>(std::llround(config.mutationCount * (1.0 + t)));
    params.archiveSize = std::max(1, static_cast<int>(std::llround(config.archiveSize * (1.0 - t) + t)));
    return params;
}

namespace {

void logCounter(MioState& state, CounterEvent::Kind kind, int objective, long counterAfter) {
    if (state.logCounters) state.counterLog.push_back({kind, objective, counterAfter});
}

double mioSecondary(SearchContext& ctx, const MioConfig& config, MioState& state, const Genome& genome) {
    switch (config.criterion) {
    case SecondaryCriterion::SpeciesSize:
        return -static_cast<double>(state.pool.speciesSizeFor(genome));
    case SecondaryCriterion::CompatDistance: {
        double sum = 0.0;
        int peers = 0;
        for (const Genome* other : state.pool.members()) {
            if (other->id == genome.id) continue;
            sum += compatibilityDistance(genome, *other, config.speciation.coeffs);
            ++peers;
        }
        return peers > 0 ? sum / peers : 0.0;
    }
    case SecondaryCriterion::Novelty: {
        if (!genome.trace) return 1.0;
        std::vector<std::vector<double>> storage;
        for (const Genome* other : state.pool.members()) {
            if (other->id == genome.id || !other->trace) continue;
            storage.push_back(other->trace->behaviorDescriptor());
        }
        std::vector<const std::vector<double>*> peers;
        peers.reserve(storage.size());
        for (const auto& descriptor : storage) peers.push_back(&descriptor);
        return noveltyScore(genome.trace->behaviorDescriptor(), state.noveltyArchive, peers, ctx.decisions());
    }
    }
    return 0.0;
}

// Insert-or-replace one genome into one objective archive.
void insertIntoArchive(SearchContext& ctx, const MioConfig& config, MioState& state, int objectiveId,
                       const Genome& genome) {
    auto& archive = state.archives[objectiveId];
    for (const auto& member : archive.members)
        if (member.genome.id == genome.id) return;

    const double fitness = ctx.fitnessOf(genome, objectiveId);
    const double h = heuristicScore(fitness);

    auto placeSorted = [&](ObjectiveArchive::Member member) {
        auto it = archive.members.begin();
        while (it != archive.members.end() && it->heuristic >= member.heuristic) ++it;
        archive.members.insert(it, std::move(member));
    };

    bool inserted = false;
    if (static_cast<int>(archive.members.size()) < state.current.archiveSize) {
        ObjectiveArchive::Member member{genome, h};
        member.genome.speciesId = state.pool.add(member.genome);
        placeSorted(std::move(member));
        inserted = true;
    } else if (!archive.members.empty()) {
        auto& worst = archive.members.back();
        // Recompute instead of inverting the stored heuristic so exact
        // fitness ties stay exact.
        const double worstFitness = ctx.fitnessOf(worst.genome, objectiveId);
        bool bySecondary = false;
        const double candidateSecondary = mioSecondary(ctx, config, state, genome);
        const double worstSecondary = mioSecondary(ctx, config, state, worst.genome);
        const bool better =
            isBetterThanWorst(fitness, candidateSecondary, worstFitness, worstSecondary, &bySecondary);
        ++ctx.events.replacementDecisions;
        if (bySecondary) ++ctx.events.replacementsBySecondary;
        if (better) {
            state.pool.remove(worst.genome.id);
            archive.members.pop_back();
            ObjectiveArchive::Member member{genome, h};
            member.genome.speciesId = state.pool.add(member.genome);
            placeSorted(std::move(member));
            inserted = true;
        }
    }

    if (inserted && h > archive.bestHeuristic) {
        archive.bestHeuristic = h;
        archive.counter = 0;
        logCounter(state, CounterEvent::Kind::ResetImprovement, objectiveId, 0);
    }
}

void dropArchive(MioState& state, int objectiveId) {
    auto it = state.archives.find(objectiveId);
    if (it == state.archives.end()) return;
    for (const auto& member : it->second.members) state.pool.remove(member.genome.id);
    state.archives.erase(it);
}

} // namespace

SourceSelection selectSource(SearchContext& ctx, const MioConfig& config, MioState& state) {
    SourceSelection selection;
    const std::vector<int> reachable = ctx.reachable();
    if (reachable.empty()) {
        selection.searchComplete = true;
        return selection;
    }

    std::vector<int> nonempty;
    for (const int id : reachable) {
        auto it = state.archives.find(id);
        if (it != state.archives.end() && !it->second.members.empty()) nonempty.push_back(id);
    }

    if (nonempty.empty() || ctx.decisions().chance(state.current.randomProb)) {
        selection.generateNew = true;
        selection.objective = reachable[ctx.decisions().index(reachable.size())];
        Genome genome = createMinimalGenome(ctx.spec().featureCount(),
                                            static_cast<int>(ctx.spec().actions.size()), ctx.decisions());
        genome.id = ctx.newGenomeId();
        selection.genomes.push_back(std::move(genome));
        return selection;
    }

    int chosen = nonempty.front();
    for (const int id : nonempty)
        if (state.archives.at(id).counter < state.archives.at(chosen).counter) chosen = id;
    auto& archive = state.archives.at(chosen);
    ++archive.counter;
    logCounter(state, CounterEvent::Kind::Sampled, chosen, archive.counter);

    selection.generateNew = false;
    selection.objective = chosen;

    // One individual per species present in the archive.
    std::map<int, std::vector<const Genome*>> bySpecies;
    for (const auto& member : archive.members) bySpecies[member.genome.speciesId].push_back(&member.genome);
    for (const auto& [speciesId, members] : bySpecies)
        selection.genomes.push_back(*members[ctx.decisions().index(members.size())]);
    return selection;
}

void archiveUpdate(SearchContext& ctx, const MioConfig& config, MioState& state, const Genome& mutant) {
    const std::vector<int> reachableBefore = ctx.reachable();
    const std::vector<int> newlyCovered = ctx.commitCoverage(mutant);

    for (const int covered : newlyCovered) {
        // Unlock the CDG children: counters to zero and curriculum seeding
        // with every mutant of this round that covered the parent.
        for (const auto& objective : ctx.objectives()) {
            if (objective.parent != covered || objective.covered) continue;
            auto& childArchive = state.archives[objective.id];
            childArchive.counter = 0;
            logCounter(state, CounterEvent::Kind::ResetChildUnlock, objective.id, 0);
            for (const Genome& roundMutant : state.ladderRound) {
                if (!roundMutant.trace) continue;
                if (!coveredByTrace(ctx.objectives()[covered], *roundMutant.trace)) continue;
                insertIntoArchive(ctx, config, state, objective.id, roundMutant);
            }
        }
        dropArchive(state, covered);
    }

    for (const int id : reachableBefore) {
        if (ctx.objectives()[id].covered) continue;
        insertIntoArchive(ctx, config, state, id, mutant);
    }
}

void mutationLadder(SearchContext& ctx, const MioConfig& config, MioState& state, const Genome& base, int target,
                    bool wasSampled) {
    state.ladderRound.clear();
    const int m = state.current.mutationCount;
    const bool structuralFirst = ctx.decisions().chance(state.current.structuralProb);

    Genome best = base;
    for (int i = 1; i <= m; ++i) {
        if (ctx.budgetExhausted() || ctx.allCovered()) break;

        Genome mutant;
        const bool structural = structuralFirst && i == 1;
        if (structural) mutant = mutateStructural(best, state.registry, ctx.decisions());
        else mutant = mutateWeights(best, ctx.decisions(), config.weights);
        mutant.id = ctx.newGenomeId();

        ctx.evaluate(mutant);
        state.ladderRound.push_back(mutant);
        archiveUpdate(ctx, config, state, mutant);
        ctx.recordProgress();

        if (structural) {
            best = std::move(mutant); // novel topologies always continue
        } else if (ctx.fitnessOf(mutant, target) < ctx.fitnessOf(best, target)) {
            best = std::move(mutant);
        }

        if (wasSampled && ctx.objectives()[target].covered) break;
    }
    state.ladderRound.clear();
}

void updateParameters(const MioConfig& config, MioState& state, double budgetFraction) {
    state.current = interpolateParams(config, budgetFraction);
    for (auto& [id, archive] : state.archives) {
        while (static_cast<int>(archive.members.size()) > state.current.archiveSize) {
            state.pool.remove(archive.members.back().genome.id);
            archive.members.pop_back();
        }
    }
}

void mioIteration(SearchContext& ctx, const MioConfig& config, MioState& state) {
    SourceSelection selection = selectSource(ctx, config, state);
    if (selection.searchComplete) return;

    if (selection.generateNew) {
        // The fresh network itself is evaluated as the ladder's baseline.
        Genome& genome = selection.genomes.front();
        if (ctx.budgetExhausted()) return;
        ctx.evaluate(genome);
        ctx.recordProgress();
    }

    for (const Genome& genome : selection.genomes) {
        if (ctx.done()) break;
        mutationLadder(ctx, config, state, genome, selection.objective, !selection.generateNew);
    }

    const double fraction =
        static_cast<double>(ctx.evaluationsUsed()) / static_cast<double>(ctx.evaluationsUsed() + ctx.remainingBudget());
    if (fraction < config.focusFraction || config.focusFraction >= 1.0)
        updateParameters(config, state, fraction);
}

SearchResult runMio(const GameSpec& spec, const MioConfig& config, const SearchLimits& limits, std::uint64_t seed) {
    SearchContext ctx(spec, limits, seed);
    MioState state(config, spec.featureCount(), static_cast<int>(spec.actions.size()));
    while (!ctx.done()) mioIteration(ctx, config, state);
    return ctx.takeResult();
}

} // namespace manynet
