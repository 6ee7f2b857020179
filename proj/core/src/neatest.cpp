#include "manynet/neatest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace manynet {

namespace {

int cdgDepth(const std::vector<CoverageObjective>& objectives, int id) {
    int depth = 0;
    for (int node = objectives[id].parent; node >= 0; node = objectives[node].parent) ++depth;
    return depth;
}

} // namespace

int selectTarget(SearchContext& ctx, const std::map<int, int>& attemptCounts, Rng& rng) {
    const std::vector<int> reachable = ctx.reachable();
    if (reachable.empty()) return -1;

    struct Key {
        int tried;      // 0 = priced before, 1 = untried
        double value;   // best observed fitness, or CDG depth
        int attempts;
        double tie;
    };
    int best = -1;
    Key bestKey{};
    for (const int id : reachable) {
        const double seen = ctx.bestFitnessSeen(id);
        Key key;
        key.tried = std::isinf(seen) ? 1 : 0;
        key.value = std::isinf(seen) ? static_cast<double>(cdgDepth(ctx.objectives(), id)) : seen;
        const auto it = attemptCounts.find(id);
        key.attempts = it == attemptCounts.end() ? 0 : it->second;
        key.tie = rng.uniform();
        const bool better =
            best < 0 || std::tie(key.tried, key.value, key.attempts, key.tie) <
                            std::tie(bestKey.tried, bestKey.value, bestKey.attempts, bestKey.tie);
        if (better) {
            best = id;
            bestKey = key;
        }
    }
    return best;
}

NeatestState neatestInit(SearchContext& ctx, const NeatestConfig& config) {
    NeatestState state(ctx.spec().featureCount(), static_cast<int>(ctx.spec().actions.size()));
    const long count = std::min<long>(config.populationSize, ctx.remainingBudget());
    for (long i = 0; i < count && !ctx.allCovered(); ++i) {
        Genome genome = createMinimalGenome(ctx.spec().featureCount(),
                                            static_cast<int>(ctx.spec().actions.size()), ctx.decisions());
        genome.id = ctx.newGenomeId();
        ctx.evaluateCommitRecord(genome);
        state.population.push_back(std::move(genome));
    }
    state.species = speciate(state.population, {}, config.speciation);
    state.target = selectTarget(ctx, state.attemptCounts, ctx.decisions());
    state.bestTargetFitness = std::numeric_limits<double>::infinity();
    return state;
}

namespace {

// Classic NEAT reproduction toward a single objective: shared fitness
//1/(1+f) / |species| allocates offspring quotas per species.
std::vector<Genome> reproduce(SearchContext& ctx, const NeatestConfig& config, NeatestState& state, int count) {
    Rng& rng = ctx.decisions();
    const auto& population = state.population;

    std::vector<double> score(population.size(), 0.0);
    for (std::size_t i = 0; i < population.size(); ++i)
        score[i] = 1.0 / (1.0 + ctx.fitnessOf(population[i], state.target));

    std::vector<double> speciesScore(state.species.size(), 0.0);
    double total = 0.0;
    for (std::size_t s = 0; s < state.species.size(); ++s) {
        for (const int member : state.species[s].members)
            speciesScore[s] += score[member] / static_cast<double>(state.species[s].members.size());
        total += speciesScore[s];
    }

    // Largest-remainder quota allocation.
    std::vector<int> quota(state.species.size(), 0);
    std::vector<std::pair<double, int>> remainders;
    int assigned = 0;
    for (std::size_t s = 0; s < state.species.size(); ++s) {
        const double exact = total > 0.0 ? count * speciesScore[s] / total : 0.0;
        quota[s] = static_cast<int>(exact);
        assigned += quota[s];
        remainders.push_back({exact - quota[s], static_cast<int>(s)});
    }
    std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (int i = 0; assigned < count && i < static_cast<int>(remainders.size()); ++i, ++assigned)
        ++quota[remainders[i].second];
    // Degenerate rounding cases: give leftovers to the first species.
    while (assigned < count && !quota.empty()) {
        ++quota[0];
        ++assigned;
    }

    std::vector<Genome> offspring;
    offspring.reserve(count);
    for (std::size_t s = 0; s < state.species.size(); ++s) {
        if (quota[s] == 0) continue;
        std::vector<int> members = state.species[s].members;
        std::stable_sort(members.begin(), members.end(), [&](int a, int b) { return score[a] > score[b]; });
        const int parentCount = std::max(1, static_cast<int>(members.size() + 1) / 2);

        int produced = 0;
        if (quota[s] > 0 && members.size() >= 5) { // species champion elitism
            Genome elite = population[members.front()];
            elite.id = ctx.newGenomeId();
            elite.trace.reset();
            elite.speciesId = -1;
            offspring.push_back(std::move(elite));
            ++produced;
        }
        for (; produced < quota[s]; ++produced) {
            const int first = members[rng.index(parentCount)];
            Genome child;
            if (parentCount >= 2 && rng.chance(config.rates.crossoverProb)) {
                int second = first;
                while (second == first) second = members[rng.index(parentCount)];
                FitterParent rel = FitterParent::Equal;
                if (score[first] != score[second])
                    rel = score[first] > score[second] ? FitterParent::A : FitterParent::B;
                child = crossover(population[first], population[second], rel, rng);
            } else {
                child = population[first];
            }
            child = mutateOffspring(std::move(child), state.registry, rng, config.rates);
            child.id = ctx.newGenomeId();
            offspring.push_back(std::move(child));
        }
    }
    return offspring;
}

} // namespace

void neatestStep(SearchContext& ctx, const NeatestConfig& config, NeatestState& state) {
    if (state.target < 0) return;

    const int count = static_cast<int>(std::min<long>(config.populationSize, ctx.remainingBudget()));
    if (count <= 0) return;

    std::vector<Genome> offspring = reproduce(ctx, config, state, count);
    double bestThisGen = std::numeric_limits<double>::infinity();
    std::vector<Genome> evaluated;
    for (auto& child : offspring) {
        if (ctx.budgetExhausted() || ctx.allCovered()) break;
        ctx.evaluateCommitRecord(child);
        bestThisGen = std::min(bestThisGen, ctx.fitnessOf(child, state.target));
        evaluated.push_back(std::move(child));
    }
    if (evaluated.empty()) return;

    state.population = std::move(evaluated);
    state.species = speciate(state.population, state.species, config.speciation);

    if (ctx.objectives()[state.target].covered) {
        ++state.attemptCounts[state.target];
        state.target = selectTarget(ctx, state.attemptCounts, ctx.decisions());
        state.stagnantGenerations = 0;
        state.bestTargetFitness = std::numeric_limits<double>::infinity();
        return;
    }

    if (bestThisGen < state.bestTargetFitness) {
        state.bestTargetFitness = bestThisGen;
        state.stagnantGenerations = 0;
        return;
    }

    ++state.stagnantGenerations;
    if (state.stagnantGenerations >= config.stagnationGenerations) {
        ctx.events.targetSwitches.push_back({ctx.evaluationsUsed(), state.target, state.stagnantGenerations});
        ++state.attemptCounts[state.target];
        state.target = selectTarget(ctx, state.attemptCounts, ctx.decisions());
        state.stagnantGenerations = 0;
        state.bestTargetFitness = std::numeric_limits<double>::infinity();
    }
}

SearchResult runNeatest(const GameSpec& spec, const NeatestConfig& config, const SearchLimits& limits,
                        std::uint64_t seed) {
    SearchContext ctx(spec, limits, seed);
    NeatestState state = neatestInit(ctx, config);
    while (!ctx.done() && state.target >= 0) neatestStep(ctx, config, state);
    return ctx.takeResult();
}

} // namespace manynet
