#include "manynet/mosa.hpp"

#include <algorithm>
#include <numeric>

namespace manynet {

bool dominates(const std::vector<double>& x, const std::vector<double>& y) {
    bool strict = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > y[i]) return false;
        if (x[i] < y[i]) strict = true;
    }
    return strict;
}

std::vector<std::vector<int>> preferenceSorting(const std::vector<std::vector<double>>& fitness,
                                                const std::vector<double>& secondary) {
    const int n = static_cast<int>(fitness.size());
    if (n == 0) return {};
    const std::size_t m = fitness.front().size();

    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    if (m == 0) return {all};

    // Front 0: the best candidate per uncovered objective.
    std::vector<bool> inFrontZero(n, false);
    std::vector<int> frontZero;
    for (std::size_t j = 0; j < m; ++j) {
        int best = 0;
        for (int i = 1; i < n; ++i) {
            if (fitness[i][j] < fitness[best][j] ||
                (fitness[i][j] == fitness[best][j] && secondary[i] > secondary[best]))
                best = i;
        }
        if (!inFrontZero[best]) {
            inFrontZero[best] = true;
            frontZero.push_back(best);
        }
    }
    std::sort(frontZero.begin(), frontZero.end());

    std::vector<std::vector<int>> fronts{frontZero};

    std::vector<int> remaining;
    for (int i = 0; i < n; ++i)
        if (!inFrontZero[i]) remaining.push_back(i);

    while (!remaining.empty()) {
        std::vector<int> front, rest;
        for (const int candidate : remaining) {
            bool dominated = false;
            for (const int other : remaining) {
                if (other == candidate) continue;
                if (dominates(fitness[other], fitness[candidate])) {
                    dominated = true;
                    break;
                }
            }
            (dominated ? rest : front).push_back(candidate);
        }
        fronts.push_back(std::move(front));
        remaining = std::move(rest);
    }
    return fronts;
}

namespace {

std::vector<double> secondarySnapshot(SearchContext& ctx, const MosaConfig& config, MosaState& state,
                                      const std::vector<Genome>& candidates, const std::vector<Species>& species) {
    PreferenceContext context{&candidates, &species, &state.noveltyArchive, &ctx.decisions(),
                              config.speciation.coeffs};
    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (const auto& genome : candidates) scores.push_back(secondaryScore(genome, config.criterion, context));
    return scores;
}

// Surviving species table for a truncated population, keeping ids and
// representatives from the combined-population speciation.
std::vector<Species> filterSpecies(const std::vector<Species>& species, const std::vector<Genome>& population) {
    std::vector<Species> result;
    for (const auto& s : species) {
        Species kept;
        kept.id = s.id;
        kept.representative = s.representative;
        for (int i = 0; i < static_cast<int>(population.size()); ++i)
            if (population[i].speciesId == s.id) kept.members.push_back(i);
        if (!kept.members.empty()) result.push_back(std::move(kept));
    }
    return result;
}

} // namespace

MosaState mosaInit(SearchContext& ctx, const MosaConfig& config) {
    MosaState state(ctx.spec().featureCount(), static_cast<int>(ctx.spec().actions.size()));
    state.noveltyArchive = config.noveltyDefaults;

    const long count = std::min<long>(config.populationSize, ctx.remainingBudget());
    for (long i = 0; i < count && !ctx.allCovered(); ++i) {
        Genome genome = createMinimalGenome(ctx.spec().featureCount(),
                                            static_cast<int>(ctx.spec().actions.size()), ctx.decisions());
        genome.id = ctx.newGenomeId();
        ctx.evaluateCommitRecord(genome);
        state.population.push_back(std::move(genome));
    }
    state.species = speciate(state.population, {}, config.speciation);
    state.rank.assign(state.population.size(), 0);
    state.secondary.assign(state.population.size(), 0.0);
    return state;
}

std::vector<Genome> generateOffspring(SearchContext& ctx, const MosaConfig& config, MosaState& state, int count) {
    Rng& rng = ctx.decisions();
    const auto& population = state.population;

    auto betterParent = [&](int a, int b) {
        if (state.rank[a] != state.rank[b]) return state.rank[a] < state.rank[b] ? a : b;
        if (state.secondary[a] != state.secondary[b]) return state.secondary[a] > state.secondary[b] ? a : b;
        return a;
    };

    std::vector<Genome> offspring;
    offspring.reserve(count);
    for (int c = 0; c < count; ++c) {
        const int first = betterParent(rng.index(population.size()), rng.index(population.size()));

        // Crossover partner from the same species; a singleton species draws
        // from the whole generation instead.
        std::vector<int> sameSpecies;
        for (int i = 0; i < static_cast<int>(population.size()); ++i)
            if (i != first && population[i].speciesId == population[first].speciesId) sameSpecies.push_back(i);
        int partner = -1;
        if (!sameSpecies.empty()) {
            partner = sameSpecies[rng.index(sameSpecies.size())];
        } else if (population.size() > 1) {
            do {
                partner = rng.index(population.size());
            } while (partner == first);
        }

        Genome child;
        if (partner >= 0 && rng.chance(config.rates.crossoverProb)) {
            FitterParent rel = FitterParent::Equal;
            if (state.rank[first] != state.rank[partner])
                rel = state.rank[first] < state.rank[partner] ? FitterParent::A : FitterParent::B;
            else if (state.secondary[first] != state.secondary[partner])
                rel = state.secondary[first] > state.secondary[partner] ? FitterParent::A : FitterParent::B;
            child = crossover(population[first], population[partner], rel, rng);
        } else {
            child = population[first];
        }
        child = mutateOffspring(std::move(child), state.registry, rng, config.rates);
        child.id = ctx.newGenomeId();
        offspring.push_back(std::move(child));
    }
    return offspring;
}

void mosaStep(SearchContext& ctx, const MosaConfig& config, MosaState& state) {
    const int count = static_cast<int>(std::min<long>(config.populationSize, ctx.remainingBudget()));
    if (count <= 0) return;

    std::vector<Genome> offspring = generateOffspring(ctx, config, state, count);
    for (auto& child : offspring) {
        if (ctx.budgetExhausted() || ctx.allCovered()) break;
        ctx.evaluateCommitRecord(child); // suite first: coverage survives truncation
    }

    std::vector<Genome> combined = state.population;
    for (auto& child : offspring)
        if (child.trace) combined.push_back(std::move(child));

    const std::vector<Species> species = speciate(combined, state.species, config.speciation);

    const std::vector<int> objectiveIds = ctx.reachable();
    std::vector<std::vector<double>> fitness(combined.size(), std::vector<double>(objectiveIds.size(), 0.0));
    for (std::size_t i = 0; i < combined.size(); ++i)
        for (std::size_t j = 0; j < objectiveIds.size(); ++j)
            fitness[i][j] = ctx.fitnessOf(combined[i], objectiveIds[j]);
    const std::vector<double> secondary = secondarySnapshot(ctx, config, state, combined, species);

    const auto fronts = preferenceSorting(fitness, secondary);

    std::vector<Genome> next;
    std::vector<int> nextRank;
    std::vector<double> nextSecondary;
    for (std::size_t f = 0; f < fronts.size() && static_cast<int>(next.size()) < config.populationSize; ++f) {
        std::vector<int> front = fronts[f];
        if (static_cast<int>(next.size() + front.size()) > config.populationSize) {
            // Overflowing front: secondary criterion instead of crowding distance.
            std::stable_sort(front.begin(), front.end(),
                             [&](int a, int b) { return secondary[a] > secondary[b]; });
            front.resize(config.populationSize - next.size());
        }
        for (const int idx : front) {
            next.push_back(combined[idx]);
            nextRank.push_back(static_cast<int>(f));
            nextSecondary.push_back(secondary[idx]);
        }
    }

    state.population = std::move(next);
    state.rank = std::move(nextRank);
    state.secondary = std::move(nextSecondary);
    state.species = filterSpecies(species, state.population);
}

SearchResult runMosa(const GameSpec& spec, const MosaConfig& config, const SearchLimits& limits, std::uint64_t seed) {
    SearchContext ctx(spec, limits, seed);
    MosaState state = mosaInit(ctx, config);
    while (!ctx.done()) mosaStep(ctx, config, state);
    return ctx.takeResult();
}

} // namespace manynet
