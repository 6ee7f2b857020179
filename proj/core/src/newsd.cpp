#include "manynet/newsd.hpp"

#include <algorithm>
#include <set>

namespace manynet {

TopologySignature topologySignature(const Genome& genome) {
    TopologySignature signature;
    signature.reserve(genome.connections.size());
    for (const auto& conn : genome.connections) signature.push_back(conn.innovation);
    std::sort(signature.begin(), signature.end());
    return signature;
}

int rouletteIndex(const std::vector<double>& weights, Rng& rng) {
    double total = 0.0;
    for (const double w : weights) total += w;
    double roll = rng.uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        roll -= weights[i];
        if (roll <= 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

std::vector<int> eliteSet(SearchContext& ctx, const std::vector<Genome>& population,
                          const std::vector<int>& subproblems) {
    std::set<int> elites;
    for (const int objective : subproblems) {
        int best = -1;
        double bestFitness = 0.0;
        for (int i = 0; i < static_cast<int>(population.size()); ++i) {
            const double f = ctx.fitnessOf(population[i], objective);
            if (best < 0 || f < bestFitness || (f == bestFitness && population[i].id < population[best].id)) {
                best = i;
                bestFitness = f;
            }
        }
        if (best >= 0) elites.insert(best);
    }
    return {elites.begin(), elites.end()};
}

std::vector<int> protectedSet(const std::vector<Genome>& population,
                              const std::map<TopologySignature, TopologyRecord>& records, int generation,
                              int noviceGenerations) {
    std::vector<int> result;
    for (int i = 0; i < static_cast<int>(population.size()); ++i) {
        const auto it = records.find(topologySignature(population[i]));
        if (it == records.end()) continue;
        if (generation - it->second.creationGeneration <= noviceGenerations) result.push_back(i);
    }
    return result;
}

std::vector<int> selection(SearchContext& ctx, const std::vector<int>& elite, const std::vector<int>& protectedIdx,
                           const std::vector<Genome>& population, const std::vector<int>& subproblems,
                           int populationSize) {
    std::set<int> chosen(elite.begin(), elite.end());

    if (static_cast<int>(chosen.size() + protectedIdx.size()) > populationSize) {
        // Overflow: keep the protected members of the newest topologies.
        std::vector<int> ordered = protectedIdx;
        std::stable_sort(ordered.begin(), ordered.end(), [&](int a, int b) {
            return population[a].id > population[b].id; // creation order within this run
        });
        for (const int idx : ordered) {
            if (static_cast<int>(chosen.size()) >= populationSize) break;
            chosen.insert(idx);
        }
    } else {
        chosen.insert(protectedIdx.begin(), protectedIdx.end());
    }

    // Score-proportional roulette per randomly drawn subproblem, without
    // replacement, on transformed scores 1/(1+f).
    while (static_cast<int>(chosen.size()) < populationSize &&
           chosen.size() < population.size() && !subproblems.empty()) {
        const int objective = subproblems[ctx.decisions().index(subproblems.size())];
        std::vector<int> candidates;
        std::vector<double> weights;
        for (int i = 0; i < static_cast<int>(population.size()); ++i) {
            if (chosen.count(i)) continue;
            candidates.push_back(i);
            weights.push_back(1.0 / (1.0 + ctx.fitnessOf(population[i], objective)));
        }
        if (candidates.empty()) break;
        chosen.insert(candidates[rouletteIndex(weights, ctx.decisions())]);
    }
    return {chosen.begin(), chosen.end()};
}

namespace {

void registerTopology(NewsdState& state, const Genome& genome) {
    const TopologySignature signature = topologySignature(genome);
    if (state.records.count(signature)) return;
    state.records.emplace(signature, TopologyRecord{0, state.generation});
}

FitterParent meanScoreRelation(SearchContext& ctx, const Genome& a, const Genome& b,
                               const std::vector<int>& subproblems) {
    if (subproblems.empty()) return FitterParent::Equal;
    double sumA = 0.0, sumB = 0.0;
    for (const int objective : subproblems) {
        sumA += ctx.fitnessOf(a, objective);
        sumB += ctx.fitnessOf(b, objective);
    }
    if (sumA < sumB) return FitterParent::A;
    if (sumB < sumA) return FitterParent::B;
    return FitterParent::Equal;
}

} // namespace

std::vector<Genome> reproduction(SearchContext& ctx, const NewsdConfig& config, NewsdState& state,
                                 const std::vector<int>& parents, const std::vector<int>& subproblems) {
    std::vector<Genome> offspring;
    offspring.reserve(parents.size());

    for (const int parentIdx : parents) {
        if (ctx.budgetExhausted() || ctx.allCovered()) break;
        const Genome& parent = state.population[parentIdx];
        const bool canGrow = static_cast<int>(state.records.size()) < config.maxTopologies;

        Genome child;
        if (canGrow) {
            const double roll = ctx.decisions().uniform();
            if (roll < config.structuralProb) {
                child = mutateStructural(parent, state.registry, ctx.decisions());
            } else if (roll < config.structuralProb + config.weightProb) {
                child = mutateWeights(parent, ctx.decisions(), config.weights);
            } else {
                // No mutation received: crossover with a random second parent
                // (no speciation here).
                const int partnerIdx = parents[ctx.decisions().index(parents.size())];
                const Genome& partner = state.population[partnerIdx];
                child = crossover(parent, partner, meanScoreRelation(ctx, parent, partner, subproblems),
                                  ctx.decisions());
            }
        } else {
            child = mutateWeights(parent, ctx.decisions(), config.weights);
        }

        child.id = ctx.newGenomeId();
        child.speciesId = -1;
        child.trace.reset();
        registerTopology(state, child);
        ctx.evaluateCommitRecord(child);
        offspring.push_back(std::move(child));
    }
    return offspring;
}

void populationUpdate(SearchContext& ctx, const NewsdConfig& config, NewsdState& state,
                      const std::vector<Genome>& parents, const std::vector<Genome>& offspring,
                      const std::vector<int>& subproblems) {
    std::vector<const Genome*> pool;
    for (const auto& g : parents) pool.push_back(&g);
    for (const auto& g : offspring) pool.push_back(&g);

    std::set<long> admitted;
    std::vector<Genome> next;
    auto admit = [&](const Genome* g) {
        if (!admitted.insert(g->id).second) return;
        next.push_back(*g);
    };

    // Protected genomes first, newest topologies kept under overflow.
    std::vector<const Genome*> protectedPool;
    for (const Genome* g : pool) {
        const auto it = state.records.find(topologySignature(*g));
        if (it == state.records.end()) continue;
        if (state.generation - it->second.creationGeneration <= config.noviceGenerations)
            protectedPool.push_back(g);
    }
    std::stable_sort(protectedPool.begin(), protectedPool.end(), [&](const Genome* a, const Genome* b) {
        const int ca = state.records.at(topologySignature(*a)).creationGeneration;
        const int cb = state.records.at(topologySignature(*b)).creationGeneration;
        if (ca != cb) return ca > cb;
        return a->id < b->id;
    });
    for (const Genome* g : protectedPool) {
        if (static_cast<int>(next.size()) >= config.populationSize) break;
        admit(g);
    }

    // n best per subproblem from parents and offspring.
    if (!subproblems.empty()) {
        const int quota = config.populationSize / static_cast<int>(subproblems.size());
        for (const int objective : subproblems) {
            if (static_cast<int>(next.size()) >= config.populationSize) break;
            std::vector<const Genome*> ranked;
            for (const Genome* g : pool)
                if (!admitted.count(g->id)) ranked.push_back(g);
            std::stable_sort(ranked.begin(), ranked.end(), [&](const Genome* a, const Genome* b) {
                const double fa = ctx.fitnessOf(*a, objective), fb = ctx.fitnessOf(*b, objective);
                if (fa != fb) return fa < fb;
                return a->id < b->id;
            });
            for (int i = 0; i < quota && i < static_cast<int>(ranked.size()); ++i) {
                if (static_cast<int>(next.size()) >= config.populationSize) break;
                admit(ranked[i]);
            }
        }
    }

    // Remaining slots: best remaining genome of a randomly drawn subproblem.
    while (static_cast<int>(next.size()) < config.populationSize) {
        std::vector<const Genome*> remaining;
        for (const Genome* g : pool)
            if (!admitted.count(g->id)) remaining.push_back(g);
        if (remaining.empty()) break;
        if (subproblems.empty()) {
            admit(remaining.front());
            continue;
        }
        const int objective = subproblems[ctx.decisions().index(subproblems.size())];
        const Genome* best = remaining.front();
        for (const Genome* g : remaining) {
            const double fg = ctx.fitnessOf(*g, objective), fb = ctx.fitnessOf(*best, objective);
            if (fg < fb || (fg == fb && g->id < best->id)) best = g;
        }
        admit(best);
    }

    state.population = std::move(next);

    for (auto& [signature, record] : state.records) record.memberCount = 0;
    for (const auto& genome : state.population) {
        auto it = state.records.find(topologySignature(genome));
        if (it != state.records.end()) ++it->second.memberCount;
    }
    ++state.generation;
}

void newsdStep(SearchContext& ctx, const NewsdConfig& config, NewsdState& state) {
    const std::vector<int> subproblems = ctx.reachable();
    if (subproblems.empty()) return;

    const std::vector<int> elite = eliteSet(ctx, state.population, subproblems);
    const std::vector<int> novices =
        protectedSet(state.population, state.records, state.generation, config.noviceGenerations);
    const std::vector<int> parents =
        selection(ctx, elite, novices, state.population, subproblems, config.populationSize);

    std::vector<Genome> parentGenomes;
    parentGenomes.reserve(parents.size());
    for (const int idx : parents) parentGenomes.push_back(state.population[idx]);

    const std::vector<Genome> offspring = reproduction(ctx, config, state, parents, subproblems);
    populationUpdate(ctx, config, state, parentGenomes, offspring, subproblems);
}

SearchResult runNewsd(const GameSpec& spec, const NewsdConfig& config, const SearchLimits& limits,
                      std::uint64_t seed) {
    SearchContext ctx(spec, limits, seed);
    NewsdState state(spec.featureCount(), static_cast<int>(spec.actions.size()));

    const long count = std::min<long>(config.populationSize, limits.budgetEvaluations);
    for (long i = 0; i < count && !ctx.allCovered(); ++i) {
        Genome genome = createMinimalGenome(spec.featureCount(), static_cast<int>(spec.actions.size()),
                                            ctx.decisions());
        genome.id = ctx.newGenomeId();
        registerTopology(state, genome);
        ctx.evaluateCommitRecord(genome);
        state.population.push_back(std::move(genome));
    }
    for (auto& [signature, record] : state.records) record.memberCount = static_cast<int>(state.population.size());

    while (!ctx.done()) newsdStep(ctx, config, state);
    return ctx.takeResult();
}

} // namespace manynet
