#include "doctest.h"

#include <set>

#include "manynet/newsd.hpp"

using namespace manynet;

namespace {

struct Fixture {
    const GameSpec& spec = builtinGame("coinmaze");
    SearchContext ctx;
    NewsdState state;

    explicit Fixture(long budget = 100000, std::uint64_t seed = 5)
        : ctx(spec, {budget, 10}, seed), state(spec.featureCount(), static_cast<int>(spec.actions.size())) {}

    Genome freshGenome() {
        Genome g = createMinimalGenome(spec.featureCount(), static_cast<int>(spec.actions.size()),
                                       ctx.decisions());
        g.id = ctx.newGenomeId();
        ctx.evaluate(g);
        ctx.recordProgress();
        return g;
    }
};

} // namespace

TEST_CASE("rouletteIndex favors better transformed scores") {
    // Scores 0.1 and 10 under 1/(1+f): weights ~0.909 and ~0.0909.
    const std::vector<double> weights{1.0 / 1.1, 1.0 / 11.0};
    Rng rng(13);
    int better = 0;
    for (int i = 0; i < 10000; ++i)
        if (rouletteIndex(weights, rng) == 0) ++better;
    CHECK(better > 8000);
}

TEST_CASE("eliteSet picks the per-subproblem best with id tie-breaks") {
    Fixture f;
    std::vector<Genome> population;
    for (int i = 0; i < 6; ++i) population.push_back(f.freshGenome());

    const auto subproblems = f.ctx.reachable();
    REQUIRE_FALSE(subproblems.empty());

    SUBCASE("single subproblem yields a singleton") {
        const auto elite = eliteSet(f.ctx, population, {subproblems[0]});
        CHECK(elite.size() == 1);
    }
    SUBCASE("elites are never worse than anyone on their subproblem") {
        const auto elite = eliteSet(f.ctx, population, subproblems);
        CHECK_FALSE(elite.empty());
        for (const int objective : subproblems) {
            double best = 1e300;
            for (const auto& g : population) best = std::min(best, f.ctx.fitnessOf(g, objective));
            bool eliteHasBest = false;
            for (const int idx : elite)
                if (f.ctx.fitnessOf(population[idx], objective) == best) eliteHasBest = true;
            CHECK(eliteHasBest);
        }
    }
    SUBCASE("one genome dominating every subproblem gives an elite set of one") {
        // All clones share traces? No: give everyone the first genome's trace
        // except a designated winner priced strictly better is impossible to
        // force here, so instead: identical fitness everywhere means ties
        // break to the lowest id, one elite per subproblem, same genome.
        std::vector<Genome> clones;
        for (int i = 0; i < 4; ++i) {
            Genome g = population[0];
            g.id = 100 + i;
            clones.push_back(std::move(g));
        }
        const auto elite = eliteSet(f.ctx, clones, subproblems);
        CHECK(elite.size() == 1);
        CHECK(clones[elite[0]].id == 100);
    }
}

TEST_CASE("protectedSet applies the novice-generation window") {
    Fixture f;
    std::vector<Genome> population{f.freshGenome(), f.freshGenome()};
    InnovationRegistry scratch(f.spec.featureCount(), static_cast<int>(f.spec.actions.size()));
    population[1] = mutateAddNode(population[1], scratch, f.ctx.decisions());

    std::map<TopologySignature, TopologyRecord> records;
    records[topologySignature(population[0])] = {1, 0}; // created at generation 0
    records[topologySignature(population[1])] = {1, 4}; // created at generation 4

    CHECK(protectedSet(population, records, 4, 3) == std::vector<int>{1});    // age 4 expired, age 0 protected
    CHECK(protectedSet(population, records, 7, 3) == std::vector<int>{1});    // ages 7 and 3
    CHECK(protectedSet(population, records, 8, 3) == std::vector<int>{});     // ages 8 and 4
    CHECK(protectedSet(population, records, 4, 0) == std::vector<int>{1});    // only same-generation
}

TEST_CASE("selection skips the random fill when elite and protected fill the population") {
    Fixture f;
    std::vector<Genome> population;
    for (int i = 0; i < 4; ++i) population.push_back(f.freshGenome());
    const auto subproblems = f.ctx.reachable();

    const auto parents = selection(f.ctx, {0, 1}, {2, 3}, population, subproblems, 4);
    CHECK(parents == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("selection is deterministic under a fixed seed") {
    auto run = [](std::uint64_t seed) {
        Fixture f(100000, seed);
        std::vector<Genome> population;
        for (int i = 0; i < 10; ++i) population.push_back(f.freshGenome());
        return selection(f.ctx, {0}, {}, population, f.ctx.reachable(), 5);
    };
    CHECK(run(21) == run(21));
}

TEST_CASE("reproduction freezes topologies at the cap") {
    Fixture f;
    NewsdConfig config;
    config.maxTopologies = 1; // the minimal topology exhausts the budget
    config.structuralProb = 0.9;
    config.weightProb = 0.05;

    for (int i = 0; i < 10; ++i) f.state.population.push_back(f.freshGenome());
    f.state.records[topologySignature(f.state.population[0])] = {10, 0};

    std::vector<int> parents;
    for (int i = 0; i < 10; ++i) parents.push_back(i);
    const auto offspring = reproduction(f.ctx, config, f.state, parents, f.ctx.reachable());

    CHECK(offspring.size() == parents.size());
    CHECK(f.state.records.size() == 1);
    for (const auto& child : offspring)
        CHECK(f.state.records.count(topologySignature(child)) == 1); // only existing signatures
}

TEST_CASE("reproduction below the cap records new topologies and crossover covers unmutated parents") {
    Fixture f;
    NewsdConfig config;
    config.maxTopologies = 50;
    config.structuralProb = 0.0;
    config.weightProb = 0.0; // nobody mutates: everyone crosses over

    for (int i = 0; i < 8; ++i) f.state.population.push_back(f.freshGenome());
    f.state.records[topologySignature(f.state.population[0])] = {8, 0};

    std::vector<int> parents;
    for (int i = 0; i < 8; ++i) parents.push_back(i);
    const auto offspring = reproduction(f.ctx, config, f.state, parents, f.ctx.reachable());
    CHECK(offspring.size() == 8);
    for (const auto& child : offspring) CHECK(child.trace != nullptr); // evaluated
}

TEST_CASE("populationUpdate floor quota, exact size, and record consistency") {
    const GameSpec& spec = builtinGame("coinmaze");
    NewsdConfig config;
    config.populationSize = 20;
    SearchContext ctx(spec, {100000, 10}, 9);
    NewsdState state(spec.featureCount(), static_cast<int>(spec.actions.size()));

    std::vector<Genome> parents, offspring;
    for (int i = 0; i < 20; ++i) {
        Genome g = createMinimalGenome(spec.featureCount(), static_cast<int>(spec.actions.size()),
                                       ctx.decisions());
        g.id = ctx.newGenomeId();
        ctx.evaluate(g);
        ctx.recordProgress();
        (i % 2 == 0 ? parents : offspring).push_back(std::move(g));
    }
    state.records[topologySignature(parents[0])] = {0, 0};

    const auto subproblems = ctx.reachable();
    populationUpdate(ctx, config, state, parents, offspring, subproblems);

    CHECK(state.population.size() == 20);
    std::set<long> ids;
    for (const auto& g : state.population) CHECK(ids.insert(g.id).second); // no duplicates

    int total = 0;
    for (const auto& [signature, record] : state.records) total += record.memberCount;
    CHECK(total == static_cast<int>(state.population.size()));
    CHECK(state.generation == 1);
}

TEST_CASE("protected genomes survive into the next generation") {
    const GameSpec& spec = builtinGame("coinmaze");
    NewsdConfig config;
    config.populationSize = 10;
    config.noviceGenerations = 3;
    SearchContext ctx(spec, {100000, 10}, 15);
    NewsdState state(spec.featureCount(), static_cast<int>(spec.actions.size()));
    state.generation = 5;

    InnovationRegistry scratch(spec.featureCount(), static_cast<int>(spec.actions.size()));
    std::vector<Genome> parents;
    for (int i = 0; i < 10; ++i) {
        Genome g = createMinimalGenome(spec.featureCount(), static_cast<int>(spec.actions.size()),
                                       ctx.decisions());
        g.id = ctx.newGenomeId();
        ctx.evaluate(g);
        ctx.recordProgress();
        parents.push_back(std::move(g));
    }
    // One novice topology (created this generation), the rest ancient.
    Genome novice = mutateAddNode(parents[0], scratch, ctx.decisions());
    novice.id = ctx.newGenomeId();
    ctx.evaluate(novice);
    ctx.recordProgress();
    state.records[topologySignature(parents[0])] = {10, 0};      // age 5: not protected
    state.records[topologySignature(novice)] = {1, 5};           // age 0: protected
    std::vector<Genome> offspring{novice};

    populationUpdate(ctx, config, state, parents, offspring, ctx.reachable());
    bool present = false;
    for (const auto& g : state.population)
        if (g.id == novice.id) present = true;
    CHECK(present);
}

TEST_CASE("record consistency holds across full generations") {
    const GameSpec& spec = builtinGame("coinmaze");
    NewsdConfig config;
    config.populationSize = 16;
    SearchResult result = runNewsd(spec, config, {400, 10}, 27);
    // Indirect check: the run completed with a monotone series.
    for (std::size_t i = 1; i < result.series.size(); ++i)
        CHECK(result.series[i].coveredBranches >= result.series[i - 1].coveredBranches);

    // Direct check over stepped generations.
    SearchContext ctx(spec, {600, 10}, 29);
    NewsdState state(spec.featureCount(), static_cast<int>(spec.actions.size()));
    for (int i = 0; i < config.populationSize; ++i) {
        Genome g = createMinimalGenome(spec.featureCount(), static_cast<int>(spec.actions.size()),
                                       ctx.decisions());
        g.id = ctx.newGenomeId();
        ctx.evaluateCommitRecord(g);
        state.population.push_back(std::move(g));
    }
    state.records[topologySignature(state.population[0])] = {config.populationSize, 0};

    while (!ctx.done()) {
        newsdStep(ctx, config, state);
        int total = 0;
        for (const auto& [signature, record] : state.records) total += record.memberCount;
        CHECK(total == static_cast<int>(state.population.size()));
        CHECK(static_cast<int>(state.population.size()) == config.populationSize);
        CHECK(static_cast<int>(state.records.size()) <= 20); // default maxTopologies
    }
}
