#include "doctest.h"

#include <set>

#include "manynet/species.hpp"

using namespace manynet;

namespace {

Genome evolved(Rng& rng, InnovationRegistry& registry, int mutations) {
    Genome g = createMinimalGenome(registry.featureCount(), registry.actionCount(), rng);
    for (int i = 0; i < mutations; ++i) {
        if (rng.chance(0.5)) g = mutateAddNode(g, registry, rng);
        else g = mutateWeights(g, rng, {});
    }
    return g;
}

} // namespace

TEST_CASE("a population of clones forms exactly one species") {
    Rng rng(3);
    const Genome proto = createMinimalGenome(2, 2, rng);
    std::vector<Genome> population(10, proto);
    const auto species = speciate(population, {}, {});
    REQUIRE(species.size() == 1);
    CHECK(species[0].members.size() == 10);
}

TEST_CASE("speciate partitions the population") {
    Rng rng(5);
    InnovationRegistry registry(2, 2);
    std::vector<Species> previous;
    for (int round = 0; round < 100; ++round) {
        std::vector<Genome> population;
        const int n = 3 + rng.index(12);
        for (int i = 0; i < n; ++i) population.push_back(evolved(rng, registry, rng.index(5)));

        const auto species = speciate(population, previous, {});
        std::set<int> assigned;
        std::size_t total = 0;
        for (const auto& s : species) {
            CHECK_FALSE(s.members.empty());
            total += s.members.size();
            for (const int member : s.members) {
                CHECK(assigned.insert(member).second); // pairwise disjoint
                CHECK(population[member].speciesId == s.id);
            }
        }
        CHECK(total == population.size()); // union covers everything
        previous = species;
    }
}

TEST_CASE("near-zero threshold puts each distinct genome in its own species") {
    Rng rng(9);
    InnovationRegistry registry(2, 2);
    std::vector<Genome> population;
    for (int i = 0; i < 6; ++i) population.push_back(evolved(rng, registry, 3 + i));
    SpeciationConfig config;
    config.threshold = 1e-12;
    const auto species = speciate(population, {}, config);
    CHECK(species.size() == population.size());
}

TEST_CASE("equidistant genomes join the lowest species id") {
    Rng rng(11);
    const Genome proto = createMinimalGenome(2, 2, rng);
    std::vector<Species> previous;
    previous.push_back({4, proto, {}});
    previous.push_back({7, proto, {}});
    std::vector<Genome> population{proto};
    const auto species = speciate(population, previous, {});
    REQUIRE(species.size() == 1);
    CHECK(species[0].id == 4);
}

TEST_CASE("species ids persist across generations") {
    Rng rng(13);
    const Genome proto = createMinimalGenome(2, 2, rng);
    std::vector<Genome> population(4, proto);
    auto first = speciate(population, {}, {});
    auto second = speciate(population, first, {});
    REQUIRE(second.size() == 1);
    CHECK(second[0].id == first[0].id);
}

TEST_CASE("SpeciesPool tracks refcounted membership") {
    Rng rng(17);
    SpeciesPool pool({});
    Genome a = createMinimalGenome(2, 2, rng);
    a.id = 1;
    Genome b = createMinimalGenome(2, 2, rng);
    b.id = 2;

    const int sa = pool.add(a);
    const int sb = pool.add(b);
    CHECK(sa == sb); // same topology, low weight distance
    CHECK(pool.populationSize() == 2);

    pool.add(a); // second archive holds the same network
    pool.remove(1);
    CHECK(pool.populationSize() == 2); // still referenced once
    pool.remove(1);
    CHECK(pool.populationSize() == 1);
    CHECK(pool.sizeOfSpecies(sa) == 1);
}
