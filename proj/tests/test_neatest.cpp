#include "doctest.h"

#include "manynet/neatest.hpp"

using namespace manynet;

TEST_CASE("selectTarget on a fresh run picks a root-child objective") {
    const GameSpec& spec = builtinGame("coinmaze");
    SearchContext ctx(spec, {1000, 10}, 3);
    std::map<int, int> attempts;
    const int target = selectTarget(ctx, attempts, ctx.decisions());
    REQUIRE(target >= 0);
    CHECK(ctx.objectives()[target].parent == -1);
}

TEST_CASE("selectTarget returns Done when everything is covered") {
    const GameSpec& spec = builtinGame("coinmaze");
    SearchContext ctx(spec, {1000, 10}, 3);
    for (auto& objective : ctx.objectives()) objective.covered = true;
    std::map<int, int> attempts;
    CHECK(selectTarget(ctx, attempts, ctx.decisions()) == -1);
}

TEST_CASE("a previously near-covered objective beats an untouched deep one") {
    // Deterministic toy: pressing Go raises a; a > 400 is unsatisfiable but
    // improvable, and the nested chain unlocks an untouched deep objective.
    GameSpec spec;
    spec.id = "toy";
    spec.actions = {"Noop", "Go"};
    spec.episodeTicks = 40;
    spec.variables = {{"a", 0.0, 0.0, 300.0}, {"b", 0.0, 0.0, 10.0}};

    auto varGt = [](const std::string& var, double value) {
        Predicate p;
        p.kind = Predicate::Kind::VarCmp;
        p.var = var;
        p.op = CmpOp::Gt;
        p.value = value;
        return p;
    };
    Stmt deep;
    deep.kind = Stmt::Kind::Atomic;
    deep.id = 2;
    Stmt innerIf;
    innerIf.kind = Stmt::Kind::If;
    innerIf.id = 1;
    innerIf.predicate = varGt("b", 0.0);
    innerIf.thenBody.push_back(deep);
    Stmt outerIf;
    outerIf.kind = Stmt::Kind::If;
    outerIf.id = 0;
    outerIf.predicate = varGt("a", 0.0);
    outerIf.thenBody.push_back(innerIf);
    Stmt farIf;
    farIf.kind = Stmt::Kind::If;
    farIf.id = 3;
    farIf.label = "far";
    farIf.predicate = varGt("a", 400.0);
    Stmt farBody;
    farBody.kind = Stmt::Kind::Atomic;
    farBody.id = 4;
    farIf.thenBody.push_back(farBody);
    Stmt incBody;
    incBody.kind = Stmt::Kind::Atomic;
    incBody.id = 6;
    incBody.effect.kind = Effect::Kind::AddVar;
    incBody.effect.var = "a";
    incBody.effect.a = 1.0;
    Stmt keyIf;
    keyIf.kind = Stmt::Kind::If;
    keyIf.id = 5;
    keyIf.predicate.kind = Predicate::Kind::KeyDown;
    keyIf.predicate.action = "Go";
    keyIf.thenBody.push_back(incBody);

    Script rules;
    rules.trigger = Script::Trigger::EveryTick;
    rules.body = {outerIf, farIf, keyIf};
    spec.scripts.push_back(rules);
    spec.validate();

    SearchContext ctx(spec, {1000, 10}, 3);
    Rng rng(5);
    Genome noop = createMinimalGenome(spec.featureCount(), 2, rng);
    for (auto& c : noop.connections) c.weight = 0.0; // argmax -> Noop
    Genome presser = noop;
    for (auto& c : presser.connections)
        if (c.from == 2 && c.to == 4) c.weight = 5.0; // bias -> Go output

    ctx.evaluate(noop);
    ctx.commitCoverage(noop);
    ctx.recordProgress();
    ctx.evaluate(presser);
    ctx.commitCoverage(presser);
    ctx.recordProgress();

    // The unsatisfiable far branch is priced; the deep statement unlocked by
    // the presser never was.
    int farTrue = -1, deepStmt = -1;
    for (const auto& objective : ctx.objectives()) {
        if (objective.stmtId == 3 && objective.kind == CoverageObjective::Kind::Branch && objective.outcome)
            farTrue = objective.id;
        if (objective.stmtId == 1 && objective.kind == CoverageObjective::Kind::Branch && objective.outcome)
            deepStmt = objective.id;
    }
    REQUIRE(farTrue >= 0);
    REQUIRE(deepStmt >= 0);
    const auto reachable = ctx.reachable();
    CHECK(std::count(reachable.begin(), reachable.end(), farTrue) == 1);
    CHECK(std::count(reachable.begin(), reachable.end(), deepStmt) == 1);
    CHECK(std::isfinite(ctx.bestFitnessSeen(farTrue)));
    CHECK(std::isinf(ctx.bestFitnessSeen(deepStmt)));

    std::map<int, int> attempts;
    CHECK(selectTarget(ctx, attempts, ctx.decisions()) == farTrue);
}

TEST_CASE("covering the target moves the search to a new one") {
    const GameSpec& spec = builtinGame("coinmaze");
    NeatestConfig config;
    config.populationSize = 30;
    SearchContext ctx(spec, {600, 10}, 7);
    NeatestState state = neatestInit(ctx, config);
    REQUIRE(state.target >= 0);

    // Step until some target gets covered, then check it was replaced.
    int previous = state.target;
    for (int gen = 0; gen < 10 && !ctx.done(); ++gen) {
        neatestStep(ctx, config, state);
        if (previous >= 0 && ctx.objectives()[previous].covered) {
            CHECK(state.target != previous);
            return;
        }
        previous = state.target;
    }
    CHECK(coveredCount(ctx.objectives(), CoverageObjective::Kind::Statement) > 0);
}

TEST_CASE("stagnation on the unreachable branch switches after exactly the configured window") {
    const GameSpec& spec = builtinGame("coinmaze");
    const Stmt* secret = spec.findLabeled("secret");
    REQUIRE(secret != nullptr);

    NeatestConfig config; // population 150, stagnation 10
    SearchResult result = runNeatest(spec, config, {6000, 10}, 8);

    REQUIRE_FALSE(result.events.targetSwitches.empty());
    bool sawSecretSwitch = false;
    for (const auto& event : result.events.targetSwitches) {
        CHECK(event.stagnantGenerations == config.stagnationGenerations);
        const auto& objective = result.objectives[event.objectiveId];
        if (objective.stmtId == secret->id && objective.kind == CoverageObjective::Kind::Branch &&
            objective.outcome)
            sawSecretSwitch = true;
    }
    CHECK(sawSecretSwitch);
}

TEST_CASE("neatest runs are deterministic in the seed") {
    const GameSpec& spec = builtinGame("coinmaze");
    NeatestConfig config;
    config.populationSize = 25;
    SearchResult a = runNeatest(spec, config, {300, 10}, 99);
    SearchResult b = runNeatest(spec, config, {300, 10}, 99);
    CHECK(a.series == b.series);
    CHECK(a.evaluationsUsed == b.evaluationsUsed);
    CHECK(formatSuite(a.suite) == formatSuite(b.suite));
}
