#include "doctest.h"

#include "manynet/objectives.hpp"

using namespace manynet;

namespace {

// Every-tick chain: if a > 0 { if b > 0 { noop } }, no way to move a or b.
GameSpec chainSpec() {
    GameSpec spec;
    spec.id = "chain";
    spec.actions = {"Noop"};
    spec.episodeTicks = 5;
    spec.variables = {{"a", 0.0, 0.0, 10.0}, {"b", 0.0, 0.0, 10.0}};

    Stmt target;
    target.kind = Stmt::Kind::Atomic;
    target.id = 2;
    target.label = "target";

    Stmt innerIf;
    innerIf.kind = Stmt::Kind::If;
    innerIf.id = 1;
    innerIf.label = "B";
    innerIf.predicate.kind = Predicate::Kind::VarCmp;
    innerIf.predicate.var = "b";
    innerIf.predicate.op = CmpOp::Gt;
    innerIf.predicate.value = 0.0;
    innerIf.thenBody.push_back(target);

    Stmt outerIf;
    outerIf.kind = Stmt::Kind::If;
    outerIf.id = 0;
    outerIf.label = "A";
    outerIf.predicate.kind = Predicate::Kind::VarCmp;
    outerIf.predicate.var = "a";
    outerIf.predicate.op = CmpOp::Gt;
    outerIf.predicate.value = 0.0;
    outerIf.thenBody.push_back(innerIf);

    Script script;
    script.trigger = Script::Trigger::EveryTick;
    script.body.push_back(outerIf);
    spec.scripts.push_back(script);
    spec.validate();
    return spec;
}

int objectiveIdFor(const std::vector<CoverageObjective>& objectives, int stmtId, CoverageObjective::Kind kind,
                   bool outcome = false) {
    for (const auto& o : objectives)
        if (o.stmtId == stmtId && o.kind == kind && (kind == CoverageObjective::Kind::Statement || o.outcome == outcome))
            return o.id;
    REQUIRE(false);
    return -1;
}

} // namespace

TEST_CASE("objectiveFitness is zero exactly for covered objectives") {
    const GameSpec spec = builtinGame("coinmaze");
    const Cdg cdg = buildCdg(spec);
    const auto objectives = buildObjectives(spec, cdg);
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const Genome g = createMinimalGenome(spec.featureCount(), static_cast<int>(spec.actions.size()), rng);
        const ExecutionTrace trace = runEpisode(spec, g, rng.nextUint64());
        for (const auto& objective : objectives) {
            const double f = objectiveFitness(trace, objective, cdg);
            CHECK(f >= 0.0);
            CHECK((f == 0.0) == coveredByTrace(objective, trace));
        }
    }
}

TEST_CASE("objectiveFitness: divergence at the immediate controlling If") {
    // Hand-built trace: the If (stmt 0) ran, distance 4 toward true.
    GameSpec spec = chainSpec();
    const Cdg cdg = buildCdg(spec);
    const auto objectives = buildObjectives(spec, cdg);

    ExecutionTrace trace;
    trace.executedCounts[0] = 1;
    trace.firstExecutedTick[0] = 0;
    trace.branchFirstTick[{0, false}] = 0;
    trace.minBranchDistance[{0, true}] = 4.0;
    trace.minBranchDistance[{0, false}] = 0.0;

    const int branchTrue = objectiveIdFor(objectives, 0, CoverageObjective::Kind::Branch, true);
    CHECK(objectiveFitness(trace, objectives[branchTrue], cdg) == doctest::Approx(0.8));
}

TEST_CASE("objectiveFitness walks the CDG chain (3-level toy program)") {
    const GameSpec spec = chainSpec();
    const Cdg cdg = buildCdg(spec);
    const auto objectives = buildObjectives(spec, cdg);

    // a and b stay 0, so every tick executes A, takes its false branch and
    // records distance 1 toward true ((a > 0) with a = 0 -> 0 - a + K = 1).
    Rng rng(3);
    const Genome g = createMinimalGenome(spec.featureCount(), 1, rng);
    const ExecutionTrace trace = runEpisode(spec, g, 7);

    const int target = objectiveIdFor(objectives, 2, CoverageObjective::Kind::Statement);
    CHECK(objectiveFitness(trace, objectives[target], cdg) == doctest::Approx(2.5));

    const int innerStmt = objectiveIdFor(objectives, 1, CoverageObjective::Kind::Statement);
    CHECK(objectiveFitness(trace, objectives[innerStmt], cdg) == doctest::Approx(0.5));

    const int outerTrue = objectiveIdFor(objectives, 0, CoverageObjective::Kind::Branch, true);
    CHECK(objectiveFitness(trace, objectives[outerTrue], cdg) == doctest::Approx(0.5));

    const int outerStmt = objectiveIdFor(objectives, 0, CoverageObjective::Kind::Statement);
    CHECK(objectiveFitness(trace, objectives[outerStmt], cdg) == 0.0);
}

TEST_CASE("deeper divergence always beats shallower divergence") {
    const GameSpec spec = chainSpec();
    const Cdg cdg = buildCdg(spec);
    const auto objectives = buildObjectives(spec, cdg);
    const int target = objectiveIdFor(objectives, 2, CoverageObjective::Kind::Statement);

    ExecutionTrace shallow;
    shallow.executedCounts[0] = 1;
    shallow.minBranchDistance[{0, true}] = 0.001; // nearly flipping the outer guard
    shallow.minBranchDistance[{0, false}] = 0.0;
    shallow.branchFirstTick[{0, false}] = 0;

    ExecutionTrace deep;
    deep.executedCounts[0] = 1;
    deep.executedCounts[1] = 1;
    deep.minBranchDistance[{0, true}] = 0.0;
    deep.minBranchDistance[{0, false}] = 0.0;
    deep.branchFirstTick[{0, true}] = 0;
    deep.minBranchDistance[{1, true}] = 1000.0; // far from the inner guard
    deep.minBranchDistance[{1, false}] = 0.0;
    deep.branchFirstTick[{1, false}] = 0;

    CHECK(objectiveFitness(deep, objectives[target], cdg) < objectiveFitness(shallow, objectives[target], cdg));
    CHECK(objectiveFitness(deep, objectives[target], cdg) < 1.0);
    CHECK(objectiveFitness(shallow, objectives[target], cdg) >= 2.0);
}

TEST_CASE("objectiveFitness rejects objectives outside the graph") {
    const GameSpec spec = chainSpec();
    const Cdg cdg = buildCdg(spec);
    CoverageObjective bogus;
    bogus.cdgNode = 999;
    ExecutionTrace trace;
    CHECK_THROWS_AS(objectiveFitness(trace, bogus, cdg), std::invalid_argument);
}

TEST_CASE("reachableUncovered starts with the root children") {
    const GameSpec spec = chainSpec();
    const Cdg cdg = buildCdg(spec);
    auto objectives = buildObjectives(spec, cdg);

    auto reachable = reachableUncovered(objectives);
    REQUIRE(reachable.size() == 1); // only the top-level If statement
    CHECK(objectives[reachable[0]].stmtId == 0);
    CHECK(objectives[reachable[0]].kind == CoverageObjective::Kind::Statement);

    // Covering the If statement exposes its two outcomes.
    objectives[reachable[0]].covered = true;
    reachable = reachableUncovered(objectives);
    CHECK(reachable.size() == 2);

    // Covering the true outcome exposes the then-body statement.
    const int outerTrue = objectiveIdFor(objectives, 0, CoverageObjective::Kind::Branch, true);
    objectives[outerTrue].covered = true;
    reachable = reachableUncovered(objectives);
    bool innerVisible = false;
    for (const int id : reachable)
        if (objectives[id].stmtId == 1 && objectives[id].kind == CoverageObjective::Kind::Statement)
            innerVisible = true;
    CHECK(innerVisible);

    for (auto& objective : objectives) objective.covered = true;
    CHECK(reachableUncovered(objectives).empty());
}

TEST_CASE("nu keeps the normalized branch distance inside [0, 1)") {
    const GameSpec spec = chainSpec();
    const Cdg cdg = buildCdg(spec);
    const auto objectives = buildObjectives(spec, cdg);
    const int outerTrue = objectiveIdFor(objectives, 0, CoverageObjective::Kind::Branch, true);

    for (const double d : {0.001, 0.5, 1.0, 10.0, 1e9}) {
        ExecutionTrace trace;
        trace.executedCounts[0] = 1;
        trace.minBranchDistance[{0, true}] = d;
        trace.minBranchDistance[{0, false}] = 0.0;
        trace.branchFirstTick[{0, false}] = 0;
        const double f = objectiveFitness(trace, objectives[outerTrue], cdg);
        CHECK(f > 0.0);
        CHECK(f < 1.0);
    }
}
