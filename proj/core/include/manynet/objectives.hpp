#pragma once

#include <map>
#include <vector>

#include "manynet/game.hpp"

namespace manynet {

/// Control dependence graph over one game program. Nodes are one root per
/// script, every statement, and both outcomes of every If; an outcome node's
/// children are the statements of that outcome's body.
struct CdgNode {
    enum class Kind { ScriptRoot, Statement, Outcome };
    Kind kind = Kind::Statement;
    int id = -1;          // node id within the graph
    int scriptIndex = -1; // ScriptRoot
    int stmtId = -1;      // Statement / Outcome
    bool outcome = false; // Outcome
    int parent = -1;
    std::vector<int> children;
};

struct Cdg {
    std::vector<CdgNode> nodes;
    std::map<int, int> statementNode;      // stmt id -> node id
    std::map<BranchKey, int> outcomeNode;  // (stmt id, outcome) -> node id

    int nodeCount() const { return static_cast<int>(nodes.size()); }
};

Cdg buildCdg(const GameSpec& spec);

/// A statement to execute or a branch outcome to take, placed in the CDG
/// hierarchy. `parent` is the controlling objective (-1 = root-reachable):
/// branch objectives hang below their If statement, statements below the
/// outcome that guards them.
struct CoverageObjective {
    enum class Kind { Statement, Branch };
    int id = -1;
    Kind kind = Kind::Statement;
    int stmtId = -1;
    bool outcome = false; // Branch only
    int cdgNode = -1;
    int parent = -1;
    bool covered = false;
};

/// Objectives in deterministic (CDG construction) order; ids are vector
/// indices.
std::vector<CoverageObjective> buildObjectives(const GameSpec& spec, const Cdg& cdg);

/// Per-objective distance map for one evaluated genome; 0 means the trace
/// reached the objective.
using FitnessVector = std::map<int, double>;

bool coveredByTrace(const CoverageObjective& objective, const ExecutionTrace& trace);

/// Approach level plus normalized branch distance. 0 iff the trace covers
/// the objective; otherwise counts the CDG edges from the deepest executed
/// guard down to the objective's controlling node and adds nu(d) = d/(d+1)
/// of the branch distance recorded at the divergence point.
/// Throws std::invalid_argument when the objective is not in the graph.
double objectiveFitness(const ExecutionTrace& trace, const CoverageObjective& objective, const Cdg& cdg);

FitnessVector fitnessVector(const ExecutionTrace& trace, const std::vector<CoverageObjective>& objectives,
                            const std::vector<int>& objectiveIds, const Cdg& cdg);

/// Uncovered objectives whose parent is the root or already covered.
std::vector<int> reachableUncovered(const std::vector<CoverageObjective>& objectives);

int coveredCount(const std::vector<CoverageObjective>& objectives, CoverageObjective::Kind kind);
int totalCount(const std::vector<CoverageObjective>& objectives, CoverageObjective::Kind kind);

} // namespace manynet
