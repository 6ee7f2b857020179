#include "manynet/objectives.hpp"

#include <algorithm>
#include <stdexcept>

namespace manynet {

namespace {

void addBody(Cdg& cdg, const std::vector<Stmt>& body, int parentNode) {
    for (const auto& stmt : body) {
        const int stmtNode = static_cast<int>(cdg.nodes.size());
        cdg.nodes.push_back({CdgNode::Kind::Statement, stmtNode, -1, stmt.id, false, parentNode, {}});
        cdg.nodes[parentNode].children.push_back(stmtNode);
        cdg.statementNode[stmt.id] = stmtNode;
        if (stmt.kind != Stmt::Kind::If) continue;

        for (const bool outcome : {true, false}) {
            const int outcomeNodeId = static_cast<int>(cdg.nodes.size());
            cdg.nodes.push_back({CdgNode::Kind::Outcome, outcomeNodeId, -1, stmt.id, outcome, stmtNode, {}});
            cdg.nodes[stmtNode].children.push_back(outcomeNodeId);
            cdg.outcomeNode[{stmt.id, outcome}] = outcomeNodeId;
            addBody(cdg, outcome ? stmt.thenBody : stmt.elseBody, outcomeNodeId);
        }
    }
}

} // namespace

Cdg buildCdg(const GameSpec& spec) {
    Cdg cdg;
    for (int s = 0; s < static_cast<int>(spec.scripts.size()); ++s) {
        const int rootNode = static_cast<int>(cdg.nodes.size());
        cdg.nodes.push_back({CdgNode::Kind::ScriptRoot, rootNode, s, -1, false, -1, {}});
        addBody(cdg, spec.scripts[s].body, rootNode);
    }
    return cdg;
}

std::vector<CoverageObjective> buildObjectives(const GameSpec& spec, const Cdg& cdg) {
    (void)spec;
    std::vector<CoverageObjective> objectives;
    std::map<int, int> objectiveOfNode;

    for (const auto& node : cdg.nodes) {
        if (node.kind == CdgNode::Kind::ScriptRoot) continue;

        CoverageObjective objective;
        objective.id = static_cast<int>(objectives.size());
        objective.cdgNode = node.id;
        objective.stmtId = node.stmtId;
        if (node.kind == CdgNode::Kind::Statement) {
            objective.kind = CoverageObjective::Kind::Statement;
            // Parent objective: the outcome guarding this statement, or the
            // root when the statement is top-level in its script.
            const CdgNode& parent = cdg.nodes[node.parent];
            objective.parent = parent.kind == CdgNode::Kind::ScriptRoot ? -1 : objectiveOfNode.at(parent.id);
        } else {
            objective.kind = CoverageObjective::Kind::Branch;
            objective.outcome = node.outcome;
            objective.parent = objectiveOfNode.at(node.parent); // the If statement
        }
        objectiveOfNode[node.id] = objective.id;
        objectives.push_back(objective);
    }
    return objectives;
}

bool coveredByTrace(const CoverageObjective& objective, const ExecutionTrace& trace) {
    if (objective.kind == CoverageObjective::Kind::Statement) return trace.executed(objective.stmtId);
    return trace.branchTaken(objective.stmtId, objective.outcome);
}

double objectiveFitness(const ExecutionTrace& trace, const CoverageObjective& objective, const Cdg& cdg) {
    if (objective.cdgNode < 0 || objective.cdgNode >= cdg.nodeCount())
        throw std::invalid_argument("objectiveFitness: objective not in CDG");
    if (coveredByTrace(objective, trace)) return 0.0;

    // Chain of (If statement, required outcome) guards from the script root
    // down to the objective. A branch objective's own (If, outcome) pair is
    // the innermost entry.
    std::vector<BranchKey> chain;
    int node = objective.cdgNode;
    if (objective.kind == CoverageObjective::Kind::Statement) node = cdg.nodes[node].parent;
    while (node >= 0 && cdg.nodes[node].kind != CdgNode::Kind::ScriptRoot) {
        if (cdg.nodes[node].kind == CdgNode::Kind::Outcome)
            chain.push_back({cdg.nodes[node].stmtId, cdg.nodes[node].outcome});
        node = cdg.nodes[node].parent;
    }
    std::reverse(chain.begin(), chain.end());

    // Top-level statement that never ran (script stopped before it).
    if (chain.empty()) return 1.0;

    int divergence = -1;
    for (int i = 0; i < static_cast<int>(chain.size()); ++i)
        if (trace.executed(chain[i].first)) divergence = i;

    // Not even the outermost guard ran: worse than any divergence.
    if (divergence < 0) return 2.0 * static_cast<double>(chain.size()) + 1.0;

    const double approachLevel = 2.0 * static_cast<double>(chain.size() - 1 - divergence);
    double d = trace.minBranchDistance.at(chain[divergence]);
    // d == 0 with the objective uncovered means the required outcome was
    // taken but execution stopped before reaching the target; keep the
    // fitness positive so 0 remains equivalent to coverage.
    if (d <= 0.0) d = kBranchEps;
    return approachLevel + d / (d + 1.0);
}

FitnessVector fitnessVector(const ExecutionTrace& trace, const std::vector<CoverageObjective>& objectives,
                            const std::vector<int>& objectiveIds, const Cdg& cdg) {
    FitnessVector fitness;
    for (const int id : objectiveIds) fitness[id] = objectiveFitness(trace, objectives[id], cdg);
    return fitness;
}

std::vector<int> reachableUncovered(const std::vector<CoverageObjective>& objectives) {
    std::vector<int> reachable;
    for (const auto& objective : objectives) {
        if (objective.covered) continue;
        if (objective.parent < 0 || objectives[objective.parent].covered) reachable.push_back(objective.id);
    }
    return reachable;
}

int coveredCount(const std::vector<CoverageObjective>& objectives, CoverageObjective::Kind kind) {
    int n = 0;
    for (const auto& objective : objectives)
        if (objective.kind == kind && objective.covered) ++n;
    return n;
}

int totalCount(const std::vector<CoverageObjective>& objectives, CoverageObjective::Kind kind) {
    int n = 0;
    for (const auto& objective : objectives)
        if (objective.kind == kind) ++n;
    return n;
}

} // namespace manynet
