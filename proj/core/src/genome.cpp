#include "manynet/genome.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace manynet {

namespace {

void sortByInnovation(std::vector<ConnectionGene>& connections) {
    std::sort(connections.begin(), connections.end(),
              [](const ConnectionGene& a, const ConnectionGene& b) { return a.innovation < b.innovation; });
}

void sortNodesById(std::vector<NodeGene>& nodes) {
    std::sort(nodes.begin(), nodes.end(), [](const NodeGene& a, const NodeGene& b) { return a.id < b.id; });
}

// Reachability over all connections, enabled or not; a disabled gene may be
// re-enabled by crossover later, so it must not hide a cycle.
bool reaches(const std::vector<ConnectionGene>& connections, int from, int to) {
    if (from == to) return true;
    std::vector<int> stack{from};
    std::set<int> seen{from};
    while (!stack.empty()) {
        const int node = stack.back();
        stack.pop_back();
        for (const auto& conn : connections) {
            if (conn.from != node) continue;
            if (conn.to == to) return true;
            if (seen.insert(conn.to).second) stack.push_back(conn.to);
        }
    }
    return false;
}

} // namespace

int Genome::countKind(NodeKind k) const {
    int n = 0;
    for (const auto& node : nodes)
        if (node.kind == k) ++n;
    return n;
}

bool Genome::hasNode(int nodeId) const {
    for (const auto& node : nodes)
        if (node.id == nodeId) return true;
    return false;
}

const ConnectionGene* Genome::findConnection(int from, int to) const {
    for (const auto& conn : connections)
        if (conn.from == from && conn.to == to) return &conn;
    return nullptr;
}

InnovationRegistry::InnovationRegistry(int featureCount, int actionCount)
    : featureCount_(featureCount), actionCount_(actionCount) {
    // Mirror the canonical numbering used by createMinimalGenome so that
    // minimal genomes and registry-driven mutations share one innovation
    // space within a run.
    int innovation = 0;
    const int bias = featureCount;
    for (int src = 0; src <= featureCount; ++src) {
        for (int out = 0; out < actionCount; ++out) {
            const int outId = bias + 1 + out;
            pairs_[{src, outId}] = innovation++;
        }
    }
    nextInnovation_ = innovation;
    nextNodeId_ = featureCount + 1 + actionCount;
}

int InnovationRegistry::connectionInnovation(int from, int to) {
    const auto key = std::make_pair(from, to);
    auto it = pairs_.find(key);
    if (it != pairs_.end()) return it->second;
    const int innovation = nextInnovation_++;
    pairs_.emplace(key, innovation);
    return innovation;
}

int InnovationRegistry::splitNodeId(int connectionInnovation) {
    auto it = splits_.find(connectionInnovation);
    if (it != splits_.end()) return it->second;
    const int nodeId = nextNodeId_++;
    splits_.emplace(connectionInnovation, nodeId);
    return nodeId;
}

Genome createMinimalGenome(int featureCount, int actionCount, Rng& rng) {
    if (featureCount < 1 || actionCount < 1)
        throw std::invalid_argument("createMinimalGenome: arities must be >= 1");

    Genome genome;
    for (int i = 0; i < featureCount; ++i) genome.nodes.push_back({i, NodeKind::Input});
    const int bias = featureCount;
    genome.nodes.push_back({bias, NodeKind::Bias});
    for (int o = 0; o < actionCount; ++o) genome.nodes.push_back({bias + 1 + o, NodeKind::Output});

    int innovation = 0;
    for (int src = 0; src <= featureCount; ++src) {
        for (int o = 0; o < actionCount; ++o) {
            genome.connections.push_back({innovation++, src, bias + 1 + o, rng.uniformReal(-1.0, 1.0), true});
        }
    }
    return genome;
}

Phenotype::Phenotype(const Genome& genome) {
    // Slot = dense index over the genome's nodes, in node-id order.
    std::map<int, int> slotOf;
    std::vector<NodeKind> kinds;
    std::vector<NodeGene> nodes = genome.nodes;
    sortNodesById(nodes);
    for (const auto& node : nodes) {
        slotOf[node.id] = static_cast<int>(kinds.size());
        kinds.push_back(node.kind);
    }

    const int n = static_cast<int>(kinds.size());
    edges_.assign(n, {});
    isSource_.assign(n, false);
    std::vector<int> indegree(n, 0);

    for (int slot = 0; slot < n; ++slot) {
        if (kinds[slot] == NodeKind::Input) {
            isSource_[slot] = true;
            ++inputCount_;
        } else if (kinds[slot] == NodeKind::Bias) {
            isSource_[slot] = true;
            biasSlot_ = slot;
        }
        if (kinds[slot] == NodeKind::Output) outputSlots_.push_back(slot);
    }

    std::vector<std::vector<int>> successors(n);
    for (const auto& conn : genome.connections) {
        if (!conn.enabled) continue;
        const int from = slotOf.at(conn.from);
        const int to = slotOf.at(conn.to);
        edges_[to].push_back({from, conn.weight});
        successors[from].push_back(to);
        ++indegree[to];
    }

    // Kahn's algorithm; the genome invariant guarantees this covers all nodes.
    std::vector<int> ready;
    for (int slot = 0; slot < n; ++slot)
        if (indegree[slot] == 0) ready.push_back(slot);
    while (!ready.empty()) {
        const int slot = ready.front();
        ready.erase(ready.begin());
        evalOrder_.push_back(slot);
        for (const int succ : successors[slot])
            if (--indegree[succ] == 0) ready.push_back(succ);
    }
    if (static_cast<int>(evalOrder_.size()) != n)
        throw std::logic_error("Phenotype: genome contains a directed cycle");
}

std::vector<double> Phenotype::activate(const std::vector<double>& features) const {
    if (static_cast<int>(features.size()) != inputCount_)
        throw std::invalid_argument("activate: feature length does not match input count");

    std::vector<double> value(isSource_.size(), 0.0);
    // Inputs occupy the lowest slots in node-id order.
    int featureIdx = 0;
    for (std::size_t slot = 0; slot < isSource_.size(); ++slot) {
        if (!isSource_[slot]) continue;
        value[slot] = (static_cast<int>(slot) == biasSlot_) ? 1.0 : features[featureIdx++];
    }
    for (const int slot : evalOrder_) {
        if (isSource_[slot]) continue;
        double sum = 0.0;
        for (const auto& in : edges_[slot]) sum += value[in.sourceSlot] * in.weight;
        value[slot] = std::tanh(sum);
    }

    std::vector<double> outputs;
    outputs.reserve(outputSlots_.size());
    for (const int slot : outputSlots_) outputs.push_back(value[slot]);
    return outputs;
}

std::vector<double> activate(const Genome& genome, const std::vector<double>& features) {
    return Phenotype(genome).activate(features);
}

Genome mutateWeights(const Genome& genome, Rng& rng, const WeightMutationConfig& config) {
    Genome result = genome;
    for (auto& conn : result.connections) {
        if (!conn.enabled) continue;
        const double roll = rng.uniform();
        if (roll < config.perturbProb) {
            conn.weight += rng.gaussian(0.0, config.sigma);
        } else if (roll < config.perturbProb + config.resetProb) {
            conn.weight = rng.uniformReal(-1.0, 1.0);
        }
    }
    result.trace.reset();
    return result;
}

Genome mutateAddConnection(const Genome& genome, InnovationRegistry& registry, Rng& rng) {
    // Enumerate legal pairs instead of retrying: genomes are small and this
    // keeps the no-legal-pair case exact.
    std::vector<std::pair<int, int>> legal;
    for (const auto& from : genome.nodes) {
        if (from.kind == NodeKind::Output) continue;
        for (const auto& to : genome.nodes) {
            if (to.kind == NodeKind::Input || to.kind == NodeKind::Bias) continue;
            if (from.id == to.id) continue;
            if (genome.findConnection(from.id, to.id)) continue;
            if (reaches(genome.connections, to.id, from.id)) continue; // would close a cycle
            legal.emplace_back(from.id, to.id);
        }
    }
    if (legal.empty()) return genome;

    const auto [from, to] = legal[rng.index(legal.size())];
    Genome result = genome;
    result.connections.push_back({registry.connectionInnovation(from, to), from, to, rng.uniformReal(-1.0, 1.0), true});
    sortByInnovation(result.connections);
    result.trace.reset();
    return result;
}

Genome mutateAddNode(const Genome& genome, InnovationRegistry& registry, Rng& rng) {
    std::vector<int> enabledIdx;
    for (int i = 0; i < static_cast<int>(genome.connections.size()); ++i)
        if (genome.connections[i].enabled) enabledIdx.push_back(i);
    if (enabledIdx.empty()) return genome;

    Genome result = genome;
    const std::size_t splitIdx = static_cast<std::size_t>(enabledIdx[rng.index(enabledIdx.size())]);
    const ConnectionGene split = result.connections[splitIdx]; // copy: push_back below reallocates
    result.connections[splitIdx].enabled = false;

    const int nodeId = registry.splitNodeId(split.innovation);
    result.nodes.push_back({nodeId, NodeKind::Hidden});
    sortNodesById(result.nodes);
    result.connections.push_back({registry.connectionInnovation(split.from, nodeId), split.from, nodeId, 1.0, true});
    result.connections.push_back({registry.connectionInnovation(nodeId, split.to), nodeId, split.to, split.weight, true});
    sortByInnovation(result.connections);
    result.trace.reset();
    return result;
}

Genome crossover(const Genome& parentA, const Genome& parentB, FitterParent fitter, Rng& rng) {
    constexpr double kReenableProb = 0.25;

    Genome child;
    child.speciesId = -1;

    // Walk both connection lists aligned by innovation number.
    std::vector<ConnectionGene> inherited;
    std::size_t ia = 0, ib = 0;
    const auto& ca = parentA.connections;
    const auto& cb = parentB.connections;
    auto takeUnmatched = [&](const ConnectionGene& gene, FitterParent owner) {
        if (fitter == owner || (fitter == FitterParent::Equal && rng.chance(0.5)))
            inherited.push_back(gene);
    };
    while (ia < ca.size() || ib < cb.size()) {
        if (ia < ca.size() && ib < cb.size() && ca[ia].innovation == cb[ib].innovation) {
            ConnectionGene gene = rng.chance(0.5) ? ca[ia] : cb[ib];
            if (ca[ia].enabled != cb[ib].enabled)
                gene.enabled = rng.chance(kReenableProb);
            inherited.push_back(gene);
            ++ia;
            ++ib;
        } else if (ib >= cb.size() || (ia < ca.size() && ca[ia].innovation < cb[ib].innovation)) {
            takeUnmatched(ca[ia], FitterParent::A);
            ++ia;
        } else {
            takeUnmatched(cb[ib], FitterParent::B);
            ++ib;
        }
    }

    // Assemble in innovation order and drop any gene that would close a cycle
    // (possible when the parents evolved opposing paths between two nodes).
    for (const auto& gene : inherited) {
        if (reaches(child.connections, gene.to, gene.from)) continue;
        child.connections.push_back(gene);
    }

    std::set<int> needed;
    for (const auto& node : parentA.nodes)
        if (node.kind != NodeKind::Hidden) needed.insert(node.id);
    for (const auto& conn : child.connections) {
        needed.insert(conn.from);
        needed.insert(conn.to);
    }
    auto copyNodes = [&](const Genome& parent) {
        for (const auto& node : parent.nodes) {
            if (!needed.count(node.id) || child.hasNode(node.id)) continue;
            child.nodes.push_back(node);
        }
    };
    copyNodes(parentA);
    copyNodes(parentB);
    sortNodesById(child.nodes);
    return child;
}

double compatibilityDistance(const Genome& a, const Genome& b, const CompatCoeffs& coeffs) {
    const auto& ca = a.connections;
    const auto& cb = b.connections;
    const int maxA = ca.empty() ? -1 : ca.back().innovation;
    const int maxB = cb.empty() ? -1 : cb.back().innovation;
    const int overlapEnd = std::min(maxA, maxB);

    int excess = 0, disjoint = 0, matching = 0;
    double weightDiff = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < ca.size() || ib < cb.size()) {
        if (ia < ca.size() && ib < cb.size() && ca[ia].innovation == cb[ib].innovation) {
            weightDiff += std::fabs(ca[ia].weight - cb[ib].weight);
            ++matching;
            ++ia;
            ++ib;
        } else {
            const bool fromA = ib >= cb.size() || (ia < ca.size() && ca[ia].innovation < cb[ib].innovation);
            const int innovation = fromA ? ca[ia].innovation : cb[ib].innovation;
            (innovation > overlapEnd ? excess : disjoint) += 1;
            (fromA ? ia : ib) += 1;
        }
    }

    const double n = static_cast<double>(std::max<std::size_t>({ca.size(), cb.size(), 1}));
    const double meanDiff = matching > 0 ? weightDiff / matching : 0.0;
    return (coeffs.excess * excess + coeffs.disjoint * disjoint) / n + coeffs.weight * meanDiff;
}

bool isAcyclic(const Genome& genome) {
    std::map<int, int> indegree;
    for (const auto& node : genome.nodes) indegree[node.id] = 0;
    for (const auto& conn : genome.connections) ++indegree[conn.to];

    std::vector<int> ready;
    for (const auto& [id, deg] : indegree)
        if (deg == 0) ready.push_back(id);
    std::size_t visited = 0;
    while (!ready.empty()) {
        const int id = ready.back();
        ready.pop_back();
        ++visited;
        for (const auto& conn : genome.connections)
            if (conn.from == id && --indegree[conn.to] == 0) ready.push_back(conn.to);
    }
    return visited == genome.nodes.size();
}

namespace {

const char* kindName(NodeKind kind) {
    switch (kind) {
    case NodeKind::Input: return "input";
    case NodeKind::Bias: return "bias";
    case NodeKind::Hidden: return "hidden";
    case NodeKind::Output: return "output";
    }
    return "?";
}

NodeKind kindFromName(const std::string& name, int lineNo) {
    if (name == "input") return NodeKind::Input;
    if (name == "bias") return NodeKind::Bias;
    if (name == "hidden") return NodeKind::Hidden;
    if (name == "output") return NodeKind::Output;
    throw std::runtime_error("genome parse error at line " + std::to_string(lineNo) + ": unknown node kind '" + name + "'");
}

std::string hexDouble(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parseHexDouble(const std::string& token, int lineNo) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + token.size())
        throw std::runtime_error("genome parse error at line " + std::to_string(lineNo) + ": bad weight '" + token + "'");
    return v;
}

} // namespace

std::string formatGenome(const Genome& genome) {
    std::ostringstream out;
    out << "genome v1\n";
    out << "nodes " << genome.nodes.size() << "\n";
    for (const auto& node : genome.nodes) out << "node " << node.id << " " << kindName(node.kind) << "\n";
    out << "connections " << genome.connections.size() << "\n";
    for (const auto& conn : genome.connections)
        out << "conn " << conn.innovation << " " << conn.from << " " << conn.to << " " << hexDouble(conn.weight)
            << " " << (conn.enabled ? 1 : 0) << "\n";
    out << "end\n";
    return out.str();
}

Genome parseGenome(std::istream& in, int& lineNo) {
    auto fail = [&](const std::string& what) -> std::runtime_error {
        return std::runtime_error("genome parse error at line " + std::to_string(lineNo) + ": " + what);
    };
    auto nextLine = [&](std::string& line) {
        if (!std::getline(in, line)) throw fail("unexpected end of input");
        ++lineNo;
    };

    std::string line;
    nextLine(line);
    if (line != "genome v1") throw fail("expected 'genome v1'");

    Genome genome;
    std::string word;
    std::size_t count = 0;

    nextLine(line);
    {
        std::istringstream ls(line);
        if (!(ls >> word >> count) || word != "nodes") throw fail("expected 'nodes <count>'");
    }
    for (std::size_t i = 0; i < count; ++i) {
        nextLine(line);
        std::istringstream ls(line);
        int id = 0;
        std::string kind;
        if (!(ls >> word >> id >> kind) || word != "node") throw fail("expected 'node <id> <kind>'");
        genome.nodes.push_back({id, kindFromName(kind, lineNo)});
    }

    nextLine(line);
    {
        std::istringstream ls(line);
        if (!(ls >> word >> count) || word != "connections") throw fail("expected 'connections <count>'");
    }
    for (std::size_t i = 0; i < count; ++i) {
        nextLine(line);
        std::istringstream ls(line);
        ConnectionGene conn;
        std::string weight;
        int enabled = 0;
        if (!(ls >> word >> conn.innovation >> conn.from >> conn.to >> weight >> enabled) || word != "conn")
            throw fail("expected 'conn <innovation> <from> <to> <weight> <enabled>'");
        conn.weight = parseHexDouble(weight, lineNo);
        conn.enabled = enabled != 0;
        genome.connections.push_back(conn);
    }

    nextLine(line);
    if (line != "end") throw fail("expected 'end'");

    for (const auto& conn : genome.connections)
        if (!genome.hasNode(conn.from) || !genome.hasNode(conn.to)) throw fail("connection references unknown node");
    sortByInnovation(genome.connections);
    sortNodesById(genome.nodes);
    return genome;
}

Genome parseGenome(const std::string& text) {
    std::istringstream in(text);
    int lineNo = 0;
    return parseGenome(in, lineNo);
}

} // namespace manynet
