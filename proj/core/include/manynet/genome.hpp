#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "manynet/rng.hpp"

namespace manynet {

struct ExecutionTrace;

enum class NodeKind { Input, Bias, Hidden, Output };

struct NodeGene {
    int id = 0;
    NodeKind kind = NodeKind::Hidden;
};

struct ConnectionGene {
    int innovation = 0;
    int from = 0;
    int to = 0;
    double weight = 0.0;
    bool enabled = true;
};

/// NEAT genotype: a feedforward network encoded as node genes plus
/// innovation-numbered connection genes. Connections stay sorted by
/// innovation number; every connection endpoint is a node of the genome.
struct Genome {
    std::vector<NodeGene> nodes;
    std::vector<ConnectionGene> connections;

    // Search bookkeeping, not part of the genotype proper.
    long id = -1;
    int speciesId = -1;
    std::shared_ptr<const ExecutionTrace> trace; // last evaluation, if any

    int countKind(NodeKind k) const;
    int inputCount() const { return countKind(NodeKind::Input); }
    int outputCount() const { return countKind(NodeKind::Output); }
    bool hasNode(int nodeId) const;
    const ConnectionGene* findConnection(int from, int to) const;
};

/// Run-wide bookkeeping that keeps structural mutations aligned: a given
/// (from, to) pair always receives the same innovation number, and splitting
/// the same connection always yields the same hidden-node id.
class InnovationRegistry {
public:
    InnovationRegistry(int featureCount, int actionCount);

    int connectionInnovation(int from, int to);
    int splitNodeId(int connectionInnovation);

    int featureCount() const { return featureCount_; }
    int actionCount() const { return actionCount_; }

private:
    int featureCount_;
    int actionCount_;
    std::map<std::pair<int, int>, int> pairs_;
    std::map<int, int> splits_;
    int nextInnovation_;
    int nextNodeId_;
};

/// Compiled feedforward evaluator for one genome. Compile once per episode,
/// then activate per tick.
class Phenotype {
public:
    explicit Phenotype(const Genome& genome);

    /// Propagates features through the network in topological order.
    /// Hidden and output nodes use tanh. Throws std::invalid_argument on
    /// feature-length mismatch.
    std::vector<double> activate(const std::vector<double>& features) const;

    int inputCount() const { return inputCount_; }
    int outputCount() const { return static_cast<int>(outputSlots_.size()); }

private:
    struct Incoming {
        int sourceSlot;
        double weight;
    };
    int inputCount_ = 0;
    int biasSlot_ = -1;
    std::vector<int> evalOrder_;               // slots in topological order
    std::vector<std::vector<Incoming>> edges_; // per slot
    std::vector<bool> isSource_;               // input or bias
    std::vector<int> outputSlots_;
};

struct WeightMutationConfig {
    double perturbProb = 0.9;
    double sigma = 0.3;
    double resetProb = 0.1;
};

struct CompatCoeffs {
    double excess = 1.0;
    double disjoint = 1.0;
    double weight = 0.4;
};

enum class FitterParent { A, B, Equal };

/// Fully connects inputs and bias to all outputs with weights drawn uniformly
/// from [-1, 1]. Node ids and innovation numbers are canonical: any two
/// minimal genomes for the same arities share them.
Genome createMinimalGenome(int featureCount, int actionCount, Rng& rng);

/// Convenience single-shot activation (compiles a Phenotype internally).
std::vector<double> activate(const Genome& genome, const std::vector<double>& features);

/// Perturbs each enabled connection with probability perturbProb by Gaussian
/// noise, or resets it uniformly in [-1, 1] with probability resetProb.
/// Topology is unchanged.
Genome mutateWeights(const Genome& genome, Rng& rng, const WeightMutationConfig& config);

/// Adds one enabled connection between a previously unconnected, cycle-safe
/// node pair. Returns the genome unchanged when no legal pair exists.
Genome mutateAddConnection(const Genome& genome, InnovationRegistry& registry, Rng& rng);

/// Splits a random enabled connection a->b (weight w) into a->h (weight 1)
/// and h->b (weight w), disabling the original. Returns the genome unchanged
/// when it has no enabled connection.
Genome mutateAddNode(const Genome& genome, InnovationRegistry& registry, Rng& rng);

/// NEAT crossover: matching genes chosen randomly per gene, disjoint/excess
/// genes inherited from the fitter parent (random per gene on ties). Genes
/// whose inclusion would create a directed cycle are skipped.
Genome crossover(const Genome& parentA, const Genome& parentB, FitterParent fitter, Rng& rng);

/// delta = (c1*E + c2*D)/N + c3*meanWeightDiff, N = max(gene counts, 1).
double compatibilityDistance(const Genome& a, const Genome& b, const CompatCoeffs& coeffs);

/// True when the genome's connection graph (enabled and disabled edges alike)
/// admits a topological order.
bool isAcyclic(const Genome& genome);

/// Structured text record with hexadecimal float weights; round-trips
/// bit-exactly.
std::string formatGenome(const Genome& genome);
Genome parseGenome(std::istream& in, int& lineNo);
Genome parseGenome(const std::string& text);

} // namespace manynet
