#pragma once

#include <optional>
#include <string>
#include <vector>

#include "manynet/genome.hpp"
#include "manynet/novelty.hpp"
#include "manynet/species.hpp"

namespace manynet {

/// Tie-breaking comparator over networks, replacing the test-length
/// criterion of sequence-based test generators. Higher scores are preferred.
enum class SecondaryCriterion { SpeciesSize, CompatDistance, Novelty };

std::optional<SecondaryCriterion> parseCriterion(const std::string& name); // species | compat | novelty
std::string criterionName(SecondaryCriterion criterion);

/// Snapshot of the population state a secondary score is computed against.
struct PreferenceContext {
    const std::vector<Genome>* population = nullptr; // peers, including the scored genome
    const std::vector<Species>* species = nullptr;   // required for SpeciesSize
    BehaviorArchive* archive = nullptr;              // required for Novelty
    Rng* rng = nullptr;                              // required for Novelty (archive add rolls)
    CompatCoeffs coeffs;
};

/// SpeciesSize: negative member count of the genome's species (smaller
/// species preferred). CompatDistance: mean compatibility distance to all
/// other population members. Novelty: k-nearest novelty score of the
/// genome's last behavior. Throws std::logic_error when required context is
/// missing (e.g. an unspeciated genome under SpeciesSize).
double secondaryScore(const Genome& genome, SecondaryCriterion criterion, const PreferenceContext& context);

/// Archive replacement test: strictly better primary fitness wins; on an
/// exact fitness tie a strictly higher secondary score wins; otherwise the
/// incumbent stays. `decidedBySecondary` reports that the tie path decided.
bool isBetterThanWorst(double candidateFitness, double candidateSecondary, double incumbentFitness,
                       double incumbentSecondary, bool* decidedBySecondary = nullptr);

} // namespace manynet
