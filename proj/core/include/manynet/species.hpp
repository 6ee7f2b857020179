#pragma once

#include <vector>

#include "manynet/genome.hpp"

namespace manynet {

struct Species {
    int id = 0;
    Genome representative;
    std::vector<int> members; // indices into the speciated population
};

struct SpeciationConfig {
    CompatCoeffs coeffs;
    double threshold = 3.0; // delta_t
};

/// Assigns each genome to the existing species with the lowest
/// representative distance when that distance is below the threshold, and
/// founds a new species otherwise. Ties go to the lowest species id. Empty
/// species are dropped; each surviving species' representative becomes its
/// first member of this round. Writes speciesId into the population.
std::vector<Species> speciate(std::vector<Genome>& population,
                              const std::vector<Species>& previousSpecies,
                              const SpeciationConfig& config);

/// Incremental speciation over a growing/shrinking population, used by the
/// archive-based search where genomes enter and leave one at a time. Members
/// are tracked by genome id with reference counts, so the same network held
/// by several archives stays a single member.
class SpeciesPool {
public:
    explicit SpeciesPool(const SpeciationConfig& config) : config_(config) {}

    /// Adds (or re-adds) a genome and returns its species id.
    int add(const Genome& genome);
    void remove(long genomeId);

    /// Species id the genome would join, without adding it. Returns -1 when
    /// it would found a new species.
    int matchSpecies(const Genome& genome) const;

    int speciesSizeFor(const Genome& genome) const;
    int sizeOfSpecies(int speciesId) const;
    std::vector<const Genome*> members() const;
    std::size_t populationSize() const { return entries_.size(); }
    std::size_t speciesCount() const;

private:
    struct Entry {
        Genome genome;
        int refs = 0;
        int speciesId = -1;
    };
    struct Group {
        int id;
        Genome representative;
        int count = 0;
    };

    SpeciationConfig config_;
    std::vector<Group> groups_;
    std::map<long, Entry> entries_;
    int nextSpeciesId_ = 0;
};

} // namespace manynet
