#include "manynet/species.hpp"

#include <limits>
#include <stdexcept>

namespace manynet {

std::vector<Species> speciate(std::vector<Genome>& population,
                              const std::vector<Species>& previousSpecies,
                              const SpeciationConfig& config) {
    struct Candidate {
        int id;
        const Genome* representative;
        std::vector<int> members;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(previousSpecies.size());
    int nextId = 0;
    for (const auto& species : previousSpecies) {
        candidates.push_back({species.id, &species.representative, {}});
        nextId = std::max(nextId, species.id + 1);
    }

    std::vector<Genome> founders; // stable storage for new representatives
    founders.reserve(population.size());

    for (int i = 0; i < static_cast<int>(population.size()); ++i) {
        double bestDist = std::numeric_limits<double>::infinity();
        int bestIdx = -1;
        for (int c = 0; c < static_cast<int>(candidates.size()); ++c) {
            const double d = compatibilityDistance(population[i], *candidates[c].representative, config.coeffs);
            // Ties break to the lowest species id; candidates are kept in
            // ascending id order so strict < suffices.
            if (d < bestDist) {
                bestDist = d;
                bestIdx = c;
            }
        }
        if (bestIdx >= 0 && bestDist < config.threshold) {
            candidates[bestIdx].members.push_back(i);
            population[i].speciesId = candidates[bestIdx].id;
        } else {
            founders.push_back(population[i]);
            candidates.push_back({nextId, &founders.back(), {i}});
            population[i].speciesId = nextId;
            ++nextId;
        }
    }

    std::vector<Species> result;
    for (const auto& candidate : candidates) {
        if (candidate.members.empty()) continue;
        Species species;
        species.id = candidate.id;
        species.representative = population[candidate.members.front()];
        species.members = candidate.members;
        result.push_back(std::move(species));
    }
    return result;
}

int SpeciesPool::matchSpecies(const Genome& genome) const {
    double bestDist = std::numeric_limits<double>::infinity();
    int bestId = -1;
    for (const auto& group : groups_) {
        if (group.count == 0) continue;
        const double d = compatibilityDistance(genome, group.representative, config_.coeffs);
        if (d < bestDist) {
            bestDist = d;
            bestId = group.id;
        }
    }
    return (bestId >= 0 && bestDist < config_.threshold) ? bestId : -1;
}

int SpeciesPool::add(const Genome& genome) {
    if (genome.id < 0) throw std::logic_error("SpeciesPool::add: genome has no id");
    auto it = entries_.find(genome.id);
    if (it != entries_.end()) {
        ++it->second.refs;
        return it->second.speciesId;
    }

    int speciesId = matchSpecies(genome);
    if (speciesId < 0) {
        speciesId = nextSpeciesId_++;
        groups_.push_back({speciesId, genome, 0});
    }
    for (auto& group : groups_)
        if (group.id == speciesId) ++group.count;

    Entry entry;
    entry.genome = genome;
    entry.genome.speciesId = speciesId;
    entry.refs = 1;
    entry.speciesId = speciesId;
    entries_.emplace(genome.id, std::move(entry));
    return speciesId;
}

void SpeciesPool::remove(long genomeId) {
    auto it = entries_.find(genomeId);
    if (it == entries_.end()) return;
    if (--it->second.refs > 0) return;
    const int speciesId = it->second.speciesId;
    entries_.erase(it);
    for (std::size_t g = 0; g < groups_.size(); ++g) {
        if (groups_[g].id != speciesId) continue;
        if (--groups_[g].count == 0) groups_.erase(groups_.begin() + g);
        break;
    }
}

int SpeciesPool::speciesSizeFor(const Genome& genome) const {
    auto it = entries_.find(genome.id);
    if (it != entries_.end()) return sizeOfSpecies(it->second.speciesId);
    // Not a member: count it as joining its matched species.
    const int matched = matchSpecies(genome);
    return matched < 0 ? 1 : sizeOfSpecies(matched) + 1;
}

int SpeciesPool::sizeOfSpecies(int speciesId) const {
    for (const auto& group : groups_)
        if (group.id == speciesId) return group.count;
    return 0;
}

std::vector<const Genome*> SpeciesPool::members() const {
    std::vector<const Genome*> out;
    out.reserve(entries_.size());
    for (const auto& [id, entry] : entries_) out.push_back(&entry.genome);
    return out;
}

std::size_t SpeciesPool::speciesCount() const {
    return groups_.size();
}

} // namespace manynet
