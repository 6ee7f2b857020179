#pragma once

#include <vector>

#include "manynet/rng.hpp"

namespace manynet {

/// Archive of behavior descriptors (concatenated feature snapshots of past
/// episodes) for novelty scoring.
struct BehaviorArchive {
    int k = 15;
    double addProbability = 0.10;
    std::vector<std::vector<double>> descriptors;
};

/// Mean Euclidean distance to the k nearest descriptors among the archive
/// and the given population behaviors (the caller excludes the scored
/// genome's own descriptor). Fewer than k neighbors: average what is there;
/// none at all: 1.0. With archive.addProbability the behavior joins the
/// archive as a side effect.
double noveltyScore(const std::vector<double>& behavior, BehaviorArchive& archive,
                    const std::vector<const std::vector<double>*>& populationBehaviors, Rng& rng);

} // namespace manynet
