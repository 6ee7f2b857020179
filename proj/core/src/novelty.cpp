#include "manynet/novelty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace manynet {

namespace {

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("noveltyScore: descriptor lengths differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

} // namespace

double noveltyScore(const std::vector<double>& behavior, BehaviorArchive& archive,
                    const std::vector<const std::vector<double>*>& populationBehaviors, Rng& rng) {
    if (archive.k < 1) throw std::invalid_argument("noveltyScore: k must be >= 1");

    std::vector<double> distances;
    distances.reserve(archive.descriptors.size() + populationBehaviors.size());
    for (const auto& stored : archive.descriptors) distances.push_back(euclidean(behavior, stored));
    for (const auto* peer : populationBehaviors) distances.push_back(euclidean(behavior, *peer));

    double score = 1.0;
    if (!distances.empty()) {
        const std::size_t take = std::min<std::size_t>(distances.size(), static_cast<std::size_t>(archive.k));
        std::partial_sort(distances.begin(), distances.begin() + take, distances.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < take; ++i) sum += distances[i];
        score = sum / static_cast<double>(take);
    }

    if (rng.chance(archive.addProbability)) archive.descriptors.push_back(behavior);
    return score;
}

} // namespace manynet
