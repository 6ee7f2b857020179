#include "manynet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace manynet {

double varghaDelaneyA12(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.empty() || ys.empty()) throw std::invalid_argument("varghaDelaneyA12: empty sample");
    double wins = 0.0;
    for (const double x : xs) {
        for (const double y : ys) {
            if (x > y) wins += 1.0;
            else if (x == y) wins += 0.5;
        }
    }
    return wins / (static_cast<double>(xs.size()) * static_cast<double>(ys.size()));
}

namespace {

double uStatistic(const std::vector<double>& xs, const std::vector<double>& ys) {
    double u = 0.0;
    for (const double x : xs) {
        for (const double y : ys) {
            if (x > y) u += 1.0;
            else if (x == y) u += 0.5;
        }
    }
    return u;
}

// Walks every way of assigning n of the pooled values to the first group and
// accumulates how many are at least as extreme (two-sided) as the observed U.
void enumerateAssignments(const std::vector<double>& pooled, std::vector<int>& chosen, std::size_t start,
                          std::size_t n, double observedDeviation, double center, long& extreme, long& total) {
    if (chosen.size() == n) {
        std::vector<double> xs, ys;
        std::size_t c = 0;
        for (std::size_t i = 0; i < pooled.size(); ++i) {
            if (c < chosen.size() && static_cast<std::size_t>(chosen[c]) == i) {
                xs.push_back(pooled[i]);
                ++c;
            } else {
                ys.push_back(pooled[i]);
            }
        }
        ++total;
        if (std::fabs(uStatistic(xs, ys) - center) >= observedDeviation - 1e-12) ++extreme;
        return;
    }
    for (std::size_t i = start; i < pooled.size(); ++i) {
        chosen.push_back(static_cast<int>(i));
        enumerateAssignments(pooled, chosen, i + 1, n, observedDeviation, center, extreme, total);
        chosen.pop_back();
    }
}

double normalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace

MannWhitneyResult mannWhitneyU(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.empty() || ys.empty()) throw std::invalid_argument("mannWhitneyU: empty sample");

    const std::size_t n = xs.size(), m = ys.size();
    MannWhitneyResult result;
    result.u = uStatistic(xs, ys);
    const double center = static_cast<double>(n) * static_cast<double>(m) / 2.0;

    if (n + m <= 12) {
        result.exact = true;
        std::vector<double> pooled = xs;
        pooled.insert(pooled.end(), ys.begin(), ys.end());
        std::sort(pooled.begin(), pooled.end());
        std::vector<int> chosen;
        long extreme = 0, total = 0;
        enumerateAssignments(pooled, chosen, 0, n, std::fabs(result.u - center), center, extreme, total);
        result.p = static_cast<double>(extreme) / static_cast<double>(total);
        return result;
    }

    // Normal approximation with tie correction and continuity correction.
    const double N = static_cast<double>(n + m);
    std::map<double, int> tieCounts;
    for (const double v : xs) ++tieCounts[v];
    for (const double v : ys) ++tieCounts[v];
    double tieSum = 0.0;
    for (const auto& [value, count] : tieCounts) {
        const double t = static_cast<double>(count);
        tieSum += t * t * t - t;
    }
    const double variance =
        (static_cast<double>(n) * static_cast<double>(m) / 12.0) * ((N + 1.0) - tieSum / (N * (N - 1.0)));
    if (variance <= 0.0) {
        result.p = 1.0; // all values tied
        return result;
    }
    const double deviation = std::fabs(result.u - center);
    const double z = std::max(0.0, deviation - 0.5) / std::sqrt(variance);
    result.p = std::min(1.0, 2.0 * (1.0 - normalCdf(z)));
    return result;
}

} // namespace manynet
