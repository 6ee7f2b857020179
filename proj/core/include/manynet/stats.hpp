#pragma once

#include <utility>
#include <vector>

namespace manynet {

/// Vargha-Delaney effect size: (#{x>y} + 0.5 * #{x=y}) / (|xs| * |ys|).
/// Throws std::invalid_argument on empty input.
double varghaDelaneyA12(const std::vector<double>& xs, const std::vector<double>& ys);

struct MannWhitneyResult {
    double u = 0.0; // U statistic of xs (pairs where x beats y, ties half)
    double p = 1.0; // two-sided p-value
    bool exact = false;
};

/// Mann-Whitney U with a two-sided p-value: exact by enumerating all
/// C(n+m, n) group assignments when n+m <= 12, normal approximation with tie
/// correction otherwise. Throws std::invalid_argument on empty input.
MannWhitneyResult mannWhitneyU(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace manynet
