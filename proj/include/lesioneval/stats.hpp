// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace lesioneval {

enum class Alternative { greater, less, two_sided };

/// Paired Wilcoxon signed-rank test. Zero differences are dropped (Wilcoxon
/// convention); at least 5 effective pairs are required. |d| ties get average
/// ranks. Exact distribution (conditional on the observed ranks) for n <= 25,
/// otherwise normal approximation with tie and continuity correction.
double wilcoxon_signed_rank(const std::vector<double>& x, const std::vector<double>& y,
                            Alternative alternative);

/// Holm step-down adjustment; result in the original order.
std::vector<double> holm_adjust(const std::vector<double>& pvals);

/// Ranks 1..n with average ranks for ties. ascending=true ranks the smallest
/// value 1 (rank by value; for "higher is better" pass ascending=false).
std::vector<double> average_ranks(const std::vector<double>& values, bool ascending);

/// Linear-interpolation quantile of a sorted sample, q in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace lesioneval
