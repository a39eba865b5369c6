// SPDX-License-Identifier: Apache-2.0
#include "lesioneval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "lesioneval/errors.hpp"

namespace lesioneval {

std::vector<double> average_ranks(const std::vector<double>& values, bool ascending) {
  std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ascending ? values[a] < values[b] : values[a] > values[b];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

namespace {

constexpr std::size_t kExactLimit = 25;

// Exact null distribution of 2*W+ conditional on the observed (tied) ranks:
// counts[s] = number of sign assignments with doubled statistic s.
std::vector<std::uint64_t> doubled_statistic_counts(const std::vector<std::int64_t>& doubled_ranks) {
  std::int64_t max_sum = std::accumulate(doubled_ranks.begin(), doubled_ranks.end(), std::int64_t{0});
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_sum) + 1, 0);
  counts[0] = 1;
  std::int64_t reach = 0;
  for (std::int64_t r : doubled_ranks) {
    reach += r;
    for (std::int64_t s = reach; s >= r; --s)
      counts[static_cast<std::size_t>(s)] += counts[static_cast<std::size_t>(s - r)];
  }
  return counts;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

double wilcoxon_signed_rank(const std::vector<double>& x, const std::vector<double>& y,
                            Alternative alternative) {
  if (x.size() != y.size()) fail(ErrKind::InvalidArgument, "paired samples differ in length");

  std::vector<double> abs_d;
  std::vector<int> sign;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - y[i];
    if (d == 0.0) continue;
    abs_d.push_back(std::fabs(d));
    sign.push_back(d > 0.0 ? 1 : -1);
  }
  std::size_t n = abs_d.size();
  if (n < 5) fail(ErrKind::TooFewPairs, "fewer than 5 non-zero paired differences");

  std::vector<double> ranks = average_ranks(abs_d, true);
  double w_plus = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (sign[i] > 0) w_plus += ranks[i];

  if (n <= kExactLimit) {
    std::vector<std::int64_t> doubled(n);
    for (std::size_t i = 0; i < n; ++i) doubled[i] = std::llround(2.0 * ranks[i]);
    auto counts = doubled_statistic_counts(doubled);
    auto obs = std::llround(2.0 * w_plus);
    std::uint64_t ge = 0, le = 0, total = 0;
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(counts.size()); ++s) {
      std::uint64_t c = counts[static_cast<std::size_t>(s)];
      total += c;
      if (s >= obs) ge += c;
      if (s <= obs) le += c;
    }
    double pg = static_cast<double>(ge) / static_cast<double>(total);
    double pl = static_cast<double>(le) / static_cast<double>(total);
    switch (alternative) {
      case Alternative::greater: return pg;
      case Alternative::less: return pl;
      case Alternative::two_sided: return std::min(1.0, 2.0 * std::min(pg, pl));
    }
  }

  // normal approximation with tie correction
  double dn = static_cast<double>(n);
  double mu = dn * (dn + 1.0) / 4.0;
  double var = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0;
  {
    std::vector<double> sorted = abs_d;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
      double t = static_cast<double>(j - i + 1);
      var -= (t * t * t - t) / 48.0;
      i = j + 1;
    }
  }
  double sigma = std::sqrt(var);
  switch (alternative) {
    case Alternative::greater: return normal_sf((w_plus - mu - 0.5) / sigma);
    case Alternative::less: return normal_cdf((w_plus - mu + 0.5) / sigma);
    case Alternative::two_sided: {
      double pg = normal_sf((w_plus - mu - 0.5) / sigma);
      double pl = normal_cdf((w_plus - mu + 0.5) / sigma);
      return std::min(1.0, 2.0 * std::min(pg, pl));
    }
  }
  return 1.0;
}

std::vector<double> holm_adjust(const std::vector<double>& pvals) {
  std::size_t m = pvals.size();
  for (double p : pvals)
    if (!(p >= 0.0) || p > 1.0) fail(ErrKind::InvalidArgument, "p-values must lie in [0, 1]");

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pvals[a] < pvals[b]; });

  std::vector<double> adjusted(m, 0.0);
  double running = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double adj = std::min(1.0, static_cast<double>(m - j) * pvals[order[j]]);
    running = std::max(running, adj);
    adjusted[order[j]] = running;
  }
  return adjusted;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) fail(ErrKind::InvalidArgument, "quantile of an empty sample");
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  auto lo = static_cast<std::size_t>(std::floor(h));
  double frac = h - std::floor(h);
  double v = sorted[lo];
  if (frac > 0.0) v += frac * (sorted[lo + 1] - sorted[lo]);
  return v;
}

}  // namespace lesioneval
