// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lesioneval/errors.hpp"

namespace lesioneval {

// ---------------------------------------------------------------------------
// Test design: four subsets, tracer x center, in the fixed challenge order.
// ---------------------------------------------------------------------------

enum class Tracer { FDG, PSMA };
enum class Center { UKT, LMU };

struct SubsetKey {
  Tracer tracer = Tracer::FDG;
  Center center = Center::UKT;

  bool operator==(const SubsetKey& o) const = default;
};

constexpr int kNumSubsets = 4;

int subset_index(const SubsetKey& key);
SubsetKey subset_from_index(int index);
std::string to_string(const SubsetKey& key);
SubsetKey subset_from_string(const std::string& text);  // throws SchemaViolation

// ---------------------------------------------------------------------------
// Per-case metric data
// ---------------------------------------------------------------------------

/// The three challenge metrics for one case. dsc/fnv are absent exactly when
/// the case has an empty reference mask (only FPV is evaluated then).
struct MetricTriplet {
  std::optional<double> dsc;
  double fpv_ml = 0.0;
  std::optional<double> fnv_ml;
};

struct CaseRecord {
  std::string case_id;
  int subset = 0;  // subset_index
  MetricTriplet metrics;
};

struct AlgorithmCases {
  std::string name;
  std::string team;  // defaults to name when empty
  bool reference = false;
  std::vector<CaseRecord> cases;
};

// ---------------------------------------------------------------------------
// Rankings
// ---------------------------------------------------------------------------

enum class Metric : int { dsc = 0, fpv = 1, fnv = 2 };
constexpr int kNumMetrics = 3;
constexpr std::array<Metric, 3> kMetrics{Metric::dsc, Metric::fpv, Metric::fnv};
const char* to_string(Metric m);
/// true when larger values are better (DSC); FPV/FNV rank ascending.
bool higher_is_better(Metric m);

struct RankWeights {
  double w_dsc = 0.5;
  double w_fpv = 0.25;
  double w_fnv = 0.25;

  void validate() const;
  double weight(Metric m) const;
};

enum class RankMethod { R1, R2, R3, R4, R5 };
RankMethod rank_method_from_string(const std::string& s);
const char* to_string(RankMethod m);

/// Per-subset aggregated metric values for one algorithm (means for R1/R2,
/// medians for R3).
struct AlgorithmSummary {
  std::string name;
  std::string team;
  bool reference = false;
  std::array<std::array<double, kNumSubsets>, kNumMetrics> value{};  // [metric][subset]
};

struct RankRow {
  std::string algorithm;
  std::string team;
  bool reference = false;
  // [metric][subset]: value the subset ranking was computed on (NaN for R2/R5)
  std::array<std::array<double, kNumSubsets>, kNumMetrics> subset_value{};
  // [metric][subset]: subset rank (R1/R3: tie-averaged rank of the mean/median;
  // R4: mean per-case rank; R5: tie-averaged rank of significant-win counts)
  std::array<std::array<double, kNumSubsets>, kNumMetrics> subset_rank{};
  std::array<double, kNumMetrics> metric_rank{};  // averaged over subsets
  double weighted_rank = 0.0;
  double final_rank = 0.0;  // tie-averaged ordinal rank of weighted_rank
  int position = 0;         // team position via its best algorithm; 0 elsewhere
};

struct RankTable {
  RankMethod method = RankMethod::R1;
  RankWeights weights;
  std::vector<RankRow> rows;  // sorted by weighted rank, ties by algorithm name

  const RankRow& row(const std::string& algorithm) const;
};

/// Holm family scope for the test-then-rank scheme (narrowest by default).
enum class HolmFamily { metric_subset, metric, all };

struct TestThenRankConfig {
  double alpha = 0.05;
  HolmFamily family = HolmFamily::metric_subset;
};

/// Per-subset means of the challenge metrics. DSC/FNV average over
/// lesion-positive cases only, FPV over all cases. Every subset must be
/// populated, with at least one lesion-positive case.
AlgorithmSummary subset_means(const AlgorithmCases& algorithm);
/// Same aggregation with medians (ranking method R3).
AlgorithmSummary subset_medians(const AlgorithmCases& algorithm);

/// Official challenge ranking (R1): rank subset means per metric, average the
/// four subset ranks, combine metric ranks with the weights (lower is better).
RankTable official_ranking(const std::vector<AlgorithmSummary>& summaries,
                           const RankWeights& weights = {});

/// Alternative schemes. R2 ranks each metric on the cross-subset mean of the
/// subset means; R3 is R1 over subset medians; R4 ranks algorithms per test
/// case and carries mean case ranks through the R1 aggregation; R5 counts
/// significantly outperformed opponents (one-sided Wilcoxon + Holm) per
/// metric and subset, ranking by win count.
RankTable rank_variant(const std::vector<AlgorithmCases>& algorithms, RankMethod method,
                       const RankWeights& weights = {},
                       const TestThenRankConfig& ttr = {});

RankTable test_then_rank(const std::vector<AlgorithmCases>& algorithms,
                         const RankWeights& weights = {},
                         const TestThenRankConfig& cfg = {});

// ---------------------------------------------------------------------------
// Bootstrap stability
// ---------------------------------------------------------------------------

struct BootstrapAlgorithm {
  std::string name;
  std::vector<double> ranks;  // final rank per replicate, length B
  double mean = 0.0;
  double q025 = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, q975 = 0.0;
  double rank1_share = 0.0;
};

struct BootstrapSummary {
  std::int64_t replicates = 0;
  std::uint64_t seed = 0;
  RankWeights weights;
  std::vector<BootstrapAlgorithm> algorithms;  // in input order
};

/// Case resampling with replacement, stratified by subset (each subset keeps
/// its size, the same resample is shared by all algorithms). Replicate r is a
/// pure function of (seed, r), so any worker count yields identical output.
BootstrapSummary bootstrap_ranks(const std::vector<AlgorithmCases>& algorithms, std::int64_t B,
                                 std::uint64_t seed, const RankWeights& weights = {},
                                 int workers = 1);

// ---------------------------------------------------------------------------
// Patient-level classification
// ---------------------------------------------------------------------------

struct ClassificationSummary {
  std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
  double sensitivity = 0.0, specificity = 0.0, accuracy = 0.0;
};

struct CaseFlags {
  bool reference_empty = false;
  bool prediction_empty = false;
};

ClassificationSummary classification_summary(const std::vector<CaseFlags>& cases);
ClassificationSummary classification_from_counts(std::int64_t tp, std::int64_t fn,
                                                 std::int64_t tn, std::int64_t fp);

}  // namespace lesioneval
