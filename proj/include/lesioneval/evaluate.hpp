// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lesioneval/components.hpp"
#include "lesioneval/lesion_metrics.hpp"
#include "lesioneval/manifest.hpp"
#include "lesioneval/voxel_metrics.hpp"

namespace lesioneval {

struct EvaluationConfig {
  Connectivity connectivity = Connectivity::c18;
  NsdConfig nsd;
  RatioConfig ratio;
  double pq_tau = 0.1;
  std::vector<double> sweep_taus;  // defaults to 0.01..0.50 step 0.01
  int workers = 0;                 // 0: hardware concurrency (env override wins)
  std::uint64_t seed = 0;

  static std::vector<double> default_sweep_taus();
  EvaluationConfig() : sweep_taus(default_sweep_taus()) {}
};

/// Everything the pipeline derives from one (case, algorithm) pair.
struct CaseMetrics {
  std::string case_id;
  SubsetKey subset;
  std::string algorithm;
  std::string error;  // non-empty when evaluation failed; other fields unset

  bool reference_empty = false;
  bool prediction_empty = false;
  std::int64_t n_ref = 0;
  std::int64_t n_pred = 0;
  double ref_tmtv_ml = 0.0;
  double pred_volume_ml = 0.0;

  std::optional<double> dsc;  // lesion-positive cases only
  double dsc_all = 0.0;
  double fpv_ml = 0.0;
  std::optional<double> fnv_ml;
  std::optional<double> nsd;
  std::optional<double> vs;  // absent when both masks are empty
  double volume_diff_ml = 0.0;
  double volume_ratio = 0.0;
  std::optional<double> cc_dsc;

  std::int64_t detected_refs = 0;   // one-voxel criterion
  std::int64_t matched_preds = 0;   // one-voxel criterion
  TaxonomyCounts taxonomy;          // one-voxel criterion
  PanopticResult panoptic;          // at pq_tau

  MetricTriplet triplet() const { return {dsc, fpv_ml, fnv_ml}; }
};

/// Per-case data the threshold sweeps and decile reports are built from.
struct CaseOverlapRecord {
  std::string case_id;
  SubsetKey subset;
  std::string algorithm;
  OverlapTable table;
  std::vector<double> ref_volume_ml;
  std::vector<double> ref_suv_max;  // empty when no intensity volume given
};

CaseMetrics evaluate_case(const std::string& case_id, const SubsetKey& subset,
                          const std::string& algorithm, const LabelVolume& reference,
                          const LabelVolume& prediction, const IntensityVolume* intensity,
                          const EvaluationConfig& cfg,
                          CaseOverlapRecord* overlap_out = nullptr);

struct EvaluationResult {
  std::vector<CaseMetrics> rows;            // sorted by (case_id, algorithm)
  std::vector<CaseOverlapRecord> overlaps;  // same order, failed rows skipped
};

/// Runs every (case, algorithm) pair of the manifest, isolating per-row
/// failures in the error column. Output is identical for any worker count.
EvaluationResult evaluate_all(const CaseManifest& manifest, const EvaluationConfig& cfg);

/// Resolve the worker count: env LESIONEVAL_WORKERS > config > hardware.
int resolve_workers(int configured);

enum class DecileAxis { volume, suv_max };

/// Pool lesions (with one-voxel detection flags) across overlap records for
/// decile stratification. The suv_max axis requires every record to carry
/// intensity-derived statistics.
std::vector<LesionSample> lesion_samples(const std::vector<CaseOverlapRecord>& records,
                                         DecileAxis axis);

/// Voxelwise majority vote: foreground where strictly more than half of the
/// masks agree.
LabelVolume majority_vote(const std::vector<LabelVolume>& masks);

}  // namespace lesioneval
