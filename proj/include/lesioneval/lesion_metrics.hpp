// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "lesioneval/components.hpp"

namespace lesioneval {

/// Lesion matching rule: one shared voxel, or pairwise IoU >= tau.
struct MatchCriterion {
  enum class Kind { one_voxel, iou };
  Kind kind = Kind::one_voxel;
  double tau = 0.0;

  static MatchCriterion one_voxel() { return {Kind::one_voxel, 0.0}; }
  static MatchCriterion iou(double tau);

  bool matches(std::int64_t intersection, std::int64_t ref_size, std::int64_t pred_size) const;
};

/// Volumetric burden of predicted components with zero reference overlap, mL.
double fpv(const OverlapTable& ot);
/// Volumetric burden of reference components with zero prediction overlap, mL.
double fnv(const OverlapTable& ot);

/// Per-component detection under a criterion. Multi-assignment is allowed:
/// one prediction may detect several references and vice versa.
struct DetectionFlags {
  std::vector<bool> ref_detected;
  std::vector<bool> pred_matched;

  std::int64_t detected_count() const;
  std::int64_t matched_count() const;
};

DetectionFlags detection_flags(const OverlapTable& ot, const MatchCriterion& crit);

/// One point of the sensitivity-vs-threshold curve.
struct SweepPoint {
  MatchCriterion criterion;
  std::int64_t detected = 0;
  std::int64_t total = 0;
  double sensitivity = 0.0;
};

/// Pooled detection sensitivity across cases, one point per criterion: the
/// one-voxel criterion first, then each tau of the ascending grid.
std::vector<SweepPoint> sensitivity_sweep(const std::vector<OverlapTable>& cases,
                                          const std::vector<double>& taus);

/// Association-cluster counts: correct detections, false alarms, detection
/// failures, merges, splits, split-merges.
struct TaxonomyCounts {
  std::int64_t cd = 0, fa = 0, df = 0, m = 0, s = 0, sm = 0;
  // component totals inside each cluster category, for conservation checks
  std::int64_t refs_in_clusters = 0;   // refs inside M/S/SM clusters
  std::int64_t preds_in_clusters = 0;  // preds inside M/S/SM clusters
};

TaxonomyCounts error_taxonomy(const OverlapTable& ot, const MatchCriterion& crit);

struct PanopticResult {
  double pq = 0.0, sq = 0.0, rq = 0.0;
  std::int64_t tp = 0, fp = 0, fn = 0;
};

/// Panoptic quality at IoU threshold tau. A reference is a TP if any
/// prediction reaches the threshold; SQ uses the best-overlap prediction.
PanopticResult panoptic(const OverlapTable& ot, double tau);

/// Per-lesion DSC inside a nearest-reference-component Voronoi partition
/// (physical mm distances, ties to the lowest component label), averaged over
/// reference components irrespective of size.
double cc_dsc(const ComponentLabeling& ref_labeling, const LabelVolume& prediction);

/// Detection F1 pooled over all cases.
double pooled_f1(const std::vector<OverlapTable>& cases, const MatchCriterion& crit);

/// One pooled lesion for decile stratification.
struct LesionSample {
  double axis_value = 0.0;  // volume_ml or suv_max
  bool detected = false;
};

struct DecileReport {
  std::vector<double> edges;           // 9 interior decile edges
  std::vector<std::int64_t> total;     // 10 bins
  std::vector<std::int64_t> detected;  // 10 bins
  std::vector<double> sensitivity;     // detected/total, NaN for empty bins
};

/// Decile edges from the pooled empirical distribution (linear interpolation);
/// values equal to an edge fall into the lower bin.
DecileReport stratified_sensitivity(const std::vector<LesionSample>& lesions);

}  // namespace lesioneval
