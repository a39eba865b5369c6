// SPDX-License-Identifier: Apache-2.0
#include "lesioneval/lesion_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lesioneval/distance.hpp"
#include "lesioneval/stats.hpp"

namespace lesioneval {

MatchCriterion MatchCriterion::iou(double tau) {
  if (!(tau > 0.0) || tau > 1.0) fail(ErrKind::InvalidArgument, "IoU threshold must be in (0, 1]");
  return {Kind::iou, tau};
}

bool MatchCriterion::matches(std::int64_t intersection, std::int64_t ref_size,
                             std::int64_t pred_size) const {
  if (intersection <= 0) return false;
  if (kind == Kind::one_voxel) return true;
  double iou = static_cast<double>(intersection) /
               static_cast<double>(ref_size + pred_size - intersection);
  return iou >= tau;
}

double fpv(const OverlapTable& ot) {
  std::vector<bool> touched(static_cast<std::size_t>(ot.n_pred), false);
  for (const auto& [key, n] : ot.entries)
    if (n > 0) touched[static_cast<std::size_t>(key.second - 1)] = true;
  std::int64_t voxels = 0;
  for (std::int32_t l = 0; l < ot.n_pred; ++l)
    if (!touched[static_cast<std::size_t>(l)]) voxels += ot.pred_sizes[static_cast<std::size_t>(l)];
  return static_cast<double>(voxels) * ot.voxel_volume_ml;
}

double fnv(const OverlapTable& ot) {
  std::vector<bool> touched(static_cast<std::size_t>(ot.n_ref), false);
  for (const auto& [key, n] : ot.entries)
    if (n > 0) touched[static_cast<std::size_t>(key.first - 1)] = true;
  std::int64_t voxels = 0;
  for (std::int32_t i = 0; i < ot.n_ref; ++i)
    if (!touched[static_cast<std::size_t>(i)]) voxels += ot.ref_sizes[static_cast<std::size_t>(i)];
  return static_cast<double>(voxels) * ot.voxel_volume_ml;
}

std::int64_t DetectionFlags::detected_count() const {
  return std::count(ref_detected.begin(), ref_detected.end(), true);
}
std::int64_t DetectionFlags::matched_count() const {
  return std::count(pred_matched.begin(), pred_matched.end(), true);
}

DetectionFlags detection_flags(const OverlapTable& ot, const MatchCriterion& crit) {
  DetectionFlags out;
  out.ref_detected.assign(static_cast<std::size_t>(ot.n_ref), false);
  out.pred_matched.assign(static_cast<std::size_t>(ot.n_pred), false);
  for (const auto& [key, n] : ot.entries) {
    auto [i, l] = key;
    if (crit.matches(n, ot.ref_sizes[static_cast<std::size_t>(i - 1)],
                     ot.pred_sizes[static_cast<std::size_t>(l - 1)])) {
      out.ref_detected[static_cast<std::size_t>(i - 1)] = true;
      out.pred_matched[static_cast<std::size_t>(l - 1)] = true;
    }
  }
  return out;
}

std::vector<SweepPoint> sensitivity_sweep(const std::vector<OverlapTable>& cases,
                                          const std::vector<double>& taus) {
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] > 0.0) || taus[i] > 0.5)
      fail(ErrKind::InvalidArgument, "sweep taus must lie in (0, 0.5]");
    if (i && !(taus[i] > taus[i - 1])) fail(ErrKind::InvalidArgument, "sweep taus must ascend");
  }
  std::int64_t total = 0;
  for (const auto& ot : cases) total += ot.n_ref;
  if (total == 0) fail(ErrKind::EmptyPopulation, "no reference lesions in any case");

  std::vector<MatchCriterion> criteria;
  criteria.push_back(MatchCriterion::one_voxel());
  for (double t : taus) criteria.push_back(MatchCriterion::iou(t));

  std::vector<SweepPoint> out;
  out.reserve(criteria.size());
  for (const auto& crit : criteria) {
    SweepPoint pt;
    pt.criterion = crit;
    pt.total = total;
    for (const auto& ot : cases) pt.detected += detection_flags(ot, crit).detected_count();
    pt.sensitivity = static_cast<double>(pt.detected) / static_cast<double>(pt.total);
    out.push_back(pt);
  }
  return out;
}

TaxonomyCounts error_taxonomy(const OverlapTable& ot, const MatchCriterion& crit) {
  // bipartite clusters: nodes 0..n_ref-1 are refs, n_ref..n_ref+n_pred-1 preds
  std::int32_t n = ot.n_ref + ot.n_pred;
  std::vector<std::int32_t> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::int32_t x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  auto unite = [&](std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  };

  for (const auto& [key, cnt] : ot.entries) {
    auto [i, l] = key;
    if (crit.matches(cnt, ot.ref_sizes[static_cast<std::size_t>(i - 1)],
                     ot.pred_sizes[static_cast<std::size_t>(l - 1)]))
      unite(i - 1, ot.n_ref + l - 1);
  }

  std::vector<std::int64_t> refs(static_cast<std::size_t>(n), 0), preds(static_cast<std::size_t>(n), 0);
  for (std::int32_t i = 0; i < ot.n_ref; ++i) ++refs[static_cast<std::size_t>(find(i))];
  for (std::int32_t l = 0; l < ot.n_pred; ++l) ++preds[static_cast<std::size_t>(find(ot.n_ref + l))];

  TaxonomyCounts out;
  for (std::int32_t v = 0; v < n; ++v) {
    if (find(v) != v) continue;  // one visit per cluster root
    std::int64_t r = refs[static_cast<std::size_t>(v)];
    std::int64_t p = preds[static_cast<std::size_t>(v)];
    if (r == 1 && p == 1) ++out.cd;
    else if (r == 1 && p == 0) ++out.df;
    else if (r == 0 && p == 1) ++out.fa;
    else if (r >= 2 && p == 1) { ++out.m; out.refs_in_clusters += r; out.preds_in_clusters += p; }
    else if (r == 1 && p >= 2) { ++out.s; out.refs_in_clusters += r; out.preds_in_clusters += p; }
    else if (r >= 2 && p >= 2) { ++out.sm; out.refs_in_clusters += r; out.preds_in_clusters += p; }
  }
  return out;
}

PanopticResult panoptic(const OverlapTable& ot, double tau) {
  if (!(tau > 0.0) || tau > 1.0) fail(ErrKind::InvalidArgument, "PQ threshold must be in (0, 1]");
  PanopticResult out;
  if (ot.n_ref == 0 && ot.n_pred == 0) return out;

  std::vector<double> best_iou(static_cast<std::size_t>(ot.n_ref), 0.0);
  std::vector<bool> pred_matched(static_cast<std::size_t>(ot.n_pred), false);
  for (const auto& [key, n] : ot.entries) {
    auto [i, l] = key;
    double iou = static_cast<double>(n) /
                 static_cast<double>(ot.ref_sizes[static_cast<std::size_t>(i - 1)] +
                                     ot.pred_sizes[static_cast<std::size_t>(l - 1)] - n);
    if (iou >= tau) {
      pred_matched[static_cast<std::size_t>(l - 1)] = true;
      best_iou[static_cast<std::size_t>(i - 1)] = std::max(best_iou[static_cast<std::size_t>(i - 1)], iou);
    }
  }

  double sq_sum = 0.0;
  for (std::int32_t i = 0; i < ot.n_ref; ++i) {
    if (best_iou[static_cast<std::size_t>(i)] > 0.0) {
      ++out.tp;
      sq_sum += best_iou[static_cast<std::size_t>(i)];
    } else {
      ++out.fn;
    }
  }
  out.fp = ot.n_pred - std::count(pred_matched.begin(), pred_matched.end(), true);

  if (out.tp > 0) out.sq = sq_sum / static_cast<double>(out.tp);
  std::int64_t denom = 2 * out.tp + out.fp + out.fn;
  if (denom > 0) out.rq = 2.0 * static_cast<double>(out.tp) / static_cast<double>(denom);
  out.pq = out.sq * out.rq;
  return out;
}

double cc_dsc(const ComponentLabeling& ref_labeling, const LabelVolume& prediction) {
  require_same_geometry(ref_labeling.geometry, prediction.geometry);
  if (ref_labeling.count == 0) fail(ErrKind::EmptyReference, "CC-DSC needs a non-empty reference");

  const GridGeometry& g = ref_labeling.geometry;
  std::size_t nvox = ref_labeling.labels.size();

  std::vector<std::int64_t> inter(static_cast<std::size_t>(ref_labeling.count), 0);
  std::vector<std::int64_t> pred_in_cell(static_cast<std::size_t>(ref_labeling.count), 0);

  if (ref_labeling.count == 1) {
    // single component owns the whole grid
    for (std::size_t i = 0; i < nvox; ++i) {
      if (!prediction.voxels[i]) continue;
      ++pred_in_cell[0];
      if (ref_labeling.labels[i] == 1) ++inter[0];
    }
  } else {
    // Voronoi assignment by per-component distance transform, lowest label
    // wins ties. Each component's transform runs on a sub-box that provably
    // contains its whole cell plus every tie candidate: any voxel it can own
    // (or tie on) lies within sqrt(Dmax) of the component, where Dmax is the
    // maximum of the all-components distance transform. Translation keeps the
    // accumulated values bit-identical to a full-grid transform.
    std::vector<double> dist;
    DistanceWorkspace ws;
    std::vector<std::uint8_t> sources(nvox);

    for (std::size_t i = 0; i < nvox; ++i) sources[i] = ref_labeling.labels[i] != 0;
    squared_distance_transform_into(g, sources, g.spacing, dist, ws);
    double dmax = 0.0;
    for (double d : dist) dmax = std::max(dmax, d);

    std::array<std::int64_t, 3> margin;
    for (int a = 0; a < 3; ++a)
      margin[a] = static_cast<std::int64_t>(std::ceil(std::sqrt(dmax) / g.spacing[a])) + 1;

    std::vector<BoxRegion> bbox(static_cast<std::size_t>(ref_labeling.count),
                                BoxRegion{{g.dims[0], g.dims[1], g.dims[2]}, {-1, -1, -1}});
    for (std::int64_t z = 0; z < g.dims[2]; ++z)
      for (std::int64_t y = 0; y < g.dims[1]; ++y)
        for (std::int64_t x = 0; x < g.dims[0]; ++x) {
          std::int32_t lbl = ref_labeling.labels[static_cast<std::size_t>(g.index(x, y, z))];
          if (!lbl) continue;
          auto& box = bbox[static_cast<std::size_t>(lbl - 1)];
          box.lo = {std::min(box.lo[0], x), std::min(box.lo[1], y), std::min(box.lo[2], z)};
          box.hi = {std::max(box.hi[0], x), std::max(box.hi[1], y), std::max(box.hi[2], z)};
        }

    std::vector<std::int32_t> cell(nvox, 0);
    std::vector<double> best(nvox, std::numeric_limits<double>::infinity());
    std::vector<std::uint8_t> sub_sources;
    std::vector<double> sub_dist;
    for (std::int32_t c = 1; c <= ref_labeling.count; ++c) {
      const BoxRegion& box = bbox[static_cast<std::size_t>(c - 1)];
      std::array<std::int64_t, 3> lo, hi;
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::max<std::int64_t>(0, box.lo[a] - margin[a]);
        hi[a] = std::min<std::int64_t>(g.dims[a] - 1, box.hi[a] + margin[a]);
      }
      GridGeometry sub(hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1, g.spacing[0],
                       g.spacing[1], g.spacing[2]);
      sub_sources.assign(static_cast<std::size_t>(sub.voxel_count()), 0);
      for (std::int64_t z = lo[2]; z <= hi[2]; ++z)
        for (std::int64_t y = lo[1]; y <= hi[1]; ++y)
          for (std::int64_t x = lo[0]; x <= hi[0]; ++x)
            if (ref_labeling.labels[static_cast<std::size_t>(g.index(x, y, z))] == c)
              sub_sources[static_cast<std::size_t>(
                  sub.index(x - lo[0], y - lo[1], z - lo[2]))] = 1;
      squared_distance_transform_into(sub, sub_sources, g.spacing, sub_dist, ws);
      for (std::int64_t z = lo[2]; z <= hi[2]; ++z)
        for (std::int64_t y = lo[1]; y <= hi[1]; ++y)
          for (std::int64_t x = lo[0]; x <= hi[0]; ++x) {
            double d = sub_dist[static_cast<std::size_t>(
                sub.index(x - lo[0], y - lo[1], z - lo[2]))];
            auto gi = static_cast<std::size_t>(g.index(x, y, z));
            if (d < best[gi]) {
              best[gi] = d;
              cell[gi] = c;
            }
          }
    }
    for (std::size_t i = 0; i < nvox; ++i) {
      if (!prediction.voxels[i]) continue;
      std::int32_t c = cell[i];
      ++pred_in_cell[static_cast<std::size_t>(c - 1)];
      if (ref_labeling.labels[i] == c) ++inter[static_cast<std::size_t>(c - 1)];
    }
  }

  double sum = 0.0;
  for (std::int32_t c = 0; c < ref_labeling.count; ++c) {
    auto idx = static_cast<std::size_t>(c);
    sum += 2.0 * static_cast<double>(inter[idx]) /
           static_cast<double>(ref_labeling.sizes[idx] + pred_in_cell[idx]);
  }
  return sum / static_cast<double>(ref_labeling.count);
}

double pooled_f1(const std::vector<OverlapTable>& cases, const MatchCriterion& crit) {
  std::int64_t tp = 0, fp = 0, fn = 0, population = 0;
  for (const auto& ot : cases) {
    population += ot.n_ref + ot.n_pred;
    DetectionFlags f = detection_flags(ot, crit);
    std::int64_t det = f.detected_count();
    tp += det;
    fn += ot.n_ref - det;
    fp += ot.n_pred - f.matched_count();
  }
  if (population == 0) fail(ErrKind::EmptyPopulation, "no components in any case");
  std::int64_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

DecileReport stratified_sensitivity(const std::vector<LesionSample>& lesions) {
  if (lesions.size() < 10)
    fail(ErrKind::InsufficientPopulation, "decile stratification needs at least 10 lesions");

  std::vector<double> values(lesions.size());
  for (std::size_t i = 0; i < lesions.size(); ++i) values[i] = lesions[i].axis_value;
  std::sort(values.begin(), values.end());

  DecileReport out;
  out.edges.resize(9);
  for (int k = 1; k <= 9; ++k)
    out.edges[static_cast<std::size_t>(k - 1)] =
        quantile_sorted(values, static_cast<double>(k) / 10.0);

  out.total.assign(10, 0);
  out.detected.assign(10, 0);
  for (const auto& lesion : lesions) {
    // values equal to an edge fall into the lower bin
    int bin = 9;
    for (int k = 0; k < 9; ++k) {
      if (lesion.axis_value <= out.edges[static_cast<std::size_t>(k)]) {
        bin = k;
        break;
      }
    }
    ++out.total[static_cast<std::size_t>(bin)];
    if (lesion.detected) ++out.detected[static_cast<std::size_t>(bin)];
  }

  out.sensitivity.assign(10, std::numeric_limits<double>::quiet_NaN());
  for (int b = 0; b < 10; ++b) {
    auto idx = static_cast<std::size_t>(b);
    if (out.total[idx] > 0)
      out.sensitivity[idx] =
          static_cast<double>(out.detected[idx]) / static_cast<double>(out.total[idx]);
  }
  return out;
}

}  // namespace lesioneval
