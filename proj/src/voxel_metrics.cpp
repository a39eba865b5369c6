// SPDX-License-Identifier: Apache-2.0
#include "lesioneval/voxel_metrics.hpp"

#include <cmath>
#include <cstdlib>

#include "lesioneval/distance.hpp"

namespace lesioneval {

namespace {

struct OverlapCounts {
  std::int64_t g = 0, p = 0, both = 0;
};

OverlapCounts count_overlap(const LabelVolume& reference, const LabelVolume& prediction) {
  require_same_geometry(reference.geometry, prediction.geometry);
  OverlapCounts c;
  for (std::size_t i = 0; i < reference.voxels.size(); ++i) {
    bool g = reference.voxels[i] != 0;
    bool p = prediction.voxels[i] != 0;
    c.g += g;
    c.p += p;
    c.both += g && p;
  }
  return c;
}

}  // namespace

double dsc(const LabelVolume& reference, const LabelVolume& prediction) {
  OverlapCounts c = count_overlap(reference, prediction);
  if (c.g == 0) fail(ErrKind::EmptyReference, "DSC is undefined for an empty reference mask");
  return 2.0 * static_cast<double>(c.both) / static_cast<double>(c.g + c.p);
}

double dsc_all(const LabelVolume& reference, const LabelVolume& prediction,
               double both_empty_value) {
  OverlapCounts c = count_overlap(reference, prediction);
  if (c.g == 0) return c.p == 0 ? both_empty_value : 0.0;
  return 2.0 * static_cast<double>(c.both) / static_cast<double>(c.g + c.p);
}

double volumetric_similarity(const LabelVolume& reference, const LabelVolume& prediction) {
  OverlapCounts c = count_overlap(reference, prediction);
  if (c.g + c.p == 0) fail(ErrKind::BothEmpty, "VS is undefined when both masks are empty");
  return 1.0 - static_cast<double>(std::llabs(c.g - c.p)) / static_cast<double>(c.g + c.p);
}

double nsd(const LabelVolume& reference, const LabelVolume& prediction, const NsdConfig& cfg) {
  require_same_geometry(reference.geometry, prediction.geometry);
  if (reference.empty_mask()) fail(ErrKind::EmptyReference, "NSD is undefined for an empty reference mask");
  if (cfg.tolerance < 0.0) fail(ErrKind::InvalidArgument, "NSD tolerance must be >= 0");

  const GridGeometry& g = reference.geometry;
  std::array<double, 3> w{1.0, 1.0, 1.0};
  if (cfg.use_spacing_mm) w = g.spacing;

  auto bg = boundary_mask(reference);
  auto bp = boundary_mask(prediction);
  std::int64_t ng = 0, np = 0;
  for (auto v : bg) ng += v;
  for (auto v : bp) np += v;
  if (np == 0) return 0.0;  // empty prediction has no surface to agree with

  double tol2 = cfg.tolerance * cfg.tolerance;
  auto dist_to_bp = squared_distance_transform(g, bp, w);
  auto dist_to_bg = squared_distance_transform(g, bg, w);

  std::int64_t close_g = 0, close_p = 0;
  for (std::size_t i = 0; i < bg.size(); ++i) {
    if (bg[i] && dist_to_bp[i] <= tol2) ++close_g;
    if (bp[i] && dist_to_bg[i] <= tol2) ++close_p;
  }
  return static_cast<double>(close_g + close_p) / static_cast<double>(ng + np);
}

double volume_difference(const LabelVolume& reference, const LabelVolume& prediction) {
  OverlapCounts c = count_overlap(reference, prediction);
  return static_cast<double>(c.p - c.g) * reference.geometry.voxel_volume_ml();
}

double volume_ratio(const LabelVolume& reference, const LabelVolume& prediction,
                    const RatioConfig& cfg) {
  if (!(cfg.epsilon_ml > 0.0)) fail(ErrKind::InvalidArgument, "ratio epsilon must be > 0");
  OverlapCounts c = count_overlap(reference, prediction);
  double v = reference.geometry.voxel_volume_ml();
  return (static_cast<double>(c.p) * v + cfg.epsilon_ml) /
         (static_cast<double>(c.g) * v + cfg.epsilon_ml);
}

}  // namespace lesioneval
