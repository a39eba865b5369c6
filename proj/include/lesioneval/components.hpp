// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lesioneval/geometry.hpp"

namespace lesioneval {

/// 3D neighborhood: 6 = faces, 18 = faces+edges, 26 = faces+edges+corners.
enum class Connectivity : int { c6 = 6, c18 = 18, c26 = 26 };

Connectivity connectivity_from_int(int v);

/// Neighbor offsets (dx, dy, dz) for a connectivity, excluding the origin.
std::vector<std::array<int, 3>> neighbor_offsets(Connectivity conn);

/// Instance labels per voxel (0 = background, components numbered 1..count in
/// order of first appearance along the x-fastest scan) plus component sizes.
struct ComponentLabeling {
  GridGeometry geometry;
  std::vector<std::int32_t> labels;
  std::int32_t count = 0;
  std::vector<std::int64_t> sizes;        // indexed by label-1
  std::vector<std::int64_t> first_voxel;  // linear index of first voxel, by label-1
};

ComponentLabeling label_components(const LabelVolume& mask, Connectivity conn);

/// Sparse contingency of intersection voxel counts between reference and
/// prediction components. Only overlapping pairs are stored.
struct OverlapTable {
  std::int32_t n_ref = 0;
  std::int32_t n_pred = 0;
  std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> entries;  // (ref, pred) -> voxels
  std::vector<std::int64_t> ref_sizes;
  std::vector<std::int64_t> pred_sizes;
  double voxel_volume_ml = 0.0;

  std::int64_t intersection(std::int32_t ref_label, std::int32_t pred_label) const {
    auto it = entries.find({ref_label, pred_label});
    return it == entries.end() ? 0 : it->second;
  }
};

OverlapTable overlap_table(const ComponentLabeling& ref, const ComponentLabeling& pred);

struct ComponentStats {
  std::vector<double> volume_ml;
  std::vector<double> suv_max;  // empty when no intensity volume was supplied
  std::vector<BoxRegion> bounding_box;
};

ComponentStats component_stats(const ComponentLabeling& labeling,
                               const IntensityVolume* intensity = nullptr);

}  // namespace lesioneval
