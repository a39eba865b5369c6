// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "lesioneval/geometry.hpp"

namespace lesioneval {

/// Exact squared Euclidean distance transform (Felzenszwalb-Huttenlocher,
/// separable) from the source voxels, with per-axis weights (mm spacing or 1
/// for index units). Entries with no source anywhere are +inf.
///
/// Axis terms accumulate as sq(dz*wz) + (sq(dy*wy) + sq(dx*wx)); with unit
/// weights every output is an exact integer.
std::vector<double> squared_distance_transform(const GridGeometry& geometry,
                                               const std::vector<std::uint8_t>& sources,
                                               const std::array<double, 3>& weights);

/// Same transform into a caller-owned buffer, so batch users (one transform
/// per component) pay for the grid-sized allocations once.
struct DistanceWorkspace {
  std::vector<double> line, out, z;
  std::vector<int> v;
};

void squared_distance_transform_into(const GridGeometry& geometry,
                                     const std::vector<std::uint8_t>& sources,
                                     const std::array<double, 3>& weights,
                                     std::vector<double>& distances, DistanceWorkspace& ws);

/// Foreground voxels with at least one face-adjacent background voxel; the
/// grid edge counts as background.
std::vector<std::uint8_t> boundary_mask(const LabelVolume& mask);

}  // namespace lesioneval
