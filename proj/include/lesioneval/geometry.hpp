// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lesioneval/errors.hpp"

namespace lesioneval {

/// Voxel grid: dimensions (nx, ny, nz) and spacing in mm per axis.
/// Linear voxel order is x-fastest: index = x + nx*(y + ny*z).
struct GridGeometry {
  std::array<std::int64_t, 3> dims{0, 0, 0};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};

  GridGeometry() = default;
  GridGeometry(std::int64_t nx, std::int64_t ny, std::int64_t nz,
               double sx = 1.0, double sy = 1.0, double sz = 1.0)
      : dims{nx, ny, nz}, spacing{sx, sy, sz} {
    validate();
  }

  void validate() const {
    for (int a = 0; a < 3; ++a) {
      if (dims[a] < 1) fail(ErrKind::InvalidArgument, "grid dims must be >= 1");
      if (!(spacing[a] > 0.0)) fail(ErrKind::InvalidArgument, "grid spacing must be > 0");
    }
  }

  std::int64_t voxel_count() const { return dims[0] * dims[1] * dims[2]; }
  double voxel_volume_ml() const { return spacing[0] * spacing[1] * spacing[2] / 1000.0; }

  std::int64_t index(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return x + dims[0] * (y + dims[1] * z);
  }
  bool in_bounds(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return x >= 0 && x < dims[0] && y >= 0 && y < dims[1] && z >= 0 && z < dims[2];
  }

  bool operator==(const GridGeometry& o) const {
    return dims == o.dims && spacing == o.spacing;
  }
  bool operator!=(const GridGeometry& o) const { return !(*this == o); }
};

inline void require_same_geometry(const GridGeometry& a, const GridGeometry& b) {
  if (a != b) fail(ErrKind::GeometryMismatch, "volumes live on different grids");
}

/// Binary mask on a grid; voxel values are 0 or 1.
struct LabelVolume {
  GridGeometry geometry;
  std::vector<std::uint8_t> voxels;

  LabelVolume() = default;
  explicit LabelVolume(const GridGeometry& g, std::uint8_t fill = 0)
      : geometry(g), voxels(static_cast<std::size_t>(g.voxel_count()), fill) {}

  std::uint8_t at(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return voxels[static_cast<std::size_t>(geometry.index(x, y, z))];
  }
  void set(std::int64_t x, std::int64_t y, std::int64_t z, std::uint8_t v) {
    voxels[static_cast<std::size_t>(geometry.index(x, y, z))] = v;
  }
  std::int64_t foreground_count() const {
    std::int64_t n = 0;
    for (auto v : voxels) n += (v != 0);
    return n;
  }
  bool empty_mask() const { return foreground_count() == 0; }
};

/// Scalar field on a grid (SUV or raw activity concentration in MBq/mL).
struct IntensityVolume {
  GridGeometry geometry;
  std::vector<double> voxels;

  IntensityVolume() = default;
  explicit IntensityVolume(const GridGeometry& g, double fill = 0.0)
      : geometry(g), voxels(static_cast<std::size_t>(g.voxel_count()), fill) {}

  double at(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return voxels[static_cast<std::size_t>(geometry.index(x, y, z))];
  }
  void set(std::int64_t x, std::int64_t y, std::int64_t z, double v) {
    voxels[static_cast<std::size_t>(geometry.index(x, y, z))] = v;
  }
};

/// Decay-corrected injected activity (MBq) and body weight (g) for SUV scaling.
struct SuvParams {
  double injected_activity_mbq = 0.0;
  double body_weight_g = 0.0;

  void validate() const {
    if (!(injected_activity_mbq > 0.0) || !(body_weight_g > 0.0))
      fail(ErrKind::NonPositiveParams, "SUV parameters must be strictly positive");
  }
};

/// Inclusive per-axis index ranges.
struct BoxRegion {
  std::array<std::int64_t, 3> lo{0, 0, 0};
  std::array<std::int64_t, 3> hi{0, 0, 0};

  void validate_within(const GridGeometry& g) const {
    for (int a = 0; a < 3; ++a) {
      if (lo[a] < 0 || lo[a] > hi[a] || hi[a] >= g.dims[a])
        fail(ErrKind::RegionOutOfBounds, "box region exceeds grid bounds");
    }
  }
  bool contains(std::int64_t x, std::int64_t y, std::int64_t z) const {
    return x >= lo[0] && x <= hi[0] && y >= lo[1] && y <= hi[1] && z >= lo[2] && z <= hi[2];
  }
};

}  // namespace lesioneval
