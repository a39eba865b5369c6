// SPDX-License-Identifier: Apache-2.0
#include "lesioneval/distance.hpp"

#include <cmath>
#include <limits>

namespace lesioneval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double sq(double v) { return v * v; }

// One 1D pass: d[i] = min_j ((i-j)*w)^2 + f[j]. Positions with f = inf carry
// no parabola. v/z are scratch arrays of size n and n+1.
void dt_1d(const double* f, double* d, int n, double w,
           std::vector<int>& v, std::vector<double>& z) {
  int k = -1;
  double w2 = w * w;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    double fq = f[q] + sq(static_cast<double>(q) * w);
    while (k >= 0) {
      double fp = f[v[k]] + sq(static_cast<double>(v[k]) * w);
      double s = (fq - fp) / (2.0 * w2 * (q - v[k]));
      if (s <= z[k]) {
        --k;
      } else {
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
        break;
      }
    }
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
    }
  }
  if (k < 0) {
    for (int i = 0; i < n; ++i) d[i] = kInf;
    return;
  }
  int j = 0;
  for (int i = 0; i < n; ++i) {
    while (z[j + 1] < static_cast<double>(i)) ++j;
    d[i] = sq(static_cast<double>(i - v[j]) * w) + f[v[j]];
  }
}

}  // namespace

std::vector<double> squared_distance_transform(const GridGeometry& geometry,
                                               const std::vector<std::uint8_t>& sources,
                                               const std::array<double, 3>& weights) {
  std::vector<double> distances;
  DistanceWorkspace ws;
  squared_distance_transform_into(geometry, sources, weights, distances, ws);
  return distances;
}

void squared_distance_transform_into(const GridGeometry& geometry,
                                     const std::vector<std::uint8_t>& sources,
                                     const std::array<double, 3>& weights,
                                     std::vector<double>& d, DistanceWorkspace& ws) {
  const std::int64_t nx = geometry.dims[0], ny = geometry.dims[1], nz = geometry.dims[2];
  d.resize(static_cast<std::size_t>(geometry.voxel_count()));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = sources[i] ? 0.0 : kInf;

  std::int64_t nmax = std::max({nx, ny, nz});
  std::vector<double>& line = ws.line;
  std::vector<double>& out = ws.out;
  std::vector<int>& v = ws.v;
  std::vector<double>& z = ws.z;
  line.resize(static_cast<std::size_t>(nmax));
  out.resize(static_cast<std::size_t>(nmax));
  v.resize(static_cast<std::size_t>(nmax));
  z.resize(static_cast<std::size_t>(nmax) + 1);

  // pass along x
  for (std::int64_t zz = 0; zz < nz; ++zz)
    for (std::int64_t yy = 0; yy < ny; ++yy) {
      std::int64_t base = geometry.index(0, yy, zz);
      dt_1d(&d[static_cast<std::size_t>(base)], out.data(), static_cast<int>(nx), weights[0], v, z);
      for (std::int64_t xx = 0; xx < nx; ++xx)
        d[static_cast<std::size_t>(base + xx)] = out[static_cast<std::size_t>(xx)];
    }

  // pass along y
  for (std::int64_t zz = 0; zz < nz; ++zz)
    for (std::int64_t xx = 0; xx < nx; ++xx) {
      for (std::int64_t yy = 0; yy < ny; ++yy)
        line[static_cast<std::size_t>(yy)] = d[static_cast<std::size_t>(geometry.index(xx, yy, zz))];
      dt_1d(line.data(), out.data(), static_cast<int>(ny), weights[1], v, z);
      for (std::int64_t yy = 0; yy < ny; ++yy)
        d[static_cast<std::size_t>(geometry.index(xx, yy, zz))] = out[static_cast<std::size_t>(yy)];
    }

  // pass along z
  for (std::int64_t yy = 0; yy < ny; ++yy)
    for (std::int64_t xx = 0; xx < nx; ++xx) {
      for (std::int64_t zz = 0; zz < nz; ++zz)
        line[static_cast<std::size_t>(zz)] = d[static_cast<std::size_t>(geometry.index(xx, yy, zz))];
      dt_1d(line.data(), out.data(), static_cast<int>(nz), weights[2], v, z);
      for (std::int64_t zz = 0; zz < nz; ++zz)
        d[static_cast<std::size_t>(geometry.index(xx, yy, zz))] = out[static_cast<std::size_t>(zz)];
    }
}

std::vector<std::uint8_t> boundary_mask(const LabelVolume& mask) {
  const GridGeometry& g = mask.geometry;
  std::vector<std::uint8_t> out(mask.voxels.size(), 0);
  static const int face[6][3] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}};
  for (std::int64_t z = 0; z < g.dims[2]; ++z)
    for (std::int64_t y = 0; y < g.dims[1]; ++y)
      for (std::int64_t x = 0; x < g.dims[0]; ++x) {
        std::int64_t idx = g.index(x, y, z);
        if (!mask.voxels[static_cast<std::size_t>(idx)]) continue;
        for (const auto& o : face) {
          std::int64_t px = x + o[0], py = y + o[1], pz = z + o[2];
          if (!g.in_bounds(px, py, pz) ||
              !mask.voxels[static_cast<std::size_t>(g.index(px, py, pz))]) {
            out[static_cast<std::size_t>(idx)] = 1;
            break;
          }
        }
      }
  return out;
}

}  // namespace lesioneval
