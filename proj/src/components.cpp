// SPDX-License-Identifier: Apache-2.0
#include "lesioneval/components.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace lesioneval {

Connectivity connectivity_from_int(int v) {
  switch (v) {
    case 6: return Connectivity::c6;
    case 18: return Connectivity::c18;
    case 26: return Connectivity::c26;
  }
  fail(ErrKind::InvalidArgument, "connectivity must be 6, 18 or 26");
}

std::vector<std::array<int, 3>> neighbor_offsets(Connectivity conn) {
  std::vector<std::array<int, 3>> out;
  int max_manhattan = conn == Connectivity::c6 ? 1 : (conn == Connectivity::c18 ? 2 : 3);
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        int m = std::abs(dx) + std::abs(dy) + std::abs(dz);
        if (m >= 1 && m <= max_manhattan) out.push_back({dx, dy, dz});
      }
  return out;
}

namespace {

struct DisjointSet {
  std::vector<std::int32_t> parent;

  std::int32_t add() {
    parent.push_back(static_cast<std::int32_t>(parent.size()));
    return parent.back();
  }
  std::int32_t find(std::int32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // keep the smaller provisional id as root so first-appearance order survives
    if (a > b) std::swap(a, b);
    parent[b] = a;
  }
};

}  // namespace

ComponentLabeling label_components(const LabelVolume& mask, Connectivity conn) {
  const GridGeometry& g = mask.geometry;
  ComponentLabeling out;
  out.geometry = g;
  out.labels.assign(mask.voxels.size(), 0);

  // prior neighbors: offsets that precede the current voxel in scan order
  std::vector<std::array<int, 3>> prior;
  for (const auto& o : neighbor_offsets(conn)) {
    if (o[2] < 0 || (o[2] == 0 && (o[1] < 0 || (o[1] == 0 && o[0] < 0)))) prior.push_back(o);
  }

  DisjointSet ds;
  std::vector<std::int32_t> provisional(mask.voxels.size(), -1);

  const std::int64_t nx = g.dims[0], ny = g.dims[1], nz = g.dims[2];
  for (std::int64_t z = 0; z < nz; ++z)
    for (std::int64_t y = 0; y < ny; ++y)
      for (std::int64_t x = 0; x < nx; ++x) {
        std::int64_t idx = g.index(x, y, z);
        if (!mask.voxels[static_cast<std::size_t>(idx)]) continue;
        std::int32_t id = -1;
        for (const auto& o : prior) {
          std::int64_t px = x + o[0], py = y + o[1], pz = z + o[2];
          if (!g.in_bounds(px, py, pz)) continue;
          std::int64_t pidx = g.index(px, py, pz);
          std::int32_t pid = provisional[static_cast<std::size_t>(pidx)];
          if (pid < 0) continue;
          if (id < 0) {
            id = ds.find(pid);
          } else {
            ds.unite(id, pid);
            id = ds.find(id);
          }
        }
        if (id < 0) id = ds.add();
        provisional[static_cast<std::size_t>(idx)] = id;
      }

  // second pass: final labels in order of first root appearance
  std::vector<std::int32_t> root_to_label(ds.parent.size(), 0);
  for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(provisional.size()); ++idx) {
    std::int32_t pid = provisional[static_cast<std::size_t>(idx)];
    if (pid < 0) continue;
    std::int32_t root = ds.find(pid);
    std::int32_t& lbl = root_to_label[static_cast<std::size_t>(root)];
    if (lbl == 0) {
      lbl = ++out.count;
      out.sizes.push_back(0);
      out.first_voxel.push_back(idx);
    }
    out.labels[static_cast<std::size_t>(idx)] = lbl;
    ++out.sizes[static_cast<std::size_t>(lbl - 1)];
  }
  return out;
}

OverlapTable overlap_table(const ComponentLabeling& ref, const ComponentLabeling& pred) {
  require_same_geometry(ref.geometry, pred.geometry);
  OverlapTable out;
  out.n_ref = ref.count;
  out.n_pred = pred.count;
  out.ref_sizes = ref.sizes;
  out.pred_sizes = pred.sizes;
  out.voxel_volume_ml = ref.geometry.voxel_volume_ml();
  for (std::size_t i = 0; i < ref.labels.size(); ++i) {
    std::int32_t a = ref.labels[i];
    std::int32_t b = pred.labels[i];
    if (a && b) ++out.entries[{a, b}];
  }
  return out;
}

ComponentStats component_stats(const ComponentLabeling& labeling, const IntensityVolume* intensity) {
  if (intensity) require_same_geometry(labeling.geometry, intensity->geometry);
  const GridGeometry& g = labeling.geometry;
  double v_ml = g.voxel_volume_ml();

  ComponentStats out;
  out.volume_ml.resize(static_cast<std::size_t>(labeling.count));
  for (std::int32_t c = 0; c < labeling.count; ++c)
    out.volume_ml[static_cast<std::size_t>(c)] =
        static_cast<double>(labeling.sizes[static_cast<std::size_t>(c)]) * v_ml;

  out.bounding_box.assign(static_cast<std::size_t>(labeling.count),
                          BoxRegion{{g.dims[0], g.dims[1], g.dims[2]}, {-1, -1, -1}});
  if (intensity)
    out.suv_max.assign(static_cast<std::size_t>(labeling.count),
                       -std::numeric_limits<double>::infinity());

  for (std::int64_t z = 0; z < g.dims[2]; ++z)
    for (std::int64_t y = 0; y < g.dims[1]; ++y)
      for (std::int64_t x = 0; x < g.dims[0]; ++x) {
        std::int32_t lbl = labeling.labels[static_cast<std::size_t>(g.index(x, y, z))];
        if (!lbl) continue;
        auto& box = out.bounding_box[static_cast<std::size_t>(lbl - 1)];
        box.lo = {std::min(box.lo[0], x), std::min(box.lo[1], y), std::min(box.lo[2], z)};
        box.hi = {std::max(box.hi[0], x), std::max(box.hi[1], y), std::max(box.hi[2], z)};
        if (intensity) {
          double& m = out.suv_max[static_cast<std::size_t>(lbl - 1)];
          m = std::max(m, intensity->at(x, y, z));
        }
      }
  return out;
}

}  // namespace lesioneval
