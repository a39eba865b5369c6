// SPDX-License-Identifier: Apache-2.0
#include "lesioneval/synth.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "lesioneval/rng.hpp"

namespace lesioneval {

void SynthParams::validate() const {
  grid.validate();
  if (lesion_count_min < 0 || lesion_count_max < lesion_count_min)
    fail(ErrKind::InvalidArgument, "lesion count range is degenerate");
  if (!(radius_mm_min > 0.0) || radius_mm_max < radius_mm_min)
    fail(ErrKind::InvalidArgument, "lesion radius range is degenerate");
  if (lesion_negative_prob < 0.0 || lesion_negative_prob > 1.0)
    fail(ErrKind::InvalidArgument, "lesion_negative_prob must lie in [0, 1]");
  if (lesion_uptake_max < lesion_uptake_min)
    fail(ErrKind::InvalidArgument, "lesion uptake range is degenerate");
  if (algorithms.empty()) fail(ErrKind::InvalidArgument, "need at least one algorithm");
  for (const auto& a : algorithms) {
    if (a.dilate_steps < 0 || a.erode_steps < 0)
      fail(ErrKind::InvalidArgument, "morphology steps must be >= 0");
    if (a.drop_prob < 0.0 || a.drop_prob > 1.0)
      fail(ErrKind::InvalidArgument, "drop_prob must lie in [0, 1]");
    if (a.spurious_rate < 0.0) fail(ErrKind::InvalidArgument, "spurious_rate must be >= 0");
  }
}

namespace {

struct Ellipsoid {
  std::array<double, 3> center;  // voxel index coordinates
  std::array<double, 3> radius_mm;
};

// paint and return the voxels; bounding box includes a one-voxel margin so
// separate lesions can be kept non-adjacent
void paint(const GridGeometry& g, const Ellipsoid& e, std::vector<std::int64_t>& voxels) {
  voxels.clear();
  std::array<std::int64_t, 3> lo, hi;
  for (int a = 0; a < 3; ++a) {
    double extent = e.radius_mm[a] / g.spacing[a];
    lo[a] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(e.center[a] - extent)));
    hi[a] = std::min<std::int64_t>(g.dims[a] - 1,
                                   static_cast<std::int64_t>(std::ceil(e.center[a] + extent)));
  }
  for (std::int64_t z = lo[2]; z <= hi[2]; ++z)
    for (std::int64_t y = lo[1]; y <= hi[1]; ++y)
      for (std::int64_t x = lo[0]; x <= hi[0]; ++x) {
        double dx = (static_cast<double>(x) - e.center[0]) * g.spacing[0] / e.radius_mm[0];
        double dy = (static_cast<double>(y) - e.center[1]) * g.spacing[1] / e.radius_mm[1];
        double dz = (static_cast<double>(z) - e.center[2]) * g.spacing[2] / e.radius_mm[2];
        if (dx * dx + dy * dy + dz * dz <= 1.0) voxels.push_back(g.index(x, y, z));
      }
}

LabelVolume morph(const LabelVolume& mask, int steps, bool grow) {
  LabelVolume cur = mask;
  static const int face[6][3] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0},
                                 {0, 1, 0},  {0, 0, -1}, {0, 0, 1}};
  const GridGeometry& g = mask.geometry;
  for (int step = 0; step < steps; ++step) {
    LabelVolume next = cur;
    for (std::int64_t z = 0; z < g.dims[2]; ++z)
      for (std::int64_t y = 0; y < g.dims[1]; ++y)
        for (std::int64_t x = 0; x < g.dims[0]; ++x) {
          bool self = cur.at(x, y, z) != 0;
          if (grow == self) continue;  // dilation looks at bg voxels, erosion at fg
          bool hit = false;
          for (const auto& o : face) {
            std::int64_t px = x + o[0], py = y + o[1], pz = z + o[2];
            bool neighbor_fg = g.in_bounds(px, py, pz) && cur.at(px, py, pz) != 0;
            if (grow ? neighbor_fg : !neighbor_fg) {
              hit = true;
              break;
            }
          }
          // erosion also peels voxels on the grid edge
          if (!grow && !hit)
            for (int a = 0; a < 3; ++a) {
              std::int64_t c = a == 0 ? x : (a == 1 ? y : z);
              if (c == 0 || c == g.dims[a] - 1) {
                hit = true;
                break;
              }
            }
          if (hit) next.set(x, y, z, grow ? 1 : 0);
        }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

LabelVolume dilate(const LabelVolume& mask, int steps) { return morph(mask, steps, true); }
LabelVolume erode(const LabelVolume& mask, int steps) { return morph(mask, steps, false); }

SynthCase synth_case(const SynthParams& params, std::uint64_t seed) {
  params.validate();
  const GridGeometry& g = params.grid;
  SplitMix64 rng(derive_seed(seed, 0x5e5));

  SynthCase out;
  out.reference = LabelVolume(g);
  out.intensity = IntensityVolume(g, params.background_uptake);

  int want = params.lesion_count_min;
  if (params.lesion_count_max > params.lesion_count_min)
    want += static_cast<int>(
        rng.bounded(static_cast<std::uint64_t>(params.lesion_count_max - params.lesion_count_min + 1)));
  if (params.lesion_negative_prob > 0.0 && rng.uniform() < params.lesion_negative_prob) want = 0;

  // occupancy mask dilated by one voxel keeps lesions out of contact
  LabelVolume blocked(g);
  std::vector<std::vector<std::int64_t>> lesions;
  std::vector<std::int64_t> voxels;
  const int max_attempts = 200;
  for (int placed = 0; placed < want;) {
    bool ok = false;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
      Ellipsoid e;
      for (int a = 0; a < 3; ++a) {
        e.radius_mm[a] = rng.uniform(params.radius_mm_min, params.radius_mm_max);
        double margin = e.radius_mm[a] / g.spacing[a] + 1.0;
        double lo = margin, hi = static_cast<double>(g.dims[a] - 1) - margin;
        if (hi <= lo) {
          lo = static_cast<double>(g.dims[a] - 1) / 2.0;
          hi = lo;
        }
        e.center[a] = lo == hi ? lo : rng.uniform(lo, hi);
      }
      paint(g, e, voxels);
      if (voxels.empty()) continue;
      bool collision = false;
      for (std::int64_t idx : voxels)
        if (blocked.voxels[static_cast<std::size_t>(idx)]) {
          collision = true;
          break;
        }
      if (collision) continue;

      double uptake = rng.uniform(params.lesion_uptake_min, params.lesion_uptake_max);
      for (std::int64_t idx : voxels) {
        out.reference.voxels[static_cast<std::size_t>(idx)] = 1;
        out.intensity.voxels[static_cast<std::size_t>(idx)] = uptake;
      }
      // block the lesion plus a one-voxel halo
      for (std::int64_t idx : voxels) {
        std::int64_t x = idx % g.dims[0];
        std::int64_t y = (idx / g.dims[0]) % g.dims[1];
        std::int64_t z = idx / (g.dims[0] * g.dims[1]);
        for (int dz = -1; dz <= 1; ++dz)
          for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
              std::int64_t px = x + dx, py = y + dy, pz = z + dz;
              if (g.in_bounds(px, py, pz))
                blocked.voxels[static_cast<std::size_t>(g.index(px, py, pz))] = 1;
            }
      }
      lesions.push_back(voxels);
      ++placed;
      ok = true;
      break;
    }
    if (!ok)
      fail(ErrKind::PlacementFailure,
           "could not place lesion " + std::to_string(lesions.size() + 1) + " after " +
               std::to_string(max_attempts) + " attempts");
  }

  auto fnv1a = [](const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
    return h;
  };
  for (const auto& alg : params.algorithms) {
    SplitMix64 alg_rng(derive_seed(seed, fnv1a(alg.name)));
    LabelVolume pred(g);
    for (const auto& lesion : lesions) {
      if (alg.drop_prob > 0.0 && alg_rng.uniform() < alg.drop_prob) continue;
      for (std::int64_t idx : lesion) pred.voxels[static_cast<std::size_t>(idx)] = 1;
    }
    if (alg.erode_steps > 0) pred = erode(pred, alg.erode_steps);
    if (alg.dilate_steps > 0) pred = dilate(pred, alg.dilate_steps);

    int spurious = static_cast<int>(std::floor(alg.spurious_rate));
    if (alg_rng.uniform() < alg.spurious_rate - std::floor(alg.spurious_rate)) ++spurious;
    for (int sp = 0; sp < spurious; ++sp) {
      // small random box away from the reference (and prior spurious blobs)
      for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::array<std::int64_t, 3> lo, hi;
        bool fits = true;
        for (int a = 0; a < 3; ++a) {
          std::int64_t extent = 1 + static_cast<std::int64_t>(alg_rng.bounded(2));
          if (g.dims[a] < extent + 2) {
            fits = false;
            break;
          }
          lo[a] = 1 + static_cast<std::int64_t>(
                          alg_rng.bounded(static_cast<std::uint64_t>(g.dims[a] - extent - 1)));
          hi[a] = lo[a] + extent - 1;
        }
        if (!fits) break;
        bool collision = false;
        for (std::int64_t z = lo[2] - 1; z <= hi[2] + 1 && !collision; ++z)
          for (std::int64_t y = lo[1] - 1; y <= hi[1] + 1 && !collision; ++y)
            for (std::int64_t x = lo[0] - 1; x <= hi[0] + 1 && !collision; ++x)
              if (g.in_bounds(x, y, z) &&
                  (out.reference.at(x, y, z) || pred.at(x, y, z)))
                collision = true;
        if (collision) continue;
        for (std::int64_t z = lo[2]; z <= hi[2]; ++z)
          for (std::int64_t y = lo[1]; y <= hi[1]; ++y)
            for (std::int64_t x = lo[0]; x <= hi[0]; ++x) pred.set(x, y, z, 1);
        break;
      }
    }
    out.predictions.push_back(std::move(pred));
  }
  return out;
}

SynthParams synth_params_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrKind::SchemaViolation, std::string("synth params: ") + e.what());
  }
  SynthParams p;
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    auto dims = g.value("dims", std::vector<std::int64_t>{32, 32, 32});
    auto spacing = g.value("spacing_mm", std::vector<double>{2.0, 2.0, 2.0});
    if (dims.size() != 3 || spacing.size() != 3)
      fail(ErrKind::SchemaViolation, "grid dims/spacing_mm must have 3 entries");
    p.grid = GridGeometry(dims[0], dims[1], dims[2], spacing[0], spacing[1], spacing[2]);
  }
  p.lesion_count_min = j.value("lesion_count_min", p.lesion_count_min);
  p.lesion_count_max = j.value("lesion_count_max", p.lesion_count_max);
  p.radius_mm_min = j.value("radius_mm_min", p.radius_mm_min);
  p.radius_mm_max = j.value("radius_mm_max", p.radius_mm_max);
  p.lesion_negative_prob = j.value("lesion_negative_prob", p.lesion_negative_prob);
  p.background_uptake = j.value("background_uptake", p.background_uptake);
  p.lesion_uptake_min = j.value("lesion_uptake_min", p.lesion_uptake_min);
  p.lesion_uptake_max = j.value("lesion_uptake_max", p.lesion_uptake_max);
  if (j.contains("algorithms")) {
    p.algorithms.clear();
    for (const auto& a : j["algorithms"]) {
      DegradationParams d;
      d.name = a.value("name", std::string("alg"));
      d.dilate_steps = a.value("dilate_steps", 0);
      d.erode_steps = a.value("erode_steps", 0);
      d.drop_prob = a.value("drop_prob", 0.0);
      d.spurious_rate = a.value("spurious_rate", 0.0);
      p.algorithms.push_back(d);
    }
  }
  p.validate();
  return p;
}

}  // namespace lesioneval
