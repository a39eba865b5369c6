// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference implementations used only by tests. Everything here
// works on explicit voxel coordinate sets and exhaustive enumeration, staying
// independent of the library's union-find / distance-transform / DP code
// paths it is checking.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lesioneval/geometry.hpp"
#include "lesioneval/stats.hpp"

namespace oracle {

using lesioneval::LabelVolume;

/// Connected components by BFS flood fill with explicit neighbor offsets.
/// Components are ordered by their smallest linear voxel index; each
/// component's voxel list is sorted.
std::vector<std::vector<std::int64_t>> flood_components(const LabelVolume& mask, int connectivity);

double dsc(const LabelVolume& g, const LabelVolume& p);
double dsc_all(const LabelVolume& g, const LabelVolume& p, double both_empty_value = 1.0);
double volumetric_similarity(const LabelVolume& g, const LabelVolume& p);
double volume_difference(const LabelVolume& g, const LabelVolume& p);
double volume_ratio(const LabelVolume& g, const LabelVolume& p, double epsilon_ml);

/// NSD by exhaustive pairwise boundary distances.
double nsd(const LabelVolume& g, const LabelVolume& p, double tolerance, bool use_spacing_mm);

double fpv(const LabelVolume& g, const LabelVolume& p, int connectivity);
double fnv(const LabelVolume& g, const LabelVolume& p, int connectivity);

struct Match {
  bool one_voxel = true;
  double tau = 0.0;  // used when one_voxel is false
};

std::vector<bool> detected_refs(const LabelVolume& g, const LabelVolume& p, int connectivity,
                                const Match& crit);
std::vector<bool> matched_preds(const LabelVolume& g, const LabelVolume& p, int connectivity,
                                const Match& crit);

struct Taxonomy {
  std::int64_t cd = 0, fa = 0, df = 0, m = 0, s = 0, sm = 0;
};
Taxonomy taxonomy(const LabelVolume& g, const LabelVolume& p, int connectivity, const Match& crit);

struct Panoptic {
  double pq = 0.0, sq = 0.0, rq = 0.0;
  std::int64_t tp = 0, fp = 0, fn = 0;
};
Panoptic panoptic(const LabelVolume& g, const LabelVolume& p, int connectivity, double tau);

double cc_dsc(const LabelVolume& g, const LabelVolume& p, int connectivity);

double pooled_f1(const std::vector<std::pair<LabelVolume, LabelVolume>>& cases, int connectivity,
                 const Match& crit);

/// Exact Wilcoxon signed-rank p-value by full 2^n sign enumeration.
double wilcoxon_enumerated(const std::vector<double>& x, const std::vector<double>& y,
                           lesioneval::Alternative alternative);

/// Holm adjustment via the textbook O(m^2) step-down scan.
std::vector<double> holm_quadratic(const std::vector<double>& pvals);

/// Decile binning done directly from a sorted copy.
struct DecileOracle {
  std::vector<double> edges;
  std::vector<std::int64_t> total;
  std::vector<std::int64_t> detected;
};
DecileOracle deciles(const std::vector<std::pair<double, bool>>& lesions);

/// Random mask helper shared by the randomized suites.
LabelVolume random_mask(const lesioneval::GridGeometry& geometry, double fill_prob,
                        std::uint64_t seed);

}  // namespace oracle
