// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "lesioneval/geometry.hpp"

namespace lesioneval {

/// Epsilon for the regularized volume ratio (pred + eps) / (ref + eps), in mL.
struct RatioConfig {
  double epsilon_ml = 0.012;
};

/// NSD tolerance. Index units by default ("a tolerance of one voxel");
/// spacing-aware mm mode available for anisotropic grids.
struct NsdConfig {
  double tolerance = 1.0;
  bool use_spacing_mm = false;
};

/// DSC = 2|G n P| / (|G| + |P|). Lesion-positive convention: |G| must be > 0,
/// empty-reference cases are evaluated through FPV only.
double dsc(const LabelVolume& reference, const LabelVolume& prediction);

/// DSC over all samples: both masks empty scores both_empty_value (1 by
/// default), empty reference with non-empty prediction scores 0.
double dsc_all(const LabelVolume& reference, const LabelVolume& prediction,
               double both_empty_value = 1.0);

/// VS = 1 - ||G| - |P|| / (|G| + |P|).
double volumetric_similarity(const LabelVolume& reference, const LabelVolume& prediction);

/// Fraction of both masks' boundary voxels lying within the tolerance of the
/// other mask's boundary. Empty prediction scores 0.
double nsd(const LabelVolume& reference, const LabelVolume& prediction, const NsdConfig& cfg = {});

/// (|P| - |G|) * voxel volume, in mL (signed, predicted minus reference).
double volume_difference(const LabelVolume& reference, const LabelVolume& prediction);

/// (vol_P + eps) / (vol_G + eps), volumes in mL.
double volume_ratio(const LabelVolume& reference, const LabelVolume& prediction,
                    const RatioConfig& cfg = {});

}  // namespace lesioneval
