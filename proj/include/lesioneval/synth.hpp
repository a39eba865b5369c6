// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lesioneval/components.hpp"
#include "lesioneval/geometry.hpp"

namespace lesioneval {

/// How one synthetic algorithm's prediction is degraded from the reference.
struct DegradationParams {
  std::string name = "alg";
  int dilate_steps = 0;
  int erode_steps = 0;
  double drop_prob = 0.0;     // whole-lesion dropout
  double spurious_rate = 0.0; // expected spurious components per case
};

struct SynthParams {
  GridGeometry grid{32, 32, 32, 2.0, 2.0, 2.0};
  int lesion_count_min = 1;
  int lesion_count_max = 4;
  double radius_mm_min = 3.0;
  double radius_mm_max = 8.0;
  double lesion_negative_prob = 0.0;  // chance a case has no lesions at all
  double background_uptake = 1.0;
  double lesion_uptake_min = 4.0;
  double lesion_uptake_max = 12.0;
  std::vector<DegradationParams> algorithms{{"alg", 0, 0, 0.0, 0.0}};

  void validate() const;
};

struct SynthCase {
  LabelVolume reference;
  IntensityVolume intensity;
  std::vector<LabelVolume> predictions;  // one per params.algorithms entry
};

/// Ellipsoidal lesions placed without contact (so components equal lesions
/// under any connectivity), uptake = background + per-lesion level, and
/// per-algorithm degraded predictions. Pure function of (params, seed).
SynthCase synth_case(const SynthParams& params, std::uint64_t seed);

/// Morphology used by the degradations (6-neighborhood structuring element).
LabelVolume dilate(const LabelVolume& mask, int steps);
LabelVolume erode(const LabelVolume& mask, int steps);

SynthParams synth_params_from_json(const std::string& json_text);

}  // namespace lesioneval
