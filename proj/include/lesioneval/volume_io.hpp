// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lesioneval/geometry.hpp"

namespace lesioneval {

enum class VolumeFormat { nifti1, rawjson };
enum class VoxelDtype { u8, i16, f32, f64 };

const char* to_string(VoxelDtype d);
VoxelDtype dtype_from_string(const std::string& s);

/// Parse result: geometry, voxel values in file order (scl slope/intercept
/// already applied for NIfTI), and the on-disk datatype.
struct RawVolume {
  GridGeometry geometry;
  std::vector<double> voxels;
  VoxelDtype dtype = VoxelDtype::u8;
};

RawVolume read_volume(const std::vector<std::uint8_t>& bytes, VolumeFormat format);
std::vector<std::uint8_t> write_volume(const GridGeometry& geometry,
                                       const std::vector<double>& voxels,
                                       VolumeFormat format, VoxelDtype dtype);

/// Format sniffing: NIfTI magic wins, otherwise rawjson.
RawVolume read_volume_auto(const std::vector<std::uint8_t>& bytes);

// File-level convenience (format chosen by extension: .nii -> nifti1, else rawjson).
RawVolume read_volume_file(const std::string& path);
void write_volume_file(const std::string& path, const GridGeometry& geometry,
                       const std::vector<double>& voxels, VoxelDtype dtype);

/// Binarize a parsed volume: any value > 0.5 is foreground.
LabelVolume to_label(const RawVolume& raw);
/// Interpret a parsed volume as intensities (values must be finite, which
/// read_volume already guarantees).
IntensityVolume to_intensity(const RawVolume& raw);

/// SUV = C_tissue / (A_inj / W).
IntensityVolume to_suv(const IntensityVolume& raw, const SuvParams& params);

/// Zero out all voxels inside the box. Intended for prediction masks only
/// (region-exclusion ablations); the reference mask is the caller's business.
LabelVolume exclude_region(const LabelVolume& mask, const BoxRegion& region);

}  // namespace lesioneval
