// SPDX-License-Identifier: Apache-2.0
#include "lesioneval/volume_io.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace lesioneval {

namespace {

// NIfTI-1 header field offsets (348-byte header, little-endian subset).
constexpr std::size_t kHeaderSize = 348;
constexpr std::size_t kOffSizeofHdr = 0;
constexpr std::size_t kOffDim = 40;       // short dim[8]
constexpr std::size_t kOffDatatype = 70;  // short
constexpr std::size_t kOffBitpix = 72;    // short
constexpr std::size_t kOffPixdim = 76;    // float pixdim[8]
constexpr std::size_t kOffVoxOffset = 108;
constexpr std::size_t kOffSclSlope = 112;
constexpr std::size_t kOffSclInter = 116;
constexpr std::size_t kOffMagic = 344;

constexpr std::int16_t kDtUint8 = 2;
constexpr std::int16_t kDtInt16 = 4;
constexpr std::int16_t kDtFloat32 = 16;
constexpr std::int16_t kDtFloat64 = 64;

template <typename T>
T read_le(const std::uint8_t* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;  // x86/arm little-endian hosts
}

template <typename T>
void write_le(std::vector<std::uint8_t>& out, std::size_t off, T v) {
  std::memcpy(out.data() + off, &v, sizeof(T));
}

std::int16_t nifti_code(VoxelDtype d) {
  switch (d) {
    case VoxelDtype::u8: return kDtUint8;
    case VoxelDtype::i16: return kDtInt16;
    case VoxelDtype::f32: return kDtFloat32;
    case VoxelDtype::f64: return kDtFloat64;
  }
  return 0;
}

int dtype_bytes(VoxelDtype d) {
  switch (d) {
    case VoxelDtype::u8: return 1;
    case VoxelDtype::i16: return 2;
    case VoxelDtype::f32: return 4;
    case VoxelDtype::f64: return 8;
  }
  return 0;
}

std::vector<double> decode_payload(const std::uint8_t* p, std::int64_t n, VoxelDtype dtype,
                                   double slope, double inter, bool apply_scale) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    double v = 0.0;
    switch (dtype) {
      case VoxelDtype::u8: v = p[i]; break;
      case VoxelDtype::i16: v = read_le<std::int16_t>(p + 2 * i); break;
      case VoxelDtype::f32: v = read_le<float>(p + 4 * i); break;
      case VoxelDtype::f64: v = read_le<double>(p + 8 * i); break;
    }
    if (apply_scale) v = v * slope + inter;
    if ((dtype == VoxelDtype::f32 || dtype == VoxelDtype::f64) && !std::isfinite(v))
      fail(ErrKind::NonFiniteVoxel, "float volume contains a non-finite voxel");
    out[static_cast<std::size_t>(i)] = v;
  }
  return out;
}

void encode_payload(std::vector<std::uint8_t>& out, const std::vector<double>& voxels,
                    VoxelDtype dtype) {
  std::size_t base = out.size();
  out.resize(base + voxels.size() * static_cast<std::size_t>(dtype_bytes(dtype)));
  for (std::size_t i = 0; i < voxels.size(); ++i) {
    double v = voxels[i];
    switch (dtype) {
      case VoxelDtype::u8: {
        if (v < 0.0 || v > 255.0 || v != std::floor(v))
          fail(ErrKind::UnsupportedDatatype, "value not representable as uint8");
        out[base + i] = static_cast<std::uint8_t>(v);
        break;
      }
      case VoxelDtype::i16: {
        if (v < -32768.0 || v > 32767.0 || v != std::floor(v))
          fail(ErrKind::UnsupportedDatatype, "value not representable as int16");
        auto s = static_cast<std::int16_t>(v);
        std::memcpy(out.data() + base + 2 * i, &s, 2);
        break;
      }
      case VoxelDtype::f32: {
        auto f = static_cast<float>(v);
        std::memcpy(out.data() + base + 4 * i, &f, 4);
        break;
      }
      case VoxelDtype::f64: {
        std::memcpy(out.data() + base + 8 * i, &v, 8);
        break;
      }
    }
  }
}

RawVolume read_nifti(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kHeaderSize) fail(ErrKind::MalformedHeader, "file shorter than NIfTI-1 header");
  const std::uint8_t* p = bytes.data();

  auto sizeof_hdr = read_le<std::int32_t>(p + kOffSizeofHdr);
  if (sizeof_hdr != 348) fail(ErrKind::MalformedHeader, "sizeof_hdr != 348 (big-endian or not NIfTI-1)");
  if (std::memcmp(p + kOffMagic, "n+1\0", 4) != 0)
    fail(ErrKind::MalformedHeader, "magic is not 'n+1'");

  std::int16_t dim[8];
  for (int i = 0; i < 8; ++i) dim[i] = read_le<std::int16_t>(p + kOffDim + 2 * i);
  if (dim[0] != 3) fail(ErrKind::MalformedHeader, "only 3-dimensional volumes are supported");
  if (dim[1] < 1 || dim[2] < 1 || dim[3] < 1) fail(ErrKind::MalformedHeader, "non-positive dim");

  float pixdim[8];
  for (int i = 0; i < 8; ++i) pixdim[i] = read_le<float>(p + kOffPixdim + 4 * i);
  if (!(pixdim[1] > 0.f) || !(pixdim[2] > 0.f) || !(pixdim[3] > 0.f))
    fail(ErrKind::MalformedHeader, "non-positive pixdim");

  auto datatype = read_le<std::int16_t>(p + kOffDatatype);
  VoxelDtype dtype;
  switch (datatype) {
    case kDtUint8: dtype = VoxelDtype::u8; break;
    case kDtInt16: dtype = VoxelDtype::i16; break;
    case kDtFloat32: dtype = VoxelDtype::f32; break;
    default: fail(ErrKind::UnsupportedDatatype, "datatype " + std::to_string(datatype));
  }
  auto bitpix = read_le<std::int16_t>(p + kOffBitpix);
  if (bitpix != 8 * dtype_bytes(dtype)) fail(ErrKind::MalformedHeader, "bitpix inconsistent with datatype");

  float vox_offset_f = read_le<float>(p + kOffVoxOffset);
  auto vox_offset = static_cast<std::int64_t>(vox_offset_f);
  if (vox_offset == 0) vox_offset = static_cast<std::int64_t>(kHeaderSize);
  if (vox_offset < static_cast<std::int64_t>(kHeaderSize) ||
      static_cast<double>(vox_offset) != static_cast<double>(vox_offset_f))
    fail(ErrKind::MalformedHeader, "bad vox_offset");

  float slope = read_le<float>(p + kOffSclSlope);
  float inter = read_le<float>(p + kOffSclInter);
  bool apply_scale = slope != 0.f && std::isfinite(slope) && std::isfinite(inter);

  RawVolume out;
  out.geometry = GridGeometry(dim[1], dim[2], dim[3], pixdim[1], pixdim[2], pixdim[3]);
  out.dtype = dtype;

  std::int64_t n = out.geometry.voxel_count();
  std::int64_t need = vox_offset + n * dtype_bytes(dtype);
  if (static_cast<std::int64_t>(bytes.size()) < need)
    fail(ErrKind::TruncatedPayload, "payload shorter than dims imply");
  out.voxels = decode_payload(p + vox_offset, n, dtype, slope, inter, apply_scale);
  return out;
}

std::vector<std::uint8_t> write_nifti(const GridGeometry& g, const std::vector<double>& voxels,
                                      VoxelDtype dtype) {
  if (dtype == VoxelDtype::f64)
    fail(ErrKind::UnsupportedDatatype, "float64 is not part of the NIfTI-1 subset written here");
  // 348-byte header + 4 extension flag bytes (all zero: no extensions).
  std::vector<std::uint8_t> out(kHeaderSize + 4, 0);
  write_le<std::int32_t>(out, kOffSizeofHdr, 348);
  std::int16_t dim[8] = {3, static_cast<std::int16_t>(g.dims[0]), static_cast<std::int16_t>(g.dims[1]),
                         static_cast<std::int16_t>(g.dims[2]), 1, 1, 1, 1};
  for (int i = 0; i < 8; ++i) write_le<std::int16_t>(out, kOffDim + 2 * i, dim[i]);
  write_le<std::int16_t>(out, kOffDatatype, nifti_code(dtype));
  write_le<std::int16_t>(out, kOffBitpix, static_cast<std::int16_t>(8 * dtype_bytes(dtype)));
  float pixdim[8] = {1.f, static_cast<float>(g.spacing[0]), static_cast<float>(g.spacing[1]),
                     static_cast<float>(g.spacing[2]), 0.f, 0.f, 0.f, 0.f};
  for (int i = 0; i < 8; ++i) write_le<float>(out, kOffPixdim + 4 * i, pixdim[i]);
  write_le<float>(out, kOffVoxOffset, 352.f);
  write_le<float>(out, kOffSclSlope, 0.f);  // values stored verbatim
  write_le<float>(out, kOffSclInter, 0.f);
  out[kOffMagic + 0] = 'n';
  out[kOffMagic + 1] = '+';
  out[kOffMagic + 2] = '1';
  out[kOffMagic + 3] = '\0';
  encode_payload(out, voxels, dtype);
  return out;
}

RawVolume read_rawjson(const std::vector<std::uint8_t>& bytes) {
  // JSON header terminated by "\n\0", then raw little-endian payload.
  const std::uint8_t* p = bytes.data();
  std::size_t header_end = 0;
  for (std::size_t i = 0; i + 1 < bytes.size(); ++i) {
    if (p[i] == '\n' && p[i + 1] == '\0') {
      header_end = i;
      break;
    }
  }
  if (header_end == 0) fail(ErrKind::MalformedHeader, "rawjson: missing header terminator");

  nlohmann::json hdr;
  try {
    hdr = nlohmann::json::parse(p, p + header_end);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrKind::MalformedHeader, std::string("rawjson: ") + e.what());
  }
  if (!hdr.contains("dims") || !hdr.contains("spacing_mm") || !hdr.contains("dtype"))
    fail(ErrKind::MalformedHeader, "rawjson: header must carry dims, spacing_mm, dtype");
  auto dims = hdr["dims"];
  auto spacing = hdr["spacing_mm"];
  if (!dims.is_array() || dims.size() != 3 || !spacing.is_array() || spacing.size() != 3)
    fail(ErrKind::MalformedHeader, "rawjson: dims/spacing_mm must be 3-element arrays");

  RawVolume out;
  try {
    out.geometry = GridGeometry(dims[0].get<std::int64_t>(), dims[1].get<std::int64_t>(),
                                dims[2].get<std::int64_t>(), spacing[0].get<double>(),
                                spacing[1].get<double>(), spacing[2].get<double>());
  } catch (const EvalError&) {
    fail(ErrKind::MalformedHeader, "rawjson: invalid dims/spacing");
  }
  out.dtype = dtype_from_string(hdr["dtype"].get<std::string>());

  std::size_t payload_off = header_end + 2;
  std::int64_t n = out.geometry.voxel_count();
  std::int64_t need = static_cast<std::int64_t>(payload_off) + n * dtype_bytes(out.dtype);
  if (static_cast<std::int64_t>(bytes.size()) < need)
    fail(ErrKind::TruncatedPayload, "rawjson: payload shorter than dims imply");
  out.voxels = decode_payload(p + payload_off, n, out.dtype, 1.0, 0.0, false);
  return out;
}

std::vector<std::uint8_t> write_rawjson(const GridGeometry& g, const std::vector<double>& voxels,
                                        VoxelDtype dtype) {
  nlohmann::json hdr;
  hdr["dims"] = {g.dims[0], g.dims[1], g.dims[2]};
  hdr["spacing_mm"] = {g.spacing[0], g.spacing[1], g.spacing[2]};
  hdr["dtype"] = to_string(dtype);
  std::string text = hdr.dump();
  std::vector<std::uint8_t> out(text.begin(), text.end());
  out.push_back('\n');
  out.push_back('\0');
  encode_payload(out, voxels, dtype);
  return out;
}

}  // namespace

const char* to_string(VoxelDtype d) {
  switch (d) {
    case VoxelDtype::u8: return "uint8";
    case VoxelDtype::i16: return "int16";
    case VoxelDtype::f32: return "float32";
    case VoxelDtype::f64: return "float64";
  }
  return "?";
}

VoxelDtype dtype_from_string(const std::string& s) {
  if (s == "uint8") return VoxelDtype::u8;
  if (s == "int16") return VoxelDtype::i16;
  if (s == "float32") return VoxelDtype::f32;
  if (s == "float64") return VoxelDtype::f64;
  fail(ErrKind::UnsupportedDatatype, "dtype '" + s + "'");
}

RawVolume read_volume(const std::vector<std::uint8_t>& bytes, VolumeFormat format) {
  if (bytes.empty()) fail(ErrKind::MalformedHeader, "empty input");
  return format == VolumeFormat::nifti1 ? read_nifti(bytes) : read_rawjson(bytes);
}

std::vector<std::uint8_t> write_volume(const GridGeometry& geometry,
                                       const std::vector<double>& voxels,
                                       VolumeFormat format, VoxelDtype dtype) {
  geometry.validate();
  if (static_cast<std::int64_t>(voxels.size()) != geometry.voxel_count())
    fail(ErrKind::DimensionMismatch, "voxel count does not match geometry");
  return format == VolumeFormat::nifti1 ? write_nifti(geometry, voxels, dtype)
                                        : write_rawjson(geometry, voxels, dtype);
}

RawVolume read_volume_auto(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() >= kHeaderSize && std::memcmp(bytes.data() + kOffMagic, "n+1\0", 4) == 0)
    return read_volume(bytes, VolumeFormat::nifti1);
  return read_volume(bytes, VolumeFormat::rawjson);
}

RawVolume read_volume_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrKind::MissingFile, path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrKind::IoFailure, "read failed: " + path);
  return read_volume_auto(bytes);
}

void write_volume_file(const std::string& path, const GridGeometry& geometry,
                       const std::vector<double>& voxels, VoxelDtype dtype) {
  VolumeFormat fmt = std::filesystem::path(path).extension() == ".nii" ? VolumeFormat::nifti1
                                                                       : VolumeFormat::rawjson;
  auto bytes = write_volume(geometry, voxels, fmt, dtype);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrKind::IoFailure, "cannot open for write: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrKind::IoFailure, "write failed: " + path);
}

LabelVolume to_label(const RawVolume& raw) {
  LabelVolume out(raw.geometry);
  for (std::size_t i = 0; i < raw.voxels.size(); ++i) out.voxels[i] = raw.voxels[i] > 0.5 ? 1 : 0;
  return out;
}

IntensityVolume to_intensity(const RawVolume& raw) {
  IntensityVolume out(raw.geometry);
  out.voxels = raw.voxels;
  return out;
}

IntensityVolume to_suv(const IntensityVolume& raw, const SuvParams& params) {
  params.validate();
  double denom = params.injected_activity_mbq / params.body_weight_g;
  IntensityVolume out(raw.geometry);
  for (std::size_t i = 0; i < raw.voxels.size(); ++i) out.voxels[i] = raw.voxels[i] / denom;
  return out;
}

LabelVolume exclude_region(const LabelVolume& mask, const BoxRegion& region) {
  region.validate_within(mask.geometry);
  LabelVolume out = mask;
  for (std::int64_t z = region.lo[2]; z <= region.hi[2]; ++z)
    for (std::int64_t y = region.lo[1]; y <= region.hi[1]; ++y)
      for (std::int64_t x = region.lo[0]; x <= region.hi[0]; ++x)
        out.set(x, y, z, 0);
  return out;
}

}  // namespace lesioneval
