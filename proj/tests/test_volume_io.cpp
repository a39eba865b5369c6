// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "lesioneval/rng.hpp"
#include "lesioneval/volume_io.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace lesioneval;
using testutil::close;
using testutil::err_kind;

namespace {

// hand-assembled minimal NIfTI-1 file
std::vector<std::uint8_t> minimal_nifti(std::int16_t datatype, std::int16_t bitpix,
                                        const std::vector<std::uint8_t>& payload,
                                        float slope = 0.f, float inter = 0.f) {
  std::vector<std::uint8_t> bytes(348, 0);
  auto put = [&](std::size_t off, const void* p, std::size_t n) {
    std::memcpy(bytes.data() + off, p, n);
  };
  std::int32_t hdr = 348;
  put(0, &hdr, 4);
  std::int16_t dim[8] = {3, 2, 2, 2, 1, 1, 1, 1};
  put(40, dim, 16);
  put(70, &datatype, 2);
  put(72, &bitpix, 2);
  float pixdim[8] = {1.f, 1.f, 1.f, 1.f, 0.f, 0.f, 0.f, 0.f};
  put(76, pixdim, 32);
  float vox_offset = 348.f;
  put(108, &vox_offset, 4);
  put(112, &slope, 4);
  put(116, &inter, 4);
  put(344, "n+1\0", 4);
  for (std::uint8_t b : payload) bytes.push_back(b);
  return bytes;
}

}  // namespace

TEST_CASE("nifti: minimal well-formed file") {
  auto bytes = minimal_nifti(2, 8, {0, 1, 0, 1, 0, 0, 1, 1});
  RawVolume raw = read_volume(bytes, VolumeFormat::nifti1);
  CHECK(raw.geometry == GridGeometry(2, 2, 2, 1.0, 1.0, 1.0));
  CHECK(raw.dtype == VoxelDtype::u8);
  CHECK(to_label(raw).foreground_count() == 4);
}

TEST_CASE("nifti: malformed headers rejected") {
  auto bytes = minimal_nifti(2, 8, {0, 1, 0, 1, 0, 0, 1, 1});
  SUBCASE("bad magic") {
    std::memcpy(bytes.data() + 344, "xyz\0", 4);
    CHECK(err_kind([&] { read_volume(bytes, VolumeFormat::nifti1); }) == ErrKind::MalformedHeader);
  }
  SUBCASE("bad sizeof_hdr") {
    std::int32_t bad = 349;
    std::memcpy(bytes.data(), &bad, 4);
    CHECK(err_kind([&] { read_volume(bytes, VolumeFormat::nifti1); }) == ErrKind::MalformedHeader);
  }
  SUBCASE("4D volume") {
    std::int16_t d0 = 4;
    std::memcpy(bytes.data() + 40, &d0, 2);
    CHECK(err_kind([&] { read_volume(bytes, VolumeFormat::nifti1); }) == ErrKind::MalformedHeader);
  }
  SUBCASE("empty input") {
    CHECK(err_kind([&] { read_volume({}, VolumeFormat::nifti1); }) == ErrKind::MalformedHeader);
  }
}

TEST_CASE("nifti: unsupported datatype and truncation") {
  SUBCASE("int32 datatype") {
    auto bytes = minimal_nifti(8, 32, std::vector<std::uint8_t>(32, 0));
    CHECK(err_kind([&] { read_volume(bytes, VolumeFormat::nifti1); }) ==
          ErrKind::UnsupportedDatatype);
  }
  SUBCASE("payload shorter than dims imply") {
    auto bytes = minimal_nifti(2, 8, {0, 1, 0});
    CHECK(err_kind([&] { read_volume(bytes, VolumeFormat::nifti1); }) == ErrKind::TruncatedPayload);
  }
}

TEST_CASE("nifti: scl_slope and scl_inter") {
  // raw float voxel 3.0 with slope 2, inter 1 -> stored 7.0
  std::vector<std::uint8_t> payload(32);
  float vals[8] = {3.f, 0.f, 0.f, 0.f, 0.f, 0.f, 0.f, 0.f};
  std::memcpy(payload.data(), vals, 32);
  auto bytes = minimal_nifti(16, 32, payload, 2.f, 1.f);
  RawVolume raw = read_volume(bytes, VolumeFormat::nifti1);
  CHECK(raw.voxels[0] == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(raw.voxels[1] == doctest::Approx(1.0).epsilon(1e-12));  // 0*2+1
}

TEST_CASE("nifti: extension bytes are skipped via vox_offset") {
  auto bytes = minimal_nifti(2, 8, {});
  // extension flag block (first byte non-zero) plus one 16-byte extension
  bytes.insert(bytes.end(), {1, 0, 0, 0});
  std::int32_t esize = 16, ecode = 0;
  for (int i = 0; i < 4; ++i) bytes.push_back(reinterpret_cast<const std::uint8_t*>(&esize)[i]);
  for (int i = 0; i < 4; ++i) bytes.push_back(reinterpret_cast<const std::uint8_t*>(&ecode)[i]);
  bytes.insert(bytes.end(), 8, 0xAB);  // extension payload, must be ignored
  float vox_offset = 368.f;            // 348 + 4 + 16
  std::memcpy(bytes.data() + 108, &vox_offset, 4);
  bytes.insert(bytes.end(), {0, 1, 0, 1, 0, 0, 1, 1});
  RawVolume raw = read_volume(bytes, VolumeFormat::nifti1);
  CHECK(to_label(raw).foreground_count() == 4);
}

TEST_CASE("nifti: non-finite float voxels rejected") {
  std::vector<std::uint8_t> payload(32);
  float vals[8] = {1.f, std::numeric_limits<float>::quiet_NaN(), 0.f, 0.f, 0.f, 0.f, 0.f, 0.f};
  std::memcpy(payload.data(), vals, 32);
  auto bytes = minimal_nifti(16, 32, payload);
  CHECK(err_kind([&] { read_volume(bytes, VolumeFormat::nifti1); }) == ErrKind::NonFiniteVoxel);
}

TEST_CASE("write_volume: round trips") {
  SUBCASE("1x1x1 single foreground voxel") {
    GridGeometry g(1, 1, 1, 2.0, 2.0, 2.0);
    for (auto fmt : {VolumeFormat::nifti1, VolumeFormat::rawjson}) {
      auto bytes = write_volume(g, {1.0}, fmt, VoxelDtype::u8);
      RawVolume raw = read_volume(bytes, fmt);
      CHECK(raw.geometry == g);
      CHECK(to_label(raw).foreground_count() == 1);
    }
  }
  SUBCASE("64^3 random binary volume, double round trip byte-identical") {
    GridGeometry g(64, 64, 64, 1.5, 1.5, 2.0);
    SplitMix64 rng(7);
    std::vector<double> voxels(static_cast<std::size_t>(g.voxel_count()));
    for (auto& v : voxels) v = rng.uniform() < 0.3 ? 1.0 : 0.0;
    for (auto fmt : {VolumeFormat::nifti1, VolumeFormat::rawjson}) {
      auto bytes1 = write_volume(g, voxels, fmt, VoxelDtype::u8);
      RawVolume raw = read_volume(bytes1, fmt);
      auto bytes2 = write_volume(raw.geometry, raw.voxels, fmt, raw.dtype);
      CHECK(bytes1 == bytes2);
    }
  }
  SUBCASE("dimension mismatch") {
    GridGeometry g(2, 2, 2);
    CHECK(err_kind([&] { write_volume(g, {1.0, 0.0}, VolumeFormat::rawjson, VoxelDtype::u8); }) ==
          ErrKind::DimensionMismatch);
  }
}

TEST_CASE("round-trip property over random geometries") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    GridGeometry g(1 + static_cast<std::int64_t>(rng.bounded(32)),
                   1 + static_cast<std::int64_t>(rng.bounded(32)),
                   1 + static_cast<std::int64_t>(rng.bounded(32)),
                   0.5 + rng.uniform(), 0.5 + rng.uniform(), 0.5 + rng.uniform());
    std::vector<double> voxels(static_cast<std::size_t>(g.voxel_count()));
    VoxelDtype dtype = trial % 2 ? VoxelDtype::i16 : VoxelDtype::f32;
    for (auto& v : voxels) {
      if (dtype == VoxelDtype::i16)
        v = static_cast<double>(static_cast<std::int64_t>(rng.bounded(2001)) - 1000);
      else
        v = static_cast<double>(static_cast<float>(rng.uniform(-5.0, 5.0)));
    }
    VolumeFormat fmt = trial % 3 ? VolumeFormat::rawjson : VolumeFormat::nifti1;
    RawVolume raw = read_volume(write_volume(g, voxels, fmt, dtype), fmt);
    bool spacing_ok = true;
    for (int a = 0; a < 3; ++a) {
      // nifti stores spacing as float32
      double expect = fmt == VolumeFormat::nifti1
                          ? static_cast<double>(static_cast<float>(g.spacing[a]))
                          : g.spacing[a];
      spacing_ok = spacing_ok && raw.geometry.spacing[a] == expect;
    }
    CHECK(spacing_ok);
    CHECK(raw.geometry.dims == g.dims);
    CHECK(raw.voxels == voxels);
  }
}

TEST_CASE("to_suv") {
  GridGeometry g(2, 2, 1);
  SUBCASE("identity point: c = A/W everywhere -> 1.0") {
    SuvParams params{350.0, 70000.0};
    IntensityVolume raw(g, 350.0 / 70000.0);
    IntensityVolume suv = to_suv(raw, params);
    for (double v : suv.voxels) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("zero concentration -> zero SUV") {
    IntensityVolume raw(g, 0.0);
    IntensityVolume suv = to_suv(raw, {300.0, 70000.0});
    for (double v : suv.voxels) CHECK(v == 0.0);
  }
  SUBCASE("worked example: 0.01/(300/70000) = 7/3") {
    IntensityVolume raw(g, 0.01);
    IntensityVolume suv = to_suv(raw, {300.0, 70000.0});
    CHECK(close(suv.voxels[0], 7.0 / 3.0));
  }
  SUBCASE("non-positive parameters rejected") {
    IntensityVolume raw(g, 1.0);
    CHECK(err_kind([&] { to_suv(raw, {0.0, 70000.0}); }) == ErrKind::NonPositiveParams);
    CHECK(err_kind([&] { to_suv(raw, {300.0, -1.0}); }) == ErrKind::NonPositiveParams);
  }
  SUBCASE("property: doubling activity halves SUV") {
    SplitMix64 rng(5);
    IntensityVolume raw(g);
    for (auto& v : raw.voxels) v = rng.uniform(0.0, 0.1);
    IntensityVolume a = to_suv(raw, {200.0, 80000.0});
    IntensityVolume b = to_suv(raw, {400.0, 80000.0});
    for (std::size_t i = 0; i < a.voxels.size(); ++i) CHECK(close(b.voxels[i], 0.5 * a.voxels[i]));
  }
}

TEST_CASE("exclude_region") {
  SUBCASE("whole grid -> empty mask") {
    GridGeometry g(3, 3, 3);
    LabelVolume mask(g, 1);
    LabelVolume out = exclude_region(mask, {{0, 0, 0}, {2, 2, 2}});
    CHECK(out.foreground_count() == 0);
  }
  SUBCASE("empty-intersection region leaves the mask unchanged") {
    GridGeometry g(4, 4, 4);
    LabelVolume mask(g);
    mask.set(0, 0, 0, 1);
    LabelVolume out = exclude_region(mask, {{2, 2, 2}, {3, 3, 3}});
    CHECK(out.voxels == mask.voxels);
  }
  SUBCASE("lacrimal-style top-of-scan removal") {
    GridGeometry g(4, 4, 100);
    LabelVolume mask(g);
    mask.set(1, 1, 98, 1);  // inside the removed band
    mask.set(2, 2, 10, 1);  // survives
    BoxRegion band{{0, 0, 50}, {3, 3, 99}};
    LabelVolume out = exclude_region(mask, band);
    CHECK(out.foreground_count() == 1);
    CHECK(out.at(2, 2, 10) == 1);
    CHECK(out.at(1, 1, 98) == 0);
  }
  SUBCASE("idempotent, never increases foreground") {
    GridGeometry g(6, 5, 4);
    LabelVolume mask = oracle::random_mask(g, 0.4, 99);
    BoxRegion region{{1, 0, 1}, {4, 3, 2}};
    LabelVolume once = exclude_region(mask, region);
    LabelVolume twice = exclude_region(once, region);
    CHECK(once.voxels == twice.voxels);
    CHECK(once.foreground_count() <= mask.foreground_count());
  }
  SUBCASE("out-of-bounds region rejected") {
    GridGeometry g(3, 3, 3);
    LabelVolume mask(g);
    CHECK(err_kind([&] { exclude_region(mask, {{0, 0, 0}, {3, 2, 2}}); }) ==
          ErrKind::RegionOutOfBounds);
  }
}

TEST_CASE("grid geometry invariants") {
  GridGeometry g(3, 4, 5, 2.0, 2.0, 3.0);
  CHECK(close(g.voxel_volume_ml(), 2.0 * 2.0 * 3.0 / 1000.0));
  CHECK(g.voxel_count() == 60);
  CHECK(err_kind([] { GridGeometry bad(0, 1, 1); }) == ErrKind::InvalidArgument);
  CHECK(err_kind([] { GridGeometry bad(1, 1, 1, 0.0, 1.0, 1.0); }) == ErrKind::InvalidArgument);
}
