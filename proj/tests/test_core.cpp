// Copyright Contributors to the Splatlight Project
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "splatlight/container.hpp"
#include "splatlight/image.hpp"
#include "splatlight/math.hpp"
#include "splatlight/parallel.hpp"

using namespace splatlight;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

TEST(Math, QuaternionRotationMatchesAxisAngle) {
  Rng rng(7);
  for (int i = 0; i < 20; i++) {
    Vec3d axis = rng.unit_vector();
    double angle = rng.uniform(-3.0, 3.0);
    Mat3d ref = Mat3d::axis_angle(axis, angle);
    Quatd q{std::cos(angle / 2), axis.x * std::sin(angle / 2), axis.y * std::sin(angle / 2),
            axis.z * std::sin(angle / 2)};
    Mat3d got = q.to_matrix();
    for (int k = 0; k < 9; k++) EXPECT_NEAR(ref.m[k], got.m[k], 1e-12);
  }
}

TEST(Math, RigidInverseComposesToIdentity) {
  Rng rng(3);
  Rigidd t{Mat3d::axis_angle(rng.unit_vector(), 1.3), {0.4, -2.0, 0.7}};
  Rigidd id = t * t.inverse();
  EXPECT_NEAR(orthonormality_error(id.rotation), 0.0, 1e-12);
  EXPECT_NEAR(length(id.translation), 0.0, 1e-12);
  EXPECT_NEAR(length(id.rotation * Vec3d{1, 2, 3} - Vec3d{1, 2, 3}), 0.0, 1e-12);
}

TEST(Pfm, RoundTripIsBitExact) {
  Imagef img(7, 5, 3);
  Rng rng(11);
  for (auto& v : img.data) v = float(rng.uniform(0.0, 10.0));
  std::string path = temp_path("splatlight_test.pfm");
  write_pfm(path, img);
  Imagef back = read_pfm(path);
  ASSERT_EQ(back.width, img.width);
  ASSERT_EQ(back.height, img.height);
  ASSERT_EQ(back.channels, img.channels);
  for (size_t i = 0; i < img.data.size(); i++) {
    EXPECT_EQ(std::memcmp(&img.data[i], &back.data[i], sizeof(float)), 0);
  }
  std::remove(path.c_str());
}

TEST(Pfm, SingleChannelRoundTrip) {
  Imagef img(4, 3, 1);
  for (size_t i = 0; i < img.data.size(); i++) img.data[i] = float(i) * 0.25f;
  std::string path = temp_path("splatlight_test_gray.pfm");
  write_pfm(path, img);
  Imagef back = read_pfm(path);
  ASSERT_EQ(back.channels, 1);
  EXPECT_EQ(back.data, img.data);
  std::remove(path.c_str());
}

TEST(TensorContainer, RoundTripIsBitExact) {
  std::vector<float> values(24);
  Rng rng(5);
  for (auto& v : values) v = float(rng.normal());
  std::string path = temp_path("splatlight_test.rhtc");
  write_tensor(path, {2, 3, 4}, values);
  TensorFile t = read_tensor(path);
  ASSERT_EQ(t.dims, (std::vector<uint64_t>{2, 3, 4}));
  ASSERT_EQ(t.dtype, Dtype::F32);
  EXPECT_EQ(std::memcmp(t.as_f32(), values.data(), values.size() * sizeof(float)), 0);
  std::remove(path.c_str());
}

TEST(TensorContainer, F64AndU8Payloads) {
  std::string path = temp_path("splatlight_test2.rhtc");
  std::vector<double> d = {1.0, -2.5, 3e300};
  write_tensor(path, {3}, d);
  TensorFile t = read_tensor(path);
  ASSERT_EQ(t.dtype, Dtype::F64);
  EXPECT_EQ(std::memcmp(t.as_f64(), d.data(), d.size() * sizeof(double)), 0);

  std::vector<uint8_t> m = {0, 1, 1, 0};
  write_tensor(path, {2, 2}, m);
  t = read_tensor(path);
  ASSERT_EQ(t.dtype, Dtype::U8);
  EXPECT_EQ(std::memcmp(t.as_u8(), m.data(), m.size()), 0);
  std::remove(path.c_str());
}

TEST(TensorContainer, SizeMismatchThrows) {
  std::vector<float> values(5);
  EXPECT_THROW(write_tensor(temp_path("bad.rhtc"), {2, 3}, values), std::invalid_argument);
}

TEST(Parallel, ChunkingIsThreadCountInvariant) {
  const int64_t n = 1000;
  auto run = [&](int threads) {
    set_thread_count(threads);
    std::vector<double> out(n);
    parallel_for(n, [&](int64_t i) {
      double acc = 0;
      for (int k = 1; k <= 50; k++) acc += std::sin(double(i) / k);
      out[i] = acc;
    });
    return out;
  };
  auto a = run(1);
  auto b = run(4);
  set_thread_count(1);
  EXPECT_EQ(a, b);
}

}  // namespace
