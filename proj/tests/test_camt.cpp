// Copyright 2026 The camforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "camforge/camt.hpp"
#include "test_util.hpp"

namespace camforge {
namespace {

using Bytes = std::vector<std::uint8_t>;

TEST(Camt, HeaderLayoutIsLittleEndian) {
  const std::uint64_t dims[] = {1, 2};
  const double values[] = {1.0, -2.0};
  const Bytes b = camt::encode(dims, values, camt::Dtype::f64);
  const Bytes expected_header = {'C', 'A', 'M', 'T', 1, 0, 0, 0, 1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0};
  ASSERT_EQ(b.size(), expected_header.size() + 16);
  EXPECT_EQ(Bytes(b.begin(), b.begin() + 26), expected_header);
  // 1.0 = 0x3FF0000000000000, low byte first.
  EXPECT_EQ(Bytes(b.begin() + 26, b.begin() + 34), (Bytes{0, 0, 0, 0, 0, 0, 0xF0, 0x3F}));
}

TEST(Camt, F32PayloadWidth) {
  const std::uint64_t dims[] = {2, 1, 3};
  const std::vector<double> values{0.5, 1, 2, 3, 4, -0.25};
  const Bytes b = camt::encode(dims, values, camt::Dtype::f32);
  EXPECT_EQ(b.size(), 10u + 24u + 6u * 4u);
  const auto rec = camt::decode(b);
  EXPECT_EQ(rec.dtype, camt::Dtype::f32);
  EXPECT_EQ(rec.values, values);  // all exactly representable in f32
}

TEST(Camt, RoundTripProperty) {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const Dims3 d{1 + rng.below(4), 1 + rng.below(9), 1 + rng.below(9)};
    const Tensor3 t = test::random_tensor(rng, d, -1e6, 1e6);
    const std::uint64_t dims[] = {d.channels, d.height, d.width};
    EXPECT_EQ(camt::to_tensor(camt::decode(camt::encode(dims, t.values()))), t);
  }
}

TEST(Camt, FileRoundTripAndTwoDimensionalMaps) {
  test::TempDir dir("camt");
  const ScoreMap m = ScoreMap::from_rows({{0, 1.5}, {2, -3}});
  camt::write_map(dir / "m.camt", m);
  EXPECT_EQ(camt::read_map(dir / "m.camt"), m);
  const Tensor3 as_tensor = camt::read_tensor(dir / "m.camt");
  EXPECT_EQ(as_tensor.dims(), (Dims3{1, 2, 2}));

  const Tensor3 stack({3, 2, 2}, 1.0);
  camt::write_tensor(dir / "s.camt", stack);
  EXPECT_EQ(camt::read_tensor(dir / "s.camt"), stack);
  EXPECT_CAMFORGE_ERROR(camt::read_map(dir / "s.camt"), Errc::bad_ndim);
  EXPECT_CAMFORGE_ERROR(camt::read_tensor(dir / "missing.camt"), Errc::io_error);
}

TEST(Camt, DistinctErrorCodes) {
  const std::uint64_t dims[] = {1, 2};
  const double values[] = {1.0, 2.0};
  const Bytes good = camt::encode(dims, values);

  Bytes bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_CAMFORGE_ERROR(camt::decode(bad_magic), Errc::bad_magic);
  EXPECT_CAMFORGE_ERROR(camt::decode(Bytes{'C', 'A'}), Errc::bad_magic);

  Bytes bad_version = good;
  bad_version[4] = 2;
  EXPECT_CAMFORGE_ERROR(camt::decode(bad_version), Errc::bad_version);

  Bytes bad_dtype = good;
  bad_dtype[8] = 7;
  EXPECT_CAMFORGE_ERROR(camt::decode(bad_dtype), Errc::bad_dtype);

  Bytes bad_ndim = good;
  bad_ndim[9] = 4;
  EXPECT_CAMFORGE_ERROR(camt::decode(bad_ndim), Errc::bad_ndim);

  Bytes truncated(good.begin(), good.end() - 1);
  EXPECT_CAMFORGE_ERROR(camt::decode(truncated), Errc::length_mismatch);
  Bytes trailing = good;
  trailing.push_back(0);
  EXPECT_CAMFORGE_ERROR(camt::decode(trailing), Errc::length_mismatch);

  // Huge declared dims must not overflow the length check.
  Bytes huge = good;
  for (int i = 10; i < 18; ++i) huge[i] = 0xFF;
  EXPECT_CAMFORGE_ERROR(camt::decode(huge), Errc::length_mismatch);
}

TEST(Camt, RejectsNonFinitePayload) {
  const std::uint64_t dims[] = {1, 1};
  const double values[] = {std::numeric_limits<double>::quiet_NaN()};
  EXPECT_CAMFORGE_ERROR(camt::to_map(camt::decode(camt::encode(dims, values))), Errc::non_finite);
}

}  // namespace
}  // namespace camforge
