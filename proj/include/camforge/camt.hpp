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

// CAMT v1 tensor files, little-endian:
//
//   offset  size      field
//   0       4         magic "CAMT"
//   4       4         u32 version (1)
//   8       1         u8 dtype (0 = f32, 1 = f64)
//   9       1         u8 ndim (2 or 3)
//   10      8*ndim    u64 dims, outermost first
//   ...               row-major payload

#ifndef CAMFORGE_CAMT_HPP_
#define CAMFORGE_CAMT_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "camforge/error.hpp"
#include "camforge/io.hpp"
#include "camforge/tensor.hpp"

namespace camforge::camt {

enum class Dtype : std::uint8_t { f32 = 0, f64 = 1 };

inline constexpr std::uint32_t kVersion = 1;
inline constexpr std::size_t kFixedHeader = 10;

/// Decoded file contents before shape interpretation.
struct Record {
  Dtype dtype = Dtype::f64;
  std::vector<std::uint64_t> dims;
  std::vector<double> values;
};

namespace detail {

inline void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
  return v;
}

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  camforge::detail::fail("camt", code, msg);
}

}  // namespace detail

inline std::vector<std::uint8_t> encode(std::span<const std::uint64_t> dims, std::span<const double> values,
                                        Dtype dtype = Dtype::f64) {
  if (dims.size() != 2 && dims.size() != 3) detail::fail(Errc::bad_ndim, "ndim must be 2 or 3");
  std::uint64_t count = 1;
  for (auto d : dims) count *= d;
  if (count != values.size()) detail::fail(Errc::length_mismatch, "payload length does not match dims");

  std::vector<std::uint8_t> out{'C', 'A', 'M', 'T'};
  detail::put_le(out, kVersion, 4);
  out.push_back(static_cast<std::uint8_t>(dtype));
  out.push_back(static_cast<std::uint8_t>(dims.size()));
  for (auto d : dims) detail::put_le(out, d, 8);
  out.reserve(out.size() + values.size() * (dtype == Dtype::f32 ? 4 : 8));
  for (double v : values) {
    if (dtype == Dtype::f32) {
      detail::put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)), 4);
    } else {
      detail::put_le(out, std::bit_cast<std::uint64_t>(v), 8);
    }
  }
  return out;
}

inline Record decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "CAMT", 4) != 0) {
    detail::fail(Errc::bad_magic, "missing CAMT magic");
  }
  if (bytes.size() < kFixedHeader) detail::fail(Errc::length_mismatch, "truncated header");
  const auto version = static_cast<std::uint32_t>(detail::get_le(bytes, 4, 4));
  if (version != kVersion) detail::fail(Errc::bad_version, "unsupported version " + std::to_string(version));
  const std::uint8_t dtype = bytes[8];
  if (dtype > 1) detail::fail(Errc::bad_dtype, "unknown dtype " + std::to_string(dtype));
  const std::uint8_t ndim = bytes[9];
  if (ndim != 2 && ndim != 3) detail::fail(Errc::bad_ndim, "ndim must be 2 or 3, got " + std::to_string(ndim));

  const std::size_t header = kFixedHeader + 8 * std::size_t{ndim};
  if (bytes.size() < header) detail::fail(Errc::length_mismatch, "truncated dims");
  Record rec;
  rec.dtype = static_cast<Dtype>(dtype);
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < ndim; ++i) {
    const std::uint64_t d = detail::get_le(bytes, kFixedHeader + 8 * i, 8);
    if (d == 0) detail::fail(Errc::length_mismatch, "zero-sized dimension");
    if (d > bytes.size() / count) detail::fail(Errc::length_mismatch, "payload length does not match dims");
    rec.dims.push_back(d);
    count *= d;
  }
  const std::size_t width = rec.dtype == Dtype::f32 ? 4 : 8;
  if (count > (bytes.size() - header) / width || bytes.size() - header != count * width) {
    detail::fail(Errc::length_mismatch, "payload length does not match dims");
  }
  rec.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = header + i * width;
    if (width == 4) {
      rec.values[i] = std::bit_cast<float>(static_cast<std::uint32_t>(detail::get_le(bytes, at, 4)));
    } else {
      rec.values[i] = std::bit_cast<double>(detail::get_le(bytes, at, 8));
    }
  }
  return rec;
}

/// 2-D records load as a single channel.
inline Tensor3 to_tensor(Record rec) {
  Dims3 dims = rec.dims.size() == 2 ? Dims3{1, rec.dims[0], rec.dims[1]}
                                    : Dims3{rec.dims[0], rec.dims[1], rec.dims[2]};
  return Tensor3(dims, std::move(rec.values));
}

/// Accepts 2-D records or 3-D records with one channel.
inline ScoreMap to_map(Record rec) {
  if (rec.dims.size() == 3 && rec.dims[0] != 1) {
    detail::fail(Errc::bad_ndim, "expected a single-channel map, got " + std::to_string(rec.dims[0]) + " channels");
  }
  const std::size_t off = rec.dims.size() - 2;
  return ScoreMap({rec.dims[off], rec.dims[off + 1]}, std::move(rec.values));
}

inline Tensor3 read_tensor(const std::filesystem::path& path) { return to_tensor(decode(io::read_bytes(path))); }
inline ScoreMap read_map(const std::filesystem::path& path) { return to_map(decode(io::read_bytes(path))); }

inline void write_tensor(const std::filesystem::path& path, const Tensor3& t, Dtype dtype = Dtype::f64) {
  const std::uint64_t dims[] = {t.channels(), t.height(), t.width()};
  io::write_atomic(path, std::span<const std::uint8_t>(encode(dims, t.values(), dtype)));
}

inline void write_map(const std::filesystem::path& path, const ScoreMap& m, Dtype dtype = Dtype::f64) {
  const std::uint64_t dims[] = {m.height(), m.width()};
  io::write_atomic(path, std::span<const std::uint8_t>(encode(dims, m.values(), dtype)));
}

inline void write_map(const std::filesystem::path& path, const BinaryMap& m, Dtype dtype = Dtype::f64) {
  std::vector<double> values(m.values().begin(), m.values().end());
  const std::uint64_t dims[] = {m.height(), m.width()};
  io::write_atomic(path, std::span<const std::uint8_t>(encode(dims, values, dtype)));
}

}  // namespace camforge::camt

#endif  // CAMFORGE_CAMT_HPP_
