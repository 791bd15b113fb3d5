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

#ifndef CAMFORGE_TENSOR_HPP_
#define CAMFORGE_TENSOR_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "camforge/error.hpp"

namespace camforge {

struct Dims2 {
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const noexcept { return height * width; }
  friend bool operator==(const Dims2&, const Dims2&) = default;
};

namespace detail {

template <typename T>
void check_values(std::span<const T> values) {
  if constexpr (std::is_floating_point_v<T>) {
    for (T v : values) {
      if (!std::isfinite(v)) fail("cam_core", Errc::non_finite, "tensor holds a non-finite value");
    }
  } else {
    for (T v : values) {
      if (v != 0 && v != 1) fail("cam_core", Errc::invalid_argument, "binary map holds a value other than 0/1");
    }
  }
}

}  // namespace detail

/// Row-major 2-D grid. Floating grids reject NaN/Inf at construction,
/// byte grids only admit 0 and 1.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(Dims2 dims, T fill = T{}) : dims_(dims), data_(dims.size(), fill) {
    check_dims();
    detail::check_values<T>(data_);
  }

  Grid(Dims2 dims, std::vector<T> data) : dims_(dims), data_(std::move(data)) {
    check_dims();
    if (data_.size() != dims_.size()) {
      detail::fail("cam_core", Errc::dim_mismatch, "grid data length does not match its dims");
    }
    detail::check_values<T>(data_);
  }

  /// Convenience for literals: Grid<double>::from_rows({{0, 1}, {2, 3}}).
  static Grid from_rows(std::initializer_list<std::initializer_list<T>> rows) {
    std::vector<T> data;
    std::size_t width = rows.size() ? rows.begin()->size() : 0;
    for (const auto& row : rows) {
      if (row.size() != width) detail::fail("cam_core", Errc::dim_mismatch, "ragged grid literal");
      data.insert(data.end(), row.begin(), row.end());
    }
    return Grid({rows.size(), width}, std::move(data));
  }

  Dims2 dims() const noexcept { return dims_; }
  std::size_t height() const noexcept { return dims_.height; }
  std::size_t width() const noexcept { return dims_.width; }
  std::size_t size() const noexcept { return data_.size(); }

  T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * dims_.width + c]; }
  const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * dims_.width + c]; }
  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  void check_dims() const {
    if (dims_.height == 0 || dims_.width == 0) {
      detail::fail("cam_core", Errc::invalid_argument, "grid dims must be >= 1");
    }
  }

  Dims2 dims_{};
  std::vector<T> data_;
};

/// One activation slice S^c.
using ScoreMap = Grid<double>;
/// 0/1 grid: confidence masks and thresholded localization maps.
using BinaryMap = Grid<std::uint8_t>;

struct Dims3 {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const noexcept { return channels * height * width; }
  Dims2 plane() const noexcept { return {height, width}; }
  friend bool operator==(const Dims3&, const Dims3&) = default;
};

/// Channel-major (channel, row, column) stack of finite doubles.
/// Used for CAM stacks (C x H x W) and images (channels x H x W).
class Tensor3 {
 public:
  Tensor3() = default;

  explicit Tensor3(Dims3 dims, double fill = 0.0) : dims_(dims), data_(dims.size(), fill) {
    check_dims();
    detail::check_values<double>(data_);
  }

  Tensor3(Dims3 dims, std::vector<double> data) : dims_(dims), data_(std::move(data)) {
    check_dims();
    if (data_.size() != dims_.size()) {
      detail::fail("cam_core", Errc::dim_mismatch, "tensor data length does not match its dims");
    }
    detail::check_values<double>(data_);
  }

  /// Single-channel tensor holding a copy of `map`.
  static Tensor3 from_map(const ScoreMap& map) {
    auto v = map.values();
    return Tensor3({1, map.height(), map.width()}, std::vector<double>(v.begin(), v.end()));
  }

  Dims3 dims() const noexcept { return dims_; }
  std::size_t channels() const noexcept { return dims_.channels; }
  std::size_t height() const noexcept { return dims_.height; }
  std::size_t width() const noexcept { return dims_.width; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t c, std::size_t r, std::size_t w) noexcept {
    return data_[(c * dims_.height + r) * dims_.width + w];
  }
  double operator()(std::size_t c, std::size_t r, std::size_t w) const noexcept {
    return data_[(c * dims_.height + r) * dims_.width + w];
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  std::span<const double> channel_view(std::size_t c) const noexcept {
    return std::span<const double>(data_).subspan(c * dims_.height * dims_.width,
                                                  dims_.height * dims_.width);
  }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  void check_dims() const {
    if (dims_.channels == 0 || dims_.height == 0 || dims_.width == 0) {
      detail::fail("cam_core", Errc::invalid_argument, "tensor dims must be >= 1");
    }
  }

  Dims3 dims_{};
  std::vector<double> data_;
};

/// Per-class logits with optional class names.
struct Logits {
  std::vector<double> values;
  std::optional<std::vector<std::string>> labels;

  std::size_t size() const noexcept { return values.size(); }
};

/// An image together with its label and the CAM stack that scores it.
struct LabelledSample {
  Tensor3 image;
  std::size_t class_index = 0;
  const Tensor3* cam = nullptr;

  void validate() const {
    if (cam == nullptr) detail::fail("cam_core", Errc::invalid_argument, "sample has no CAM");
    if (class_index >= cam->channels()) {
      detail::fail("cam_core", Errc::out_of_range, "sample class index exceeds CAM channel count");
    }
  }
};

}  // namespace camforge

#endif  // CAMFORGE_TENSOR_HPP_
