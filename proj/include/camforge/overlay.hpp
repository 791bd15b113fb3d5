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

#ifndef CAMFORGE_OVERLAY_HPP_
#define CAMFORGE_OVERLAY_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "camforge/cam_core.hpp"
#include "camforge/error.hpp"
#include "camforge/io.hpp"
#include "camforge/localize.hpp"
#include "camforge/tensor.hpp"

namespace camforge::overlay {

using Rgb = std::array<std::uint8_t, 3>;

/// Blue-to-red heat colormap: entry i = (i, 255 - |2i - 255|, 255 - i).
inline constexpr std::array<Rgb, 256> kColormap = [] {
  std::array<Rgb, 256> lut{};
  for (int i = 0; i < 256; ++i) {
    const int g = 255 - (2 * i - 255 < 0 ? 255 - 2 * i : 2 * i - 255);
    lut[static_cast<std::size_t>(i)] = {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(g),
                                        static_cast<std::uint8_t>(255 - i)};
  }
  return lut;
}();

inline constexpr Rgb kGroundTruthColor{0, 255, 0};
inline constexpr Rgb kPredictionColor{255, 0, 0};
inline constexpr int kBoxThickness = 2;

/// RGB raster, row-major.
struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> rgb;

  void set(std::size_t x, std::size_t y, Rgb c) {
    auto* p = &rgb[(y * width + x) * 3];
    p[0] = c[0];
    p[1] = c[1];
    p[2] = c[2];
  }
};

namespace detail {

inline std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

inline void draw_box(Raster& img, const BoundingBox& box, Rgb color) {
  if (img.width == 0 || img.height == 0) return;
  const auto w = static_cast<long>(img.width);
  const auto h = static_cast<long>(img.height);
  const long xl = std::clamp(static_cast<long>(std::floor(box.x0)), 0L, w - 1);
  const long yl = std::clamp(static_cast<long>(std::floor(box.y0)), 0L, h - 1);
  const long xr = std::clamp(static_cast<long>(std::ceil(box.x1)) - 1, 0L, w - 1);
  const long yr = std::clamp(static_cast<long>(std::ceil(box.y1)) - 1, 0L, h - 1);
  for (long y = yl; y <= yr; ++y) {
    for (long x = xl; x <= xr; ++x) {
      const bool edge = x - xl < kBoxThickness || xr - x < kBoxThickness || y - yl < kBoxThickness ||
                        yr - y < kBoxThickness;
      if (edge) img.set(static_cast<std::size_t>(x), static_cast<std::size_t>(y), color);
    }
  }
}

}  // namespace detail

/// Each pixel is 0.5 * image + 0.5 * s * colormap(s) where s is the
/// min-max normalized CAM bilinearly upsampled to the image. A one-channel
/// image is shown as gray. Ground-truth boxes are drawn first (green), then
/// predictions (red).
inline Raster render_overlay(const Tensor3& image, const ScoreMap& cam, std::span<const BoundingBox> predicted,
                             std::span<const BoundingBox> ground_truth) {
  if (image.channels() != 1 && image.channels() != 3) {
    camforge::detail::fail("cli", Errc::invalid_argument, "overlay needs a 1- or 3-channel image");
  }
  const Dims2 dims = image.dims().plane();
  const ScoreMap heat = resize_bilinear(minmax_normalize(cam), dims);
  Raster out{dims.width, dims.height, std::vector<std::uint8_t>(dims.size() * 3, 0)};
  for (std::size_t y = 0; y < dims.height; ++y) {
    for (std::size_t x = 0; x < dims.width; ++x) {
      const double s = std::clamp(heat(y, x), 0.0, 1.0);
      const Rgb& lut = kColormap[static_cast<std::size_t>(std::lround(s * 255.0))];
      Rgb px;
      for (std::size_t k = 0; k < 3; ++k) {
        const double v = std::clamp(image(image.channels() == 1 ? 0 : k, y, x), 0.0, 1.0);
        px[k] = detail::to_byte(0.5 * v * 255.0 + 0.5 * s * static_cast<double>(lut[k]));
      }
      out.set(x, y, px);
    }
  }
  for (const auto& b : ground_truth) detail::draw_box(out, b, kGroundTruthColor);
  for (const auto& b : predicted) detail::draw_box(out, b, kPredictionColor);
  return out;
}

/// Binary PPM (P6).
inline std::vector<std::uint8_t> encode_ppm(const Raster& img) {
  const std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.rgb.begin(), img.rgb.end());
  return out;
}

inline void write_ppm(const std::filesystem::path& path, const Raster& img) {
  io::write_atomic(path, std::span<const std::uint8_t>(encode_ppm(img)));
}

}  // namespace camforge::overlay

#endif  // CAMFORGE_OVERLAY_HPP_
