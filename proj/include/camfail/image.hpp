// Copyright 2026 The camfail Authors. All Rights Reserved.
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
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "camfail/error.hpp"

namespace camfail {

// Clamps a real value into the 8-bit range after rounding half away from
// zero. Every arithmetic path in the library goes through here.
inline std::uint8_t saturate(double v) {
  if (!(v > 0.0)) return 0;  // also catches NaN
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::lround(v));
}

inline std::uint8_t saturate(long v) {
  return static_cast<std::uint8_t>(std::clamp<long>(v, 0, 255));
}

/// 8-bit, 3-channel (R,G,B) raster stored row-major and interleaved.
///
/// The sample vector always holds exactly width*height*3 bytes. Buffers are
/// plain values; transforms never mutate their input and always return a new
/// buffer.
class ImageBuffer {
 public:
  static constexpr int kChannels = 3;

  ImageBuffer() = default;

  ImageBuffer(int width, int height, std::uint8_t fill = 0)
      : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(sample_count(width, height), fill);
  }

  ImageBuffer(int width, int height, std::vector<std::uint8_t> data)
      : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != sample_count(width, height)) {
      throw UsageError("ImageBuffer: sample count " +
                       std::to_string(data_.size()) + " does not match " +
                       std::to_string(width) + "x" + std::to_string(height) +
                       "x3");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> data() { return data_; }

  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
           kChannels;
  }

  std::uint8_t at(int x, int y, int c) const { return data_[offset(x, y) + c]; }
  std::uint8_t& at(int x, int y, int c) { return data_[offset(x, y) + c]; }

  void set_pixel(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const std::size_t o = offset(x, y);
    data_[o] = r;
    data_[o + 1] = g;
    data_[o + 2] = b;
  }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  static std::size_t sample_count(int w, int h) {
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h) *
           kChannels;
  }

  static void check_dims(int w, int h) {
    if (w <= 0 || h <= 0) {
      throw UsageError("ImageBuffer: dimensions must be positive, got " +
                       std::to_string(w) + "x" + std::to_string(h));
    }
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// 8-bit RGBA raster used for overlay assets.
struct RgbaImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // width*height*4, row-major

  RgbaImage() = default;
  RgbaImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h),
        data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 4,
             fill) {
    if (w <= 0 || h <= 0) throw UsageError("RgbaImage: dimensions must be positive");
  }

  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(x)) *
           4;
  }

  friend bool operator==(const RgbaImage&, const RgbaImage&) = default;
};

// Rec. 601 luma weights, shared by the no-Bayer transform and the flare
// luminance checks.
inline constexpr double kLumaR = 0.2989;
inline constexpr double kLumaG = 0.5870;
inline constexpr double kLumaB = 0.1140;

inline double mean_luminance(const ImageBuffer& img) {
  if (img.empty()) return 0.0;
  double sum = 0.0;
  const auto d = img.data();
  for (std::size_t i = 0; i < d.size(); i += 3) {
    sum += kLumaR * d[i] + kLumaG * d[i + 1] + kLumaB * d[i + 2];
  }
  return sum / static_cast<double>(img.pixel_count());
}

}  // namespace camfail
