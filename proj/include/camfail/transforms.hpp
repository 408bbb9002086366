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

// Pixel-level camera failure transforms. Every function here is pure: it
// takes the input by const reference and returns a new buffer. Stochastic
// transforms take a 64-bit stream seed (see derive_seed) and nothing else.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "camfail/error.hpp"
#include "camfail/image.hpp"
#include "camfail/random.hpp"

namespace camfail::transforms {

// Mirror index about the edge sample without repeating it:
// ... 2 1 | 0 1 2 ... n-1 | n-2 n-3 ...
inline int reflect101(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    i = i < 0 ? -i : 2 * n - 2 - i;
  }
  return i;
}

// ---------------------------------------------------------------------------
// Blur

// k x k box mean with the anchor at k/2 (so even kernels extend one sample
// further to the left/top), reflect-101 borders and round-half-up division.
inline ImageBuffer box_blur(const ImageBuffer& img, int k) {
  if (k == 1) return img;
  const int w = img.width();
  const int h = img.height();
  const int anchor = k / 2;
  const int area = k * k;

  std::vector<int> horiz(static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int acc[3] = {0, 0, 0};
      for (int j = 0; j < k; ++j) {
        const int sx = reflect101(x - anchor + j, w);
        for (int c = 0; c < 3; ++c) acc[c] += img.at(sx, y, c);
      }
      const std::size_t o = img.offset(x, y);
      for (int c = 0; c < 3; ++c) horiz[o + c] = acc[c];
    }
  }

  ImageBuffer out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int acc[3] = {0, 0, 0};
      for (int j = 0; j < k; ++j) {
        const int sy = reflect101(y - anchor + j, h);
        const std::size_t o = img.offset(x, sy);
        for (int c = 0; c < 3; ++c) acc[c] += horiz[o + c];
      }
      for (int c = 0; c < 3; ++c) {
        out.at(x, y, c) = static_cast<std::uint8_t>((acc[c] + area / 2) / area);
      }
    }
  }
  return out;
}

inline constexpr int kMaxBlurLevel = 25;

inline ImageBuffer blur(const ImageBuffer& img, int k) {
  if (k < 1 || k > kMaxBlurLevel) {
    throw UsageError("blur: level " + std::to_string(k) +
                     " outside [1, 25]");
  }
  return box_blur(img, k);
}

// ---------------------------------------------------------------------------
// Brightness

inline ImageBuffer brightness(const ImageBuffer& img, double factor) {
  if (!(factor >= 0.0) || !std::isfinite(factor)) {
    throw UsageError("brightness: factor must be a finite value >= 0");
  }
  ImageBuffer out = img;
  for (auto& v : out.data()) v = saturate(v * factor);
  return out;
}

// ---------------------------------------------------------------------------
// Banding

struct BandingParams {
  bool horizontal = true;
  bool vertical = false;
  int period = 24;       // pixels
  double duty = 0.25;    // fraction of each period covered by a stripe
  double opacity = 0.5;  // blend weight of the black stripe

  int stripe_width() const {
    return std::max(1, static_cast<int>(std::lround(period * duty)));
  }

  friend bool operator==(const BandingParams&, const BandingParams&) = default;
};

inline BandingParams banding_preset(int index) {
  switch (index) {
    case 1:
      return BandingParams{true, false, 24, 0.25, 0.5};
    case 2:
      return BandingParams{true, true, 16, 0.20, 0.4};
    default:
      throw UsageError("banding: preset index must be 1 or 2, got " +
                       std::to_string(index));
  }
}

inline bool banding_stripe(const BandingParams& p, int x, int y) {
  const int sw = p.stripe_width();
  return (p.horizontal && y % p.period < sw) ||
         (p.vertical && x % p.period < sw);
}

inline ImageBuffer banding(const ImageBuffer& img, const BandingParams& p) {
  if (p.period <= 0 || !(p.duty >= 0.0 && p.duty <= 1.0) ||
      !(p.opacity >= 0.0 && p.opacity <= 1.0)) {
    throw UsageError("banding: invalid stripe parameters");
  }
  ImageBuffer out = img;
  const double keep = 1.0 - p.opacity;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!banding_stripe(p, x, y)) continue;
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = saturate(img.at(x, y, c) * keep);
    }
  }
  return out;
}

inline ImageBuffer banding(const ImageBuffer& img, int preset_index) {
  return banding(img, banding_preset(preset_index));
}

// ---------------------------------------------------------------------------
// Dead pixels

enum class DeadPixelMode { N1, N50, N200, N500, VerticalLine, ThreeLines };

inline int dead_pixel_count(DeadPixelMode mode) {
  switch (mode) {
    case DeadPixelMode::N1: return 1;
    case DeadPixelMode::N50: return 50;
    case DeadPixelMode::N200: return 200;
    case DeadPixelMode::N500: return 500;
    default: return 0;
  }
}

struct PixelCoord {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const PixelCoord&, const PixelCoord&) = default;
};

/// Coordinates blackened by a dead-pixel mode, sorted row-major and unique.
///
/// Scattered modes sample min(n, w*h) distinct positions uniformly without
/// replacement (Floyd's algorithm) from the seeded stream. N1 is the bottom
/// right pixel; line modes use the integer centre column and third rows.
inline std::vector<PixelCoord> dead_pixel_coords(int width, int height,
                                                 DeadPixelMode mode,
                                                 std::uint64_t seed) {
  if (width < 3 || height < 3) {
    throw UsageError("dead_pixels: image must be at least 3x3");
  }
  std::vector<PixelCoord> coords;
  switch (mode) {
    case DeadPixelMode::N1:
      coords.push_back({width - 1, height - 1});
      break;
    case DeadPixelMode::N50:
    case DeadPixelMode::N200:
    case DeadPixelMode::N500: {
      const std::uint64_t total = static_cast<std::uint64_t>(width) * height;
      const std::uint64_t n =
          std::min<std::uint64_t>(dead_pixel_count(mode), total);
      Rng rng(seed);
      std::unordered_set<std::uint64_t> chosen;
      chosen.reserve(n * 2);
      for (std::uint64_t j = total - n; j < total; ++j) {
        const std::uint64_t t = rng.below(j + 1);
        if (!chosen.insert(t).second) chosen.insert(j);
      }
      coords.reserve(n);
      for (std::uint64_t idx : chosen) {
        coords.push_back({static_cast<int>(idx % width),
                          static_cast<int>(idx / width)});
      }
      break;
    }
    case DeadPixelMode::VerticalLine:
      for (int y = 0; y < height; ++y) coords.push_back({width / 2, y});
      break;
    case DeadPixelMode::ThreeLines: {
      const int r1 = height / 3;
      const int r2 = (2 * height) / 3;
      for (int x = 0; x < width; ++x) {
        coords.push_back({x, r1});
        coords.push_back({x, r2});
      }
      for (int y = 0; y < height; ++y) {
        if (y != r1 && y != r2) coords.push_back({width / 2, y});
      }
      break;
    }
  }
  std::sort(coords.begin(), coords.end(), [](const PixelCoord& a, const PixelCoord& b) {
    return std::pair(a.y, a.x) < std::pair(b.y, b.x);
  });
  return coords;
}

inline ImageBuffer dead_pixels(const ImageBuffer& img, DeadPixelMode mode,
                               std::uint64_t seed) {
  ImageBuffer out = img;
  for (const auto& p : dead_pixel_coords(img.width(), img.height(), mode, seed)) {
    out.set_pixel(p.x, p.y, 0, 0, 0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lens flare

struct FlareCircle {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
  double color[3] = {0.0, 0.0, 0.0};
  double alpha = 0.0;
};

/// Complete description of one rendered flare. Exposed so callers (and tests)
/// can inspect where the ghosts landed.
struct FlareGeometry {
  double source_x = 0.0;
  double source_y = 0.0;
  double angle = 0.0;  // radians, direction of the ghost line
  double source_radius = 0.0;
  std::vector<FlareCircle> circles;
};

inline constexpr int kFlareCircles = 8;

inline FlareGeometry make_flare_geometry(int width, int height,
                                         std::uint64_t seed) {
  Rng rng(seed);
  FlareGeometry g;
  const double diag = std::hypot(width, height);
  g.source_x = rng.uniform(0.0, width - 1.0);
  g.source_y = rng.uniform(0.0, std::max(0.0, height / 2.0 - 1.0));
  g.angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  g.source_radius = std::max(2.0, rng.uniform(0.06, 0.12) * diag);

  // Clip the line source + t*(cos, sin) to the image rectangle so ghost
  // centres stay inside the frame.
  const double dx = std::cos(g.angle);
  const double dy = std::sin(g.angle);
  double t_lo = -1e300;
  double t_hi = 1e300;
  auto clip = [&](double origin, double dir, double lo, double hi) {
    if (std::abs(dir) < 1e-12) return;
    double a = (lo - origin) / dir;
    double b = (hi - origin) / dir;
    if (a > b) std::swap(a, b);
    t_lo = std::max(t_lo, a);
    t_hi = std::min(t_hi, b);
  };
  clip(g.source_x, dx, 0.0, width - 1.0);
  clip(g.source_y, dy, 0.0, height - 1.0);

  g.circles.reserve(kFlareCircles);
  for (int i = 0; i < kFlareCircles; ++i) {
    FlareCircle c;
    const double t = rng.uniform(t_lo, t_hi);
    c.cx = g.source_x + t * dx;
    c.cy = g.source_y + t * dy;
    c.radius = std::max(1.5, rng.uniform(0.015, 0.06) * diag);
    for (double& ch : c.color) ch = rng.uniform(160.0, 255.0);
    c.alpha = rng.uniform(0.05, 0.25);
    g.circles.push_back(c);
  }
  return g;
}

// Additive rendering: a warm glow with quadratic falloff at the source plus
// translucent ghost discs. Samples can only increase.
inline ImageBuffer render_flare(const ImageBuffer& img, const FlareGeometry& g) {
  const int w = img.width();
  const int h = img.height();
  std::vector<double> add(static_cast<std::size_t>(w) * h * 3, 0.0);
  static constexpr double kGlow[3] = {255.0, 245.0, 220.0};

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t o = img.offset(x, y);
      const double ds = std::hypot(x - g.source_x, y - g.source_y);
      if (ds < g.source_radius) {
        const double f = 1.0 - ds / g.source_radius;
        for (int c = 0; c < 3; ++c) add[o + c] += kGlow[c] * f * f;
      }
      for (const auto& circle : g.circles) {
        if (std::hypot(x - circle.cx, y - circle.cy) <= circle.radius) {
          for (int c = 0; c < 3; ++c) add[o + c] += circle.alpha * circle.color[c];
        }
      }
    }
  }

  ImageBuffer out = img;
  auto d = out.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = saturate(d[i] + add[i]);
  return out;
}

inline ImageBuffer flare(const ImageBuffer& img, std::uint64_t seed) {
  return render_flare(img, make_flare_geometry(img.width(), img.height(), seed));
}

// ---------------------------------------------------------------------------
// Missing Bayer filter

enum class NoBayerMode { Luminance, ChannelScale };

inline ImageBuffer no_bayer(const ImageBuffer& img,
                            NoBayerMode mode = NoBayerMode::Luminance) {
  ImageBuffer out = img;
  auto d = out.data();
  for (std::size_t i = 0; i < d.size(); i += 3) {
    const double r = d[i], g = d[i + 1], b = d[i + 2];
    if (mode == NoBayerMode::Luminance) {
      const std::uint8_t y = saturate(kLumaR * r + kLumaG * g + kLumaB * b);
      d[i] = d[i + 1] = d[i + 2] = y;
    } else {
      d[i] = saturate(kLumaR * r);
      d[i + 1] = saturate(kLumaG * g);
      d[i + 2] = saturate(kLumaB * b);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lateral chromatic aberration

inline constexpr double kAberrationDelta1 = 0.004;
inline constexpr double kAberrationDelta2 = 0.010;
inline constexpr int kAberrationBlur = 3;

inline double aberration_delta(int level) {
  switch (level) {
    case 1: return kAberrationDelta1;
    case 2: return kAberrationDelta2;
    default:
      throw UsageError("chromatic_aberration: level must be 1 or 2, got " +
                       std::to_string(level));
  }
}

// Bilinear sample of one channel with clamp-to-edge addressing.
inline double sample_bilinear(const ImageBuffer& img, double x, double y, int c) {
  const int w = img.width();
  const int h = img.height();
  x = std::clamp(x, 0.0, w - 1.0);
  y = std::clamp(y, 0.0, h - 1.0);
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = img.at(x0, y0, c) * (1.0 - fx) + img.at(x1, y0, c) * fx;
  const double bot = img.at(x0, y1, c) * (1.0 - fx) + img.at(x1, y1, c) * fx;
  return top * (1.0 - fy) + bot * fy;
}

/// Scales red by (1 + delta) and blue by (1 - delta) about the image centre;
/// green is untouched. Output pixel p of a channel scaled by s reads the input
/// at centre + (p - centre) / s.
inline ImageBuffer chromatic_aberration_delta(const ImageBuffer& img,
                                              double delta, bool with_blur) {
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw UsageError("chromatic_aberration: delta must be in [0, 1)");
  }
  const double cx = (img.width() - 1) / 2.0;
  const double cy = (img.height() - 1) / 2.0;
  const double scale[3] = {1.0 + delta, 1.0, 1.0 - delta};

  ImageBuffer out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c : {0, 2}) {
        const double sx = cx + (x - cx) / scale[c];
        const double sy = cy + (y - cy) / scale[c];
        out.at(x, y, c) = saturate(sample_bilinear(img, sx, sy, c));
      }
    }
  }
  return with_blur ? box_blur(out, kAberrationBlur) : out;
}

inline ImageBuffer chromatic_aberration(const ImageBuffer& img, int level,
                                        bool with_blur) {
  return chromatic_aberration_delta(img, aberration_delta(level), with_blur);
}

// ---------------------------------------------------------------------------
// Missing demosaicing

/// Raw BGGR photosite rendering at twice the resolution. Source pixel (x, y)
/// becomes the cell at (2x, 2y): top-left keeps only B, top-right and
/// bottom-left only G, bottom-right only R.
inline ImageBuffer demosaic_raw(const ImageBuffer& img) {
  ImageBuffer out(img.width() * 2, img.height() * 2, 0);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const int ox = 2 * x;
      const int oy = 2 * y;
      out.at(ox, oy, 2) = img.at(x, y, 2);
      out.at(ox + 1, oy, 1) = img.at(x, y, 1);
      out.at(ox, oy + 1, 1) = img.at(x, y, 1);
      out.at(ox + 1, oy + 1, 0) = img.at(x, y, 0);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Noise

enum class NoiseModel {
  Speckle,   // out = in + in * n
  Additive,  // out = in + n, n in grey levels
};

/// One normal draw per sample, in row-major R,G,B order.
inline ImageBuffer speckle_noise(const ImageBuffer& img, double sigma,
                                 std::uint64_t seed,
                                 NoiseModel model = NoiseModel::Speckle) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw UsageError("speckle_noise: sigma must be a finite value > 0");
  }
  Rng rng(seed);
  ImageBuffer out = img;
  for (auto& v : out.data()) {
    const double n = rng.normal(0.0, sigma);
    v = model == NoiseModel::Speckle ? saturate(v + v * n) : saturate(v + n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sharpness

// 3x3 smoothing kernel (centre 5, others 1, divided by 13), reflect-101
// borders, rounded to 8 bits.
inline ImageBuffer smooth13(const ImageBuffer& img) {
  const int w = img.width();
  const int h = img.height();
  ImageBuffer out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        int acc = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int weight = (dx == 0 && dy == 0) ? 5 : 1;
            acc += weight * img.at(reflect101(x + dx, w), reflect101(y + dy, h), c);
          }
        }
        out.at(x, y, c) = saturate(acc / 13.0);
      }
    }
  }
  return out;
}

inline ImageBuffer sharpness(const ImageBuffer& img, double factor) {
  if (!std::isfinite(factor)) throw UsageError("sharpness: factor must be finite");
  const ImageBuffer smooth = smooth13(img);
  ImageBuffer out(img.width(), img.height());
  const auto in = img.data();
  const auto s = smooth.data();
  auto d = out.data();
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = saturate(s[i] + factor * (static_cast<double>(in[i]) - s[i]));
  }
  return out;
}

}  // namespace camfail::transforms
