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

// Overlay assets (scratched lens, condensation, dirt, ice, rain) and the
// compositing transform that applies them.
//
// An asset pack is a directory holding one RGBA PNG per asset plus a
// `manifest.txt`:
//
//   # camfail overlay manifest v1
//   # id family mode opacity
//   BRLE1 BrokenLens alpha 1
//   DIRTY1 Dirty blend 0.35
//
// Asset ids equal the preset names that use them, and the image for id X is
// `X.png` next to the manifest. Lines starting with '#' and blank lines are
// ignored. `mode` is `alpha` (composite using the PNG alpha channel) or
// `blend` (uniform opacity, alpha ignored).
//
// The library ships a built-in pack generated procedurally from fixed seeds,
// so no third-party imagery is needed. `AssetLibrary::write_pack` exports it
// in the format above.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "camfail/error.hpp"
#include "camfail/family.hpp"
#include "camfail/image.hpp"
#include "camfail/png_io.hpp"
#include "camfail/random.hpp"

namespace camfail {

enum class OverlayMode { AlphaComposite, Blend };

struct OverlayAsset {
  std::string id;
  Family family = Family::Dirty;
  OverlayMode mode = OverlayMode::AlphaComposite;
  double opacity = 1.0;  // used by Blend only
  RgbaImage pixels;
};

/// Bilinear resize with pixel-centre alignment; clamps at the borders.
/// Resizing to the same dimensions returns an identical copy.
inline RgbaImage resize_bilinear(const RgbaImage& src, int width, int height) {
  if (src.width == width && src.height == height) return src;
  RgbaImage out(width, height);
  const double sx = static_cast<double>(src.width) / width;
  const double sy = static_cast<double>(src.height) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, src.height - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, src.width - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, src.width - 1);
      const double wx = fx - x0;
      for (int c = 0; c < 4; ++c) {
        const double top = src.data[src.offset(x0, y0) + c] * (1.0 - wx) +
                           src.data[src.offset(x1, y0) + c] * wx;
        const double bot = src.data[src.offset(x0, y1) + c] * (1.0 - wx) +
                           src.data[src.offset(x1, y1) + c] * wx;
        out.data[out.offset(x, y) + c] = saturate(top * (1.0 - wy) + bot * wy);
      }
    }
  }
  return out;
}

/// Composites an asset over the image after resizing it to the image size.
///
/// AlphaComposite: out = round((a * asset + (255 - a) * img) / 255).
/// Blend:          out = round((1 - o) * img + o * asset).
inline ImageBuffer composite_overlay(const ImageBuffer& img,
                                     const OverlayAsset& asset) {
  if (asset.pixels.data.empty()) {
    throw UsageError("overlay asset '" + asset.id + "' has no pixels");
  }
  if (!(asset.opacity >= 0.0 && asset.opacity <= 1.0)) {
    throw UsageError("overlay asset '" + asset.id + "': opacity outside [0, 1]");
  }
  const RgbaImage layer = resize_bilinear(asset.pixels, img.width(), img.height());
  ImageBuffer out = img;
  auto d = out.data();
  const std::size_t n = img.pixel_count();
  for (std::size_t p = 0; p < n; ++p) {
    const std::uint8_t* s = &layer.data[p * 4];
    std::uint8_t* o = &d[p * 3];
    if (asset.mode == OverlayMode::AlphaComposite) {
      const unsigned a = s[3];
      for (int c = 0; c < 3; ++c) {
        o[c] = static_cast<std::uint8_t>((a * s[c] + (255 - a) * o[c] + 127) / 255);
      }
    } else {
      for (int c = 0; c < 3; ++c) {
        o[c] = saturate((1.0 - asset.opacity) * o[c] + asset.opacity * s[c]);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Procedural asset generation

namespace overlay_detail {

inline constexpr int kAssetWidth = 384;
inline constexpr int kAssetHeight = 192;

// Smooth value noise in [0, 1]: a random coarse grid upsampled bilinearly.
inline std::vector<double> value_noise(int w, int h, int cells_x, int cells_y,
                                       Rng& rng) {
  std::vector<double> grid(static_cast<std::size_t>(cells_x + 1) * (cells_y + 1));
  for (auto& g : grid) g = rng.uniform();
  std::vector<double> out(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    const double gy = static_cast<double>(y) / h * cells_y;
    const int iy = std::min(static_cast<int>(gy), cells_y - 1);
    const double ty = gy - iy;
    for (int x = 0; x < w; ++x) {
      const double gx = static_cast<double>(x) / w * cells_x;
      const int ix = std::min(static_cast<int>(gx), cells_x - 1);
      const double tx = gx - ix;
      auto at = [&](int i, int j) { return grid[j * (cells_x + 1) + i]; };
      const double top = at(ix, iy) * (1 - tx) + at(ix + 1, iy) * tx;
      const double bot = at(ix, iy + 1) * (1 - tx) + at(ix + 1, iy + 1) * tx;
      out[static_cast<std::size_t>(y) * w + x] = top * (1 - ty) + bot * ty;
    }
  }
  return out;
}

// Source-over of a constant colour with coverage `a` (0..1) onto an RGBA
// canvas whose colour is not premultiplied.
inline void paint(RgbaImage& img, int x, int y, const double rgb[3], double a) {
  if (x < 0 || y < 0 || x >= img.width || y >= img.height || a <= 0.0) return;
  a = std::min(a, 1.0);
  std::uint8_t* p = &img.data[img.offset(x, y)];
  const double da = p[3] / 255.0;
  const double oa = a + da * (1.0 - a);
  for (int c = 0; c < 3; ++c) {
    const double v = (rgb[c] * a + p[c] * da * (1.0 - a)) / oa;
    p[c] = saturate(v);
  }
  p[3] = saturate(oa * 255.0);
}

inline void draw_segment(RgbaImage& img, double x0, double y0, double x1,
                         double y1, double thickness, const double rgb[3],
                         double alpha) {
  const int minx = static_cast<int>(std::floor(std::min(x0, x1) - thickness - 1));
  const int maxx = static_cast<int>(std::ceil(std::max(x0, x1) + thickness + 1));
  const int miny = static_cast<int>(std::floor(std::min(y0, y1) - thickness - 1));
  const int maxy = static_cast<int>(std::ceil(std::max(y0, y1) + thickness + 1));
  const double dx = x1 - x0;
  const double dy = y1 - y0;
  const double len2 = dx * dx + dy * dy;
  for (int y = std::max(0, miny); y <= std::min(img.height - 1, maxy); ++y) {
    for (int x = std::max(0, minx); x <= std::min(img.width - 1, maxx); ++x) {
      double t = len2 > 0 ? ((x - x0) * dx + (y - y0) * dy) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const double dist = std::hypot(x - (x0 + t * dx), y - (y0 + t * dy));
      const double cover = std::clamp(thickness / 2.0 + 0.5 - dist, 0.0, 1.0);
      paint(img, x, y, rgb, alpha * cover);
    }
  }
}

inline void draw_disc(RgbaImage& img, double cx, double cy, double r,
                      const double rgb[3], double alpha, double rim = 0.0) {
  for (int y = std::max(0, static_cast<int>(cy - r - 1));
       y <= std::min(img.height - 1, static_cast<int>(cy + r + 1)); ++y) {
    for (int x = std::max(0, static_cast<int>(cx - r - 1));
         x <= std::min(img.width - 1, static_cast<int>(cx + r + 1)); ++x) {
      const double d = std::hypot(x - cx, y - cy);
      const double cover = std::clamp(r + 0.5 - d, 0.0, 1.0);
      if (cover <= 0.0) continue;
      // Rim darkening gives raindrops and dirt specks some body.
      const double edge = rim > 0.0 ? std::clamp(d / r, 0.0, 1.0) : 0.0;
      double shaded[3];
      for (int c = 0; c < 3; ++c) shaded[c] = rgb[c] * (1.0 - rim * edge * edge);
      paint(img, x, y, shaded, alpha * cover);
    }
  }
}

inline RgbaImage make_scratches(int index, Rng& rng) {
  RgbaImage img(kAssetWidth, kAssetHeight, 0);
  const double white[3] = {240, 242, 245};
  // Impact crack: rays from one point, each a jittered polyline.
  const double ix = rng.uniform(0.15, 0.85) * kAssetWidth;
  const double iy = rng.uniform(0.15, 0.85) * kAssetHeight;
  const int rays = 3 + index % 6;
  for (int r = 0; r < rays; ++r) {
    double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    double x = ix, y = iy;
    const int steps = 6 + static_cast<int>(rng.below(10));
    for (int s = 0; s < steps; ++s) {
      angle += rng.uniform(-0.35, 0.35);
      const double len = rng.uniform(6.0, 22.0);
      const double nx = x + len * std::cos(angle);
      const double ny = y + len * std::sin(angle);
      draw_segment(img, x, y, nx, ny, rng.uniform(0.8, 2.2), white,
                   rng.uniform(0.55, 0.95));
      x = nx;
      y = ny;
    }
  }
  // Long hairline scratches.
  const int hairlines = 2 + static_cast<int>(rng.below(4)) + index / 4;
  for (int i = 0; i < hairlines; ++i) {
    draw_segment(img, rng.uniform(0, kAssetWidth), rng.uniform(0, kAssetHeight),
                 rng.uniform(0, kAssetWidth), rng.uniform(0, kAssetHeight),
                 rng.uniform(0.6, 1.4), white, rng.uniform(0.35, 0.8));
  }
  return img;
}

inline RgbaImage make_condensation(int index, Rng& rng) {
  RgbaImage img(kAssetWidth, kAssetHeight, 0);
  const auto haze = value_noise(kAssetWidth, kAssetHeight, 6, 3, rng);
  const auto fine = value_noise(kAssetWidth, kAssetHeight, 24, 12, rng);
  const double base = 70.0 + 35.0 * index;
  for (int y = 0; y < kAssetHeight; ++y) {
    for (int x = 0; x < kAssetWidth; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * kAssetWidth + x;
      std::uint8_t* p = &img.data[img.offset(x, y)];
      p[0] = 222;
      p[1] = 228;
      p[2] = 234;
      p[3] = saturate(base + 90.0 * haze[i] + 30.0 * fine[i] - 40.0);
    }
  }
  const double drop[3] = {235, 240, 245};
  const int droplets = 40 + 30 * index;
  for (int i = 0; i < droplets; ++i) {
    draw_disc(img, rng.uniform(0, kAssetWidth), rng.uniform(0, kAssetHeight),
              rng.uniform(1.0, 3.5), drop, rng.uniform(0.3, 0.6));
  }
  return img;
}

inline RgbaImage make_dirt(int index, Rng& rng, bool opaque) {
  if (opaque) {
    // Full-frame grime layer meant for blending.
    RgbaImage img(kAssetWidth, kAssetHeight, 255);
    const auto coarse = value_noise(kAssetWidth, kAssetHeight, 8, 4, rng);
    const auto fine = value_noise(kAssetWidth, kAssetHeight, 48, 24, rng);
    const double tint = rng.uniform(-12.0, 12.0);
    for (int y = 0; y < kAssetHeight; ++y) {
      for (int x = 0; x < kAssetWidth; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * kAssetWidth + x;
        const double v = 0.6 * coarse[i] + 0.4 * fine[i];
        std::uint8_t* p = &img.data[img.offset(x, y)];
        p[0] = saturate(95.0 + tint + 90.0 * v);
        p[1] = saturate(80.0 + 80.0 * v);
        p[2] = saturate(60.0 - tint + 60.0 * v);
        p[3] = 255;
      }
    }
    const double speck[3] = {45, 35, 25};
    const int specks = 20 + 4 * (index % 9);
    for (int i = 0; i < specks; ++i) {
      draw_disc(img, rng.uniform(0, kAssetWidth), rng.uniform(0, kAssetHeight),
                rng.uniform(1.5, 7.0), speck, rng.uniform(0.6, 1.0), 0.3);
    }
    return img;
  }
  // Transparent layer of dust specks and smudges.
  RgbaImage img(kAssetWidth, kAssetHeight, 0);
  const int blobs = 12 + 3 * (index % 12);
  for (int i = 0; i < blobs; ++i) {
    const double shade = rng.uniform(25.0, 90.0);
    const double rgb[3] = {shade * 1.15, shade, shade * 0.8};
    draw_disc(img, rng.uniform(0, kAssetWidth), rng.uniform(0, kAssetHeight),
              rng.uniform(2.0, 16.0), rgb, rng.uniform(0.35, 0.85), 0.5);
  }
  return img;
}

inline RgbaImage make_ice(int index, Rng& rng) {
  RgbaImage img(kAssetWidth, kAssetHeight, 0);
  const auto frost = value_noise(kAssetWidth, kAssetHeight, 10, 5, rng);
  const auto grain = value_noise(kAssetWidth, kAssetHeight, 64, 32, rng);
  const double coverage = 0.45 + 0.12 * index;
  for (int y = 0; y < kAssetHeight; ++y) {
    for (int x = 0; x < kAssetWidth; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * kAssetWidth + x;
      const double v = std::clamp(frost[i] + coverage - 0.5, 0.0, 1.0);
      std::uint8_t* p = &img.data[img.offset(x, y)];
      p[0] = saturate(205.0 + 30.0 * grain[i]);
      p[1] = saturate(220.0 + 25.0 * grain[i]);
      p[2] = saturate(235.0 + 20.0 * grain[i]);
      p[3] = saturate(255.0 * (0.35 + 0.6 * v) * (0.8 + 0.2 * grain[i]));
    }
  }
  const double crystal[3] = {250, 252, 255};
  const int crystals = 30 + 15 * index;
  for (int i = 0; i < crystals; ++i) {
    const double cx = rng.uniform(0, kAssetWidth);
    const double cy = rng.uniform(0, kAssetHeight);
    const double len = rng.uniform(3.0, 12.0);
    for (int arm = 0; arm < 3; ++arm) {
      const double a = arm * std::numbers::pi / 3.0 + rng.uniform(-0.1, 0.1);
      draw_segment(img, cx - len * std::cos(a), cy - len * std::sin(a),
                   cx + len * std::cos(a), cy + len * std::sin(a), 0.9,
                   crystal, 0.7);
    }
  }
  return img;
}

inline RgbaImage make_rain(int index, Rng& rng) {
  RgbaImage img(kAssetWidth, kAssetHeight, 0);
  const double water[3] = {196, 206, 218};
  const int drops = 20 + 15 * index;
  for (int i = 0; i < drops; ++i) {
    const double r = rng.uniform(2.5, 6.0 + 2.0 * index);
    draw_disc(img, rng.uniform(0, kAssetWidth), rng.uniform(0, kAssetHeight), r,
              water, rng.uniform(0.45, 0.7), 0.35);
  }
  return img;
}

struct AssetSlot {
  std::string_view prefix;
  Family family;
  int count;
};

inline constexpr AssetSlot kAssetSlots[] = {
    {"BRLE", Family::BrokenLens, 16}, {"COND", Family::Condensation, 3},
    {"DIRTY", Family::Dirty, 36},     {"ICE", Family::Ice, 4},
    {"RAIN", Family::Rain, 5},
};

}  // namespace overlay_detail

/// Ids of the overlay assets the preset catalog refers to, in catalog order.
inline std::vector<std::string> builtin_asset_ids() {
  std::vector<std::string> ids;
  for (const auto& slot : overlay_detail::kAssetSlots) {
    for (int i = 1; i <= slot.count; ++i) {
      ids.push_back(std::string(slot.prefix) + std::to_string(i));
    }
  }
  return ids;
}

/// Deterministically generates the built-in asset with the given id
/// (e.g. "BRLE3", "DIRTY36").
inline OverlayAsset generate_builtin_asset(const std::string& id) {
  using namespace overlay_detail;
  for (const auto& slot : kAssetSlots) {
    if (id.rfind(slot.prefix, 0) != 0) continue;
    int index = 0;
    const auto tail = std::string_view(id).substr(slot.prefix.size());
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), index);
    if (ec != std::errc() || ptr != tail.data() + tail.size() || index < 1 ||
        index > slot.count) {
      break;
    }
    Rng rng(fnv1a64("camfail-asset/" + id));
    OverlayAsset asset;
    asset.id = id;
    asset.family = slot.family;
    const int k = index - 1;
    switch (slot.family) {
      case Family::BrokenLens:
        asset.pixels = make_scratches(k, rng);
        break;
      case Family::Condensation:
        asset.pixels = make_condensation(k, rng);
        break;
      case Family::Dirty:
        // Odd ids are full-frame grime layers, even ids transparent specks.
        if (index % 2 == 1) {
          asset.mode = OverlayMode::Blend;
          asset.opacity = 0.20 + 0.01 * (k % 18);
          asset.pixels = make_dirt(k, rng, true);
        } else {
          asset.pixels = make_dirt(k, rng, false);
        }
        break;
      case Family::Ice:
        asset.pixels = make_ice(k, rng);
        break;
      case Family::Rain:
        asset.pixels = make_rain(k, rng);
        break;
      default:
        break;
    }
    return asset;
  }
  throw UsageError("missing overlay asset '" + id + "'");
}

inline std::string_view overlay_mode_name(OverlayMode m) {
  return m == OverlayMode::AlphaComposite ? "alpha" : "blend";
}

/// A set of overlay assets keyed by id.
class AssetLibrary {
 public:
  AssetLibrary() = default;

  void add(OverlayAsset asset) {
    const std::string id = asset.id;
    assets_.insert_or_assign(id, std::move(asset));
  }

  bool contains(const std::string& id) const { return assets_.count(id) != 0; }
  std::size_t size() const { return assets_.size(); }

  const OverlayAsset& get(const std::string& id) const {
    auto it = assets_.find(id);
    if (it == assets_.end()) {
      throw UsageError("missing overlay asset '" + id + "'");
    }
    return it->second;
  }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    for (const auto& [id, _] : assets_) out.push_back(id);
    return out;
  }

  /// The procedurally generated pack, built once and shared.
  static const AssetLibrary& builtin() {
    static const AssetLibrary lib = [] {
      AssetLibrary l;
      for (const auto& id : builtin_asset_ids()) l.add(generate_builtin_asset(id));
      return l;
    }();
    return lib;
  }

  /// Reads `manifest.txt` and every referenced `<id>.png` from `dir`.
  static AssetLibrary load_pack(const std::filesystem::path& dir) {
    const auto manifest = dir / "manifest.txt";
    std::ifstream in(manifest);
    if (!in) throw DataError("cannot open asset manifest '" + manifest.string() + "'");
    AssetLibrary lib;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream fields(line);
      std::string id, family, mode, opacity_text, extra;
      if (!(fields >> id >> family >> mode >> opacity_text) || (fields >> extra)) {
        throw DataError(manifest.string() + ":" + std::to_string(line_no) +
                        ": expected 'id family mode opacity'");
      }
      OverlayAsset asset;
      asset.id = id;
      auto fam = family_from_name(family);
      if (!fam || !is_overlay_family(*fam)) {
        throw DataError(manifest.string() + ":" + std::to_string(line_no) +
                        ": '" + family + "' is not an overlay family");
      }
      asset.family = *fam;
      if (mode == "alpha") {
        asset.mode = OverlayMode::AlphaComposite;
      } else if (mode == "blend") {
        asset.mode = OverlayMode::Blend;
      } else {
        throw DataError(manifest.string() + ":" + std::to_string(line_no) +
                        ": mode must be 'alpha' or 'blend'");
      }
      double opacity = 0.0;
      auto [ptr, ec] = std::from_chars(opacity_text.data(),
                                       opacity_text.data() + opacity_text.size(), opacity);
      if (ec != std::errc() || ptr != opacity_text.data() + opacity_text.size() ||
          !(opacity >= 0.0 && opacity <= 1.0)) {
        throw DataError(manifest.string() + ":" + std::to_string(line_no) +
                        ": opacity must be a number in [0, 1]");
      }
      asset.opacity = opacity;
      asset.pixels = load_rgba(dir / (id + ".png"));
      lib.add(std::move(asset));
    }
    return lib;
  }

  void write_pack(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / "manifest.txt", std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write manifest in '" + dir.string() + "'");
    out << "# camfail overlay manifest v1\n# id family mode opacity\n";
    for (const auto& [id, asset] : assets_) {
      char opacity[32];
      std::snprintf(opacity, sizeof opacity, "%.4g", asset.opacity);
      out << id << ' ' << family_name(asset.family) << ' '
          << overlay_mode_name(asset.mode) << ' ' << opacity << '\n';
      save_rgba(asset.pixels, dir / (id + ".png"));
    }
  }

 private:
  std::map<std::string, OverlayAsset> assets_;
};

}  // namespace camfail
