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

// The named failure configurations and the dispatcher that applies them.
//
// The catalog holds 130 presets:
//
//   Banding 2, Blur 25, Brightness 10, BrokenLens 16, Condensation 3,
//   Dirty 36, Ice 4, Rain 5, DeadPixel 6, Flare 1, NoBayerFilter 1,
//   ChromaticAberration 4, NoDemosaicing 1, Noise 10, Sharpness 6
//
// plus SHARP_-3.5, which resolves by name but is not part of the 130.
// Besides catalog names, resolve_preset() accepts numeric overrides for the
// scalar families: BLUR_<k>, BRIGHT_<f>, NOISE_<sigma>, SHARP_<f>.
//
// Text export, one preset per line:
//
//   <name> <family> [key=value ...] ref=<yes|no>
//
// where the keys depend on the family (see format_params). `ref=no` marks
// parameter values outside the reference configuration.

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "camfail/error.hpp"
#include "camfail/family.hpp"
#include "camfail/image.hpp"
#include "camfail/overlay.hpp"
#include "camfail/random.hpp"
#include "camfail/transforms.hpp"

namespace camfail {

struct BlurParams {
  int k = 1;
  friend bool operator==(const BlurParams&, const BlurParams&) = default;
};
struct BrightnessParams {
  double factor = 1.0;
  friend bool operator==(const BrightnessParams&, const BrightnessParams&) = default;
};
struct OverlayParams {
  std::string asset_id;
  friend bool operator==(const OverlayParams&, const OverlayParams&) = default;
};
struct DeadPixelParams {
  transforms::DeadPixelMode mode = transforms::DeadPixelMode::N1;
  friend bool operator==(const DeadPixelParams&, const DeadPixelParams&) = default;
};
struct FlareParams {
  friend bool operator==(const FlareParams&, const FlareParams&) = default;
};
struct NoBayerParams {
  transforms::NoBayerMode mode = transforms::NoBayerMode::Luminance;
  friend bool operator==(const NoBayerParams&, const NoBayerParams&) = default;
};
struct AberrationParams {
  int level = 1;
  double delta = transforms::kAberrationDelta1;
  bool with_blur = false;
  friend bool operator==(const AberrationParams&, const AberrationParams&) = default;
};
struct DemosaicParams {
  friend bool operator==(const DemosaicParams&, const DemosaicParams&) = default;
};
struct NoiseParams {
  double sigma = 1.0;
  transforms::NoiseModel model = transforms::NoiseModel::Speckle;
  friend bool operator==(const NoiseParams&, const NoiseParams&) = default;
};
struct SharpnessParams {
  double factor = 1.0;
  friend bool operator==(const SharpnessParams&, const SharpnessParams&) = default;
};

using PresetParams =
    std::variant<transforms::BandingParams, BlurParams, BrightnessParams,
                 OverlayParams, DeadPixelParams, FlareParams, NoBayerParams,
                 AberrationParams, DemosaicParams, NoiseParams, SharpnessParams>;

struct FailurePreset {
  std::string name;
  Family family = Family::Blur;
  PresetParams params;
  bool stochastic = false;     // consumes the derived seed
  bool reference_params = true;   // parameter values fixed by the reference configuration

  friend bool operator==(const FailurePreset&, const FailurePreset&) = default;
};

inline constexpr std::size_t kCatalogSize = 130;

// Shortest round-trip decimal form, used in names and exports.
inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace preset_detail {

inline constexpr double kBrightnessLevels[] = {0, 0.3, 0.6, 1.5, 2, 3, 5, 7, 10, 15};
inline constexpr double kNoiseLevels[] = {0.2, 0.5, 0.8, 1, 1.5, 2, 2.5, 3, 4, 5};
inline constexpr double kSharpnessLevels[] = {-5, -4, -3, -2, -1, 0};

inline bool brightness_is_reference(double f) {
  return f == 0 || f == 0.6 || f == 1.5 || f == 15;
}
inline bool noise_is_reference(double s) { return s == 0.2 || s == 5 || s == 1; }
inline bool sharpness_is_reference(double f) { return f == -5 || f == 0 || f == -3.5; }

inline FailurePreset make(std::string name, Family family, PresetParams params,
                          bool stochastic = false, bool reference = true) {
  return FailurePreset{std::move(name), family, std::move(params), stochastic, reference};
}

inline std::vector<FailurePreset> build_catalog() {
  using transforms::DeadPixelMode;
  std::vector<FailurePreset> c;
  c.reserve(kCatalogSize);

  c.push_back(make("BAND1", Family::Banding, transforms::banding_preset(1), false, false));
  c.push_back(make("BAND2", Family::Banding, transforms::banding_preset(2), false, false));

  for (int k = 1; k <= transforms::kMaxBlurLevel; ++k) {
    c.push_back(make("BLUR_" + std::to_string(k), Family::Blur, BlurParams{k}));
  }
  for (double f : kBrightnessLevels) {
    c.push_back(make("BRIGHT_" + format_number(f), Family::Brightness,
                     BrightnessParams{f}, false, brightness_is_reference(f)));
  }
  for (const auto& slot : overlay_detail::kAssetSlots) {
    for (int i = 1; i <= slot.count; ++i) {
      std::string id = std::string(slot.prefix) + std::to_string(i);
      // Overlay contents are generated here, not taken from the study.
      c.push_back(make(id, slot.family, OverlayParams{id}, false, false));
    }
  }
  c.push_back(make("DEAPIX1", Family::DeadPixel, DeadPixelParams{DeadPixelMode::N1}));
  c.push_back(make("DEAPIX50", Family::DeadPixel, DeadPixelParams{DeadPixelMode::N50}, true));
  c.push_back(make("DEAPIX200", Family::DeadPixel, DeadPixelParams{DeadPixelMode::N200}, true));
  c.push_back(make("DEAPIX500", Family::DeadPixel, DeadPixelParams{DeadPixelMode::N500}, true));
  c.push_back(make("DEAPIX-vcl", Family::DeadPixel, DeadPixelParams{DeadPixelMode::VerticalLine}));
  c.push_back(make("DEAPIX-3l", Family::DeadPixel, DeadPixelParams{DeadPixelMode::ThreeLines}));

  c.push_back(make("FLARE", Family::Flare, FlareParams{}, true, false));
  c.push_back(make("NBAYF", Family::NoBayerFilter,
                   NoBayerParams{transforms::NoBayerMode::Luminance}));

  for (int level : {1, 2}) {
    for (bool with_blur : {true, false}) {
      c.push_back(make("CHROMAB" + std::to_string(level) + (with_blur ? "-b" : "-nb"),
                       Family::ChromaticAberration,
                       AberrationParams{level, transforms::aberration_delta(level), with_blur},
                       false, false));
    }
  }
  c.push_back(make("DEMOS", Family::NoDemosaicing, DemosaicParams{}));

  for (double s : kNoiseLevels) {
    c.push_back(make("NOISE_" + format_number(s), Family::Noise, NoiseParams{s}, true,
                     noise_is_reference(s)));
  }
  for (double f : kSharpnessLevels) {
    c.push_back(make("SHARP_" + format_number(f), Family::Sharpness, SharpnessParams{f},
                     false, sharpness_is_reference(f)));
  }
  return c;
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

inline bool parse_int(std::string_view s, int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace preset_detail

/// The 130 configurations, in a fixed order (grouped by family).
inline const std::vector<FailurePreset>& preset_catalog() {
  static const std::vector<FailurePreset> catalog = preset_detail::build_catalog();
  return catalog;
}

/// Named presets that resolve but sit outside the 130 count.
inline const std::vector<FailurePreset>& extra_presets() {
  static const std::vector<FailurePreset> extras = {
      preset_detail::make("SHARP_-3.5", Family::Sharpness, SharpnessParams{-3.5}),
  };
  return extras;
}

inline std::optional<FailurePreset> find_preset(std::string_view name) {
  for (const auto& p : preset_catalog()) {
    if (p.name == name) return p;
  }
  for (const auto& p : extra_presets()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

/// Catalog lookup falling back to numeric overrides of the scalar families.
inline FailurePreset resolve_preset(std::string_view name) {
  if (auto p = find_preset(name)) return *p;
  const std::string n(name);
  auto reject = [&](const std::string& why) -> FailurePreset {
    throw UsageError("unknown preset '" + n + "'" + (why.empty() ? "" : " (" + why + ")"));
  };
  auto suffix = [&](std::string_view prefix) -> std::optional<std::string_view> {
    if (name.substr(0, prefix.size()) == prefix) return name.substr(prefix.size());
    return std::nullopt;
  };
  if (auto s = suffix("BLUR_")) {
    int k = 0;
    if (!preset_detail::parse_int(*s, k)) return reject("");
    if (k < 1 || k > transforms::kMaxBlurLevel) return reject("blur level outside [1, 25]");
    return preset_detail::make(n, Family::Blur, BlurParams{k}, false, false);
  }
  if (auto s = suffix("BRIGHT_")) {
    double f = 0;
    if (!preset_detail::parse_double(*s, f)) return reject("");
    if (f < 0) return reject("brightness factor must be >= 0");
    return preset_detail::make(n, Family::Brightness, BrightnessParams{f}, false, false);
  }
  if (auto s = suffix("NOISE_")) {
    double sigma = 0;
    if (!preset_detail::parse_double(*s, sigma)) return reject("");
    if (!(sigma > 0)) return reject("noise sigma must be > 0");
    return preset_detail::make(n, Family::Noise, NoiseParams{sigma}, true, false);
  }
  if (auto s = suffix("SHARP_")) {
    double f = 0;
    if (!preset_detail::parse_double(*s, f)) return reject("");
    return preset_detail::make(n, Family::Sharpness, SharpnessParams{f}, false, false);
  }
  return reject("");
}

// ---------------------------------------------------------------------------
// Application

inline ImageBuffer apply(const FailurePreset& preset, const ImageBuffer& img,
                         std::uint64_t stream_seed,
                         const AssetLibrary& assets = AssetLibrary::builtin()) {
  namespace t = transforms;
  return std::visit(
      [&](const auto& p) -> ImageBuffer {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, t::BandingParams>) {
          return t::banding(img, p);
        } else if constexpr (std::is_same_v<P, BlurParams>) {
          return t::blur(img, p.k);
        } else if constexpr (std::is_same_v<P, BrightnessParams>) {
          return t::brightness(img, p.factor);
        } else if constexpr (std::is_same_v<P, OverlayParams>) {
          return composite_overlay(img, assets.get(p.asset_id));
        } else if constexpr (std::is_same_v<P, DeadPixelParams>) {
          return t::dead_pixels(img, p.mode, stream_seed);
        } else if constexpr (std::is_same_v<P, FlareParams>) {
          return t::flare(img, stream_seed);
        } else if constexpr (std::is_same_v<P, NoBayerParams>) {
          return t::no_bayer(img, p.mode);
        } else if constexpr (std::is_same_v<P, AberrationParams>) {
          return t::chromatic_aberration_delta(img, p.delta, p.with_blur);
        } else if constexpr (std::is_same_v<P, DemosaicParams>) {
          return t::demosaic_raw(img);
        } else if constexpr (std::is_same_v<P, NoiseParams>) {
          return t::speckle_noise(img, p.sigma, stream_seed, p.model);
        } else {
          return t::sharpness(img, p.factor);
        }
      },
      preset.params);
}

/// Applies a preset with the stream seed derived from `seed`.
inline ImageBuffer apply(const FailurePreset& preset, const ImageBuffer& img,
                         const SeedSpec& seed,
                         const AssetLibrary& assets = AssetLibrary::builtin()) {
  return apply(preset, img, derive_seed(seed), assets);
}

/// Resolves `name` and applies it; the seed stream is derived from
/// (global_seed, image_id, name).
inline ImageBuffer apply(std::string_view name, const ImageBuffer& img,
                         std::uint64_t global_seed, std::string_view image_id,
                         const AssetLibrary& assets = AssetLibrary::builtin()) {
  const FailurePreset preset = resolve_preset(name);
  return apply(preset, img, derive_seed(global_seed, image_id, preset.name), assets);
}

// ---------------------------------------------------------------------------
// Selection

// Shell-style match supporting '*' and '?'.
inline bool glob_match(std::string_view pattern, std::string_view text) {
  std::size_t p = 0, t = 0, star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

/// Expands names and globs into presets. Globs match catalog names only;
/// plain names may also be extras or numeric overrides. Output follows
/// first-mention order with catalog order inside each glob; duplicates are
/// dropped. A pattern that matches nothing is an error.
inline std::vector<FailurePreset> expand_selection(const std::vector<std::string>& patterns) {
  if (patterns.empty()) throw UsageError("preset selection is empty");
  std::vector<FailurePreset> out;
  auto seen = [&](const std::string& name) {
    for (const auto& p : out) {
      if (p.name == name) return true;
    }
    return false;
  };
  for (const auto& pat : patterns) {
    if (pat.find_first_of("*?") != std::string::npos) {
      bool any = false;
      for (const auto& p : preset_catalog()) {
        if (glob_match(pat, p.name)) {
          any = true;
          if (!seen(p.name)) out.push_back(p);
        }
      }
      if (!any) throw UsageError("preset pattern '" + pat + "' matches nothing");
    } else {
      FailurePreset p = resolve_preset(pat);
      if (!seen(p.name)) out.push_back(std::move(p));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text export

inline std::string_view dead_pixel_mode_name(transforms::DeadPixelMode m) {
  using M = transforms::DeadPixelMode;
  switch (m) {
    case M::N1: return "n1";
    case M::N50: return "n50";
    case M::N200: return "n200";
    case M::N500: return "n500";
    case M::VerticalLine: return "vcl";
    case M::ThreeLines: return "3l";
  }
  return "?";
}

inline std::string format_params(const PresetParams& params) {
  namespace t = transforms;
  std::ostringstream os;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, t::BandingParams>) {
          os << "horizontal=" << p.horizontal << " vertical=" << p.vertical
             << " period=" << p.period << " duty=" << format_number(p.duty)
             << " opacity=" << format_number(p.opacity);
        } else if constexpr (std::is_same_v<P, BlurParams>) {
          os << "k=" << p.k;
        } else if constexpr (std::is_same_v<P, BrightnessParams>) {
          os << "factor=" << format_number(p.factor);
        } else if constexpr (std::is_same_v<P, OverlayParams>) {
          os << "asset=" << p.asset_id;
        } else if constexpr (std::is_same_v<P, DeadPixelParams>) {
          os << "mode=" << dead_pixel_mode_name(p.mode);
        } else if constexpr (std::is_same_v<P, NoBayerParams>) {
          os << "mode=" << (p.mode == t::NoBayerMode::Luminance ? "luminance" : "channel-scale");
        } else if constexpr (std::is_same_v<P, AberrationParams>) {
          os << "level=" << p.level << " delta=" << format_number(p.delta)
             << " blur=" << p.with_blur;
        } else if constexpr (std::is_same_v<P, NoiseParams>) {
          os << "sigma=" << format_number(p.sigma) << " model="
             << (p.model == t::NoiseModel::Speckle ? "speckle" : "additive");
        } else if constexpr (std::is_same_v<P, SharpnessParams>) {
          os << "factor=" << format_number(p.factor);
        }
      },
      params);
  return os.str();
}

inline std::string format_preset(const FailurePreset& p) {
  std::string line = p.name + " " + std::string(family_name(p.family));
  const std::string params = format_params(p.params);
  if (!params.empty()) line += " " + params;
  line += p.reference_params ? " ref=yes" : " ref=no";
  return line;
}

inline std::string export_catalog(const std::vector<FailurePreset>& presets) {
  std::string out;
  for (const auto& p : presets) out += format_preset(p) + "\n";
  return out;
}

inline FailurePreset parse_preset_line(std::string_view line) {
  namespace t = transforms;
  std::istringstream in{std::string(line)};
  std::string name, family_text, token;
  if (!(in >> name >> family_text)) throw DataError("preset line needs a name and a family");
  std::map<std::string, std::string> kv;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw DataError("expected key=value, got '" + token + "'");
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  auto take = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw DataError("preset '" + name + "' is missing '" + key + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto num = [&](const std::string& key) {
    double v = 0;
    const std::string s = take(key);
    if (!preset_detail::parse_double(s, v)) throw DataError("bad number '" + s + "' for " + key);
    return v;
  };
  auto integer = [&](const std::string& key) {
    int v = 0;
    const std::string s = take(key);
    if (!preset_detail::parse_int(s, v)) throw DataError("bad integer '" + s + "' for " + key);
    return v;
  };

  FailurePreset p;
  p.name = name;
  p.family = parse_family(family_text);
  switch (p.family) {
    case Family::Banding:
      p.params = t::BandingParams{integer("horizontal") != 0, integer("vertical") != 0,
                                  integer("period"), num("duty"), num("opacity")};
      break;
    case Family::Blur:
      p.params = BlurParams{integer("k")};
      break;
    case Family::Brightness:
      p.params = BrightnessParams{num("factor")};
      break;
    case Family::BrokenLens:
    case Family::Condensation:
    case Family::Dirty:
    case Family::Ice:
    case Family::Rain:
      p.params = OverlayParams{take("asset")};
      break;
    case Family::DeadPixel: {
      const std::string m = take("mode");
      DeadPixelParams dp;
      bool ok = false;
      for (auto mode : {t::DeadPixelMode::N1, t::DeadPixelMode::N50, t::DeadPixelMode::N200,
                        t::DeadPixelMode::N500, t::DeadPixelMode::VerticalLine,
                        t::DeadPixelMode::ThreeLines}) {
        if (dead_pixel_mode_name(mode) == m) {
          dp.mode = mode;
          ok = true;
        }
      }
      if (!ok) throw DataError("unknown dead pixel mode '" + m + "'");
      p.params = dp;
      p.stochastic = dp.mode == t::DeadPixelMode::N50 || dp.mode == t::DeadPixelMode::N200 ||
                     dp.mode == t::DeadPixelMode::N500;
      break;
    }
    case Family::Flare:
      p.params = FlareParams{};
      p.stochastic = true;
      break;
    case Family::NoBayerFilter: {
      const std::string m = take("mode");
      if (m != "luminance" && m != "channel-scale") {
        throw DataError("unknown no-bayer mode '" + m + "'");
      }
      p.params = NoBayerParams{m == "luminance" ? t::NoBayerMode::Luminance
                                                : t::NoBayerMode::ChannelScale};
      break;
    }
    case Family::ChromaticAberration:
      p.params = AberrationParams{integer("level"), num("delta"), integer("blur") != 0};
      break;
    case Family::NoDemosaicing:
      p.params = DemosaicParams{};
      break;
    case Family::Noise: {
      const double sigma = num("sigma");
      const std::string m = take("model");
      if (m != "speckle" && m != "additive") throw DataError("unknown noise model '" + m + "'");
      p.params = NoiseParams{sigma, m == "speckle" ? t::NoiseModel::Speckle
                                                   : t::NoiseModel::Additive};
      p.stochastic = true;
      break;
    }
    case Family::Sharpness:
      p.params = SharpnessParams{num("factor")};
      break;
  }
  const std::string ref = take("ref");
  if (ref != "yes" && ref != "no") throw DataError("ref must be yes or no");
  p.reference_params = ref == "yes";
  if (!kv.empty()) {
    throw DataError("preset '" + name + "' has unexpected key '" + kv.begin()->first + "'");
  }
  return p;
}

inline std::vector<FailurePreset> parse_catalog(std::string_view text) {
  std::vector<FailurePreset> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    out.push_back(parse_preset_line(line));
  }
  return out;
}

}  // namespace camfail
