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

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "camfail/error.hpp"

namespace camfail {

// One simulated failure family per transform.
enum class Family {
  Banding,
  Blur,
  Brightness,
  BrokenLens,
  Condensation,
  Dirty,
  Ice,
  Rain,
  DeadPixel,
  Flare,
  NoBayerFilter,
  ChromaticAberration,
  NoDemosaicing,
  Noise,
  Sharpness,
};

inline constexpr std::array kAllFamilies = {
    Family::Banding,       Family::Blur,          Family::Brightness,
    Family::BrokenLens,    Family::Condensation,  Family::Dirty,
    Family::Ice,           Family::Rain,          Family::DeadPixel,
    Family::Flare,         Family::NoBayerFilter, Family::ChromaticAberration,
    Family::NoDemosaicing, Family::Noise,         Family::Sharpness,
};

constexpr std::string_view family_name(Family f) {
  switch (f) {
    case Family::Banding: return "Banding";
    case Family::Blur: return "Blur";
    case Family::Brightness: return "Brightness";
    case Family::BrokenLens: return "BrokenLens";
    case Family::Condensation: return "Condensation";
    case Family::Dirty: return "Dirty";
    case Family::Ice: return "Ice";
    case Family::Rain: return "Rain";
    case Family::DeadPixel: return "DeadPixel";
    case Family::Flare: return "Flare";
    case Family::NoBayerFilter: return "NoBayerFilter";
    case Family::ChromaticAberration: return "ChromaticAberration";
    case Family::NoDemosaicing: return "NoDemosaicing";
    case Family::Noise: return "Noise";
    case Family::Sharpness: return "Sharpness";
  }
  return "?";
}

inline std::optional<Family> family_from_name(std::string_view name) {
  for (Family f : kAllFamilies) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

inline Family parse_family(std::string_view name) {
  if (auto f = family_from_name(name)) return *f;
  throw UsageError("unknown failure family '" + std::string(name) + "'");
}

// Families whose presets composite a stored overlay image.
constexpr bool is_overlay_family(Family f) {
  return f == Family::BrokenLens || f == Family::Condensation ||
         f == Family::Dirty || f == Family::Ice || f == Family::Rain;
}

}  // namespace camfail
