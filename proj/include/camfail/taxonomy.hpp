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

// Failure-mode registry for an automotive RGB camera: 26 modes, the camera
// components each one manifests in, a short effect summary, known
// mitigations and whether (and how) the mode is simulated by a transform
// family.
//
// TSV export, one record per line:
//
//   name <TAB> components (comma separated) <TAB> status <TAB> detail
//
// with status one of `simulated` (detail = family), `grouped` (detail = the
// record it is folded into) or `not-simulated` (detail = reason).

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "camfail/error.hpp"
#include "camfail/family.hpp"

namespace camfail::taxonomy {

enum class Component { Lens, CameraBody, BayerFilter, ImageSensor, ISP };

inline constexpr Component kAllComponents[] = {Component::Lens, Component::CameraBody,
                                               Component::BayerFilter, Component::ImageSensor,
                                               Component::ISP};

constexpr std::string_view component_name(Component c) {
  switch (c) {
    case Component::Lens: return "Lens";
    case Component::CameraBody: return "CameraBody";
    case Component::BayerFilter: return "BayerFilter";
    case Component::ImageSensor: return "ImageSensor";
    case Component::ISP: return "ISP";
  }
  return "?";
}

inline Component parse_component(std::string_view name) {
  auto norm = [](std::string_view s) {
    std::string out;
    for (char ch : s) {
      if (ch == ' ' || ch == '_' || ch == '-') continue;
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    return out;
  };
  const std::string wanted = norm(name);
  for (Component c : kAllComponents) {
    if (norm(component_name(c)) == wanted) return c;
  }
  throw UsageError("unknown camera component '" + std::string(name) +
                   "' (expected Lens, CameraBody, BayerFilter, ImageSensor or ISP)");
}

struct Simulated {
  Family family;
  friend bool operator==(const Simulated&, const Simulated&) = default;
};
struct GroupedInto {
  std::string record;
  friend bool operator==(const GroupedInto&, const GroupedInto&) = default;
};
struct NotSimulated {
  std::string reason;
  friend bool operator==(const NotSimulated&, const NotSimulated&) = default;
};

using SimulationStatus = std::variant<Simulated, GroupedInto, NotSimulated>;

struct FailureModeRecord {
  std::string name;
  std::vector<Component> components;
  std::string effect_summary;
  std::string mitigation_notes;
  SimulationStatus simulation;

  bool has_component(Component c) const {
    return std::find(components.begin(), components.end(), c) != components.end();
  }
};

inline constexpr std::string_view kNoOutputImage = "not providing an output image";
inline constexpr std::string_view kNotUnivocal = "not univocally determined";
inline constexpr std::string_view kVeryRare = "very rare";
inline constexpr std::string_view kNoWideAngle = "not collected with wide-angle lenses";

namespace detail {

inline std::vector<FailureModeRecord> build_registry() {
  using C = Component;
  auto sim = [](Family f) -> SimulationStatus { return Simulated{f}; };
  auto grouped = [](std::string r) -> SimulationStatus { return GroupedInto{std::move(r)}; };
  auto skip = [](std::string_view r) -> SimulationStatus { return NotSimulated{std::string(r)}; };
  const std::string casing = "Prevent with proper casing of the camera.";
  return {
      {"Banding", {C::ImageSensor},
       "Parallel horizontal and/or vertical lines become visible, mostly on dark tones.",
       "Dithering patterns reduce the visible effect.", sim(Family::Banding)},
      {"Brightness", {C::Lens},
       "Exposure is wrong anywhere between an all-black and an all-white frame (shutter, "
       "diaphragm or iris fault).",
       "Moderate shifts can be corrected in post-processing; black or white frames are easy "
       "to detect but cannot be recovered.",
       sim(Family::Brightness)},
      {"Blurred", {C::Lens}, "The scene is out of focus.",
       "Blind deblurring methods can restore sharpness.", sim(Family::Blur)},
      {"Brackish/Salt-Water", {C::Lens, C::CameraBody},
       "Salt corrosion of lens and body; the resulting image damage is not of one kind.",
       "Anti-corrosion treatments for surfaces exposed to salt or fresh water.",
       skip(kNotUnivocal)},
      {"Bright Lines", {C::ImageSensor},
       "Bright vertical and/or horizontal lines, e.g. after laser exposure of the sensor.",
       "Largely solved by current sensor technology.", skip(kVeryRare)},
      {"Broken Lens", {C::Lens},
       "The frame is produced but carries scratch lines or crack patterns.",
       "Detectable by image processing; recovering a clean frame is hard.",
       sim(Family::BrokenLens)},
      {"Broken VR", {C::Lens}, "Failed vibration reduction leaves the frame out of focus.",
       "Same techniques as for blur removal.", grouped("Blurred")},
      {"Condensation", {C::Lens, C::CameraBody},
       "Humidity on the optics produces halos; inside the body it can stop the device.",
       "Anti-condensation designs and removal techniques exist.", sim(Family::Condensation)},
      {"Dead Pixel", {C::ImageSensor}, "Single photosites stay black.",
       "Detection and correction can run on the device or in dedicated circuitry.",
       sim(Family::DeadPixel)},
      {"Dirty", {C::Lens},
       "Dust or dirt on internal or external lenses covers parts of the scene.",
       "Single-image dirt and rain removal; physics-based dust removal.", sim(Family::Dirty)},
      {"Electrical Overload", {C::CameraBody},
       "Overheated conductors damage the electronics; frames are wrong or missing.",
       "Proper casing, reliable control circuits and sensors.", skip(kNoOutputImage)},
      {"Flare", {C::Lens},
       "Reflections of strong light sources add coloured spots along a line.",
       "Flare and ghosting can be reduced in post-processing.", sim(Family::Flare)},
      {"Heat", {C::Lens, C::CameraBody},
       "Heat degrades lubricants and moving parts such as zoom and focus; effects vary.",
       "Ruggedised housings rated for extreme temperatures.", skip(kNotUnivocal)},
      {"Ice", {C::Lens, C::CameraBody},
       "Ice covers the outer lens or cracks lens and body materials.",
       "Lens heaters prevent or reduce icing and condensation.", sim(Family::Ice)},
      {"No Action", {C::ISP}, "The ISP does not respond and no frame is delivered.",
       "Easy to detect at system level; the frame cannot be recovered.",
       skip(kNoOutputImage)},
      {"No Bayer Filter", {C::BayerFilter},
       "Colour information is wrong or missing; frames look achromatic.", "",
       sim(Family::NoBayerFilter)},
      {"No Chromatic Aberration Correction", {C::ISP},
       "Uncorrected chromatic aberration leaves coloured fringes and some blur at edges.",
       "Chromatic aberration can be reduced by image processing.",
       sim(Family::ChromaticAberration)},
      {"No Demosaicing", {C::ISP},
       "The raw photosite mosaic is output without interpolation.",
       "Many demosaicing algorithms exist, but a failed stage is hard to recover from.",
       sim(Family::NoDemosaicing)},
      {"No Lens Distortion Correction", {C::ISP},
       "Wide-angle distortion is left in the frame, or the pipeline stalls.",
       "Distortion can be measured, detected and corrected in software.", skip(kNoWideAngle)},
      {"No Noise Reduction", {C::ISP}, "Sensor noise is left in the frame.",
       "Software and sensor-level denoising solutions are available.", sim(Family::Noise)},
      {"No Sharpness", {C::ISP}, "Edges between regions of different brightness soften.",
       "Software and sensor-level sharpening solutions are available.",
       sim(Family::Sharpness)},
      {"Rain", {C::Lens}, "Water drops on the outer lens leave small spots.",
       "Same as Dirty: single-image rain removal.", sim(Family::Rain)},
      {"Sand", {C::Lens, C::CameraBody},
       "Abrasion and ingress from sand; on the lens it looks like dirt, otherwise effects vary.",
       casing, skip(kNotUnivocal)},
      {"Spots", {C::ImageSensor},
       "Dust settled on the sensor casts roughly circular shadows.",
       "Blemish detection and automatic dust correction.", grouped("Dirty")},
      {"Water", {C::Lens, C::CameraBody},
       "Water ingress disables the electronics; frames are missing or empty.", casing,
       skip(kNoOutputImage)},
      {"Wind", {C::Lens, C::CameraBody},
       "Wind-driven ingress or minor damage; frames may be shifted or cut.",
       "Prevent with proper casing.", skip(kVeryRare)},
  };
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace detail

inline const std::vector<FailureModeRecord>& load_registry() {
  static const std::vector<FailureModeRecord> registry = detail::build_registry();
  return registry;
}

/// Closest registry name: a case-insensitive prefix match wins, otherwise
/// the smallest edit distance (first in registry order on ties).
inline std::string suggest(std::string_view name) {
  const std::string q = detail::lower(name);
  const auto& reg = load_registry();
  for (const auto& r : reg) {
    if (!q.empty() && detail::lower(r.name).rfind(q, 0) == 0) return r.name;
  }
  std::size_t best = std::string::npos;
  std::string out;
  for (const auto& r : reg) {
    const std::size_t d = detail::edit_distance(q, detail::lower(r.name));
    if (d < best) {
      best = d;
      out = r.name;
    }
  }
  return out;
}

inline const FailureModeRecord& lookup(std::string_view name) {
  const std::string q = detail::lower(name);
  for (const auto& r : load_registry()) {
    if (detail::lower(r.name) == q) return r;
  }
  throw UsageError("unknown failure mode '" + std::string(name) + "' (did you mean '" +
                   suggest(name) + "'?)");
}

inline std::vector<FailureModeRecord> list_by_component(Component c) {
  std::vector<FailureModeRecord> out;
  for (const auto& r : load_registry()) {
    if (r.has_component(c)) out.push_back(r);
  }
  return out;
}

inline std::string_view status_name(const SimulationStatus& s) {
  if (std::holds_alternative<Simulated>(s)) return "simulated";
  if (std::holds_alternative<GroupedInto>(s)) return "grouped";
  return "not-simulated";
}

inline std::string status_detail(const SimulationStatus& s) {
  if (auto* sim = std::get_if<Simulated>(&s)) return std::string(family_name(sim->family));
  if (auto* g = std::get_if<GroupedInto>(&s)) return g->record;
  return std::get<NotSimulated>(s).reason;
}

inline std::string components_text(const FailureModeRecord& r) {
  std::string out;
  for (std::size_t i = 0; i < r.components.size(); ++i) {
    if (i) out += ',';
    out += component_name(r.components[i]);
  }
  return out;
}

inline std::string export_tsv(const std::vector<FailureModeRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.name + '\t' + components_text(r) + '\t' + std::string(status_name(r.simulation)) +
           '\t' + status_detail(r.simulation) + '\n';
  }
  return out;
}

inline std::string export_report(const std::vector<FailureModeRecord>& records) {
  std::ostringstream os;
  for (const auto& r : records) {
    os << r.name << "\n"
       << "  components: " << components_text(r) << "\n"
       << "  effect:     " << r.effect_summary << "\n"
       << "  mitigation: " << (r.mitigation_notes.empty() ? "-" : r.mitigation_notes) << "\n"
       << "  status:     " << status_name(r.simulation) << " (" << status_detail(r.simulation)
       << ")\n\n";
  }
  return os.str();
}

}  // namespace camfail::taxonomy
