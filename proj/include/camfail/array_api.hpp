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

// In-memory surface for host-language wrappers: apply a preset to a raw
// height x width x channels uint8 array, and list presets and taxonomy
// records in the same text form the CLI prints.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "camfail/error.hpp"
#include "camfail/image.hpp"
#include "camfail/presets.hpp"
#include "camfail/taxonomy.hpp"

namespace camfail::array {

struct ArrayImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> data;  // row-major, 3 channels
};

/// Validates the shape and wraps the samples in an ImageBuffer.
inline ImageBuffer to_image(std::span<const std::uint8_t> data, std::size_t height,
                            std::size_t width, std::size_t channels) {
  if (channels != 3) {
    throw UsageError("array must have 3 channels, got " + std::to_string(channels));
  }
  if (height == 0 || width == 0) throw UsageError("array must be non-empty");
  if (height > (1u << 20) || width > (1u << 20)) throw UsageError("array dimensions too large");
  if (data.size() != height * width * channels) {
    throw UsageError("array has " + std::to_string(data.size()) + " samples, expected " +
                     std::to_string(height * width * channels));
  }
  return ImageBuffer(static_cast<int>(width), static_cast<int>(height),
                     std::vector<std::uint8_t>(data.begin(), data.end()));
}

inline ArrayImage apply_to_array(std::string_view preset_name, std::span<const std::uint8_t> data,
                                 std::size_t height, std::size_t width, std::size_t channels,
                                 std::uint64_t global_seed, std::string_view image_id) {
  const ImageBuffer out =
      apply(preset_name, to_image(data, height, width, channels), global_seed, image_id);
  const auto px = out.data();
  return ArrayImage{static_cast<std::size_t>(out.height()), static_cast<std::size_t>(out.width()),
                    std::vector<std::uint8_t>(px.begin(), px.end())};
}

struct PresetListing {
  std::string name;
  std::string family;
  std::string params;
};

inline std::vector<PresetListing> list_presets() {
  std::vector<PresetListing> out;
  for (const auto& p : preset_catalog()) {
    out.push_back({p.name, std::string(family_name(p.family)), format_params(p.params)});
  }
  return out;
}

inline const std::vector<taxonomy::FailureModeRecord>& list_taxonomy() {
  return taxonomy::load_registry();
}

}  // namespace camfail::array
