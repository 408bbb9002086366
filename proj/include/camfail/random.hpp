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

// Seed derivation and the pinned pseudo-random generator.
//
// Every stochastic transform draws from a stream whose seed is
//
//   splitmix64_mix(fnv1a64(le64(global_seed) || image_id || 0x00 || preset))
//
// with strings taken as raw UTF-8 bytes. The stream itself is xoshiro256**
// (Blackman & Vigna, 2018) with its four state words filled from splitmix64,
// exactly as the reference implementation recommends. Normal variates come
// from the Box-Muller transform, uniform doubles from the top 53 bits.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>

namespace camfail {

inline constexpr std::string_view kRngName = "xoshiro256**/splitmix64";

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes,
                                std::uint64_t h = kFnvOffset) {
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= kFnvPrime;
  }
  return h;
}

constexpr std::uint64_t fnv1a64(std::string_view s,
                                std::uint64_t h = kFnvOffset) {
  for (char c : s) {
    h ^= static_cast<std::uint8_t>(c);
    h *= kFnvPrime;
  }
  return h;
}

// splitmix64 output function (Steele, Lea & Flood).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct SeedSpec {
  std::uint64_t global_seed = 0;
  std::string image_id;
  std::string preset_name;
};

constexpr std::uint64_t derive_seed(std::uint64_t global_seed,
                                    std::string_view image_id,
                                    std::string_view preset_name) {
  std::uint64_t h = kFnvOffset;
  for (int i = 0; i < 8; ++i) {
    h ^= (global_seed >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
  h = fnv1a64(image_id, h);
  h ^= 0x00;  // separator keeps ("ab","c") and ("a","bc") apart
  h *= kFnvPrime;
  h = fnv1a64(preset_name, h);
  return splitmix64_mix(h);
}

inline std::uint64_t derive_seed(const SeedSpec& spec) {
  return derive_seed(spec.global_seed, spec.image_id, spec.preset_name);
}

/// xoshiro256** generator with a few portable distribution helpers.
///
/// The standard library distributions are deliberately not used: their
/// algorithms are implementation-defined, so outputs would differ between
/// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      word = splitmix64_mix(x);
    }
  }

  // Raw state, bypassing the splitmix64 seeding. State must not be all zero.
  static Rng from_state(const std::array<std::uint64_t, 4>& state) {
    Rng rng(0);
    rng.state_ = state;
    return rng;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = (~std::uint64_t{0} / bound) * bound;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }

  // Standard normal variate (Box-Muller, both outputs used in turn).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace camfail
