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

// Random small detection problems, expressed both for the library and for
// the reference oracle.

#include <cmath>
#include <random>
#include <vector>

#include "camfail/evaluation.hpp"
#include "support/ap_oracle.hpp"

namespace camfail::testing {

struct MicroImage {
  eval::FilteredGroundTruth gts;
  std::vector<eval::ScoredBox> dets;
};

// Up to 5 GT (at least one eligible per instance) and up to 8 detections.
// Detections are mostly jittered copies of GT boxes so that every outcome
// occurs; scores are coarsely quantised to produce ties.
inline std::vector<MicroImage> random_instance(std::mt19937_64& gen, int n_images = 1) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<MicroImage> images(static_cast<std::size_t>(n_images));
  for (auto& img : images) {
    const int n_gt = static_cast<int>(gen() % 6);
    for (int g = 0; g < n_gt; ++g) {
      const double x = 200 * u(gen), y = 100 * u(gen);
      const kitti::Bbox2D b{x, y, x + 20 + 60 * u(gen), y + 20 + 40 * u(gen)};
      (u(gen) < 0.2 ? img.gts.ignored : img.gts.eligible).push_back(b);
    }
    const int n_det = static_cast<int>(gen() % 9);
    for (int d = 0; d < n_det; ++d) {
      kitti::Bbox2D b;
      const auto& pool = u(gen) < 0.5 ? img.gts.eligible : img.gts.ignored;
      if (!pool.empty() && u(gen) < 0.8) {
        b = pool[gen() % pool.size()];
        const double s = 8 * (u(gen) - 0.3);
        b.left += s;
        b.right += s + 4 * (u(gen) - 0.5);
        b.top += 3 * (u(gen) - 0.5);
      } else {
        const double x = 200 * u(gen), y = 100 * u(gen);
        b = {x, y, x + 10 + 60 * u(gen), y + 10 + 40 * u(gen)};
      }
      const double score = u(gen) < 0.3 ? std::floor(u(gen) * 4) / 4 : u(gen);
      img.dets.push_back({b, score});
    }
  }
  if (images[0].gts.eligible.empty()) images[0].gts.eligible.push_back({5, 5, 50, 40});
  return images;
}

inline oracle::Box to_oracle(const kitti::Bbox2D& b) { return {b.left, b.top, b.right, b.bottom}; }

inline std::vector<oracle::Image> to_oracle(const std::vector<MicroImage>& images) {
  std::vector<oracle::Image> out;
  for (const auto& img : images) {
    oracle::Image o;
    for (const auto& b : img.gts.eligible) o.eligible.push_back(to_oracle(b));
    for (const auto& b : img.gts.ignored) o.ignored.push_back(to_oracle(b));
    for (const auto& d : img.dets) o.dets.push_back({to_oracle(d.box), d.score});
    out.push_back(std::move(o));
  }
  return out;
}

inline eval::ApResult library_ap(const std::vector<MicroImage>& images, double thr = 0.7) {
  std::vector<eval::MatchResult> matches;
  for (const auto& img : images) {
    matches.push_back(
        eval::match_detections(std::span<const eval::ScoredBox>(img.dets), img.gts, thr));
  }
  return eval::ap40(eval::pr_curve(matches));
}

}  // namespace camfail::testing
