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

// Scripted stand-in for an object detector, used by campaign tests.
//
//   jitter_detector <mode> <image> <clean> <gt> <output>
//
// mode "identity": copies every Car box from <gt> with score 1.
// mode "jitter":   shifts every Car box right by j * width, where j grows
//                  with the RMS difference between <image> and <clean>;
//                  the score falls as the shift grows. An image whose size
//                  differs from the clean one yields no detections.
// mode "fail":     exits with status 4.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "camfail/kitti.hpp"
#include "camfail/png_io.hpp"

namespace {

double rms_difference(const camfail::ImageBuffer& a, const camfail::ImageBuffer& b) {
  const auto da = a.data();
  const auto db = b.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - db[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(da.size()));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 6) {
    std::fprintf(stderr, "usage: jitter_detector <identity|jitter|fail> <image> <clean> <gt> <output>\n");
    return 1;
  }
  const std::string mode = argv[1];
  if (mode == "fail") return 4;
  try {
    const auto labels = camfail::kitti::parse_labels(argv[4]);
    std::vector<camfail::kitti::Detection> dets;
    double j = 0.0;
    bool blind = false;
    if (mode == "jitter") {
      const auto img = camfail::load_image(argv[2]);
      const auto clean = camfail::load_image(argv[3]);
      if (img.width() != clean.width() || img.height() != clean.height()) {
        blind = true;
      } else {
        j = rms_difference(img, clean) / 64.0;
      }
    } else if (mode != "identity") {
      std::fprintf(stderr, "jitter_detector: unknown mode '%s'\n", mode.c_str());
      return 1;
    }
    if (!blind) {
      int k = 0;
      for (const auto& gt : labels) {
        if (gt.type != "Car") continue;
        // Per-object spread so AP degrades gradually rather than in one step.
        const double shift = j * (0.5 + 0.25 * (k++ % 5)) * gt.bbox.width();
        camfail::kitti::Detection d;
        d.type = gt.type;
        d.bbox = gt.bbox;
        d.bbox.left += shift;
        d.bbox.right += shift;
        d.score = mode == "identity" ? 1.0 : 1.0 / (1.0 + shift);
        dets.push_back(d);
      }
    }
    camfail::kitti::write_detections(dets, argv[5]);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "jitter_detector: %s\n", e.what());
    return 2;
  }
  return 0;
}
