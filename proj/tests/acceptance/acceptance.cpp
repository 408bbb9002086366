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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include "camfail/camfail.hpp"
#include "support/ap_oracle.hpp"
#include "support/micro_instance.hpp"
#include "support/test_support.hpp"

namespace {

using namespace camfail;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome catalog_counts() {
  const std::map<Family, int> expected = {
      {Family::Banding, 2},       {Family::Blur, 25},          {Family::Brightness, 10},
      {Family::BrokenLens, 16},   {Family::Condensation, 3},   {Family::Dirty, 36},
      {Family::Ice, 4},           {Family::Rain, 5},           {Family::DeadPixel, 6},
      {Family::Flare, 1},         {Family::NoBayerFilter, 1},  {Family::ChromaticAberration, 4},
      {Family::NoDemosaicing, 1}, {Family::Noise, 10},         {Family::Sharpness, 6}};
  std::map<Family, int> got;
  std::set<std::string> names;
  for (const auto& p : preset_catalog()) {
    ++got[p.family];
    names.insert(p.name);
  }
  const std::size_t n = preset_catalog().size();
  return {n == 130 && names.size() == 130 && got == expected,
          "entries=" + std::to_string(n) + " families=" + std::to_string(got.size())};
}

Outcome oracle_equivalence() {
  std::mt19937_64 gen(20260101);
  std::vector<std::vector<testing::MicroImage>> instances;
  for (int i = 0; i < 200; ++i) instances.push_back(testing::random_instance(gen, 1 + i % 3));
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& inst : instances) {
    const double a = testing::library_ap(inst).ap;
    const double b = oracle::ap40(testing::to_oracle(inst));
    worst = std::max(worst, std::abs(a - b));
  }
  const double t = seconds(t0);
  return {worst <= 1e-12 && t < 5.0, fmt("instances=200 max_abs_diff=%.3g time=%.3fs", worst, t)};
}

Outcome iou_gate() {
  const eval::FilteredGroundTruth gt{{{0, 0, 100, 10}}, {}};
  auto tp_for = [&](double right) {
    const std::vector<eval::ScoredBox> d = {{{0, 0, right, 10}, 0.5}};
    return eval::match_detections(std::span<const eval::ScoredBox>(d), gt, 0.7).tp;
  };
  const int at_70 = tp_for(70.0);
  const int at_699 = tp_for(69.9);
  return {at_70 == 1 && at_699 == 0,
          "iou=0.70 tp=" + std::to_string(at_70) + " iou=0.699 tp=" + std::to_string(at_699)};
}

Outcome worked_example() {
  const eval::FilteredGroundTruth gt{{{0, 0, 10, 10}, {20, 0, 30, 10}}, {}};
  const std::vector<eval::ScoredBox> d = {
      {{0, 0, 10, 10}, 0.9}, {{50, 50, 60, 60}, 0.8}, {{20, 0, 30, 10}, 0.7}};
  const std::vector<eval::MatchResult> m = {
      eval::match_detections(std::span<const eval::ScoredBox>(d), gt, 0.7)};
  const double ap = eval::ap40(eval::pr_curve(m)).ap;
  return {std::abs(ap - 5.0 / 6.0) <= 1e-9, fmt("ap=%.12f expected=%.12f", ap, 5.0 / 6.0)};
}

Outcome grayscale_constant() {
  const ImageBuffer red(1, 1, std::vector<std::uint8_t>{255, 0, 0});
  const auto out = apply("NBAYF", red, 0, "red");
  const auto p = out.data();
  return {p[0] == 76 && p[1] == 76 && p[2] == 76,
          fmt("out=(%.0f,%.0f,%.0f)", p[0], p[1], p[2])};
}

Outcome mosaic_law() {
  // Expected channel per photosite of a BGGR 2x2 tile.
  const int tile[2][2] = {{2, 1}, {1, 0}};
  int bad = 0;
  for (int i = 0; i < 50; ++i) {
    const int w = 1 + i % 17, h = 1 + (i * 7) % 13;
    auto img = testing::random_image(w, h, 1000 + static_cast<std::uint64_t>(i));
    for (auto& v : img.data()) v = static_cast<std::uint8_t>(std::max<int>(v, 1));
    const auto out = transforms::demosaic_raw(img);
    if (out.width() != 2 * w || out.height() != 2 * h) {
      ++bad;
      continue;
    }
    for (int y = 0; y < out.height(); ++y) {
      for (int x = 0; x < out.width(); ++x) {
        const int want = tile[y % 2][x % 2];
        for (int c = 0; c < 3; ++c) {
          const bool nonzero = out.at(x, y, c) != 0;
          if (nonzero != (c == want)) ++bad;
        }
        if (out.at(x, y, want) != img.at(x / 2, y / 2, want)) ++bad;
      }
    }
  }
  return {bad == 0, "images=50 violations=" + std::to_string(bad)};
}

Outcome identity_degenerations() {
  const auto img = testing::random_image(37, 23, 5);
  OverlayAsset clear;
  clear.id = "clear";
  clear.pixels = RgbaImage(13, 9, 0);
  std::vector<std::string> failed;
  if (!(transforms::blur(img, 1) == img)) failed.push_back("blur");
  if (!(transforms::brightness(img, 1.0) == img)) failed.push_back("brightness");
  if (!(transforms::sharpness(img, 1.0) == img)) failed.push_back("sharpness");
  if (!(transforms::chromatic_aberration_delta(img, 0.0, false) == img)) failed.push_back("aberration");
  if (!(composite_overlay(img, clear) == img)) failed.push_back("overlay");
  std::string detail = "checked=5";
  for (const auto& f : failed) detail += " mismatch=" + f;
  return {failed.empty(), detail};
}

Outcome determinism() {
  testing::TempDir dir;
  testing::write_corpus(dir.path(), 5);
  const std::string det = testing::quote(CAMFAIL_JITTER_DETECTOR) +
                          " jitter {image} {clean} {gt} {output}";
  const std::string base = "input_dir = images\ngt_dir = labels\npresets = *\nformats = csv json\n"
                           "seed = 2026\ndetector = " + det + "\n";
  std::uint64_t digest[2];
  std::string csv[2];
  double time[2];
  const int jobs[2] = {1, 8};
  for (int run = 0; run < 2; ++run) {
    const std::string out = "run" + std::to_string(run);
    auto cfg = campaign::parse_config_text(base + "output_dir = " + out + "\njobs = " +
                                               std::to_string(jobs[run]) + "\n",
                                           dir.path());
    const auto t0 = Clock::now();
    campaign::run_campaign(cfg);
    time[run] = seconds(t0);
    digest[run] = testing::tree_digest(dir / out, {"report.csv", "report.json"});
    csv[run] = testing::mask_csv_column(testing::read_text(dir / (out + "/report.csv")), "wall_time_s");
  }
  auto json_masked = [&](int run) {
    auto doc = nlohmann::json::parse(testing::read_text(dir / ("run" + std::to_string(run) + "/report.json")));
    for (auto& r : doc["rows"]) r["wall_time_s"] = nullptr;
    return doc.dump();
  };
  const bool same = digest[0] == digest[1] && csv[0] == csv[1] && json_masked(0) == json_masked(1);
  const std::size_t files = testing::count_files(dir / "run0");
  return {same && files == 655 && time[0] < 120.0 && time[1] < 120.0,
          fmt("identical=%.0f time_1worker=%.1fs time_8workers=%.1fs", same, time[0], time[1]) +
              " images=" + std::to_string(files)};
}

Outcome dead_pixel_cardinalities() {
  const int w = 384, h = 160;
  const ImageBuffer img(w, h, 200);
  const std::vector<std::pair<std::string, int>> expected = {
      {"DEAPIX1", 1},     {"DEAPIX50", 50},  {"DEAPIX200", 200},
      {"DEAPIX500", 500}, {"DEAPIX-vcl", h}, {"DEAPIX-3l", 2 * w + h - 2}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, want] : expected) {
    const auto out = apply(name, img, 3, "000000");
    int changed = 0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (out.at(x, y, 0) != 200 || out.at(x, y, 1) != 200 || out.at(x, y, 2) != 200) ++changed;
      }
    }
    ok &= changed == want;
    detail += name + "=" + std::to_string(changed) + " ";
  }
  detail.pop_back();
  return {ok, detail};
}

Outcome taxonomy_completeness() {
  using C = taxonomy::Component;
  const std::map<std::string, std::set<C>> components = {
      {"Banding", {C::ImageSensor}},
      {"Brightness", {C::Lens}},
      {"Blurred", {C::Lens}},
      {"Brackish/Salt-Water", {C::Lens, C::CameraBody}},
      {"Bright Lines", {C::ImageSensor}},
      {"Broken Lens", {C::Lens}},
      {"Broken VR", {C::Lens}},
      {"Condensation", {C::Lens, C::CameraBody}},
      {"Dead Pixel", {C::ImageSensor}},
      {"Dirty", {C::Lens}},
      {"Electrical Overload", {C::CameraBody}},
      {"Flare", {C::Lens}},
      {"Heat", {C::Lens, C::CameraBody}},
      {"Ice", {C::Lens, C::CameraBody}},
      {"No Action", {C::ISP}},
      {"No Bayer Filter", {C::BayerFilter}},
      {"No Chromatic Aberration Correction", {C::ISP}},
      {"No Demosaicing", {C::ISP}},
      {"No Lens Distortion Correction", {C::ISP}},
      {"No Noise Reduction", {C::ISP}},
      {"No Sharpness", {C::ISP}},
      {"Rain", {C::Lens}},
      {"Sand", {C::Lens, C::CameraBody}},
      {"Spots", {C::ImageSensor}},
      {"Water", {C::Lens, C::CameraBody}},
      {"Wind", {C::Lens, C::CameraBody}},
  };
  const std::map<std::string, std::string> excluded = {
      {"Electrical Overload", "not providing an output image"},
      {"No Action", "not providing an output image"},
      {"Water", "not providing an output image"},
      {"Brackish/Salt-Water", "not univocally determined"},
      {"Heat", "not univocally determined"},
      {"Sand", "not univocally determined"},
      {"Bright Lines", "very rare"},
      {"Wind", "very rare"},
      {"No Lens Distortion Correction", "not collected with wide-angle lenses"},
  };
  const auto& reg = taxonomy::load_registry();
  int mismatched = 0;
  std::map<std::string, std::string> reasons;
  std::set<std::string> seen;
  for (const auto& r : reg) {
    seen.insert(r.name);
    auto it = components.find(r.name);
    if (it == components.end() ||
        std::set<C>(r.components.begin(), r.components.end()) != it->second) {
      ++mismatched;
    }
    if (auto* ns = std::get_if<taxonomy::NotSimulated>(&r.simulation)) reasons[r.name] = ns->reason;
  }
  const bool ok = reg.size() == 26 && seen.size() == 26 && mismatched == 0 && reasons == excluded;
  return {ok, "records=" + std::to_string(reg.size()) + " component_mismatches=" +
                  std::to_string(mismatched) + " not_simulated=" + std::to_string(reasons.size())};
}

Outcome monotonic_degradation() {
  testing::TempDir dir;
  testing::write_corpus(dir.path(), 5);
  const std::string det = testing::quote(CAMFAIL_JITTER_DETECTOR) +
                          " jitter {image} {clean} {gt} {output}";
  const auto cfg = campaign::parse_config_text(
      "input_dir = images\noutput_dir = out\ngt_dir = labels\n"
      "presets = BLUR_1, BLUR_5, BLUR_10, BLUR_20, BLUR_25\ndetector = " + det + "\n",
      dir.path());
  const auto result = campaign::run_campaign(cfg);
  bool ok = true;
  double prev = 2.0;
  std::string detail;
  for (const auto& row : result.rows) {
    if (row.preset_name == "CLEAN") continue;
    const double ap = row.ap.value_or(-1.0);
    ok &= row.ap.has_value() && ap <= prev;
    prev = ap;
    detail += row.preset_name + "=" + fmt("%.4f", ap) + " ";
  }
  detail.pop_back();
  return {ok && result.rows.size() == 6, detail};
}

}  // namespace

int main() {
  camfail::log::set_sink([](std::string_view) {});
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"catalog_counts", catalog_counts},
      {"ap_oracle_equivalence", oracle_equivalence},
      {"iou_gate_inclusive", iou_gate},
      {"worked_ap_example", worked_example},
      {"grayscale_constant", grayscale_constant},
      {"mosaic_law", mosaic_law},
      {"identity_degenerations", identity_degenerations},
      {"parallel_determinism", determinism},
      {"dead_pixel_cardinalities", dead_pixel_cardinalities},
      {"taxonomy_completeness", taxonomy_completeness},
      {"monotonic_degradation", monotonic_degradation},
  };
  int failures = 0;
  for (const auto& [name, check] : checks) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(checks.size()) - failures, checks.size());
  return failures == 0 ? 0 : 1;
}
