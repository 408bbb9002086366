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

// Batch robustness campaigns: inject presets into an image corpus, run an
// external detector, score every preset against the clean baseline and write
// CSV/JSON reports.
//
// Config file grammar (one setting per line):
//
//   line    := blank | comment | setting
//   comment := '#' any-text
//   setting := key ws* '=' ws* value
//
// Keys:
//   input_dir   directory of *.png inputs                       (required)
//   output_dir  root of the generated tree                      (required)
//   gt_dir      KITTI label directory; enables evaluation
//   det_dir     root of existing detections, <det_dir>/<preset>/<id>.txt
//   detector    command template run once per (preset, image)
//   assets      overlay asset pack directory (default: built-in pack)
//   presets     names or globs, comma or space separated; repeatable
//   seed        global seed (default 0)
//   class       evaluated class (default Car)
//   difficulty  easy | moderate | hard (default moderate)
//   iou         IoU gate in (0, 1] (default 0.7)
//   formats     csv and/or json (default csv)
//   jobs        worker threads (default 1)
//
// Relative paths are resolved against the directory holding the config file.
// The detector template must contain {image} and {output}; it may also use
// {id}, {preset}, {clean} and {gt}. Substituted values are shell-quoted.
//
// Output tree:
//   <output_dir>/<preset>/<id>.png     injected images
//   <output_dir>/CLEAN/<id>.png        re-encoded clean copies
//   <output_dir>/manifest.tsv          preset, image id, relative path
//   <output_dir>/detections/<preset>/  detector output (if detector is set)
//   <output_dir>/report.{csv,json}     per-preset rows
//   <output_dir>/summary.csv           per-family min/max/avg

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <sys/wait.h>

#include "json.hpp"

#include "camfail/error.hpp"
#include "camfail/evaluation.hpp"
#include "camfail/overlay.hpp"
#include "camfail/png_io.hpp"
#include "camfail/presets.hpp"
#include "camfail/random.hpp"

namespace camfail::campaign {

namespace fs = std::filesystem;

inline constexpr std::string_view kCleanName = "CLEAN";
inline constexpr double kTolerancePoints = 0.05;  // "within 5 points of clean"

// Every unit of work failed. Maps to CLI exit code 3.
class AllWorkFailed : public Error {
 public:
  using Error::Error;
};

struct CampaignConfig {
  fs::path input_dir;
  fs::path output_dir;
  std::optional<fs::path> gt_dir;
  std::optional<fs::path> det_dir;
  std::optional<std::string> detector_command;
  std::optional<fs::path> asset_dir;
  std::vector<std::string> preset_selection;
  std::vector<FailurePreset> presets;  // resolved from preset_selection
  std::uint64_t global_seed = 0;
  std::string class_name = "Car";
  eval::DifficultyFilter difficulty = eval::moderate();
  double iou_threshold = eval::kDefaultIouThreshold;
  std::vector<std::string> report_formats = {"csv"};
  int jobs = 1;

  bool evaluation_enabled() const { return gt_dir.has_value(); }

  fs::path detection_root() const {
    if (det_dir) return *det_dir;
    return output_dir / "detections";
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline constexpr std::string_view kPlaceholders[] = {"image", "output", "id",
                                                     "preset", "clean", "gt"};

inline void validate_template(const std::string& tpl) {
  bool has_image = false;
  bool has_output = false;
  std::size_t pos = 0;
  while ((pos = tpl.find('{', pos)) != std::string::npos) {
    const auto end = tpl.find('}', pos);
    if (end == std::string::npos) {
      throw UsageError("detector: unterminated placeholder in '" + tpl + "'");
    }
    const std::string name = tpl.substr(pos + 1, end - pos - 1);
    if (std::find(std::begin(kPlaceholders), std::end(kPlaceholders), name) ==
        std::end(kPlaceholders)) {
      throw UsageError("detector: unknown placeholder '{" + name + "}'");
    }
    has_image |= name == "image";
    has_output |= name == "output";
    pos = end + 1;
  }
  if (!has_image || !has_output) {
    throw UsageError("detector: template must contain {image} and {output}");
  }
}

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

inline std::string expand_template(const std::string& tpl,
                                   const std::map<std::string, std::string>& values) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const auto open = tpl.find('{', pos);
    if (open == std::string::npos) {
      out += tpl.substr(pos);
      break;
    }
    const auto close = tpl.find('}', open);
    out += tpl.substr(pos, open - pos);
    const std::string key = tpl.substr(open + 1, close - open - 1);
    auto it = values.find(key);
    out += shell_quote(it == values.end() ? std::string() : it->second);
    pos = close + 1;
  }
  return out;
}

// Runs fn(i) for i in [0, n) on `jobs` threads. Results must be written to
// per-index slots by the callee; the first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Configuration

/// Parses config text. Relative paths are resolved against `base_dir`.
inline CampaignConfig parse_config_text(std::string_view text, const fs::path& base_dir = {},
                                        const std::string& source = "<config>") {
  CampaignConfig cfg;
  cfg.report_formats.clear();
  bool have_input = false, have_output = false, have_formats = false;
  auto resolve = [&](const std::string& v) {
    fs::path p(v);
    return p.is_absolute() || base_dir.empty() ? p.lexically_normal()
                                               : (base_dir / p).lexically_normal();
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto fail = [&](const std::string& what) -> void {
      throw UsageError(source + ":" + std::to_string(line_no) + ": " + what);
    };
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (value.empty()) fail("empty value for '" + key + "'");

    if (key == "input_dir") {
      cfg.input_dir = resolve(value);
      have_input = true;
    } else if (key == "output_dir") {
      cfg.output_dir = resolve(value);
      have_output = true;
    } else if (key == "gt_dir") {
      cfg.gt_dir = resolve(value);
    } else if (key == "det_dir") {
      cfg.det_dir = resolve(value);
    } else if (key == "assets") {
      cfg.asset_dir = resolve(value);
    } else if (key == "detector") {
      cfg.detector_command = value;
    } else if (key == "presets") {
      for (auto& p : detail::split_list(value)) cfg.preset_selection.push_back(std::move(p));
    } else if (key == "seed") {
      std::uint64_t seed = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
      if (ec != std::errc() || ptr != value.data() + value.size()) fail("seed must be an unsigned integer");
      cfg.global_seed = seed;
    } else if (key == "class") {
      cfg.class_name = value;
    } else if (key == "difficulty") {
      cfg.difficulty = eval::parse_difficulty(value);
    } else if (key == "iou") {
      double v = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || ptr != value.data() + value.size() || !(v > 0.0 && v <= 1.0)) {
        fail("iou must be a number in (0, 1]");
      }
      cfg.iou_threshold = v;
    } else if (key == "formats") {
      have_formats = true;
      for (auto& f : detail::split_list(value)) {
        if (f != "csv" && f != "json") fail("unknown report format '" + f + "'");
        if (std::find(cfg.report_formats.begin(), cfg.report_formats.end(), f) ==
            cfg.report_formats.end()) {
          cfg.report_formats.push_back(f);
        }
      }
    } else if (key == "jobs") {
      int jobs = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), jobs);
      if (ec != std::errc() || ptr != value.data() + value.size() || jobs < 1) {
        fail("jobs must be a positive integer");
      }
      cfg.jobs = jobs;
    } else {
      fail("unknown key '" + key + "'");
    }
  }

  if (!have_input) throw UsageError(source + ": missing required path 'input_dir'");
  if (!have_output) throw UsageError(source + ": missing required path 'output_dir'");
  if (!have_formats) cfg.report_formats = {"csv"};
  if (cfg.preset_selection.empty()) throw UsageError(source + ": preset list is empty");
  cfg.presets = expand_selection(cfg.preset_selection);
  if (cfg.detector_command) detail::validate_template(*cfg.detector_command);
  return cfg;
}

inline CampaignConfig parse_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), fs::absolute(path).parent_path(), path.string());
}

/// Inverse of parse_config_text for a resolved config.
inline std::string format_config(const CampaignConfig& cfg) {
  std::ostringstream os;
  os << "input_dir = " << cfg.input_dir.string() << "\n";
  os << "output_dir = " << cfg.output_dir.string() << "\n";
  if (cfg.gt_dir) os << "gt_dir = " << cfg.gt_dir->string() << "\n";
  if (cfg.det_dir) os << "det_dir = " << cfg.det_dir->string() << "\n";
  if (cfg.asset_dir) os << "assets = " << cfg.asset_dir->string() << "\n";
  if (cfg.detector_command) os << "detector = " << *cfg.detector_command << "\n";
  os << "presets =";
  for (const auto& p : cfg.preset_selection) os << ' ' << p;
  os << "\n";
  os << "seed = " << cfg.global_seed << "\n";
  os << "class = " << cfg.class_name << "\n";
  os << "difficulty = " << cfg.difficulty.name << "\n";
  os << "iou = " << format_number(cfg.iou_threshold) << "\n";
  os << "formats =";
  for (const auto& f : cfg.report_formats) os << ' ' << f;
  os << "\n";
  os << "jobs = " << cfg.jobs << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Injection

struct InjectEntry {
  std::string preset;
  std::string image_id;
  fs::path path;
  double seconds = 0.0;
};

struct InjectManifest {
  std::vector<std::string> image_ids;     // successfully loaded, sorted
  std::vector<std::string> failed_images;  // file names that could not be read
  std::vector<std::string> presets;        // CLEAN first, then selection order
  std::vector<InjectEntry> entries;        // preset-major, image-minor

  std::size_t output_count() const { return entries.size(); }
};

inline std::vector<fs::path> list_input_images(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw DataError("input directory '" + dir.string() + "' does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".png") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("input directory '" + dir.string() + "' has no PNG images");
  return files;
}

inline AssetLibrary load_assets(const CampaignConfig& cfg) {
  if (cfg.asset_dir) return AssetLibrary::load_pack(*cfg.asset_dir);
  return AssetLibrary::builtin();
}

/// Writes every (preset, image) output plus clean copies and manifest.tsv.
/// Unreadable images are logged and skipped; if none can be read,
/// AllWorkFailed is thrown.
inline InjectManifest run_inject(const CampaignConfig& cfg) {
  const auto files = list_input_images(cfg.input_dir);
  const AssetLibrary assets = load_assets(cfg);
  for (const auto& p : cfg.presets) {
    if (auto* o = std::get_if<OverlayParams>(&p.params)) assets.get(o->asset_id);
  }

  InjectManifest manifest;
  manifest.presets.emplace_back(kCleanName);
  for (const auto& p : cfg.presets) manifest.presets.push_back(p.name);
  for (const auto& name : manifest.presets) fs::create_directories(cfg.output_dir / name);

  const std::size_t n_presets = manifest.presets.size();
  // slots[image][preset]
  std::vector<std::vector<InjectEntry>> slots(files.size());
  std::vector<std::string> failures(files.size());

  detail::parallel_for(files.size(), cfg.jobs, [&](std::size_t i) {
    const std::string id = files[i].stem().string();
    ImageBuffer img;
    try {
      img = load_image(files[i]);
    } catch (const DataError& e) {
      log::warn(std::string("skipping unreadable image: ") + e.what());
      failures[i] = files[i].filename().string();
      return;
    }
    auto& row = slots[i];
    row.resize(n_presets);
    for (std::size_t k = 0; k < n_presets; ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      const std::string& name = manifest.presets[k];
      const fs::path out = cfg.output_dir / name / (id + ".png");
      if (k == 0) {
        save_image(img, out);
      } else {
        const auto& preset = cfg.presets[k - 1];
        save_image(apply(preset, img, derive_seed(cfg.global_seed, id, preset.name), assets), out);
      }
      row[k] = InjectEntry{name, id, out, detail::seconds_since(t0)};
    }
  });

  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!failures[i].empty()) {
      manifest.failed_images.push_back(failures[i]);
    } else {
      manifest.image_ids.push_back(files[i].stem().string());
    }
  }
  if (manifest.image_ids.empty()) {
    throw AllWorkFailed("no input image could be read from '" + cfg.input_dir.string() + "'");
  }
  for (std::size_t k = 0; k < n_presets; ++k) {
    for (std::size_t i = 0; i < files.size(); ++i) {
      if (!slots[i].empty()) manifest.entries.push_back(slots[i][k]);
    }
  }

  std::ofstream tsv(cfg.output_dir / "manifest.tsv", std::ios::binary | std::ios::trunc);
  for (const auto& e : manifest.entries) {
    tsv << e.preset << '\t' << e.image_id << '\t' << e.preset << '/' << e.image_id << ".png\n";
  }
  if (!tsv) throw DataError("cannot write manifest in '" + cfg.output_dir.string() + "'");
  return manifest;
}

// ---------------------------------------------------------------------------
// Evaluation and reports

struct ReportRow {
  std::string preset_name;
  std::string family;
  int n_images = 0;
  std::string status = "ok";  // ok | failed
  std::optional<double> ap;
  std::optional<double> ap_clean_delta;  // ap_clean - ap
  double wall_time = 0.0;                // seconds

  bool within_tolerance() const {
    return ap_clean_delta && std::abs(*ap_clean_delta) < kTolerancePoints;
  }
};

inline std::string family_label(const std::string& preset_name) {
  if (preset_name == kCleanName) return "Clean";
  return std::string(family_name(resolve_preset(preset_name).family));
}

/// Runs the detector (if configured) and scores every preset plus CLEAN.
/// A detector failure marks that row failed and the campaign continues.
inline std::vector<ReportRow> run_evaluate(const CampaignConfig& cfg,
                                           const InjectManifest& manifest) {
  if (!cfg.gt_dir) throw UsageError("evaluation needs gt_dir");
  eval::EvalOptions opts;
  opts.class_name = cfg.class_name;
  opts.difficulty = cfg.difficulty;
  opts.iou_threshold = cfg.iou_threshold;

  std::vector<ReportRow> rows;
  for (const auto& preset : manifest.presets) {
    const auto t0 = std::chrono::steady_clock::now();
    ReportRow row;
    row.preset_name = preset;
    row.family = family_label(preset);
    row.n_images = static_cast<int>(manifest.image_ids.size());
    const fs::path det_dir = cfg.detection_root() / preset;

    if (cfg.detector_command) {
      fs::create_directories(det_dir);
      std::vector<int> status(manifest.image_ids.size(), 0);
      detail::parallel_for(manifest.image_ids.size(), cfg.jobs, [&](std::size_t i) {
        const std::string& id = manifest.image_ids[i];
        const std::map<std::string, std::string> values = {
            {"image", (cfg.output_dir / preset / (id + ".png")).string()},
            {"output", (det_dir / (id + ".txt")).string()},
            {"id", id},
            {"preset", preset},
            {"clean", (cfg.output_dir / kCleanName / (id + ".png")).string()},
            {"gt", (*cfg.gt_dir / (id + ".txt")).string()},
        };
        const std::string cmd = detail::expand_template(*cfg.detector_command, values);
        const int rc = std::system(cmd.c_str());
        status[i] = (rc == -1 || !WIFEXITED(rc)) ? -1 : WEXITSTATUS(rc);
      });
      const auto bad = std::find_if(status.begin(), status.end(), [](int s) { return s != 0; });
      if (bad != status.end()) {
        log::warn("detector failed on preset " + preset + " (image " +
                  manifest.image_ids[static_cast<std::size_t>(bad - status.begin())] +
                  ", status " + std::to_string(*bad) + ")");
        row.status = "failed";
      }
    }
    if (row.status == "ok") {
      row.ap = eval::evaluate_images(*cfg.gt_dir, det_dir, manifest.image_ids, opts).ap;
    }
    row.wall_time = detail::seconds_since(t0);
    for (const auto& e : manifest.entries) {
      if (e.preset == preset) row.wall_time += e.seconds;
    }
    rows.push_back(std::move(row));
  }

  std::optional<double> clean_ap;
  for (const auto& r : rows) {
    if (r.preset_name == kCleanName) clean_ap = r.ap;
  }
  for (auto& r : rows) {
    if (clean_ap && r.ap) r.ap_clean_delta = *clean_ap - *r.ap;
  }
  return rows;
}

/// Rows for an injection-only run (no AP).
inline std::vector<ReportRow> rows_without_evaluation(const InjectManifest& manifest) {
  std::vector<ReportRow> rows;
  for (const auto& preset : manifest.presets) {
    ReportRow row;
    row.preset_name = preset;
    row.family = family_label(preset);
    row.n_images = static_cast<int>(manifest.image_ids.size());
    for (const auto& e : manifest.entries) {
      if (e.preset == preset) row.wall_time += e.seconds;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct FamilySummary {
  std::string family;
  int n_rows = 0;  // rows with an AP
  double min_ap = 0.0;
  double max_ap = 0.0;
  double avg_ap = 0.0;
  std::vector<std::string> within_tolerance;  // presets within 5 points of clean
};

/// Per-family min/max/avg AP in first-appearance order. The CLEAN row and
/// rows without an AP are left out.
inline std::vector<FamilySummary> summarize(const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw UsageError("summarize: no rows");
  std::vector<FamilySummary> out;
  for (const auto& r : rows) {
    if (r.preset_name == kCleanName || !r.ap) continue;
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const FamilySummary& s) { return s.family == r.family; });
    if (it == out.end()) {
      out.push_back(FamilySummary{r.family, 0, *r.ap, *r.ap, 0.0, {}});
      it = out.end() - 1;
    }
    it->n_rows += 1;
    it->min_ap = std::min(it->min_ap, *r.ap);
    it->max_ap = std::max(it->max_ap, *r.ap);
    it->avg_ap += *r.ap;
    if (r.within_tolerance()) it->within_tolerance.push_back(r.preset_name);
  }
  for (auto& s : out) s.avg_ap /= s.n_rows;
  return out;
}

struct ReportMeta {
  std::uint64_t global_seed = 0;
  std::string class_name = "Car";
  std::string difficulty = "moderate";
  double iou_threshold = eval::kDefaultIouThreshold;
};

inline ReportMeta report_meta(const CampaignConfig& cfg) {
  return ReportMeta{cfg.global_seed, cfg.class_name, cfg.difficulty.name, cfg.iou_threshold};
}

inline constexpr std::string_view kCsvHeader =
    "preset,family,n_images,status,ap,ap_clean_delta,within_5pp,wall_time_s,tool_version,rng,"
    "global_seed";

inline std::string format_csv(const std::vector<ReportRow>& rows, const ReportMeta& meta) {
  std::string out(kCsvHeader);
  out += '\n';
  char buf[64];
  for (const auto& r : rows) {
    out += r.preset_name + ',' + r.family + ',' + std::to_string(r.n_images) + ',' + r.status + ',';
    if (r.ap) {
      std::snprintf(buf, sizeof buf, "%.6f", *r.ap);
      out += buf;
    }
    out += ',';
    if (r.ap_clean_delta) {
      std::snprintf(buf, sizeof buf, "%.6f", *r.ap_clean_delta);
      out += buf;
    }
    out += ',';
    if (r.ap_clean_delta) out += r.within_tolerance() ? "yes" : "no";
    std::snprintf(buf, sizeof buf, ",%.3f,", r.wall_time);
    out += buf;
    out += std::string(kVersion) + ',' + std::string(kRngName) + ',' +
           std::to_string(meta.global_seed) + '\n';
  }
  return out;
}

inline std::string format_summary_csv(const std::vector<FamilySummary>& families) {
  std::string out = "family,n_rows,min_ap,max_ap,avg_ap,n_within_5pp\n";
  char buf[160];
  for (const auto& f : families) {
    std::snprintf(buf, sizeof buf, "%s,%d,%.6f,%.6f,%.6f,%zu\n", f.family.c_str(), f.n_rows,
                  f.min_ap, f.max_ap, f.avg_ap, f.within_tolerance.size());
    out += buf;
  }
  return out;
}

inline nlohmann::ordered_json to_json(const std::vector<ReportRow>& rows, const ReportMeta& meta) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["tool_version"] = std::string(kVersion);
  doc["rng"] = std::string(kRngName);
  doc["global_seed"] = meta.global_seed;
  doc["class"] = meta.class_name;
  doc["difficulty"] = meta.difficulty;
  doc["iou_threshold"] = meta.iou_threshold;
  doc["recall_levels"] = eval::kRecallLevels;
  ordered_json jrows = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json j;
    j["preset"] = r.preset_name;
    j["family"] = r.family;
    j["n_images"] = r.n_images;
    j["status"] = r.status;
    j["ap"] = r.ap ? ordered_json(*r.ap) : ordered_json(nullptr);
    j["ap_clean_delta"] = r.ap_clean_delta ? ordered_json(*r.ap_clean_delta) : ordered_json(nullptr);
    j["within_5pp"] = r.ap_clean_delta ? ordered_json(r.within_tolerance()) : ordered_json(nullptr);
    j["wall_time_s"] = r.wall_time;
    jrows.push_back(std::move(j));
  }
  doc["rows"] = std::move(jrows);
  ordered_json fams = ordered_json::array();
  if (std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.ap.has_value(); })) {
    for (const auto& f : summarize(rows)) {
      ordered_json j;
      j["family"] = f.family;
      j["n_rows"] = f.n_rows;
      j["min_ap"] = f.min_ap;
      j["max_ap"] = f.max_ap;
      j["avg_ap"] = f.avg_ap;
      j["within_5pp"] = f.within_tolerance;
      fams.push_back(std::move(j));
    }
  }
  doc["families"] = std::move(fams);
  return doc;
}

inline void emit_report(const std::vector<ReportRow>& rows, std::string_view format,
                        const fs::path& path, const ReportMeta& meta = {}) {
  std::string text;
  if (format == "csv") {
    text = format_csv(rows, meta);
  } else if (format == "json") {
    text = to_json(rows, meta).dump(2) + "\n";
  } else {
    throw UsageError("unknown report format '" + std::string(format) + "'");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write report '" + path.string() + "'");
  out << text;
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

struct CampaignResult {
  InjectManifest manifest;
  std::vector<ReportRow> rows;
};

/// inject -> (detector) -> evaluate -> reports. Throws AllWorkFailed when no
/// image could be read, or when evaluation was configured and every row
/// failed.
inline CampaignResult run_campaign(const CampaignConfig& cfg) {
  CampaignResult result;
  result.manifest = run_inject(cfg);
  result.rows = cfg.evaluation_enabled() ? run_evaluate(cfg, result.manifest)
                                         : rows_without_evaluation(result.manifest);
  const ReportMeta meta = report_meta(cfg);
  for (const auto& f : cfg.report_formats) {
    emit_report(result.rows, f, cfg.output_dir / ("report." + f), meta);
  }
  if (cfg.evaluation_enabled()) {
    std::ofstream out(cfg.output_dir / "summary.csv", std::ios::binary | std::ios::trunc);
    out << format_summary_csv(summarize(result.rows));
    const bool all_failed = std::all_of(result.rows.begin(), result.rows.end(),
                                        [](const ReportRow& r) { return r.status == "failed"; });
    if (all_failed) throw AllWorkFailed("every evaluation row failed");
  }
  return result;
}

}  // namespace camfail::campaign
