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

// camfail command-line interface.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 all work failed.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "camfail/camfail.hpp"

namespace {

using namespace camfail;

int cmd_inject(const std::string& config_path, std::optional<std::uint64_t> seed,
               std::optional<int> jobs) {
  auto cfg = campaign::parse_config(config_path);
  if (seed) cfg.global_seed = *seed;
  if (jobs) cfg.jobs = *jobs;
  const auto manifest = campaign::run_inject(cfg);
  std::printf("wrote %zu images (%zu inputs, %zu presets + CLEAN) to %s\n",
              manifest.output_count(), manifest.image_ids.size(), cfg.presets.size(),
              cfg.output_dir.string().c_str());
  if (!manifest.failed_images.empty()) {
    std::printf("skipped %zu unreadable images\n", manifest.failed_images.size());
  }
  return 0;
}

int cmd_campaign(const std::string& config_path, std::optional<std::uint64_t> seed,
                 std::optional<int> jobs) {
  auto cfg = campaign::parse_config(config_path);
  if (seed) cfg.global_seed = *seed;
  if (jobs) cfg.jobs = *jobs;
  const auto result = campaign::run_campaign(cfg);
  for (const auto& row : result.rows) {
    if (row.ap) {
      std::printf("%-14s %-20s ap=%.6f delta=%+.6f %s\n", row.preset_name.c_str(),
                  row.family.c_str(), *row.ap, row.ap_clean_delta.value_or(0.0),
                  row.status.c_str());
    } else {
      std::printf("%-14s %-20s %s\n", row.preset_name.c_str(), row.family.c_str(),
                  row.status.c_str());
    }
  }
  return 0;
}

int cmd_eval(const std::string& gt, const std::string& det, const std::string& cls, double iou,
             const std::string& difficulty, const std::string& format) {
  eval::EvalOptions opts;
  opts.class_name = cls;
  opts.iou_threshold = iou;
  opts.difficulty = eval::parse_difficulty(difficulty);
  if (format == "kitti") {
    opts.det_format = kitti::DetectionFormat::Kitti;
  } else if (format == "compact") {
    opts.det_format = kitti::DetectionFormat::Compact;
  } else {
    throw UsageError("unknown detection format '" + format + "'");
  }
  const auto ids = eval::list_label_ids(gt);
  const auto r = eval::evaluate_images(gt, det, ids, opts);
  std::printf("class=%s difficulty=%s iou=%s images=%zu gt=%d det=%d ap40=%.6f\n", cls.c_str(),
              opts.difficulty.name.c_str(), format_number(iou).c_str(), ids.size(), r.n_gt,
              r.n_det, r.ap);
  return 0;
}

int cmd_presets_list(const std::optional<std::string>& family, bool extra) {
  std::optional<Family> f;
  if (family) f = parse_family(*family);
  auto emit = [&](const std::vector<FailurePreset>& presets) {
    for (const auto& p : presets) {
      if (!f || p.family == *f) std::cout << format_preset(p) << '\n';
    }
  };
  emit(preset_catalog());
  if (extra) emit(extra_presets());
  return 0;
}

int cmd_taxonomy_show(const std::optional<std::string>& component,
                      const std::optional<std::string>& name, const std::string& format) {
  std::vector<taxonomy::FailureModeRecord> records;
  if (name) {
    records.push_back(taxonomy::lookup(*name));
  } else if (component) {
    records = taxonomy::list_by_component(taxonomy::parse_component(*component));
  } else {
    records = taxonomy::load_registry();
  }
  if (format == "tsv") {
    std::cout << taxonomy::export_tsv(records);
  } else if (format == "report") {
    std::cout << taxonomy::export_report(records);
  } else {
    throw UsageError("unknown taxonomy format '" + format + "'");
  }
  return 0;
}

int cmd_assets_export(const std::string& dir) {
  const auto& lib = AssetLibrary::builtin();
  lib.write_pack(dir);
  std::printf("wrote %zu overlay assets to %s\n", lib.size(), dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"camfail: camera failure injection and detector robustness campaigns"};
  app.set_version_flag("--version", std::string(camfail::kVersion));
  app.require_subcommand(1);

  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;

  auto* inject = app.add_subcommand("inject", "apply presets to every image of a corpus");
  inject->add_option("--config", config, "campaign config file")->required();
  inject->add_option("--seed", seed, "override the global seed");
  inject->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* camp = app.add_subcommand("campaign", "inject, run the detector, evaluate and report");
  camp->add_option("--config", config, "campaign config file")->required();
  camp->add_option("--seed", seed, "override the global seed");
  camp->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  std::string gt, det, cls = "Car", difficulty = "moderate", det_format = "kitti";
  double iou = camfail::eval::kDefaultIouThreshold;
  auto* ev = app.add_subcommand("eval", "AP over 40 recall levels for a detection directory");
  ev->add_option("--gt", gt, "ground-truth label directory")->required();
  ev->add_option("--det", det, "detection directory")->required();
  ev->add_option("--class", cls, "evaluated class");
  ev->add_option("--iou", iou, "IoU threshold in (0, 1]");
  ev->add_option("--difficulty", difficulty, "easy | moderate | hard");
  ev->add_option("--format", det_format, "kitti | compact");

  auto* presets = app.add_subcommand("presets", "failure preset catalog");
  presets->require_subcommand(1);
  std::optional<std::string> family;
  bool extra = false;
  auto* plist = presets->add_subcommand("list", "list presets");
  plist->add_option("--family", family, "only this family");
  plist->add_flag("--extra", extra, "include presets outside the 130-entry catalog");

  auto* tax = app.add_subcommand("taxonomy", "camera failure mode registry");
  tax->require_subcommand(1);
  std::optional<std::string> component, record;
  std::string tax_format = "tsv";
  auto* tshow = tax->add_subcommand("show", "show registry records");
  tshow->add_option("--component", component, "Lens | CameraBody | BayerFilter | ImageSensor | ISP");
  tshow->add_option("--name", record, "a single record");
  tshow->add_option("--format", tax_format, "tsv | report");

  auto* assets = app.add_subcommand("assets", "overlay asset pack");
  assets->require_subcommand(1);
  std::string out_dir;
  auto* aexport = assets->add_subcommand("export", "write the built-in pack");
  aexport->add_option("--out", out_dir, "destination directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*inject) return cmd_inject(config, seed, jobs);
    if (*camp) return cmd_campaign(config, seed, jobs);
    if (*ev) return cmd_eval(gt, det, cls, iou, difficulty, det_format);
    if (*plist) return cmd_presets_list(family, extra);
    if (*tshow) return cmd_taxonomy_show(component, record, tax_format);
    if (*aexport) return cmd_assets_export(out_dir);
  } catch (const camfail::campaign::AllWorkFailed& e) {
    std::fprintf(stderr, "camfail: %s\n", e.what());
    return 3;
  } catch (const camfail::UsageError& e) {
    std::fprintf(stderr, "camfail: %s\n", e.what());
    return 1;
  } catch (const camfail::DataError& e) {
    std::fprintf(stderr, "camfail: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "camfail: %s\n", e.what());
    return 2;
  }
  return 1;
}
