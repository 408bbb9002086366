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

// 2D detection scoring: IoU, difficulty filtering, greedy matching, pooled
// precision/recall and 40-point interpolated average precision.
//
// The pipeline per class is
//
//   filter_difficulty -> match_detections (per image) -> pr_curve (pooled)
//   -> ap40
//
// AP is the mean over r in {1/40, 2/40, ..., 1} of the interpolated
// precision p(r) = max{precision_i : recall_i >= r}, 0 when no sample
// reaches r.

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "camfail/error.hpp"
#include "camfail/kitti.hpp"

namespace camfail::eval {

using kitti::Bbox2D;

inline constexpr int kRecallLevels = 40;
inline constexpr double kDefaultIouThreshold = 0.7;
// Slack on the inclusive IoU gate so that an overlap of exactly 0.70 written
// with decimal coordinates is not lost to rounding.
inline constexpr double kIouGateSlack = 1e-12;

inline double iou(const Bbox2D& a, const Bbox2D& b) {
  const double iw = std::min(a.right, b.right) - std::max(a.left, b.left);
  const double ih = std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

// ---------------------------------------------------------------------------
// Difficulty

struct DifficultyFilter {
  std::string name;
  double min_bbox_height = 0.0;  // pixels
  int max_occlusion = 3;
  double max_truncation = 1.0;
};

inline DifficultyFilter easy() { return {"easy", 40.0, 0, 0.15}; }
inline DifficultyFilter moderate() { return {"moderate", 25.0, 1, 0.30}; }
inline DifficultyFilter hard() { return {"hard", 25.0, 2, 0.50}; }

inline DifficultyFilter parse_difficulty(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "easy") return easy();
  if (lower == "moderate") return moderate();
  if (lower == "hard") return hard();
  throw UsageError("unknown difficulty '" + std::string(name) +
                   "' (expected easy, moderate or hard)");
}

struct FilteredGroundTruth {
  std::vector<Bbox2D> eligible;
  std::vector<Bbox2D> ignored;
};

// Classes the devkit treats as "close enough" to the evaluated class: their
// boxes neither count as misses nor punish detections.
inline bool is_neighbor_class(std::string_view evaluated, std::string_view type) {
  return (evaluated == "Car" && type == "Van") ||
         (evaluated == "Pedestrian" && type == "Person_sitting");
}

inline FilteredGroundTruth filter_difficulty(std::span<const kitti::GroundTruthObject> gts,
                                             std::string_view class_name,
                                             const DifficultyFilter& filter) {
  if (filter.min_bbox_height < 0.0 || filter.max_truncation < 0.0) {
    throw UsageError("difficulty thresholds must be non-negative");
  }
  FilteredGroundTruth out;
  for (const auto& gt : gts) {
    if (gt.type == "DontCare" || is_neighbor_class(class_name, gt.type)) {
      out.ignored.push_back(gt.bbox);
    } else if (gt.type == class_name) {
      const bool ok = gt.bbox.height() >= filter.min_bbox_height &&
                      gt.occlusion <= filter.max_occlusion &&
                      gt.truncation <= filter.max_truncation;
      (ok ? out.eligible : out.ignored).push_back(gt.bbox);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matching

enum class Outcome { TruePositive, FalsePositive, Ignored };

struct ScoredBox {
  Bbox2D box;
  double score = 0.0;
};

struct MatchedDetection {
  std::size_t index = 0;  // position in the input detection list
  double score = 0.0;
  Outcome outcome = Outcome::FalsePositive;
  int gt_index = -1;  // matched eligible GT for true positives
};

struct MatchResult {
  std::vector<MatchedDetection> detections;  // in processing order
  int n_eligible = 0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

/// Greedy one-to-one matching of one image's detections.
///
/// Detections are visited by descending score (ties keep input order). Each
/// takes the unmatched eligible GT with the highest IoU if that IoU reaches
/// the threshold; otherwise a detection overlapping an ignored region at the
/// threshold is discarded; anything else is a false positive.
inline MatchResult match_detections(std::span<const ScoredBox> dets,
                                    const FilteredGroundTruth& gts,
                                    double iou_threshold = kDefaultIouThreshold) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw UsageError("IoU threshold must be in (0, 1]");
  }
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });

  MatchResult result;
  result.n_eligible = static_cast<int>(gts.eligible.size());
  std::vector<bool> taken(gts.eligible.size(), false);
  for (std::size_t idx : order) {
    const ScoredBox& det = dets[idx];
    MatchedDetection m{idx, det.score, Outcome::FalsePositive, -1};
    double best = -1.0;
    for (std::size_t g = 0; g < gts.eligible.size(); ++g) {
      if (taken[g]) continue;
      const double o = iou(det.box, gts.eligible[g]);
      if (o > best) {
        best = o;
        m.gt_index = static_cast<int>(g);
      }
    }
    if (m.gt_index >= 0 && best + kIouGateSlack >= iou_threshold) {
      m.outcome = Outcome::TruePositive;
      taken[static_cast<std::size_t>(m.gt_index)] = true;
      ++result.tp;
    } else {
      m.gt_index = -1;
      const bool absorbed = std::any_of(gts.ignored.begin(), gts.ignored.end(), [&](const Bbox2D& g) {
        return iou(det.box, g) + kIouGateSlack >= iou_threshold;
      });
      if (absorbed) {
        m.outcome = Outcome::Ignored;
      } else {
        ++result.fp;
      }
    }
    result.detections.push_back(m);
  }
  result.fn = result.n_eligible - result.tp;
  return result;
}

inline MatchResult match_detections(std::span<const kitti::Detection> dets,
                                    const FilteredGroundTruth& gts,
                                    double iou_threshold = kDefaultIouThreshold) {
  std::vector<ScoredBox> boxes;
  boxes.reserve(dets.size());
  for (const auto& d : dets) boxes.push_back({d.bbox, d.score});
  return match_detections(std::span<const ScoredBox>(boxes), gts, iou_threshold);
}

// ---------------------------------------------------------------------------
// Precision / recall

struct PrPoint {
  double score = 0.0;  // cut: detections with score >= this are kept
  double recall = 0.0;
  double precision = 0.0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

struct PrCurve {
  std::vector<PrPoint> points;  // one per distinct score, descending
  int n_gt = 0;
  int n_det = 0;  // scored detections (ignored ones excluded)
};

/// Pools per-image matches into one sweep over descending score. Tied scores
/// form a single cut.
inline PrCurve pr_curve(std::span<const MatchResult> images) {
  PrCurve curve;
  std::vector<std::pair<double, bool>> pooled;  // (score, is_tp)
  for (const auto& img : images) {
    curve.n_gt += img.n_eligible;
    for (const auto& d : img.detections) {
      if (d.outcome == Outcome::Ignored) continue;
      pooled.emplace_back(d.score, d.outcome == Outcome::TruePositive);
    }
  }
  if (curve.n_gt == 0) {
    throw DataError("no eligible ground truth objects: AP is undefined");
  }
  curve.n_det = static_cast<int>(pooled.size());
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  int tp = 0;
  int fp = 0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    (pooled[i].second ? tp : fp) += 1;
    if (i + 1 < pooled.size() && pooled[i + 1].first == pooled[i].first) continue;
    PrPoint p;
    p.score = pooled[i].first;
    p.tp = tp;
    p.fp = fp;
    p.fn = curve.n_gt - tp;
    p.recall = static_cast<double>(tp) / curve.n_gt;
    p.precision = static_cast<double>(tp) / (tp + fp);
    curve.points.push_back(p);
  }
  return curve;
}

struct ApResult {
  double ap = 0.0;
  std::array<double, kRecallLevels> recall_levels{};
  std::array<double, kRecallLevels> interpolated_precision{};
  int n_gt = 0;
  int n_det = 0;
};

inline ApResult ap40(const PrCurve& curve) {
  ApResult r;
  r.n_gt = curve.n_gt;
  r.n_det = curve.n_det;
  // Suffix maxima of precision along the sweep; recall is non-decreasing so
  // the first sample reaching a level starts the eligible suffix.
  std::vector<double> suffix_max(curve.points.size() + 1, 0.0);
  for (std::size_t i = curve.points.size(); i-- > 0;) {
    suffix_max[i] = std::max(suffix_max[i + 1], curve.points[i].precision);
  }
  double sum = 0.0;
  std::size_t first = 0;
  for (int level = 1; level <= kRecallLevels; ++level) {
    const double r_level = static_cast<double>(level) / kRecallLevels;
    while (first < curve.points.size() && curve.points[first].recall < r_level) ++first;
    r.recall_levels[level - 1] = r_level;
    r.interpolated_precision[level - 1] = suffix_max[first];
    sum += suffix_max[first];
  }
  r.ap = sum / kRecallLevels;
  return r;
}

// ---------------------------------------------------------------------------
// Dataset evaluation

struct EvalOptions {
  std::string class_name = "Car";
  DifficultyFilter difficulty = moderate();
  double iou_threshold = kDefaultIouThreshold;
  kitti::DetectionFormat det_format = kitti::DetectionFormat::Kitti;
};

/// Evaluates the listed image ids. GT files must exist; a missing detection
/// file counts as zero detections for that image.
inline ApResult evaluate_images(const std::filesystem::path& gt_dir,
                                const std::filesystem::path& det_dir,
                                std::span<const std::string> image_ids,
                                const EvalOptions& options = {}) {
  std::vector<MatchResult> matches;
  matches.reserve(image_ids.size());
  for (const auto& id : image_ids) {
    const auto gt_path = gt_dir / (id + ".txt");
    const auto gts = kitti::parse_labels(gt_path);
    const auto filtered = filter_difficulty(gts, options.class_name, options.difficulty);
    std::vector<kitti::Detection> dets;
    const auto det_path = det_dir / (id + ".txt");
    std::error_code ec;
    if (std::filesystem::is_regular_file(det_path, ec)) {
      for (auto& d : kitti::parse_detections(det_path, options.det_format)) {
        if (d.type == options.class_name) dets.push_back(std::move(d));
      }
    }
    matches.push_back(match_detections(std::span<const kitti::Detection>(dets), filtered,
                                       options.iou_threshold));
  }
  return ap40(pr_curve(matches));
}

/// Sorted ids (file stems) of every `*.txt` in a label directory.
inline std::vector<std::string> list_label_ids(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw DataError("label directory '" + dir.string() + "' does not exist");
  }
  std::vector<std::string> ids;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      ids.push_back(entry.path().stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

inline ApResult evaluate_dataset(const std::filesystem::path& gt_dir,
                                 const std::filesystem::path& det_dir,
                                 const EvalOptions& options = {}) {
  const auto ids = list_label_ids(gt_dir);
  return evaluate_images(gt_dir, det_dir, ids, options);
}

}  // namespace camfail::eval
