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

// KITTI object label files.
//
// Ground truth, one object per line, 15 whitespace-separated fields:
//
//   type truncated occluded alpha left top right bottom h w l x y z rotation_y
//
// Detection results append a 16th field, the confidence score. A compact
// 6-field detection form `type left top right bottom score` is accepted when
// requested explicitly.
//
// Reading accepts LF and CRLF endings and skips blank lines. Boxes with
// left >= right or top >= bottom are dropped with a warning. Writing uses LF,
// two decimals for every real field except the score, which gets six.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "camfail/error.hpp"

namespace camfail::kitti {

struct Bbox2D {
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;

  double width() const { return right - left; }
  double height() const { return bottom - top; }
  double area() const { return width() * height(); }
  bool valid() const { return left < right && top < bottom; }

  friend bool operator==(const Bbox2D&, const Bbox2D&) = default;
};

// Placeholder values the devkit uses for unknown 3D fields.
inline constexpr double kUnknownTruncation = -1.0;
inline constexpr int kUnknownOcclusion = -1;
inline constexpr double kUnknownAngle = -10.0;
inline constexpr double kUnknownDimension = -1.0;
inline constexpr double kUnknownLocation = -1000.0;

struct GroundTruthObject {
  std::string type;
  double truncation = 0.0;  // [0, 1], or -1 when unknown (DontCare)
  int occlusion = 0;        // 0..3, or -1 when unknown (DontCare)
  double alpha = kUnknownAngle;
  Bbox2D bbox;
  double height = kUnknownDimension;
  double width = kUnknownDimension;
  double length = kUnknownDimension;
  double x = kUnknownLocation;
  double y = kUnknownLocation;
  double z = kUnknownLocation;
  double rotation_y = kUnknownAngle;

  friend bool operator==(const GroundTruthObject&, const GroundTruthObject&) = default;
};

struct Detection {
  std::string type;
  Bbox2D bbox;
  double score = 0.0;
  double truncation = kUnknownTruncation;
  int occlusion = kUnknownOcclusion;
  double alpha = kUnknownAngle;
  double height = kUnknownDimension;
  double width = kUnknownDimension;
  double length = kUnknownDimension;
  double x = kUnknownLocation;
  double y = kUnknownLocation;
  double z = kUnknownLocation;
  double rotation_y = kUnknownAngle;

  friend bool operator==(const Detection&, const Detection&) = default;
};

enum class DetectionFormat {
  Kitti,    // 16 fields
  Compact,  // type left top right bottom score
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

class LineReader {
 public:
  LineReader(std::string source, int line) : source_(std::move(source)), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(source_ + ":" + std::to_string(line_) + ": " + what);
  }

  double real(std::string_view field, const char* name) const {
    double v = 0.0;
    std::string_view s = field;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      fail(std::string("field '") + name + "' is not numeric: '" + std::string(field) + "'");
    }
    if (!std::isfinite(v)) {
      fail(std::string("field '") + name + "' is not finite: '" + std::string(field) + "'");
    }
    return v;
  }

  int integer(std::string_view field, const char* name) const {
    const double v = real(field, name);
    if (v != std::floor(v)) {
      fail(std::string("field '") + name + "' is not an integer: '" + std::string(field) + "'");
    }
    return static_cast<int>(v);
  }

  std::string where() const { return source_ + ":" + std::to_string(line_); }

 private:
  std::string source_;
  int line_;
};

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) fn(line, line_no);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

inline std::string read_text(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw DataError("cannot open '" + path.string() + "': no such file");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Shared by labels and detections: fields 1..14 of the devkit layout.
template <typename Record>
void parse_common(const LineReader& r, const std::vector<std::string_view>& f, Record& rec) {
  rec.type = std::string(f[0]);
  rec.truncation = r.real(f[1], "truncated");
  rec.occlusion = r.integer(f[2], "occluded");
  rec.alpha = r.real(f[3], "alpha");
  rec.bbox = {r.real(f[4], "left"), r.real(f[5], "top"), r.real(f[6], "right"),
              r.real(f[7], "bottom")};
  rec.height = r.real(f[8], "height");
  rec.width = r.real(f[9], "width");
  rec.length = r.real(f[10], "length");
  rec.x = r.real(f[11], "x");
  rec.y = r.real(f[12], "y");
  rec.z = r.real(f[13], "z");
  rec.rotation_y = r.real(f[14], "rotation_y");
  if (rec.occlusion < -1 || rec.occlusion > 3) {
    r.fail("occluded must be in {0,1,2,3} (or -1), got " + std::to_string(rec.occlusion));
  }
  if (!(rec.truncation == kUnknownTruncation ||
        (rec.truncation >= 0.0 && rec.truncation <= 1.0))) {
    r.fail("truncated must be in [0, 1] (or -1)");
  }
}

inline void warn_degenerate(const LineReader& r, const Bbox2D& b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s: degenerate box (%.2f, %.2f, %.2f, %.2f) skipped",
                r.where().c_str(), b.left, b.top, b.right, b.bottom);
  log::warn(buf);
}

inline void append_fields(std::string& out, const char* type, double truncation,
                          int occlusion, double alpha, const Bbox2D& b, double h,
                          double w, double l, double x, double y, double z, double ry) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%s %.2f %d %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f", type,
                truncation, occlusion, alpha, b.left, b.top, b.right, b.bottom, h, w, l, x, y, z,
                ry);
  out += buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

}  // namespace detail

inline std::vector<GroundTruthObject> parse_labels_text(std::string_view text,
                                                        const std::string& source = "<labels>") {
  std::vector<GroundTruthObject> out;
  detail::for_each_line(text, [&](std::string_view line, int line_no) {
    const detail::LineReader r(source, line_no);
    const auto f = detail::split_fields(line);
    if (f.size() != 15) {
      r.fail("expected 15 fields, found " + std::to_string(f.size()));
    }
    GroundTruthObject obj;
    detail::parse_common(r, f, obj);
    if (!obj.bbox.valid()) {
      detail::warn_degenerate(r, obj.bbox);
      return;
    }
    out.push_back(std::move(obj));
  });
  return out;
}

inline std::vector<GroundTruthObject> parse_labels(const std::filesystem::path& path) {
  return parse_labels_text(detail::read_text(path), path.string());
}

inline std::vector<Detection> parse_detections_text(std::string_view text,
                                                    DetectionFormat format = DetectionFormat::Kitti,
                                                    const std::string& source = "<detections>") {
  std::vector<Detection> out;
  detail::for_each_line(text, [&](std::string_view line, int line_no) {
    const detail::LineReader r(source, line_no);
    const auto f = detail::split_fields(line);
    Detection det;
    if (format == DetectionFormat::Kitti) {
      if (f.size() != 16) r.fail("expected 16 fields, found " + std::to_string(f.size()));
      detail::parse_common(r, f, det);
      det.score = r.real(f[15], "score");
    } else {
      if (f.size() != 6) r.fail("expected 6 fields, found " + std::to_string(f.size()));
      det.type = std::string(f[0]);
      det.bbox = {r.real(f[1], "left"), r.real(f[2], "top"), r.real(f[3], "right"),
                  r.real(f[4], "bottom")};
      det.score = r.real(f[5], "score");
    }
    if (!det.bbox.valid()) {
      detail::warn_degenerate(r, det.bbox);
      return;
    }
    out.push_back(std::move(det));
  });
  return out;
}

inline std::vector<Detection> parse_detections(const std::filesystem::path& path,
                                               DetectionFormat format = DetectionFormat::Kitti) {
  return parse_detections_text(detail::read_text(path), format, path.string());
}

inline std::string format_detections(const std::vector<Detection>& dets) {
  std::string out;
  for (const auto& d : dets) {
    if (!std::isfinite(d.score)) throw UsageError("detection score must be finite");
    detail::append_fields(out, d.type.c_str(), d.truncation, d.occlusion, d.alpha, d.bbox,
                          d.height, d.width, d.length, d.x, d.y, d.z, d.rotation_y);
    char score[64];
    std::snprintf(score, sizeof score, " %.6f\n", d.score);
    out += score;
  }
  return out;
}

inline void write_detections(const std::vector<Detection>& dets,
                             const std::filesystem::path& path) {
  detail::write_text(path, format_detections(dets));
}

inline std::string format_labels(const std::vector<GroundTruthObject>& objects) {
  std::string out;
  for (const auto& o : objects) {
    detail::append_fields(out, o.type.c_str(), o.truncation, o.occlusion, o.alpha, o.bbox,
                          o.height, o.width, o.length, o.x, o.y, o.z, o.rotation_y);
    out += '\n';
  }
  return out;
}

inline void write_labels(const std::vector<GroundTruthObject>& objects,
                         const std::filesystem::path& path) {
  detail::write_text(path, format_labels(objects));
}

}  // namespace camfail::kitti
