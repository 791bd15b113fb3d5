// Copyright 2026 The camforge Authors.
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

#ifndef CAMFORGE_EVALUATE_HPP_
#define CAMFORGE_EVALUATE_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "camforge/error.hpp"
#include "camforge/io.hpp"
#include "camforge/localize.hpp"

namespace camforge::evaluate {

struct Prediction {
  std::string image_id;
  std::vector<std::size_t> ranked_classes;  // descending score
  std::map<std::size_t, BoundingBox> box_per_class;
};

struct GroundTruth {
  std::string image_id;
  std::size_t class_index = 0;
  std::vector<BoundingBox> boxes;
};

/// Localization counts as correct only strictly above this IoU.
inline constexpr double kIouThreshold = 0.5;

inline double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double ih = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

inline double best_iou(const BoundingBox& box, const GroundTruth& gt) {
  double best = 0.0;
  for (const auto& g : gt.boxes) best = std::max(best, iou(box, g));
  return best;
}

struct Outcome {
  bool correct = false;
  /// The matched class had no predicted box.
  bool missing_box = false;
};

/// Right class within the top k and its box overlaps some ground-truth box
/// with IoU > 0.5.
inline Outcome loc_correct(const Prediction& pred, const GroundTruth& gt, std::size_t k) {
  if (pred.image_id != gt.image_id) detail::fail("evaluate", Errc::invalid_argument, "image ids differ");
  const std::size_t depth = std::min(k, pred.ranked_classes.size());
  for (std::size_t r = 0; r < depth; ++r) {
    if (pred.ranked_classes[r] != gt.class_index) continue;
    auto it = pred.box_per_class.find(gt.class_index);
    if (it == pred.box_per_class.end()) return {false, true};
    return {best_iou(it->second, gt) > kIouThreshold, false};
  }
  return {};
}

/// Class-agnostic box check.
inline bool gt_known_correct(const BoundingBox& pred_box, const GroundTruth& gt) {
  return best_iou(pred_box, gt) > kIouThreshold;
}

inline bool cls_correct(const Prediction& pred, const GroundTruth& gt, std::size_t k) {
  const std::size_t depth = std::min(k, pred.ranked_classes.size());
  return std::find(pred.ranked_classes.begin(), pred.ranked_classes.begin() + static_cast<std::ptrdiff_t>(depth),
                   gt.class_index) != pred.ranked_classes.begin() + static_cast<std::ptrdiff_t>(depth);
}

/// Per-image correctness flags.
struct EvalRecord {
  std::string image_id;
  bool top1_loc = false;
  bool top5_loc = false;
  bool gt_known = false;
  bool top1_cls = false;
  bool top5_cls = false;
  bool missing_box = false;
};

inline EvalRecord evaluate_one(const Prediction& pred, const GroundTruth& gt) {
  EvalRecord rec;
  rec.image_id = gt.image_id;
  const Outcome t1 = loc_correct(pred, gt, 1);
  const Outcome t5 = loc_correct(pred, gt, 5);
  rec.top1_loc = t1.correct;
  rec.top5_loc = t5.correct;
  rec.top1_cls = cls_correct(pred, gt, 1);
  rec.top5_cls = cls_correct(pred, gt, 5);
  auto it = pred.box_per_class.find(gt.class_index);
  if (it == pred.box_per_class.end()) {
    rec.missing_box = true;
  } else {
    rec.gt_known = gt_known_correct(it->second, gt);
  }
  rec.missing_box = rec.missing_box || t1.missing_box || t5.missing_box;
  return rec;
}

struct Report {
  double top1_loc_err = 0.0;
  double top5_loc_err = 0.0;
  double gt_known_err = 0.0;
  double top1_cls_err = 0.0;
  double top5_cls_err = 0.0;
  std::size_t n = 0;
  std::vector<std::string> missing_box_ids;  // sorted
};

/// 100 * (1 - correct / n), rounded to 2 decimals.
inline double error_percent(std::size_t correct, std::size_t n) {
  if (n == 0) return 0.0;
  const double raw = 100.0 * (1.0 - static_cast<double>(correct) / static_cast<double>(n));
  return std::round(raw * 100.0) / 100.0;
}

inline Report aggregate(const std::vector<EvalRecord>& records) {
  Report rep;
  rep.n = records.size();
  std::size_t t1 = 0, t5 = 0, gk = 0, c1 = 0, c5 = 0;
  for (const auto& r : records) {
    t1 += r.top1_loc;
    t5 += r.top5_loc;
    gk += r.gt_known;
    c1 += r.top1_cls;
    c5 += r.top5_cls;
    if (r.missing_box) rep.missing_box_ids.push_back(r.image_id);
  }
  std::sort(rep.missing_box_ids.begin(), rep.missing_box_ids.end());
  rep.top1_loc_err = error_percent(t1, rep.n);
  rep.top5_loc_err = error_percent(t5, rep.n);
  rep.gt_known_err = error_percent(gk, rep.n);
  rep.top1_cls_err = error_percent(c1, rep.n);
  rep.top5_cls_err = error_percent(c5, rep.n);
  return rep;
}

/// Matches predictions to ground truth by image id and aggregates. Every id
/// must appear exactly once on each side.
inline Report evaluate(const std::vector<Prediction>& preds, const std::vector<GroundTruth>& gts) {
  std::map<std::string, const GroundTruth*> gt_by_id;
  for (const auto& g : gts) {
    if (!gt_by_id.emplace(g.image_id, &g).second) {
      detail::fail("evaluate", Errc::parse_error, "duplicate ground truth for " + g.image_id);
    }
  }
  std::set<std::string> seen;
  std::vector<std::string> unmatched;
  std::vector<EvalRecord> records;
  records.reserve(preds.size());
  for (const auto& p : preds) {
    auto it = gt_by_id.find(p.image_id);
    if (it == gt_by_id.end() || !seen.insert(p.image_id).second) {
      unmatched.push_back(p.image_id);
      continue;
    }
    records.push_back(evaluate_one(p, *it->second));
  }
  for (const auto& [id, g] : gt_by_id) {
    if (!seen.count(id)) unmatched.push_back(id);
  }
  if (!unmatched.empty()) {
    std::sort(unmatched.begin(), unmatched.end());
    std::string list;
    for (const auto& id : unmatched) list += (list.empty() ? "" : ", ") + id;
    detail::fail("evaluate", Errc::unmatched_ids, "unmatched image ids: " + list);
  }
  return aggregate(records);
}

// ---------------------------------------------------------------------------
// File formats

namespace detail {

using camforge::detail::fail;

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = line.find(sep, start);
    out.push_back(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view s, std::size_t line_no) {
  s = trim(s);
  T v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    fail("evaluate", Errc::parse_error, "line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

inline BoundingBox checked_box(double x0, double y0, double x1, double y1, std::size_t line_no) {
  BoundingBox b{x0, y0, x1, y1};
  if (!b.valid() || !std::isfinite(b.area())) {
    fail("evaluate", Errc::parse_error, "line " + std::to_string(line_no) + ": degenerate box");
  }
  return b;
}

}  // namespace detail

/// CSV rows `image_id,class_index,x0,y0,x1,y1`; an image may span several
/// rows (one per box). An optional header row starting with `image_id` is
/// skipped. Output is in first-appearance order.
inline std::vector<GroundTruth> parse_ground_truth_csv(std::string_view text) {
  std::vector<GroundTruth> out;
  std::map<std::string, std::size_t> index;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto fields = detail::split(trimmed, ',');
    if (line_no == 1 && detail::trim(fields[0]) == "image_id") continue;
    if (fields.size() != 6) {
      detail::fail("evaluate", Errc::parse_error, "line " + std::to_string(line_no) + ": expected 6 fields");
    }
    const std::string id(detail::trim(fields[0]));
    const auto cls = detail::parse_number<std::size_t>(fields[1], line_no);
    const BoundingBox box = detail::checked_box(
        detail::parse_number<double>(fields[2], line_no), detail::parse_number<double>(fields[3], line_no),
        detail::parse_number<double>(fields[4], line_no), detail::parse_number<double>(fields[5], line_no), line_no);
    auto [it, inserted] = index.emplace(id, out.size());
    if (inserted) {
      out.push_back({id, cls, {box}});
    } else {
      auto& g = out[it->second];
      if (g.class_index != cls) {
        detail::fail("evaluate", Errc::parse_error, "line " + std::to_string(line_no) + ": conflicting class for " + id);
      }
      g.boxes.push_back(box);
    }
  }
  return out;
}

inline std::string ground_truth_csv(const std::vector<GroundTruth>& gts) {
  std::string out = "image_id,class_index,x0,y0,x1,y1\n";
  for (const auto& g : gts) {
    for (const auto& b : g.boxes) {
      out += g.image_id + ',' + std::to_string(g.class_index) + ',' + io::format_double(b.x0) + ',' +
             io::format_double(b.y0) + ',' + io::format_double(b.x1) + ',' + io::format_double(b.y1) + '\n';
    }
  }
  return out;
}

inline nlohmann::json box_to_json(const BoundingBox& b) { return nlohmann::json::array({b.x0, b.y0, b.x1, b.y1}); }

inline nlohmann::json prediction_to_json(const Prediction& p) {
  nlohmann::json boxes = nlohmann::json::object();
  for (const auto& [cls, box] : p.box_per_class) boxes[std::to_string(cls)] = box_to_json(box);
  return {{"image_id", p.image_id}, {"classes", p.ranked_classes}, {"boxes", boxes}};
}

/// JSON lines: {"image_id": ..., "classes": [...], "boxes": {"<class>": [x0, y0, x1, y1]}}.
inline std::vector<Prediction> parse_predictions_jsonl(std::string_view text) {
  std::vector<Prediction> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    try {
      const auto j = nlohmann::json::parse(line);
      Prediction p;
      p.image_id = j.at("image_id").get<std::string>();
      p.ranked_classes = j.at("classes").get<std::vector<std::size_t>>();
      if (p.ranked_classes.empty()) detail::fail("evaluate", Errc::parse_error, where + "no classes");
      std::set<std::size_t> distinct(p.ranked_classes.begin(), p.ranked_classes.end());
      if (distinct.size() != p.ranked_classes.size()) {
        detail::fail("evaluate", Errc::parse_error, where + "ranked classes are not distinct");
      }
      if (j.contains("boxes")) {
        for (const auto& [key, value] : j.at("boxes").items()) {
          const auto cls = detail::parse_number<std::size_t>(key, line_no);
          const auto c = value.get<std::vector<double>>();
          if (c.size() != 4) detail::fail("evaluate", Errc::parse_error, where + "box needs 4 coordinates");
          p.box_per_class[cls] = detail::checked_box(c[0], c[1], c[2], c[3], line_no);
        }
      }
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      detail::fail("evaluate", Errc::parse_error, where + e.what());
    }
  }
  return out;
}

inline nlohmann::json report_to_json(const Report& r) {
  return {{"top1_loc_err", r.top1_loc_err}, {"top5_loc_err", r.top5_loc_err}, {"gt_known_err", r.gt_known_err},
          {"top1_cls_err", r.top1_cls_err}, {"top5_cls_err", r.top5_cls_err}, {"n", r.n},
          {"missing_box", r.missing_box_ids}};
}

inline std::string report_table(const Report& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "metric          error(%%)\n"
                "top1_loc_err    %8.2f\n"
                "top5_loc_err    %8.2f\n"
                "gt_known_err    %8.2f\n"
                "top1_cls_err    %8.2f\n"
                "top5_cls_err    %8.2f\n"
                "n               %8zu\n",
                r.top1_loc_err, r.top5_loc_err, r.gt_known_err, r.top1_cls_err, r.top5_cls_err, r.n);
  std::string out = buf;
  if (!r.missing_box_ids.empty()) out += "missing_box     " + std::to_string(r.missing_box_ids.size()) + "\n";
  return out;
}

}  // namespace camforge::evaluate

#endif  // CAMFORGE_EVALUATE_HPP_
