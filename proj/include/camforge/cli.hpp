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

// Command-line front end. Exit codes: 0 success, 1 library/domain error,
// 2 usage error.

#ifndef CAMFORGE_CLI_HPP_
#define CAMFORGE_CLI_HPP_

#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "camforge/cam_core.hpp"
#include "camforge/camt.hpp"
#include "camforge/coaug.hpp"
#include "camforge/confseg.hpp"
#include "camforge/error.hpp"
#include "camforge/evaluate.hpp"
#include "camforge/harness.hpp"
#include "camforge/io.hpp"
#include "camforge/localize.hpp"
#include "camforge/overlay.hpp"
#include "camforge/parallel.hpp"
#include "camforge/pipeline.hpp"
#include "camforge/selftest.hpp"

namespace camforge::cli {

using nlohmann::json;
namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Every option the subcommands accept, with defaults.
struct RunConfig {
  bool json_output = false;

  // localize
  double theta = localize::kDefaultTheta;
  int connectivity = 8;
  std::string image_size;  // "WxH"
  std::string cam_l, cam_f, stack, manifest, predictions_out, overlay, image, gt_box;
  std::optional<std::size_t> class_index;
  std::size_t top_k = 5;

  // confseg
  std::string input, mask_out, binary_out, compare;
  std::optional<int> epoch;
  int total_epochs = 1;
  double ramp_fraction = 1.0;
  double l_cls = 0.0;
  bool detach_target = false;

  // coaug
  double gamma = 1.0, delta = 1.0, epsilon = 1e-8;
  bool sum_over_pairs = false;
  std::uint64_t embed_seed = 0;
  std::size_t embed_dim = 64;
  std::optional<std::size_t> batch_size;
  std::size_t max_categories = coaug::kDefaultMaxCategories;
  std::uint64_t batch_seed = 0;

  // evaluate
  std::string gt_csv, pred_jsonl, report_out;

  // synth
  std::string out_dir;
  std::size_t n_images = 200, n_classes = 5;
  std::string synth_image_size = "64x64", synth_cam_size = "16x16", kind = "rectangle";
  double noise = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::optional<Dims2> parse_size(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) return std::nullopt;
  try {
    std::size_t used_w = 0, used_h = 0;
    const auto w = std::stoul(s.substr(0, x), &used_w);
    const auto h = std::stoul(s.substr(x + 1), &used_h);
    if (used_w != x || used_h != s.size() - x - 1 || w == 0 || h == 0) return std::nullopt;
    return Dims2{h, w};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline CLI::Validator size_validator() {
  return CLI::Validator(
      [](std::string& s) { return parse_size(s) ? std::string{} : "expected WxH with positive integers"; }, "WxH");
}

inline CLI::Validator open_unit_interval() {
  return CLI::Validator(
      [](std::string& s) {
        try {
          const double v = std::stod(s);
          return v > 0.0 && v < 1.0 ? std::string{} : "value must lie in the open interval (0, 1)";
        } catch (const std::exception&) {
          return std::string("not a number");
        }
      },
      "(0,1)");
}

inline std::optional<BoundingBox> parse_box(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      v.push_back(std::stod(part));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (v.size() != 4) return std::nullopt;
  BoundingBox b{v[0], v[1], v[2], v[3]};
  if (!b.valid()) return std::nullopt;
  return b;
}

inline json box_json(const BoundingBox& b) { return evaluate::box_to_json(b); }

struct ManifestEntry {
  std::string image_id;
  fs::path image;
  fs::path cam_l;
  fs::path cam_f;
  std::size_t class_index = 0;
};

/// JSON lines with keys image_id, image, cam (or cam_l), cam_f, class_index.
/// Relative paths resolve against the manifest's directory.
inline std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  const fs::path base = path.parent_path();
  std::istringstream in(io::read_text(path));
  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t line_no = 0;
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      ManifestEntry e;
      e.image_id = j.value("image_id", std::to_string(out.size()));
      if (j.contains("image")) e.image = resolve(j.at("image").get<std::string>());
      const std::string cam = j.contains("cam_l") ? j.at("cam_l").get<std::string>() : j.at("cam").get<std::string>();
      e.cam_l = resolve(cam);
      e.cam_f = j.contains("cam_f") ? resolve(j.at("cam_f").get<std::string>()) : e.cam_l;
      e.class_index = j.value("class_index", std::size_t{0});
      out.push_back(std::move(e));
    } catch (const json::exception& e) {
      camforge::detail::fail("cli", Errc::parse_error,
                             "manifest line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (out.empty()) camforge::detail::fail("cli", Errc::parse_error, "manifest is empty");
  return out;
}

inline ScoreMap pick_slice(const Tensor3& t, const std::optional<std::size_t>& cls) {
  if (t.channels() == 1 && !cls) return slice_class(t, 0);
  if (!cls) camforge::detail::fail("cli", Errc::invalid_argument, "multi-channel CAM needs --class");
  return slice_class(t, *cls);
}

inline void print_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

inline int cmd_confseg(const RunConfig& cfg, std::ostream& out) {
  const ScoreMap s_l = pick_slice(camt::read_tensor(cfg.input), cfg.class_index);
  const auto cm = confseg::confidence_mask(s_l);
  const auto xi = confseg::spg_thresholds(cm);
  json summary = {{"mu1", cm.mu1},
                  {"mu2", cm.mu2},
                  {"xi1", xi.xi1},
                  {"xi2", xi.xi2},
                  {"confident_fraction", cm.confident_fraction()}};
  if (!cfg.mask_out.empty()) camt::write_map(cfg.mask_out, cm.mask);
  if (!cfg.binary_out.empty()) camt::write_map(cfg.binary_out, cm.binary);
  if (!cfg.compare.empty()) {
    const ScoreMap s_f = pick_slice(camt::read_tensor(cfg.compare), cfg.class_index);
    const auto inner = confseg::inner_loss(s_f, s_l, cm.binary, {.detach_target = cfg.detach_target});
    summary["inner_loss"] = inner.loss;
    if (cfg.epoch) {
      const confseg::AlphaSchedule sched(cfg.total_epochs, cfg.ramp_fraction);
      summary["alpha"] = sched.alpha(*cfg.epoch);
      summary["combined_loss"] = confseg::combined_loss(cfg.l_cls, inner.loss, *cfg.epoch, sched);
    }
  }
  print_json(out, summary);
  return kExitOk;
}

inline int cmd_coaug(const RunConfig& cfg, std::ostream& out) {
  auto entries = read_manifest(cfg.manifest);
  if (cfg.batch_size) {
    std::vector<std::size_t> labels;
    for (const auto& e : entries) labels.push_back(e.class_index);
    const auto picked = coaug::make_batch(labels, cfg.max_categories, *cfg.batch_size, cfg.batch_seed);
    std::vector<ManifestEntry> chosen;
    for (auto i : picked) chosen.push_back(entries[i]);
    entries = std::move(chosen);
  }
  for (const auto& e : entries) {
    if (e.image.empty()) camforge::detail::fail("cli", Errc::parse_error, "coaug manifest entries need an image");
  }

  std::vector<Tensor3> images(entries.size()), cams(entries.size());
  parallel_for(entries.size(), [&](std::size_t i) {
    images[i] = camt::read_tensor(entries[i].image);
    cams[i] = camt::read_tensor(entries[i].cam_l);
  });
  const std::size_t channels = images.front().channels();
  for (const auto& im : images) {
    if (im.channels() != channels) camforge::detail::fail("coaug", Errc::dim_mismatch, "images differ in channels");
  }
  const coaug::LinearEmbedder embedder(channels, cfg.embed_seed, cfg.embed_dim);

  coaug::EmbeddingBatch batch;
  batch.params = {cfg.gamma, cfg.delta, cfg.epsilon, !cfg.sum_over_pairs};
  batch.samples.resize(entries.size());
  parallel_for(entries.size(), [&](std::size_t i) {
    const LabelledSample sample{images[i], entries[i].class_index, &cams[i]};
    batch.samples[i] = coaug::embed_sample(embedder, coaug::weight_sample(sample), entries[i].class_index);
  });

  const auto res = coaug::coaug_loss(batch);
  const auto dist = coaug::sample_distances(batch);
  json table = json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    table.push_back({{"index", i},
                     {"image_id", entries[i].image_id},
                     {"class_index", entries[i].class_index},
                     {"d_cam", dist[i].d_cam},
                     {"d_back", dist[i].d_back}});
  }
  print_json(out, {{"loss", res.loss}, {"pairs", res.pairs}, {"samples", table}});
  return kExitOk;
}

inline localize::LocalizeOptions localize_options(const RunConfig& cfg) {
  return {cfg.theta, cfg.connectivity == 4 ? localize::Connectivity::four : localize::Connectivity::eight};
}

inline int cmd_localize_batch(const RunConfig& cfg, std::ostream& out) {
  if (cfg.predictions_out.empty()) {
    camforge::detail::fail("cli", Errc::invalid_argument, "--manifest requires --out");
  }
  const auto entries = read_manifest(cfg.manifest);
  const auto fixed_size = cfg.image_size.empty() ? std::nullopt : parse_size(cfg.image_size);
  std::vector<std::string> lines(entries.size());
  std::vector<std::size_t> fallbacks(entries.size(), 0);
  parallel_for(entries.size(), [&](std::size_t i) {
    const auto& e = entries[i];
    const Tensor3 cam_l = camt::read_tensor(e.cam_l);
    const Tensor3 cam_f = e.cam_f == e.cam_l ? cam_l : camt::read_tensor(e.cam_f);
    Dims2 dims = cam_l.dims().plane();
    if (fixed_size) {
      dims = *fixed_size;
    } else if (!e.image.empty()) {
      dims = camt::read_tensor(e.image).dims().plane();
    }
    const auto pred = pipeline::predict(e.image_id, cam_l, cam_f, dims, cfg.top_k, localize_options(cfg));
    json j = evaluate::prediction_to_json(pred.prediction);
    j["fallback_classes"] = pred.fallback_classes;
    lines[i] = j.dump() + "\n";
    fallbacks[i] = pred.fallback_classes.size();
  });
  std::string text;
  std::size_t fallback_total = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    text += lines[i];
    fallback_total += fallbacks[i];
  }
  io::write_atomic(cfg.predictions_out, text);
  print_json(out, {{"n", entries.size()}, {"fallback_boxes", fallback_total}, {"predictions", cfg.predictions_out}});
  return kExitOk;
}

inline int cmd_localize(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.manifest.empty()) return cmd_localize_batch(cfg, out);

  ScoreMap s_l, s_f;
  if (!cfg.stack.empty()) {
    const Tensor3 stack = camt::read_tensor(cfg.stack);
    if (!cfg.class_index) camforge::detail::fail("cli", Errc::invalid_argument, "--stack requires --class");
    s_l = slice_class(stack, *cfg.class_index);
    s_f = s_l;
  } else {
    if (cfg.cam_l.empty()) camforge::detail::fail("cli", Errc::invalid_argument, "need --cam-l, --stack or --manifest");
    s_l = pick_slice(camt::read_tensor(cfg.cam_l), cfg.class_index);
    s_f = cfg.cam_f.empty() ? s_l : pick_slice(camt::read_tensor(cfg.cam_f), cfg.class_index);
  }

  std::optional<Tensor3> image;
  if (!cfg.image.empty()) image = camt::read_tensor(cfg.image);
  Dims2 dims = s_l.dims();
  if (!cfg.image_size.empty()) {
    dims = *parse_size(cfg.image_size);
  } else if (image) {
    dims = image->dims().plane();
  }

  const auto loc = localize::localize(s_l, s_f, dims, localize_options(cfg));
  json result = {{"box", box_json(loc.box)}, {"fallback_used", loc.fallback_used}};

  if (!cfg.overlay.empty()) {
    if (!image) camforge::detail::fail("cli", Errc::invalid_argument, "--overlay requires --image");
    if (image->dims().plane() != dims) {
      camforge::detail::fail("cli", Errc::dim_mismatch, "--image-size disagrees with --image");
    }
    std::vector<BoundingBox> gt;
    if (!cfg.gt_box.empty()) gt.push_back(*parse_box(cfg.gt_box));
    const BoundingBox pred[] = {loc.box};
    overlay::write_ppm(cfg.overlay, overlay::render_overlay(*image, s_l, pred, gt));
    result["overlay"] = cfg.overlay;
  }
  print_json(out, result);
  return kExitOk;
}

inline int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  const auto gts = evaluate::parse_ground_truth_csv(io::read_text(cfg.gt_csv));
  const auto preds = evaluate::parse_predictions_jsonl(io::read_text(cfg.pred_jsonl));
  const auto report = evaluate::evaluate(preds, gts);
  const json j = evaluate::report_to_json(report);
  if (!cfg.report_out.empty()) io::write_atomic(cfg.report_out, j.dump(2) + "\n");
  if (cfg.json_output) {
    print_json(out, j);
  } else {
    out << evaluate::report_table(report);
  }
  return kExitOk;
}

inline int cmd_synth(const RunConfig& cfg, std::ostream& out) {
  harness::SynthSpec spec;
  spec.image_size = *parse_size(cfg.synth_image_size);
  spec.cam_size = *parse_size(cfg.synth_cam_size);
  spec.n_images = cfg.n_images;
  spec.n_classes = cfg.n_classes;
  spec.kind = cfg.kind == "gaussian" ? harness::BlobKind::gaussian : harness::BlobKind::rectangle;
  spec.noise_sigma = cfg.noise;
  spec.seed = cfg.seed;
  const auto data = harness::generate(spec);
  harness::write_dataset(cfg.out_dir, data);
  print_json(out, {{"dir", cfg.out_dir},
                   {"n_images", spec.n_images},
                   {"n_classes", spec.n_classes},
                   {"kind", cfg.kind},
                   {"noise_sigma", spec.noise_sigma},
                   {"seed", spec.seed},
                   {"manifest", "manifest.jsonl"},
                   {"ground_truth", "ground_truth.csv"}});
  return kExitOk;
}

inline int cmd_selftest(const RunConfig& cfg, std::ostream& out) {
  const auto results = selftest::run_all();
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  if (cfg.json_output) {
    json checks = json::array();
    for (const auto& r : results) checks.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    print_json(out, {{"passed", all}, {"checks", checks}});
  } else {
    for (const auto& r : results) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%-4s  %-32s  ", r.passed ? "PASS" : "FAIL", r.name.c_str());
      out << buf << r.detail << "\n";
    }
    out << (all ? "all checks passed" : "some checks FAILED") << "\n";
  }
  return all ? kExitOk : kExitDomain;
}

}  // namespace detail

/// Parses `args` (args[0] is the program name) and dispatches.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"camforge: class activation map localization toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", cfg.json_output, "Emit JSON on standard output");

  auto* confseg_cmd = app.add_subcommand("confseg", "Confidence mask of a CAM slice");
  confseg_cmd->add_option("input", cfg.input, "CAMT map or stack")->required()->check(CLI::ExistingFile);
  confseg_cmd->add_option("--class", cfg.class_index, "Class slice of a stack");
  confseg_cmd->add_option("--mask-out", cfg.mask_out, "Write |S - mu1| as CAMT");
  confseg_cmd->add_option("--binary-out", cfg.binary_out, "Write the binary mask as CAMT");
  confseg_cmd->add_option("--compare", cfg.compare, "Second CAM (S_F) for the masked L1 loss")
      ->check(CLI::ExistingFile);
  confseg_cmd->add_flag("--detach-target", cfg.detach_target, "No gradient into S_L");
  confseg_cmd->add_option("--epoch", cfg.epoch, "Epoch for the alpha ramp")->check(CLI::NonNegativeNumber);
  confseg_cmd->add_option("--total-epochs", cfg.total_epochs, "Epochs in the run")->check(CLI::PositiveNumber);
  confseg_cmd->add_option("--ramp-fraction", cfg.ramp_fraction, "Fraction of the run spent ramping alpha")
      ->check(CLI::Range(0.0, 1.0))
      ->check(CLI::PositiveNumber);
  confseg_cmd->add_option("--l-cls", cfg.l_cls, "Classification loss to combine with");

  auto* coaug_cmd = app.add_subcommand("coaug", "Batch metric loss over a manifest");
  coaug_cmd->add_option("manifest", cfg.manifest, "JSON lines manifest")->required()->check(CLI::ExistingFile);
  coaug_cmd->add_option("--gamma", cfg.gamma)->check(CLI::NonNegativeNumber);
  coaug_cmd->add_option("--delta", cfg.delta)->check(CLI::NonNegativeNumber);
  coaug_cmd->add_option("--epsilon", cfg.epsilon)->check(CLI::PositiveNumber);
  coaug_cmd->add_flag("--sum-over-pairs", cfg.sum_over_pairs, "Sum instead of averaging over pairs");
  coaug_cmd->add_option("--embed-seed", cfg.embed_seed, "Seed of the linear embedder");
  coaug_cmd->add_option("--embed-dim", cfg.embed_dim)->check(CLI::PositiveNumber);
  coaug_cmd->add_option("--batch-size", cfg.batch_size, "Sample a batch of this size")->check(CLI::Range(2, 1 << 20));
  coaug_cmd->add_option("--max-categories", cfg.max_categories)->check(CLI::PositiveNumber);
  coaug_cmd->add_option("--batch-seed", cfg.batch_seed);

  auto* loc_cmd = app.add_subcommand("localize", "Bounding box from CAM slices");
  loc_cmd->add_option("--cam-l", cfg.cam_l, "Primary CAM (map or stack)")->check(CLI::ExistingFile);
  loc_cmd->add_option("--cam-f", cfg.cam_f, "Secondary CAM (map or stack)")->check(CLI::ExistingFile);
  loc_cmd->add_option("--stack", cfg.stack, "Single C x H x W stack")->check(CLI::ExistingFile);
  loc_cmd->add_option("--class", cfg.class_index, "Class slice to use");
  loc_cmd->add_option("--manifest", cfg.manifest, "Batch mode: JSON lines manifest")->check(CLI::ExistingFile);
  loc_cmd->add_option("--out", cfg.predictions_out, "Batch mode: predictions JSON lines");
  loc_cmd->add_option("--top-k", cfg.top_k, "Batch mode: classes per prediction")->check(CLI::PositiveNumber);
  loc_cmd->add_option("--theta", cfg.theta, "Fraction of the max used as threshold")->check(detail::open_unit_interval());
  loc_cmd->add_option("--connectivity", cfg.connectivity)->check(CLI::IsMember({4, 8}));
  loc_cmd->add_option("--image-size", cfg.image_size, "Image size WxH")->check(detail::size_validator());
  loc_cmd->add_option("--image", cfg.image, "CAMT image (for overlays and size)")->check(CLI::ExistingFile);
  loc_cmd->add_option("--overlay", cfg.overlay, "Write a PPM overlay");
  loc_cmd->add_option("--gt", cfg.gt_box, "Ground-truth box x0,y0,x1,y1 for the overlay")
      ->check(CLI::Validator(
          [](std::string& s) { return detail::parse_box(s) ? std::string{} : "expected x0,y0,x1,y1 with x1>x0, y1>y0"; },
          "BOX"));

  auto* eval_cmd = app.add_subcommand("evaluate", "Localization and classification error");
  eval_cmd->add_option("--gt", cfg.gt_csv, "Ground-truth CSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--pred", cfg.pred_jsonl, "Predictions JSON lines")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--report", cfg.report_out, "Also write the JSON report here");

  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic blob dataset");
  synth_cmd->add_option("--out", cfg.out_dir, "Output directory")->required();
  synth_cmd->add_option("--n-images", cfg.n_images)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--n-classes", cfg.n_classes)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--image-size", cfg.synth_image_size)->check(detail::size_validator());
  synth_cmd->add_option("--cam-size", cfg.synth_cam_size)->check(detail::size_validator());
  synth_cmd->add_option("--kind", cfg.kind)->check(CLI::IsMember({"rectangle", "gaussian"}));
  synth_cmd->add_option("--noise", cfg.noise, "Noise sigma")->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--seed", cfg.seed);

  auto* self_cmd = app.add_subcommand("selftest", "Run the built-in oracle checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "camforge: usage: " << e.what() << "\n";
    if (cfg.json_output) detail::print_json(out, {{"error", {{"module", "cli"}, {"code", "usage"}, {"message", e.what()}}}});
    return kExitUsage;
  }

  try {
    if (confseg_cmd->parsed()) return detail::cmd_confseg(cfg, out);
    if (coaug_cmd->parsed()) return detail::cmd_coaug(cfg, out);
    if (loc_cmd->parsed()) return detail::cmd_localize(cfg, out);
    if (eval_cmd->parsed()) return detail::cmd_evaluate(cfg, out);
    if (synth_cmd->parsed()) return detail::cmd_synth(cfg, out);
    if (self_cmd->parsed()) return detail::cmd_selftest(cfg, out);
  } catch (const Error& e) {
    err << "camforge: " << e.module() << "/" << to_string(e.code()) << ": " << e.what() << "\n";
    if (cfg.json_output) {
      detail::print_json(out, {{"error",
                                {{"module", e.module()}, {"code", std::string(to_string(e.code()))},
                                 {"message", e.what()}}}});
    }
    return kExitDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "camforge: io/io_error: " << e.what() << "\n";
    if (cfg.json_output) {
      detail::print_json(out, {{"error", {{"module", "io"}, {"code", "io_error"}, {"message", e.what()}}}});
    }
    return kExitDomain;
  }
  return kExitUsage;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace camforge::cli

#endif  // CAMFORGE_CLI_HPP_
