// Copyright 2026 The Cohesion Authors
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

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cohesion/cohesion.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace cohesion;

namespace {

constexpr const char* kVersion = "0.1.0";

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

Level log_level() {
  static const Level level = [] {
    const char* env = std::getenv("COHESION_LOG");
    const std::string s = env ? env : "warn";
    if (s == "error") return Level::error;
    if (s == "info") return Level::info;
    if (s == "debug") return Level::debug;
    return Level::warn;
  }();
  return level;
}

void log(Level l, const std::string& msg) {
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (l <= log_level()) std::cerr << "cohesion: " << names[static_cast<int>(l)] << ": " << msg << '\n';
}

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

void write_run_json(const fs::path& dir, const RunConfig& rc, const json& timings, const json& extra = json::object()) {
  json j;
  j["config"] = rc;
  j["version"] = kVersion;
  j["compiler"] = __VERSION__;
  j["timestamp"] = utc_timestamp();
  j["timings_s"] = timings;
  j.update(extra);
  write_text(dir / "run.json", j.dump(2) + "\n");
}

RgbImage prepare(const std::string& path, const RunConfig& rc) {
  RgbImage img = load_image(path);
  if (rc.crop_borders) img = crop_uniform_borders(img);
  if (rc.resize_width) img = resize_to_width(img, rc.resize_width);
  return img;
}

Mask prepare_mask(const Mask& m, const RgbImage& original, const RgbImage& processed, const RunConfig& rc) {
  if (rc.crop_borders) throw Error("--crop-borders is not supported for evaluation");
  (void)original;
  return resize_mask(m, processed.width(), processed.height());
}

json eigen_json(const std::vector<EigenPair>& pairs) {
  json a = json::array();
  for (std::size_t r = 0; r < pairs.size(); ++r)
    a.push_back({{"rank", r + 1}, {"eigenvalue", pairs[r].value}, {"residual", pairs[r].residual}});
  return a;
}

void warn_clamped(const Discovery& d) {
  if (const std::size_t n = d.affinity.normalized.nonpositive_rows)
    log(Level::warn, std::to_string(n) + " affinity rows had non-positive degree and were clamped");
}

void save_map(const ObjectMap& m, const fs::path& dir) { save_gray(m.map, dir / ("map_" + m.label() + ".pgm"), 0.0, m.scale); }

// Shared flags. Defaults come from RunConfig.
void add_common(CLI::App* app, RunConfig& rc) {
  app->add_option("--seed", rc.seed, "Random seed")->capture_default_str();
  app->add_option("--threads", rc.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app->add_option("--tau", rc.tau, "Covariance regularizer")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--tol", rc.eigen_tol, "Eigenpair residual tolerance")->capture_default_str();
  app->add_option("--max-restarts", rc.max_restarts, "Lanczos restart limit")->capture_default_str();
}

void add_image_opts(CLI::App* app, RunConfig& rc) {
  app->add_option("--resize-width", rc.resize_width, "Resize to this width (0 keeps size)")->capture_default_str();
  app->add_flag("--crop-borders", rc.crop_borders, "Crop uniform image borders first");
}

void add_saliency_opts(CLI::App* app, RunConfig& rc) {
  app->add_flag("!--no-noise-elim", rc.noise_elimination, "Skip superpixel noise elimination");
  app->add_flag("--morph", rc.morph, "3x3 opening on the binary mask");
  app->add_option("--threshold", rc.threshold, "Mask threshold in [0,1] or 'otsu'")->capture_default_str();
  app->add_option("--superpixels", rc.superpixels, "Target superpixel count")->capture_default_str();
  app->add_option("--compactness", rc.compactness, "Superpixel spatial weight")->capture_default_str();
  app->add_option("--sigma-p", rc.sigma_p, "Uniqueness spatial bandwidth")->capture_default_str();
  app->add_option("--sigma-c", rc.sigma_c, "Distribution intensity bandwidth")->capture_default_str();
  app->add_option("--k", rc.k, "Distribution exponent scale")->capture_default_str();
}

void add_proposal_opts(CLI::App* app, RunConfig& rc) {
  app->add_option("--pairwise", rc.pairwise, "Eigenvectors combined pairwise")->capture_default_str();
  app->add_option("--canny-low", rc.canny_low, "Canny low threshold (0..255 map scale)")->capture_default_str();
  app->add_option("--canny-high", rc.canny_high, "Canny high threshold")->capture_default_str();
  app->add_option("--max-boxes", rc.max_boxes, "Keep at most this many boxes (0 = all)")->capture_default_str();
  app->add_option("--score-map", rc.score_map, "Objectness map: e1, e1e2 or per-source")
      ->capture_default_str()
      ->check(CLI::IsMember({"e1", "e1e2", "per-source"}));
  app->add_option("--sigma-p", rc.sigma_p, "Uniqueness spatial bandwidth")->capture_default_str();
  app->add_option("--sigma-c", rc.sigma_c, "Distribution intensity bandwidth")->capture_default_str();
  app->add_option("--k", rc.k, "Distribution exponent scale")->capture_default_str();
}

// ---- subcommands ----

void run_saliency(RunConfig rc) {
  Stopwatch sw;
  json t;
  const fs::path out = rc.output;
  fs::create_directories(out);
  const RgbImage img = prepare(rc.inputs.at(0), rc);
  t["load"] = sw.lap();
  const SaliencyConfig cfg = saliency_config(rc);
  log(Level::info, "image " + std::to_string(img.width()) + "x" + std::to_string(img.height()));
  const SalientResult res = detect_salient(img, cfg);
  t["pipeline"] = sw.lap();
  warn_clamped(res.discovery);
  for (const EigenPair& p : res.discovery.pairs())
    log(Level::debug, "eigenvalue " + std::to_string(p.value) + " residual " + std::to_string(p.residual));
  log(Level::info, "threshold " + std::to_string(res.threshold) + ", " + std::to_string(res.mask.count()) + " mask pixels");
  if (res.discovery.solve.converged < res.discovery.pairs().size())
    log(Level::warn, "only " + std::to_string(res.discovery.solve.converged) + " eigenpairs met the tolerance");
  save_gray(res.saliency.map, out / "saliency.pgm", 0.0, 1.0);
  save_mask(res.mask, out / "mask.png");
  for (const ObjectMap& m : res.maps) save_map(m, out);
  if (res.maps.size() > 1) save_map(res.combined, out);
  t["write"] = sw.lap();
  json side{{"width", img.width()},
            {"height", img.height()},
            {"eigenvalues", eigen_json(res.discovery.pairs())},
            {"threshold", res.threshold},
            {"mask_pixels", res.mask.count()}};
  write_text(out / "saliency.json", side.dump(2) + "\n");
  write_run_json(out, rc, t, {{"eigenvalues", eigen_json(res.discovery.pairs())}});
}

void draw_box(RgbImage& img, const BoundingBox& b, const Rgb& color) {
  for (long c = b.left; c < b.right; ++c) {
    img.set(static_cast<std::size_t>(b.top), static_cast<std::size_t>(c), color);
    img.set(static_cast<std::size_t>(b.bottom - 1), static_cast<std::size_t>(c), color);
  }
  for (long r = b.top; r < b.bottom; ++r) {
    img.set(static_cast<std::size_t>(r), static_cast<std::size_t>(b.left), color);
    img.set(static_cast<std::size_t>(r), static_cast<std::size_t>(b.right - 1), color);
  }
}

void run_proposals(RunConfig rc, std::size_t overlay) {
  Stopwatch sw;
  json t;
  const fs::path out = rc.output;
  fs::create_directories(out);
  const RgbImage img = prepare(rc.inputs.at(0), rc);
  t["load"] = sw.lap();
  log(Level::info, "image " + std::to_string(img.width()) + "x" + std::to_string(img.height()));
  ProposalSet set = generate_proposals(img, proposal_config(rc), [](const std::string& m) { log(Level::warn, m); });
  set.source = rc.inputs.at(0);
  t["pipeline"] = sw.lap();
  log(Level::info, std::to_string(set.candidates) + " candidate boxes from " + std::to_string(set.map_labels.size()) +
                       " maps, " + std::to_string(set.boxes.size()) + " kept");
  std::string csv = "left,top,right,bottom,score\n";
  char line[160];
  for (const BoundingBox& b : set.boxes) {
    std::snprintf(line, sizeof line, "%ld,%ld,%ld,%ld,%.9g\n", b.left, b.top, b.right, b.bottom, b.score);
    csv += line;
  }
  write_text(out / "proposals.csv", csv);
  if (overlay) {
    RgbImage o = img;
    for (std::size_t i = 0; i < std::min(overlay, set.boxes.size()); ++i) draw_box(o, set.boxes[i], {1.0, 0.0, 0.0});
    save_image(o, out / "overlay.png");
  }
  t["write"] = sw.lap();
  write_run_json(out, rc, t,
                 {{"boxes", set.boxes.size()},
                  {"candidates", set.candidates},
                  {"eigenvalues", set.eigenvalues},
                  {"eigenpairs_used", set.eigenpairs_used},
                  {"maps", set.map_labels}});
}

void run_eigs(RunConfig rc) {
  Stopwatch sw;
  json t;
  const fs::path out = rc.output;
  fs::create_directories(out);
  const RgbImage img = prepare(rc.inputs.at(0), rc);
  t["load"] = sw.lap();
  const Discovery d = discover(img, rc.eigs, discovery_config(rc));
  t["eigensolve"] = sw.lap();
  warn_clamped(d);
  if (d.solve.converged < rc.eigs)
    log(Level::warn, std::to_string(d.solve.converged) + " of " + std::to_string(rc.eigs) + " eigenpairs converged");
  std::string csv = "rank,eigenvalue,residual\n";
  char line[128];
  for (std::size_t r = 0; r < d.pairs().size(); ++r) {
    std::snprintf(line, sizeof line, "%zu,%.12g,%.3g\n", r + 1, d.pairs()[r].value, d.pairs()[r].residual);
    csv += line;
    save_map(d.map(r + 1), out);
  }
  write_text(out / "eigenvalues.csv", csv);
  t["write"] = sw.lap();
  write_run_json(out, rc, t, {{"eigenvalues", eigen_json(d.pairs())}, {"converged", d.solve.converged}});
}

void run_affinity_viz(RunConfig rc) {
  Stopwatch sw;
  json t;
  const fs::path out = rc.output;
  fs::create_directories(out);
  const RgbImage img = prepare(rc.inputs.at(0), rc);
  const GrayMap v = affinity_visualization(img, Tau(rc.tau), rc.window_radius);
  t["affinity"] = sw.lap();
  const double peak = std::max(std::abs(v.min()), std::abs(v.max()));
  const double step = peak > 0.0 ? peak / 127.0 : 1.0;  // value per gray level
  GrayMap g(v.width(), v.height());
  std::size_t positive = 0, negative = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    g[i] = std::clamp(128.0 + v[i] / step, 0.0, 255.0);
    positive += v[i] > 0.0;
    negative += v[i] < 0.0;
  }
  save_gray(g, out / "affinity.pgm");
  char text[256];
  std::snprintf(text, sizeof text, "value = (gray - 128) * %.12g\nmin %.12g\nmax %.12g\npositive %zu\nnegative %zu\n", step,
                v.min(), v.max(), positive, negative);
  write_text(out / "affinity.txt", text);
  write_run_json(out, rc, t, {{"scale", step}});
}

std::map<std::string, std::function<Scene(std::size_t)>> scene_table() {
  return {{"fig3a1", [](std::size_t w) { return scene_gradient_rectangles(w); }},
          {"fig3a2", [](std::size_t w) { return scene_equal_color_rectangles(w); }},
          {"fig4", [](std::size_t w) { return scene_low_contrast(w); }},
          {"disk", [](std::size_t w) { return scene_disk(w); }},
          {"magenta-orange", [](std::size_t w) { return scene_magenta_orange(w, w * 2 / 3); }},
          {"shaded", [](std::size_t w) { return scene_shaded_object(w); }},
          {"rects1", [](std::size_t w) { return scene_rectangles(1, w); }},
          {"rects2", [](std::size_t w) { return scene_rectangles(2, w); }},
          {"rects3", [](std::size_t w) { return scene_rectangles(3, w); }},
          {"rects4", [](std::size_t w) { return scene_rectangles(4, w); }},
          {"rects5", [](std::size_t w) { return scene_rectangles(5, w); }}};
}

void write_scene(const Scene& s, const fs::path& image_path) {
  save_image(s.image, image_path);
  const fs::path stem = image_path.parent_path() / image_path.stem();
  save_mask(s.mask, stem.string() + "_mask.png");
  if (!s.boxes.empty()) write_text(stem.string() + "_boxes.json", boxes_to_json(s.boxes) + "\n");
}

void run_synth(RunConfig rc, std::size_t width, const std::string& fixture) {
  Stopwatch sw;
  if (!fixture.empty()) {
    const fs::path dir = fixture;
    fs::create_directories(dir);
    std::string masks, boxes;
    for (const Scene& s : fixture_scenes()) {
      write_scene(s, dir / (s.name + ".png"));
      masks += s.name + ".png\t" + s.name + "_mask.png\n";
      if (!s.boxes.empty()) boxes += s.name + ".png\t" + s.name + "_boxes.json\n";
    }
    write_text(dir / "masks.tsv", masks);
    write_text(dir / "boxes.tsv", boxes);
    write_run_json(dir, rc, {{"synth", sw.lap()}});
    return;
  }
  const auto table = scene_table();
  const auto it = table.find(rc.scene);
  if (it == table.end()) throw CLI::ValidationError("--scene", "unknown scene '" + rc.scene + "'");
  const fs::path out = rc.output;
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_scene(it->second(width), out);
  write_run_json(out.has_parent_path() ? out.parent_path() : fs::path("."), rc, {{"synth", sw.lap()}});
}

void write_pr_csv(const PRCurve& curve, const fs::path& p) {
  std::string csv = "threshold,precision,recall\n";
  char line[96];
  for (const PRPoint& q : curve.points) {
    std::snprintf(line, sizeof line, "%d,%.9g,%.9g\n", q.threshold, q.precision, q.recall);
    csv += line;
  }
  write_text(p, csv);
}

int run_eval_saliency(RunConfig rc) {
  Stopwatch sw;
  json t;
  const fs::path out = rc.output;
  fs::create_directories(out);
  const auto ds = load_mask_dataset(rc.root, rc.inputs.at(0));
  for (const SampleError& e : ds.errors) log(Level::warn, "manifest line " + std::to_string(e.line) + ": " + e.message);
  if (ds.samples.empty()) throw Error("no valid samples");
  t["load"] = sw.lap();
  const SaliencyConfig cfg = saliency_config(rc);
  std::vector<GrayMap> maps;
  std::vector<Mask> gts, preds;
  json per = json::array();
  for (const MaskSample& s : ds.samples) {
    RunConfig local = rc;
    local.crop_borders = false;
    const RgbImage img = rc.resize_width ? resize_to_width(s.image, rc.resize_width) : s.image;
    const Mask gt = prepare_mask(s.mask, s.image, img, local);
    const SalientResult res = detect_salient(img, cfg);
    const auto [p, r] = mask_precision_recall(res.mask, gt);
    per.push_back({{"image", s.image_path.string()}, {"precision", p}, {"recall", r}, {"threshold", res.threshold}});
    maps.push_back(res.saliency.map);
    gts.push_back(gt);
    preds.push_back(res.mask);
    log(Level::info, s.image_path.string() + " done");
  }
  t["pipeline"] = sw.lap();
  const PRCurve curve = pr_curve(maps, gts, 1.0, rc.per_image);
  write_pr_csv(curve, out / "pr_curve.csv");
  const auto [best_f, best] = curve.best_f();
  const MaskSummary avg = summarize_masks(preds, gts), pooled = pooled_masks(preds, gts);
  json summary{{"samples", ds.samples.size()},
               {"errors", ds.errors.size()},
               {"aggregation", rc.per_image ? "per-image" : "pooled"},
               {"beta_squared", kBetaSquared},
               {"best_curve_point", {{"threshold", best.threshold}, {"precision", best.precision}, {"recall", best.recall}, {"f_beta", best_f}}},
               {"otsu_per_image_average", {{"precision", avg.precision}, {"recall", avg.recall}, {"f_beta", avg.f_beta}}},
               {"otsu_pooled", {{"precision", pooled.precision}, {"recall", pooled.recall}, {"f_beta", pooled.f_beta}}},
               {"per_sample", per}};
  write_text(out / "summary.json", summary.dump(2) + "\n");
  write_run_json(out, rc, t);
  return ds.errors.empty() ? 0 : 1;
}

int run_eval_proposals(RunConfig rc) {
  Stopwatch sw;
  json t;
  const fs::path out = rc.output;
  fs::create_directories(out);
  const auto ds = load_box_dataset(rc.root, rc.inputs.at(0));
  for (const SampleError& e : ds.errors) log(Level::warn, "manifest line " + std::to_string(e.line) + ": " + e.message);
  if (ds.samples.empty()) throw Error("no valid samples");
  const ProposalConfig cfg = proposal_config(rc);
  std::vector<std::vector<BoundingBox>> props, gts;
  std::size_t longest = 0;
  for (const BoxSample& s : ds.samples) {
    const RgbImage img = rc.resize_width ? resize_to_width(s.image, rc.resize_width) : s.image;
    const double fx = static_cast<double>(img.width()) / static_cast<double>(s.image.width());
    const double fy = static_cast<double>(img.height()) / static_cast<double>(s.image.height());
    std::vector<BoundingBox> gt;
    for (const BoundingBox& b : s.boxes)
      gt.push_back({std::lround(b.left * fx), std::lround(b.top * fy), std::lround(b.right * fx), std::lround(b.bottom * fy), 0.0});
    props.push_back(generate_proposals(img, cfg, [](const std::string& m) { log(Level::warn, m); }).boxes);
    gts.push_back(std::move(gt));
    longest = std::max(longest, props.back().size());
  }
  t["pipeline"] = sw.lap();
  // Dataset recall: hits over all ground-truth boxes.
  auto recall = [&](std::size_t k) {
    double hits = 0.0, total = 0.0;
    for (std::size_t i = 0; i < props.size(); ++i) {
      hits += recall_at_k(props[i], gts[i], 0.5, k) * static_cast<double>(gts[i].size());
      total += static_cast<double>(gts[i].size());
    }
    return total > 0.0 ? hits / total : 0.0;
  };
  std::string csv = "k,recall\n";
  char line[64];
  for (std::size_t k = 0; k <= std::max<std::size_t>(longest, 1); ++k) {
    std::snprintf(line, sizeof line, "%zu,%.9g\n", k, recall(k));
    csv += line;
  }
  write_text(out / "recall_curve.csv", csv);
  json summary{{"samples", ds.samples.size()},
               {"errors", ds.errors.size()},
               {"iou_threshold", 0.5},
               {"recall_at_100", recall(100)},
               {"recall_all", recall(longest)},
               {"mean_proposals", [&] {
                  double n = 0.0;
                  for (const auto& p : props) n += static_cast<double>(p.size());
                  return n / static_cast<double>(props.size());
                }()}};
  write_text(out / "summary.json", summary.dump(2) + "\n");
  write_run_json(out, rc, t);
  return ds.errors.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Object discovery from affinity eigenvectors: saliency maps and object proposals"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  RunConfig rc;
  std::size_t synth_width = 200, overlay = 0;
  std::string fixture;

  auto* sal = app.add_subcommand("saliency", "Saliency map and binary mask for one image");
  sal->add_option("image", rc.inputs, "Input image (PNG or PPM)")->required()->expected(1)->check(CLI::ExistingFile);
  sal->add_option("-o,--output", rc.output, "Output directory")->required();
  sal->add_option("--eigs", rc.eigs, "Eigenvectors combined")->capture_default_str()->check(CLI::PositiveNumber);
  add_common(sal, rc);
  add_image_opts(sal, rc);
  add_saliency_opts(sal, rc);

  auto* prop = app.add_subcommand("proposals", "Ranked object proposal boxes for one image");
  prop->add_option("image", rc.inputs, "Input image")->required()->expected(1)->check(CLI::ExistingFile);
  prop->add_option("-o,--output", rc.output, "Output directory")->required();
  auto* prop_eigs = prop->add_option("--eigs", rc.eigs, "Eigenvectors searched individually (default 80)")->check(CLI::PositiveNumber);
  prop->add_option("--overlay", overlay, "Draw the top N boxes into overlay.png");
  add_common(prop, rc);
  add_image_opts(prop, rc);
  add_proposal_opts(prop, rc);

  auto* eigs = app.add_subcommand("eigs", "Leading eigenpairs and their object maps");
  eigs->add_option("image", rc.inputs, "Input image")->required()->expected(1)->check(CLI::ExistingFile);
  eigs->add_option("-o,--output", rc.output, "Output directory")->required();
  auto* eigs_count = eigs->add_option("--count", rc.eigs, "Number of eigenpairs (default 6)")->check(CLI::PositiveNumber);
  add_common(eigs, rc);
  add_image_opts(eigs, rc);

  auto* viz = app.add_subcommand("affinity-viz", "Signed map of top-left/bottom-right window affinities");
  viz->add_option("image", rc.inputs, "Input image")->required()->expected(1)->check(CLI::ExistingFile);
  viz->add_option("-o,--output", rc.output, "Output directory")->required();
  viz->add_option("--tau", rc.tau, "Covariance regularizer")->capture_default_str()->check(CLI::PositiveNumber);
  add_image_opts(viz, rc);

  auto* syn = app.add_subcommand("synth", "Write a synthetic scene or the evaluation fixture");
  syn->add_option("--scene", rc.scene, "fig3a1, fig3a2, fig4, disk, magenta-orange, shaded, rects1..rects5");
  syn->add_option("-o,--output", rc.output, "Output PNG path");
  syn->add_option("--width", synth_width, "Scene width")->capture_default_str()->check(CLI::Range(8, 4096));
  syn->add_option("--fixture", fixture, "Write the evaluation fixture into this directory");

  auto* evs = app.add_subcommand("eval-saliency", "PR curve and F-measure over a mask dataset");
  evs->add_option("manifest", rc.inputs, "Manifest (image<TAB>mask per line)")->required()->expected(1)->check(CLI::ExistingFile);
  evs->add_option("--root", rc.root, "Directory the manifest paths are relative to (default: manifest directory)");
  evs->add_option("-o,--output", rc.output, "Output directory")->required();
  evs->add_option("--eigs", rc.eigs, "Eigenvectors combined")->capture_default_str()->check(CLI::PositiveNumber);
  evs->add_flag("--per-image", rc.per_image, "Average precision/recall per image instead of pooling pixels");
  add_common(evs, rc);
  evs->add_option("--resize-width", rc.resize_width, "Resize to this width (0 keeps size)")->capture_default_str();
  add_saliency_opts(evs, rc);

  auto* evp = app.add_subcommand("eval-proposals", "Recall curve over a box dataset");
  evp->add_option("manifest", rc.inputs, "Manifest (image<TAB>boxes.json per line)")->required()->expected(1)->check(CLI::ExistingFile);
  evp->add_option("--root", rc.root, "Directory the manifest paths are relative to (default: manifest directory)");
  evp->add_option("-o,--output", rc.output, "Output directory")->required();
  auto* evp_eigs = evp->add_option("--eigs", rc.eigs, "Eigenvectors searched individually (default 80)")->check(CLI::PositiveNumber);
  add_common(evp, rc);
  evp->add_option("--resize-width", rc.resize_width, "Resize to this width (0 keeps size)")->capture_default_str();
  add_proposal_opts(evp, rc);

  try {
    app.parse(argc, argv);
    if (syn->parsed()) {
      if (fixture.empty() && (rc.scene.empty() || rc.output.empty()))
        throw CLI::ValidationError("synth", "need --scene and -o, or --fixture");
      if (!fixture.empty() && !rc.scene.empty()) throw CLI::ValidationError("synth", "--scene and --fixture are exclusive");
    }
    if ((prop->parsed() && prop_eigs->count() == 0) || (evp->parsed() && evp_eigs->count() == 0)) rc.eigs = 80;
    if (eigs->parsed() && eigs_count->count() == 0) rc.eigs = 6;
    if ((prop->parsed() || evp->parsed()) && rc.pairwise > rc.eigs)
      throw CLI::ValidationError("--pairwise", "must not exceed --eigs");
    if (sal->parsed() || evs->parsed()) (void)parse_threshold(rc.threshold);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "cohesion: " << e.what() << '\n';
    return 2;
  }

  try {
    set_thread_count(rc.threads ? rc.threads : std::max(1u, std::thread::hardware_concurrency()));
    CLI::App* sub = app.get_subcommands().front();
    rc.command = sub->get_name();
    if ((evs->parsed() || evp->parsed()) && rc.root.empty()) rc.root = fs::path(rc.inputs.at(0)).parent_path().string();
    if (rc.command == "saliency") run_saliency(rc);
    if (rc.command == "proposals") run_proposals(rc, overlay);
    if (rc.command == "eigs") run_eigs(rc);
    if (rc.command == "affinity-viz") run_affinity_viz(rc);
    if (rc.command == "synth") run_synth(rc, synth_width, fixture);
    if (rc.command == "eval-saliency") return run_eval_saliency(rc);
    if (rc.command == "eval-proposals") return run_eval_proposals(rc);
  } catch (const CLI::ParseError& e) {
    std::cerr << "cohesion: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    log(Level::error, e.what());
    return 1;
  }
  return 0;
}
