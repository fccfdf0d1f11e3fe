// Batch CLI wiring the mask, MORP, metrics and patch modules into
// reproducible runs. Exit codes: 0 success, 1 config error, 2 partial
// success (skipped regions), 3 I/O error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "morp/config.hpp"
#include "morp/engine.hpp"
#include "morp/errors.hpp"
#include "morp/mask_io.hpp"
#include "morp/metrics.hpp"
#include "morp/patches.hpp"
#include "morp/reference.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  bool dry_run = false;
};

morp::RunConfig resolve_config(const GlobalOpts& g) {
  morp::RunConfig cfg;
  if (!g.config_path.empty()) cfg = morp::load_run_config(g.config_path);
  if (g.seed) {
    cfg.morp.seed = *g.seed;
    cfg.seed_set = true;
  }
  return cfg;
}

void apply_jobs(int jobs) {
#ifdef _OPENMP
  if (jobs > 0) omp_set_num_threads(jobs);
#else
  (void)jobs;
#endif
}

std::vector<fs::path> sorted_files(const fs::path& dir,
                                   const std::string& ext) {
  if (!fs::is_directory(dir))
    throw morp::Error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ext)
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

json record_json(const morp::EditRecord& rec, const std::string& mask_name) {
  json j{{"mask", mask_name},
         {"region_id", rec.region_id},
         {"class", int(morp::raw(rec.cls))},
         {"placed", rec.placed},
         {"restored", rec.restored},
         {"skipped", rec.skipped},
         {"flat_bulges", rec.flat_bulges},
         {"easing_applied", rec.easing_applied}};
  if (rec.placed) {
    j["theta"] = rec.theta;
    j["shift"] = {rec.shift_row, rec.shift_col};
  }
  if (!rec.apices.empty()) j["apices"] = rec.apices;
  if (!rec.d_out.empty()) {
    j["d_in"] = rec.d_in;
    j["d_target"] = rec.d_target;
    j["d_out"] = rec.d_out;
  }
  if (!rec.note.empty()) j["note"] = rec.note;
  return j;
}

int cmd_augment(const GlobalOpts& g, const std::string& input,
                const std::string& output, const std::string& regime_name,
                int multiplier) {
  morp::RunConfig cfg = resolve_config(g);
  morp::Regime regime = morp::regime_from_string(regime_name);
  if (!cfg.seed_set && regime != morp::Regime::nomove)
    throw morp::ConfigError("augment is stochastic: a seed is required "
                            "(config 'seed' or --seed)");
  if (g.dry_run) {
    std::cout << morp::dump_run_config(cfg);
    return 0;
  }
  apply_jobs(g.jobs);

  auto files = sorted_files(input, ".pgm");
  if (files.empty()) throw morp::Error("no .pgm masks in " + input);
  std::vector<morp::LabelMap> masks;
  masks.reserve(files.size());
  for (const auto& f : files) masks.push_back(morp::load_mask(f));

  auto results = morp::batch_generate(masks, regime, multiplier, cfg.morp);

  fs::create_directories(output);
  std::ofstream records(fs::path(output) / "records.jsonl");
  bool partial = false;
  for (std::size_t t = 0; t < results.size(); ++t) {
    std::size_t i = t / multiplier, rep = t % multiplier;
    std::string name = files[i].stem().string() + "__r" +
                       std::to_string(rep) + ".pgm";
    morp::save_mask(results[t].result, fs::path(output) / name);
    for (const auto& rec : results[t].records) {
      records << record_json(rec, name).dump() << "\n";
      if (rec.skipped) partial = true;
    }
  }
  return partial ? 2 : 0;
}

int cmd_metrics(const GlobalOpts& g, const std::string& pred_dir,
                const std::string& truth_dir, double pixel_spacing,
                const std::string& out_path) {
  morp::RunConfig cfg = resolve_config(g);
  if (g.dry_run) {
    std::cout << morp::dump_run_config(cfg);
    return 0;
  }
  apply_jobs(g.jobs);

  auto preds = sorted_files(pred_dir, ".pgm");
  if (preds.empty()) throw morp::Error("no .pgm masks in " + pred_dir);

  std::ostringstream report;
  report << "file\tmIoU\tSea\tOil\tLook-alike\tShip\tLand";
  for (int c = 0; c < morp::kNumClasses; ++c)
    report << "\tpred_km2_" << morp::class_name(morp::class_from_value(c));
  for (int c = 0; c < morp::kNumClasses; ++c)
    report << "\tfp_km2_" << morp::class_name(morp::class_from_value(c));
  report << "\n";

  const double pixel_area = pixel_spacing * pixel_spacing;
  morp::ConfusionCounts agg;
  std::array<double, morp::kNumClasses> agg_pred{}, agg_fp{};
  report.setf(std::ios::fixed);
  report.precision(4);
  for (const auto& pf : preds) {
    fs::path tf = fs::path(truth_dir) / pf.filename();
    if (!fs::exists(tf))
      throw morp::UnpairedFile("missing truth mask for " +
                               pf.filename().string());
    morp::LabelMap pred = morp::load_mask(pf);
    morp::LabelMap truth = morp::load_mask(tf);
    auto stats = morp::scene_area_stats(pred, truth, pixel_area);
    auto counts = morp::confusion_counts(pred, truth);
    for (int t = 0; t < morp::kNumClasses; ++t)
      for (int p = 0; p < morp::kNumClasses; ++p)
        agg.matrix[t][p] += counts.matrix[t][p];
    report << pf.filename().string() << "\t" << stats.iou.miou;
    for (double v : stats.iou.per_class) report << "\t" << v;
    for (int c = 0; c < morp::kNumClasses; ++c) {
      report << "\t" << stats.predicted_km2[c];
      agg_pred[c] += stats.predicted_km2[c];
    }
    for (int c = 0; c < morp::kNumClasses; ++c) {
      report << "\t" << stats.false_positive_km2[c];
      agg_fp[c] += stats.false_positive_km2[c];
    }
    report << "\n";
  }
  auto agg_iou = morp::iou(agg);
  report << "ALL\t" << agg_iou.miou;
  for (double v : agg_iou.per_class) report << "\t" << v;
  for (double v : agg_pred) report << "\t" << v;
  for (double v : agg_fp) report << "\t" << v;
  report << "\n";

  if (out_path.empty()) {
    std::cout << report.str();
  } else {
    std::ofstream out(out_path);
    out << report.str();
  }
  return 0;
}

int cmd_patches(const GlobalOpts& g, const std::string& manifest_path,
                const std::string& scenes_dir, const std::string& out_dir) {
  morp::RunConfig cfg = resolve_config(g);
  if (!cfg.seed_set)
    throw morp::ConfigError("patches is stochastic: a seed is required");
  if (g.dry_run) {
    std::cout << morp::dump_run_config(cfg);
    return 0;
  }
  apply_jobs(g.jobs);

  std::ifstream mf(manifest_path);
  if (!mf) throw morp::Error("cannot open manifest " + manifest_path);
  std::string text{std::istreambuf_iterator<char>(mf),
                   std::istreambuf_iterator<char>()};
  auto rows = morp::parse_manifest(text);
  morp::check_split_leakage(rows);

  fs::create_directories(out_dir);
  std::ofstream index(fs::path(out_dir) / "index.jsonl");

  for (const auto& row : rows) {
    std::string id = "scene_" + std::to_string(row.img);
    fs::path img_path = fs::path(scenes_dir) / (id + "_img.pgm");
    fs::path mask_path = fs::path(scenes_dir) / (id + "_mask.pgm");
    morp::Scene scene;
    scene.id = id;
    scene.intensity = morp::load_intensity(img_path, 65535.0);
    scene.labels = morp::load_mask(mask_path);

    scene.intensity = morp::percentile_normalize(
        scene.intensity, cfg.patches.percentile_lo, cfg.patches.percentile_hi);
    if (cfg.patches.median_filter)
      scene.intensity = morp::median_filter_3x3(scene.intensity);

    std::uint64_t scene_seed =
        morp::derive_seed(cfg.morp.seed, static_cast<std::uint64_t>(row.img));
    auto patches =
        morp::extract_patches(scene, cfg.patches.window, cfg.patches.stride,
                              cfg.patches.neg_pos_ratio, scene_seed);
    if (cfg.patches.multiscale_count > 0 &&
        scene.labels.height >= cfg.patches.multiscale_min &&
        scene.labels.width >= cfg.patches.multiscale_min) {
      auto ms = morp::multiscale_patches(
          scene, cfg.patches.multiscale_min, cfg.patches.multiscale_max,
          cfg.patches.multiscale_count, scene_seed);
      patches.insert(patches.end(), std::make_move_iterator(ms.begin()),
                     std::make_move_iterator(ms.end()));
    }

    for (const auto& patch : patches) {
      std::string stem = id + "_" + morp::patch_kind_name(patch.kind) + "_" +
                         std::to_string(patch.origin_row) + "_" +
                         std::to_string(patch.origin_col) + "_w" +
                         std::to_string(patch.window);
      morp::save_intensity(patch.intensity, fs::path(out_dir) / (stem + "_img.pgm"),
                           65535.0);
      morp::save_mask(patch.labels, fs::path(out_dir) / (stem + "_mask.pgm"));
      index << json{{"file", stem},
                    {"scene", id},
                    {"origin", {patch.origin_row, patch.origin_col}},
                    {"window", patch.window},
                    {"kind", morp::patch_kind_name(patch.kind)},
                    {"split", row.split}}
                   .dump()
            << "\n";
    }
  }
  return 0;
}

int cmd_loss_eval(const GlobalOpts& g, const std::string& prob_path,
                  const std::string& truth_path) {
  morp::RunConfig cfg = resolve_config(g);
  if (g.dry_run) {
    std::cout << morp::dump_run_config(cfg);
    return 0;
  }
  apply_jobs(g.jobs);

  morp::ProbMap prob = morp::load_prob_map(prob_path);
  prob.validate();
  morp::LabelMap truth = morp::load_mask(truth_path);
  auto bd = morp::composite_loss(prob, truth, cfg.loss);

  json out{{"cb_cross_entropy", bd.ce},
           {"focal_tversky", bd.ftl},
           {"penalty_lookalike_to_oil", bd.penalties.size() > 0 ? bd.penalties[0] : 0.0},
           {"penalty_sea_to_lookalike", bd.penalties.size() > 1 ? bd.penalties[1] : 0.0},
           {"total", bd.total}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic label-mask augmentation, metrics and patch "
               "preparation for SAR oil-spill segmentation"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "JSON config file");
  std::uint64_t seed_val = 0;
  auto* seed_opt = app.add_option("--seed", seed_val, "master seed override");
  app.add_option("--jobs", g.jobs, "worker threads (results identical for any N)");
  app.add_flag("--dry-run", g.dry_run,
               "print the fully resolved config and touch no files");

  std::string input, output, regime = "m100";
  int multiplier = 1;
  auto* augment = app.add_subcommand("augment", "run MORP over a mask directory");
  augment->add_option("--input", input)->required();
  augment->add_option("--output", output)->required();
  augment->add_option("--regime", regime)
      ->check(CLI::IsMember({"nomove", "m00", "m50", "m100"}));
  augment->add_option("--multiplier", multiplier)->check(CLI::Range(1, 16));

  std::string pred_dir, truth_dir, report_out;
  double pixel_spacing = 10.0;
  auto* metrics = app.add_subcommand("metrics", "IoU and area report");
  metrics->add_option("--pred", pred_dir)->required();
  metrics->add_option("--truth", truth_dir)->required();
  metrics->add_option("--pixel-spacing", pixel_spacing);
  metrics->add_option("--out", report_out);

  std::string manifest, scenes_dir, patches_out;
  auto* patches = app.add_subcommand("patches", "scene-to-patch pipeline");
  patches->add_option("--manifest", manifest)->required();
  patches->add_option("--scenes", scenes_dir)->required();
  patches->add_option("--out", patches_out)->required();

  std::string prob_path, loss_truth;
  auto* loss_eval =
      app.add_subcommand("loss-eval", "composite loss on a prob-map fixture");
  loss_eval->add_option("--prob", prob_path)->required();
  loss_eval->add_option("--truth", loss_truth)->required();

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) g.seed = seed_val;

  try {
    if (augment->parsed())
      return cmd_augment(g, input, output, regime, multiplier);
    if (metrics->parsed())
      return cmd_metrics(g, pred_dir, truth_dir, pixel_spacing, report_out);
    if (patches->parsed())
      return cmd_patches(g, manifest, scenes_dir, patches_out);
    if (loss_eval->parsed()) return cmd_loss_eval(g, prob_path, loss_truth);
  } catch (const morp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const morp::ManifestParse& e) {
    std::cerr << "manifest error: " << e.what() << "\n";
    return 1;
  } catch (const morp::SplitLeakage& e) {
    std::cerr << "split leakage: " << e.what() << "\n";
    return 1;
  } catch (const morp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
