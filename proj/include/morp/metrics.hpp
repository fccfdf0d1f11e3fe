#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "morp/label_map.hpp"

namespace morp {

// Per-pixel class probabilities, layout [class][row][col].
struct ProbMap {
  int height = 0;
  int width = 0;
  std::vector<double> p;

  ProbMap() = default;
  ProbMap(int w, int h)
      : height(h), width(w),
        p(static_cast<std::size_t>(kNumClasses) * w * h, 0.0) {}

  double& at(int cls, int r, int c) {
    return p[(static_cast<std::size_t>(cls) * height + r) * width + c];
  }
  double at(int cls, int r, int c) const {
    return p[(static_cast<std::size_t>(cls) * height + r) * width + c];
  }

  // Checks probabilities are nonnegative and sum to 1 per pixel (1e-6).
  void validate() const;
};

// Binary prob-map container: magic "PMF1", uint32 h, w, c, float32 data.
ProbMap load_prob_map(const std::filesystem::path& path);
void save_prob_map(const ProbMap& pm, const std::filesystem::path& path);

struct ConfusionCounts {
  // matrix[truth][pred], 5x5 pixel counts
  std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> matrix{};

  std::int64_t tp(int c) const { return matrix[c][c]; }
  std::int64_t fp(int c) const;
  std::int64_t fn(int c) const;
};

ConfusionCounts confusion_counts(const LabelMap& pred, const LabelMap& truth);

struct IouResult {
  std::array<double, kNumClasses> per_class{};
  double miou = 0.0;
};

// IoU_c = TP/(TP+FP+FN); a class absent from both maps scores 1.
IouResult iou(const ConfusionCounts& counts);

struct SceneAreaStats {
  std::array<double, kNumClasses> predicted_km2{};
  std::array<double, kNumClasses> false_positive_km2{};
  IouResult iou;
};

SceneAreaStats scene_area_stats(const LabelMap& pred, const LabelMap& truth,
                                double pixel_area_m2);

// --- losses ---------------------------------------------------------------

// Effective-number class weights, normalized to mean 1 over present classes;
// absent classes inherit the largest present weight.
std::array<double, kNumClasses> cb_weights(
    const std::array<std::int64_t, kNumClasses>& counts);

double cb_cross_entropy(const ProbMap& prob, const LabelMap& truth,
                        const std::array<double, kNumClasses>& weights,
                        double log_floor = 1e-7);

// Focal-Tversky over foreground classes (1..4) present in the truth map,
// soft (probability-weighted) counts.
double focal_tversky(const ProbMap& prob, const LabelMap& truth, double alpha,
                     double beta, double gamma, double eps = 1e-7);

// Mean of p_b^gamma_p over pixels whose truth is a; 0 when none.
double confusion_penalty(const ProbMap& prob, const LabelMap& truth, ClassId a,
                         ClassId b, double gamma_p);

struct ConfusionPair {
  ClassId from, to;
  double weight;
};

enum class SynthNorm { raw, percent };

struct LossWeights {
  double lambda_ce = 0.3;
  double lambda_ftl = 0.7;
  std::vector<ConfusionPair> pairs = {
      {ClassId::lookalike, ClassId::oil, 0.40},
      {ClassId::sea, ClassId::lookalike, 0.30},
  };
  double tversky_alpha = 0.65;
  double tversky_beta = 0.35;
  double tversky_gamma = 1.33;
  double gamma_p = 2.0;
  double eps = 1e-7;
  double lambda_synth = 0.0;
  SynthNorm synth_norm = SynthNorm::raw;
};

struct LossBreakdown {
  double ce = 0.0;    // pre-weight term values
  double ftl = 0.0;
  std::vector<double> penalties;
  double total = 0.0;
};

LossBreakdown composite_loss(const ProbMap& prob, const LabelMap& truth,
                             const LossWeights& weights);

double total_loss(double real, double synth, double lambda_synth,
                  SynthNorm mode);

}  // namespace morp
