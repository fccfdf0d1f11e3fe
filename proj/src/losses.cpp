#include <algorithm>
#include <cmath>

#include "morp/errors.hpp"
#include "morp/metrics.hpp"

namespace morp {
namespace {

void check_shapes(const ProbMap& prob, const LabelMap& truth) {
  if (prob.width != truth.width || prob.height != truth.height)
    throw ShapeMismatch("prob map / label map size mismatch");
}

struct Kahan {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// Parallel per-row partials combined serially in row order, so the result
// does not depend on the thread count.
template <typename RowFn>
double reduce_rows(int height, RowFn&& fn) {
  std::vector<double> partial(height, 0.0);
#pragma omp parallel for
  for (int r = 0; r < height; ++r) partial[r] = fn(r);
  Kahan total;
  for (double v : partial) total.add(v);
  return total.sum;
}

}  // namespace

std::array<double, kNumClasses> cb_weights(
    const std::array<std::int64_t, kNumClasses>& counts) {
  std::int64_t n_max = 0;
  for (auto n : counts) n_max = std::max(n_max, n);
  if (n_max <= 0) throw AllEmpty("cb_weights: all class counts are zero");

  const double mu = static_cast<double>(n_max - 1) / static_cast<double>(n_max);

  std::array<double, kNumClasses> w{};
  double max_present = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    if (counts[c] > 0) {
      w[c] = mu == 0.0
                 ? 1.0
                 : (1.0 - mu) / (1.0 - std::pow(mu, static_cast<double>(counts[c])));
      max_present = std::max(max_present, w[c]);
    }
  }
  for (int c = 0; c < kNumClasses; ++c)
    if (counts[c] == 0) w[c] = max_present;

  // normalize so the mean over present classes is 1
  double sum = 0.0;
  int present = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    if (counts[c] > 0) {
      sum += w[c];
      present++;
    }
  }
  double scale = static_cast<double>(present) / sum;
  for (double& v : w) v *= scale;
  return w;
}

double cb_cross_entropy(const ProbMap& prob, const LabelMap& truth,
                        const std::array<double, kNumClasses>& weights,
                        double log_floor) {
  check_shapes(prob, truth);
  const int h = truth.height, w = truth.width;
  double sum = reduce_rows(h, [&](int r) {
    Kahan row;
    for (int c = 0; c < w; ++c) {
      int y = truth.at(r, c);
      row.add(-weights[y] * std::log(std::max(prob.at(y, r, c), log_floor)));
    }
    return row.sum;
  });
  return sum / (static_cast<double>(h) * w);
}

double focal_tversky(const ProbMap& prob, const LabelMap& truth, double alpha,
                     double beta, double gamma, double eps) {
  check_shapes(prob, truth);
  const int h = truth.height, w = truth.width;

  double loss_sum = 0.0;
  int n_classes = 0;
  for (int cls = 1; cls < kNumClasses; ++cls) {
    double tp = reduce_rows(h, [&](int r) {
      Kahan row;
      for (int c = 0; c < w; ++c)
        if (truth.at(r, c) == cls) row.add(prob.at(cls, r, c));
      return row.sum;
    });
    double fp = reduce_rows(h, [&](int r) {
      Kahan row;
      for (int c = 0; c < w; ++c)
        if (truth.at(r, c) != cls) row.add(prob.at(cls, r, c));
      return row.sum;
    });
    double fn = reduce_rows(h, [&](int r) {
      Kahan row;
      for (int c = 0; c < w; ++c)
        if (truth.at(r, c) == cls) row.add(1.0 - prob.at(cls, r, c));
      return row.sum;
    });
    bool present = false;
    for (std::size_t i = 0; i < truth.size() && !present; ++i)
      present = truth.data[i] == cls;
    if (!present) continue;

    double t_index = tp / (tp + alpha * fp + beta * fn + eps);
    loss_sum += std::pow(1.0 - t_index, gamma);
    n_classes++;
  }
  return n_classes == 0 ? 0.0 : loss_sum / n_classes;
}

double confusion_penalty(const ProbMap& prob, const LabelMap& truth, ClassId a,
                         ClassId b, double gamma_p) {
  check_shapes(prob, truth);
  if (a == b) throw Error("confusion penalty needs distinct classes");
  const int h = truth.height, w = truth.width;
  const int ca = raw(a), cb = raw(b);

  std::int64_t count = 0;
  for (std::uint8_t v : truth.data)
    if (v == ca) count++;
  if (count == 0) return 0.0;

  double sum = reduce_rows(h, [&](int r) {
    Kahan row;
    for (int c = 0; c < w; ++c)
      if (truth.at(r, c) == ca) row.add(std::pow(prob.at(cb, r, c), gamma_p));
    return row.sum;
  });
  return sum / static_cast<double>(count);
}

LossBreakdown composite_loss(const ProbMap& prob, const LabelMap& truth,
                             const LossWeights& weights) {
  LossBreakdown bd;
  auto class_counts = class_histogram(truth);
  auto w = cb_weights(class_counts);
  bd.ce = cb_cross_entropy(prob, truth, w, weights.eps);
  bd.ftl = focal_tversky(prob, truth, weights.tversky_alpha,
                         weights.tversky_beta, weights.tversky_gamma,
                         weights.eps);
  double total = weights.lambda_ce * bd.ce + weights.lambda_ftl * bd.ftl;
  for (const ConfusionPair& pair : weights.pairs) {
    double pen =
        confusion_penalty(prob, truth, pair.from, pair.to, weights.gamma_p);
    bd.penalties.push_back(pen);
    total += pair.weight * pen;
  }
  bd.total = total;
  return bd;
}

double total_loss(double real, double synth, double lambda_synth,
                  SynthNorm mode) {
  if (lambda_synth < 0.0) throw Error("lambda_synth must be >= 0");
  double scale = mode == SynthNorm::percent ? lambda_synth / 100.0 : lambda_synth;
  return real + scale * synth;
}

}  // namespace morp
