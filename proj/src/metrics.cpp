#include "morp/metrics.hpp"

#include <cstring>
#include <fstream>

#include "morp/errors.hpp"
#include "morp/mask_io.hpp"

namespace morp {

void ProbMap::validate() const {
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double sum = 0.0;
      for (int cls = 0; cls < kNumClasses; ++cls) {
        double v = at(cls, r, c);
        if (v < 0.0) throw Error("negative probability");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-6)
        throw Error("pixel probabilities do not sum to 1");
    }
  }
}

ProbMap load_prob_map(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "PMF1", 4) != 0)
    throw MalformedImage("not a PMF1 prob-map file");
  auto rd_u32 = [&](std::size_t off) {
    std::uint32_t v;
    std::memcpy(&v, bytes.data() + off, 4);
    return v;
  };
  std::uint32_t h = rd_u32(4), w = rd_u32(8), c = rd_u32(12);
  if (c != kNumClasses) throw MalformedImage("prob map must have 5 classes");
  std::size_t n = static_cast<std::size_t>(h) * w * c;
  if (bytes.size() != 16 + n * 4) throw MalformedImage("truncated prob map");
  ProbMap pm(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t i = 0; i < n; ++i) {
    float f;
    std::memcpy(&f, bytes.data() + 16 + 4 * i, 4);
    pm.p[i] = f;
  }
  return pm;
}

void save_prob_map(const ProbMap& pm, const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes(16 + pm.p.size() * 4);
  std::memcpy(bytes.data(), "PMF1", 4);
  std::uint32_t h = pm.height, w = pm.width, c = kNumClasses;
  std::memcpy(bytes.data() + 4, &h, 4);
  std::memcpy(bytes.data() + 8, &w, 4);
  std::memcpy(bytes.data() + 12, &c, 4);
  for (std::size_t i = 0; i < pm.p.size(); ++i) {
    float f = static_cast<float>(pm.p[i]);
    std::memcpy(bytes.data() + 16 + 4 * i, &f, 4);
  }
  write_file_bytes(path, bytes);
}

std::int64_t ConfusionCounts::fp(int c) const {
  std::int64_t acc = 0;
  for (int t = 0; t < kNumClasses; ++t)
    if (t != c) acc += matrix[t][c];
  return acc;
}

std::int64_t ConfusionCounts::fn(int c) const {
  std::int64_t acc = 0;
  for (int p = 0; p < kNumClasses; ++p)
    if (p != c) acc += matrix[c][p];
  return acc;
}

ConfusionCounts confusion_counts(const LabelMap& pred, const LabelMap& truth) {
  if (pred.width != truth.width || pred.height != truth.height)
    throw ShapeMismatch("confusion_counts: size mismatch");
  ConfusionCounts counts;

  const int h = pred.height;
#pragma omp parallel
  {
    ConfusionCounts local;
#pragma omp for nowait
    for (int r = 0; r < h; ++r) {
      const std::uint8_t* pr = &pred.data[static_cast<std::size_t>(r) * pred.width];
      const std::uint8_t* tr = &truth.data[static_cast<std::size_t>(r) * pred.width];
      for (int c = 0; c < pred.width; ++c) local.matrix[tr[c]][pr[c]]++;
    }
#pragma omp critical
    for (int t = 0; t < kNumClasses; ++t)
      for (int p = 0; p < kNumClasses; ++p)
        counts.matrix[t][p] += local.matrix[t][p];
  }
  return counts;
}

IouResult iou(const ConfusionCounts& counts) {
  IouResult res;
  double sum = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    std::int64_t denom = counts.tp(c) + counts.fp(c) + counts.fn(c);
    res.per_class[c] =
        denom == 0 ? 1.0
                   : static_cast<double>(counts.tp(c)) / static_cast<double>(denom);
    sum += res.per_class[c];
  }
  res.miou = sum / kNumClasses;
  return res;
}

SceneAreaStats scene_area_stats(const LabelMap& pred, const LabelMap& truth,
                                double pixel_area_m2) {
  if (pred.width != truth.width || pred.height != truth.height)
    throw ShapeMismatch("scene_area_stats: size mismatch");
  if (pixel_area_m2 <= 0.0) throw Error("pixel area must be positive");

  std::array<std::int64_t, kNumClasses> pred_px{}, fp_px{};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    pred_px[pred.data[i]]++;
    if (pred.data[i] != truth.data[i]) fp_px[pred.data[i]]++;
  }
  SceneAreaStats stats;
  for (int c = 0; c < kNumClasses; ++c) {
    stats.predicted_km2[c] = pred_px[c] * pixel_area_m2 / 1e6;
    stats.false_positive_km2[c] = fp_px[c] * pixel_area_m2 / 1e6;
  }
  stats.iou = iou(confusion_counts(pred, truth));
  return stats;
}

}  // namespace morp
