#include "morp/patches.hpp"

#include <algorithm>
#include <cmath>

#include "morp/errors.hpp"
#include "morp/rng.hpp"

namespace morp {
namespace {

double nearest_rank_percentile(const std::vector<float>& sorted, double pct) {
  const std::size_t n = sorted.size();
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(pct / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

// Window origins covering the scene: the regular stride grid plus the
// clamped final position on each axis.
std::vector<int> axis_positions(int extent, int window, int stride) {
  std::vector<int> pos;
  for (int p = 0; p + window <= extent; p += stride) pos.push_back(p);
  if (pos.empty() || pos.back() != extent - window)
    pos.push_back(extent - window);
  return pos;
}

// Integral image of a per-pixel predicate over the label map.
template <typename Pred>
std::vector<std::int64_t> integral(const LabelMap& map, Pred pred) {
  const int h = map.height, w = map.width;
  std::vector<std::int64_t> sums(static_cast<std::size_t>(h + 1) * (w + 1), 0);
  for (int r = 0; r < h; ++r) {
    std::int64_t row_acc = 0;
    for (int c = 0; c < w; ++c) {
      row_acc += pred(map.at(r, c)) ? 1 : 0;
      sums[static_cast<std::size_t>(r + 1) * (w + 1) + (c + 1)] =
          sums[static_cast<std::size_t>(r) * (w + 1) + (c + 1)] + row_acc;
    }
  }
  return sums;
}

std::int64_t window_sum(const std::vector<std::int64_t>& sums, int w, int r,
                        int c, int win) {
  auto at = [&](int rr, int cc) {
    return sums[static_cast<std::size_t>(rr) * (w + 1) + cc];
  };
  return at(r + win, c + win) - at(r, c + win) - at(r + win, c) + at(r, c);
}

Patch cut_patch(const Scene& scene, int r0, int c0, int window,
                PatchKind kind) {
  Patch patch;
  patch.intensity = Grid<float>(window, window);
  patch.labels = LabelMap(window, window);
  for (int r = 0; r < window; ++r)
    for (int c = 0; c < window; ++c) {
      patch.intensity.at(r, c) = scene.intensity.at(r0 + r, c0 + c);
      patch.labels.at(r, c) = scene.labels.at(r0 + r, c0 + c);
    }
  patch.origin_row = r0;
  patch.origin_col = c0;
  patch.window = window;
  patch.kind = kind;
  return patch;
}

bool is_spill(std::uint8_t v) {
  return v == raw(ClassId::oil) || v == raw(ClassId::lookalike);
}

}  // namespace

const char* patch_kind_name(PatchKind k) {
  switch (k) {
    case PatchKind::positive: return "positive";
    case PatchKind::background: return "background";
    case PatchKind::multiscale: return "multiscale";
    case PatchKind::hard_negative: return "hard-negative";
  }
  return "?";
}

Grid<float> percentile_normalize(const Grid<float>& intensity, double lo,
                                 double hi) {
  std::vector<float> finite;
  finite.reserve(intensity.size());
  for (float v : intensity.data)
    if (std::isfinite(v)) finite.push_back(v);
  if (finite.size() < 2) throw DegenerateScene("not enough finite samples");
  std::sort(finite.begin(), finite.end());

  const double p_lo = nearest_rank_percentile(finite, lo);
  const double p_hi = nearest_rank_percentile(finite, hi);
  if (p_hi <= p_lo) throw DegenerateScene("constant intensity scene");

  Grid<float> out(intensity.width, intensity.height);
  for (std::size_t i = 0; i < intensity.size(); ++i) {
    double v = std::clamp(static_cast<double>(intensity.data[i]), p_lo, p_hi);
    out.data[i] = static_cast<float>((v - p_lo) / (p_hi - p_lo));
  }
  return out;
}

Grid<float> median_filter_3x3(const Grid<float>& intensity) {
  const int h = intensity.height, w = intensity.width;
  if (h < 3 || w < 3) throw TooSmall("median filter needs >= 3x3");
  Grid<float> out(w, h);
  auto reflect = [](int i, int n) {
    if (i < 0) return -i;
    if (i >= n) return 2 * n - 2 - i;
    return i;
  };
#pragma omp parallel for
  for (int r = 0; r < h; ++r) {
    float win[9];
    for (int c = 0; c < w; ++c) {
      int k = 0;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
          win[k++] = intensity.at(reflect(r + dr, h), reflect(c + dc, w));
      std::sort(win, win + 9);
      out.at(r, c) = win[4];
    }
  }
  return out;
}

std::vector<Patch> extract_patches(const Scene& scene, int window, int stride,
                                   double neg_pos_ratio, std::uint64_t seed) {
  const int h = scene.labels.height, w = scene.labels.width;
  if (h < window || w < window)
    throw SceneTooSmall("scene smaller than patch window");
  if (stride < 1) throw Error("stride must be >= 1");

  auto spill = integral(scene.labels, is_spill);
  auto rows = axis_positions(h, window, stride);
  auto cols = axis_positions(w, window, stride);

  std::vector<Patch> out;
  std::vector<std::pair<int, int>> negatives;
  for (int r : rows)
    for (int c : cols) {
      if (window_sum(spill, w, r, c, window) > 0)
        out.push_back(cut_patch(scene, r, c, window, PatchKind::positive));
      else
        negatives.emplace_back(r, c);
    }

  const std::size_t n_pos = out.size();
  std::size_t want =
      static_cast<std::size_t>(std::llround(neg_pos_ratio * n_pos));
  Rng rng(derive_seed(seed, 0xBACC));
  for (std::size_t i = negatives.size(); i > 1; --i)
    std::swap(negatives[i - 1], negatives[rng.uniform_int(i)]);
  for (std::size_t i = 0; i < std::min(want, negatives.size()); ++i)
    out.push_back(cut_patch(scene, negatives[i].first, negatives[i].second,
                            window, PatchKind::background));
  return out;
}

std::vector<Patch> multiscale_patches(const Scene& scene, int min_window,
                                      int max_window, int count,
                                      std::uint64_t seed, int out_size) {
  const int h = scene.labels.height, w = scene.labels.width;
  if (h < min_window || w < min_window)
    throw SceneTooSmall("scene smaller than minimum multiscale window");

  std::vector<std::pair<int, int>> support;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (is_spill(scene.labels.at(r, c))) support.emplace_back(r, c);
  if (support.empty()) return {};

  Rng rng(derive_seed(seed, 0x5CA1E));
  std::vector<Patch> out;
  for (int i = 0; i < count; ++i) {
    // Window centered near an annotated pixel (dilated support, radius 64).
    auto [ar, ac] = support[rng.uniform_int(support.size())];
    double jr, jc;
    do {
      jr = rng.uniform(-64.0, 64.0);
      jc = rng.uniform(-64.0, 64.0);
    } while (std::hypot(jr, jc) > 64.0);
    int side = min_window +
               static_cast<int>(rng.uniform_int(
                   static_cast<std::uint64_t>(
                       std::min(max_window, std::min(h, w)) - min_window + 1)));
    int r0 = std::clamp(ar + static_cast<int>(std::lround(jr)) - side / 2, 0,
                        h - side);
    int c0 = std::clamp(ac + static_cast<int>(std::lround(jc)) - side / 2, 0,
                        w - side);

    Patch big = cut_patch(scene, r0, c0, side, PatchKind::multiscale);

    Patch patch;
    patch.origin_row = r0;
    patch.origin_col = c0;
    patch.window = side;
    patch.kind = PatchKind::multiscale;
    patch.intensity = Grid<float>(out_size, out_size);
    patch.labels = LabelMap(out_size, out_size);

    const double scale = static_cast<double>(side) / out_size;
    for (int r = 0; r < out_size; ++r) {
      for (int c = 0; c < out_size; ++c) {
        // area-averaged intensity over the fractional source box
        double r_lo = r * scale, r_hi = (r + 1) * scale;
        double c_lo = c * scale, c_hi = (c + 1) * scale;
        double acc = 0.0, area = 0.0;
        for (int sr = static_cast<int>(r_lo);
             sr < static_cast<int>(std::ceil(r_hi)); ++sr) {
          double wr = std::min<double>(sr + 1, r_hi) - std::max<double>(sr, r_lo);
          for (int sc = static_cast<int>(c_lo);
               sc < static_cast<int>(std::ceil(c_hi)); ++sc) {
            double wc =
                std::min<double>(sc + 1, c_hi) - std::max<double>(sc, c_lo);
            acc += wr * wc * big.intensity.at(sr, sc);
            area += wr * wc;
          }
        }
        patch.intensity.at(r, c) = static_cast<float>(acc / area);

        // nearest-neighbor labels
        int nr = std::min(side - 1,
                          static_cast<int>((r + 0.5) * scale));
        int nc = std::min(side - 1,
                          static_cast<int>((c + 0.5) * scale));
        patch.labels.at(r, c) = big.labels.at(nr, nc);
      }
    }
    out.push_back(std::move(patch));
  }
  return out;
}

std::vector<std::pair<int, int>> hard_negative_filter(const LabelMap& pred,
                                                      const LabelMap& truth,
                                                      int window,
                                                      double fp_area_frac,
                                                      double sea_overlap_frac) {
  if (pred.width != truth.width || pred.height != truth.height)
    throw ShapeMismatch("hard_negative_filter: size mismatch");
  const int h = pred.height, w = pred.width;
  if (h < window || w < window) return {};

  // FP spill: predicted oil/look-alike where the truth is sea.
  std::vector<std::int64_t> fp(static_cast<std::size_t>(h + 1) * (w + 1), 0);
  for (int r = 0; r < h; ++r) {
    std::int64_t row_acc = 0;
    for (int c = 0; c < w; ++c) {
      bool hit = is_spill(pred.at(r, c)) && truth.at(r, c) == raw(ClassId::sea);
      row_acc += hit ? 1 : 0;
      fp[static_cast<std::size_t>(r + 1) * (w + 1) + (c + 1)] =
          fp[static_cast<std::size_t>(r) * (w + 1) + (c + 1)] + row_acc;
    }
  }
  auto sea = integral(truth, [](std::uint8_t v) { return v == raw(ClassId::sea); });

  const double win_px = static_cast<double>(window) * window;
  std::vector<std::pair<int, int>> out;
  for (int r : axis_positions(h, window, window))
    for (int c : axis_positions(w, window, window)) {
      double fp_px = static_cast<double>(window_sum(fp, w, r, c, window));
      double sea_px = static_cast<double>(window_sum(sea, w, r, c, window));
      if (fp_px >= fp_area_frac * win_px && sea_px >= sea_overlap_frac * win_px)
        out.emplace_back(r, c);
    }
  return out;
}

}  // namespace morp
