#include "morp/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "morp/errors.hpp"

namespace morp::reference {

Grid<double> distance_transform_bruteforce(
    const Grid<std::uint8_t>& reference) {
  const int h = reference.height, w = reference.width;
  std::vector<std::pair<int, int>> refs;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (reference.at(r, c)) refs.emplace_back(r, c);
  if (refs.empty())
    throw EmptyReferenceSet("distance transform with no reference pixels");

  Grid<double> dist(w, h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (auto [rr, rc] : refs) {
        std::int64_t dr = r - rr, dc = c - rc;
        best = std::min(best, dr * dr + dc * dc);
      }
      dist.at(r, c) = std::sqrt(static_cast<double>(best));
    }
  return dist;
}

Grid<float> median_filter_3x3_serial(const Grid<float>& intensity) {
  const int h = intensity.height, w = intensity.width;
  if (h < 3 || w < 3) throw TooSmall("median filter needs >= 3x3");
  auto reflect = [](int i, int n) {
    if (i < 0) return -i;
    if (i >= n) return 2 * n - 2 - i;
    return i;
  };
  Grid<float> out(w, h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      std::array<float, 9> win;
      int k = 0;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
          win[k++] = intensity.at(reflect(r + dr, h), reflect(c + dc, w));
      std::sort(win.begin(), win.end());
      out.at(r, c) = win[4];
    }
  return out;
}

ConfusionCounts confusion_counts_serial(const LabelMap& pred,
                                        const LabelMap& truth) {
  if (pred.width != truth.width || pred.height != truth.height)
    throw ShapeMismatch("confusion_counts: size mismatch");
  ConfusionCounts counts;
  for (std::size_t i = 0; i < pred.size(); ++i)
    counts.matrix[truth.data[i]][pred.data[i]]++;
  return counts;
}

}  // namespace morp::reference
