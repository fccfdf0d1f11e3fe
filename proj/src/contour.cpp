#include <algorithm>
#include <array>

#include "morp/errors.hpp"
#include "morp/geometry.hpp"

namespace morp {
namespace {

// Moore neighborhood in clockwise order, starting west: W NW N NE E SE S SW.
constexpr std::array<std::pair<int, int>, 8> kOffsets = {{
    {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1},
}};

int offset_index(int dr, int dc) {
  for (int i = 0; i < 8; ++i)
    if (kOffsets[i].first == dr && kOffsets[i].second == dc) return i;
  return -1;
}

}  // namespace

double signed_area(const Contour& contour) {
  const int n = contour.size();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    acc += contour.xs[i] * contour.ys[j] - contour.xs[j] * contour.ys[i];
  }
  return 0.5 * acc;
}

Contour trace_outer_contour(const Region& region) {
  if (region.area() < 1) throw DegenerateRegion("empty region");

  // Topmost-then-leftmost region pixel; its west neighbor is background.
  const auto [sr, sc] = *std::min_element(region.pixels.begin(),
                                          region.pixels.end());

  std::vector<std::pair<int, int>> pts;
  pts.emplace_back(sr, sc);

  int cr = sr, cc = sc;
  int back = 0;  // index of the backtrack (background) neighbor, initially W
  const int start_back = back;
  const long max_steps = 8L * region.area() + 8;

  for (long step = 0; step < max_steps; ++step) {
    int next_r = 0, next_c = 0, hit = -1;
    for (int i = 1; i <= 8; ++i) {
      int idx = (back + i) % 8;
      int nr = cr + kOffsets[idx].first;
      int nc = cc + kOffsets[idx].second;
      if (region.contains(nr, nc)) {
        next_r = nr;
        next_c = nc;
        hit = i;
        break;
      }
    }
    if (hit < 0) break;  // isolated pixel

    // Backtrack for the next pixel: the last background cell scanned,
    // re-expressed relative to the next pixel.
    int prev_idx = (back + hit - 1) % 8;
    int br = cr + kOffsets[prev_idx].first;
    int bc = cc + kOffsets[prev_idx].second;
    cr = next_r;
    cc = next_c;
    back = offset_index(br - cr, bc - cc);

    if (cr == sr && cc == sc && back == start_back) break;  // cycle closed
    pts.emplace_back(cr, cc);
  }

  Contour contour;
  contour.xs.reserve(pts.size());
  contour.ys.reserve(pts.size());
  for (auto [r, c] : pts) {
    contour.xs.push_back(static_cast<double>(c));
    contour.ys.push_back(static_cast<double>(r));
  }

  std::vector<std::pair<int, int>> distinct = pts;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());
  contour.degenerate = distinct.size() < 3;

  if (signed_area(contour) < 0.0) {
    std::reverse(contour.xs.begin() + 1, contour.xs.end());
    std::reverse(contour.ys.begin() + 1, contour.ys.end());
  }
  return contour;
}

}  // namespace morp
