#include <algorithm>
#include <cmath>
#include <limits>

#include "morp/geometry.hpp"

namespace morp {
namespace {

double dist_sq(Vec2 a, Vec2 b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace

std::vector<int> select_apices_kmeans(const Contour& contour,
                                      std::span<const int> apex_indices, int m,
                                      Vec2 centroid, Rng& rng) {
  std::vector<int> sorted(apex_indices.begin(), apex_indices.end());
  std::sort(sorted.begin(), sorted.end());
  const int n = static_cast<int>(sorted.size());
  if (n == 0) return {};
  if (n <= m) return sorted;

  std::vector<Vec2> pts(n);
  for (int i = 0; i < n; ++i)
    pts[i] = {contour.xs[sorted[i]], contour.ys[sorted[i]]};

  // Farthest-first seeding: first center from the PRNG, the rest maximize
  // the minimum distance to the chosen centers (ties: smaller index).
  std::vector<Vec2> centers;
  centers.push_back(pts[rng.uniform_int(static_cast<std::uint64_t>(n))]);
  while (static_cast<int>(centers.size()) < m) {
    int best = 0;
    double best_d = -1.0;
    for (int i = 0; i < n; ++i) {
      double d = std::numeric_limits<double>::max();
      for (const Vec2& c : centers) d = std::min(d, dist_sq(pts[i], c));
      if (d > best_d) {
        best_d = d;
        best = i;
      }
    }
    centers.push_back(pts[best]);
  }

  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 50; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = dist_sq(pts[i], centers[0]);
      for (int k = 1; k < m; ++k) {
        double d = dist_sq(pts[i], centers[k]);
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    // Recompute centers; reseed empty clusters from the point farthest
    // from its current center.
    std::vector<Vec2> sums(m, Vec2{});
    std::vector<int> counts(m, 0);
    for (int i = 0; i < n; ++i) {
      sums[assign[i]].x += pts[i].x;
      sums[assign[i]].y += pts[i].y;
      counts[assign[i]]++;
    }
    for (int k = 0; k < m; ++k) {
      if (counts[k] > 0) {
        centers[k] = {sums[k].x / counts[k], sums[k].y / counts[k]};
      } else {
        int far_i = 0;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          double d = dist_sq(pts[i], centers[assign[i]]);
          if (d > far_d) {
            far_d = d;
            far_i = i;
          }
        }
        centers[k] = pts[far_i];
        assign[far_i] = k;
        changed = true;
      }
    }
    if (!changed) break;
  }

  // Per cluster: point maximizing distance to the region centroid, ties
  // broken by smaller contour index (first occurrence wins).
  std::vector<int> chosen;
  for (int k = 0; k < m; ++k) {
    int best = -1;
    double best_d = -1.0;
    for (int i = 0; i < n; ++i) {
      if (assign[i] != k) continue;
      double d = dist_sq(pts[i], centroid);
      if (d > best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best >= 0) chosen.push_back(sorted[best]);
  }
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  return chosen;
}

}  // namespace morp
