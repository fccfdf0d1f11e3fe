#include <algorithm>
#include <cmath>

#include "morp/errors.hpp"
#include "morp/geometry.hpp"

namespace morp {

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error("quantile of empty set");
  std::sort(values.begin(), values.end());
  if (q <= 0.0) return values.front();
  if (q >= 1.0) return values.back();
  double pos = q * (values.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

namespace {

// Left index of each plateau that is a circular local maximum.
std::vector<int> circular_local_maxima(std::span<const double> v) {
  const int n = static_cast<int>(v.size());
  std::vector<int> maxima;
  for (int t = 0; t < n; ++t) {
    if (v[t] <= v[((t - 1) % n + n) % n]) continue;  // plateau left edge only
    // walk over the plateau to the right
    int j = t;
    while (v[(j + 1) % n] == v[t] && (j + 1) % n != t) ++j;
    if (v[t] > v[(j + 1) % n]) maxima.push_back(t);
  }
  return maxima;
}

// Topographic prominence on the circular signal: descend left and right
// until a strictly higher sample, keep the minimum on each walk.
double circular_prominence(std::span<const double> v, int peak) {
  const int n = static_cast<int>(v.size());
  const double h = v[peak];
  double left_min = h, right_min = h;
  bool higher_left = false, higher_right = false;
  for (int s = 1; s < n; ++s) {
    double x = v[((peak - s) % n + n) % n];
    if (x > h) {
      higher_left = true;
      break;
    }
    left_min = std::min(left_min, x);
  }
  for (int s = 1; s < n; ++s) {
    double x = v[(peak + s) % n];
    if (x > h) {
      higher_right = true;
      break;
    }
    right_min = std::min(right_min, x);
  }
  // Global maximum: base is the lowest sample reachable either way.
  if (!higher_left && !higher_right) return h - std::min(left_min, right_min);
  if (!higher_left) return h - right_min;
  if (!higher_right) return h - left_min;
  return h - std::max(left_min, right_min);
}

int circular_distance(int a, int b, int n) {
  int d = std::abs(a - b) % n;
  return std::min(d, n - d);
}

}  // namespace

std::vector<int> detect_apices(std::span<const double> kappa_plus,
                               double quantile_q, int min_distance) {
  const int n = static_cast<int>(kappa_plus.size());
  if (n == 0) return {};

  double tau = quantile(std::vector<double>(kappa_plus.begin(),
                                            kappa_plus.end()),
                        quantile_q);

  std::vector<int> candidates;
  for (int t : circular_local_maxima(kappa_plus))
    if (circular_prominence(kappa_plus, t) > tau) candidates.push_back(t);

  // Greedy minimum-distance suppression, taller peaks first; equal heights
  // keep the smaller index.
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    if (kappa_plus[a] != kappa_plus[b]) return kappa_plus[a] > kappa_plus[b];
    return a < b;
  });
  std::vector<int> kept;
  for (int t : candidates) {
    bool ok = true;
    for (int k : kept)
      if (circular_distance(t, k, n) < min_distance) {
        ok = false;
        break;
      }
    if (ok) kept.push_back(t);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace morp
