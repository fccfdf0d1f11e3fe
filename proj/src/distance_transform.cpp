#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "morp/errors.hpp"
#include "morp/geometry.hpp"

namespace morp {
namespace {

// Large finite sentinel; infinities would produce NaN in the envelope
// intersection formula.
constexpr double kInf = 1e18;
constexpr double kEnvInf = std::numeric_limits<double>::infinity();

// 1D squared-distance transform (lower envelope of parabolas).
void dt_1d(const double* f, double* out, int n, int* v, double* z) {
  int k = 0;
  v[0] = 0;
  z[0] = -kEnvInf;
  z[1] = kEnvInf;
  for (int q = 1; q < n; ++q) {
    double s;
    for (;;) {
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kEnvInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    double d = q - v[k];
    out[q] = d * d + f[v[k]];
  }
}

}  // namespace

Grid<double> distance_transform(const Grid<std::uint8_t>& reference) {
  const int h = reference.height, w = reference.width;
  bool any = false;
  for (std::uint8_t v : reference.data)
    if (v) {
      any = true;
      break;
    }
  if (!any) throw EmptyReferenceSet("distance transform with no reference pixels");

  Grid<double> sq(w, h);
  for (std::size_t i = 0; i < sq.size(); ++i)
    sq.data[i] = reference.data[i] ? 0.0 : kInf;

  // Pass 1: columns.
#pragma omp parallel
  {
    std::vector<double> f(h), out(h), z(h + 1);
    std::vector<int> v(h);
#pragma omp for
    for (int c = 0; c < w; ++c) {
      for (int r = 0; r < h; ++r) f[r] = sq.at(r, c);
      dt_1d(f.data(), out.data(), h, v.data(), z.data());
      for (int r = 0; r < h; ++r) sq.at(r, c) = out[r];
    }
  }
  // Pass 2: rows.
#pragma omp parallel
  {
    std::vector<double> f(w), out(w), z(w + 1);
    std::vector<int> v(w);
#pragma omp for
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) f[c] = sq.at(r, c);
      dt_1d(f.data(), out.data(), w, v.data(), z.data());
      for (int c = 0; c < w; ++c) sq.at(r, c) = out[c];
    }
  }

  Grid<double> dist(w, h);
  for (std::size_t i = 0; i < dist.size(); ++i)
    dist.data[i] = std::sqrt(sq.data[i]);
  return dist;
}

Vec2 outward_normal(const Grid<double>& dist, Vec2 apex, Vec2 centroid,
                    double eps) {
  const int h = dist.height, w = dist.width;
  int r = static_cast<int>(std::lround(apex.y));
  int c = static_cast<int>(std::lround(apex.x));
  r = std::clamp(r, 0, h - 1);
  c = std::clamp(c, 0, w - 1);

  // Central differences, one-sided at the image edge.
  int cl = std::max(0, c - 1), cr2 = std::min(w - 1, c + 1);
  int ru = std::max(0, r - 1), rd = std::min(h - 1, r + 1);
  double gx = (dist.at(r, cr2) - dist.at(r, cl)) / (cr2 - cl == 0 ? 1 : cr2 - cl);
  double gy = (dist.at(rd, c) - dist.at(ru, c)) / (rd - ru == 0 ? 1 : rd - ru);
  double gnorm = std::hypot(gx, gy);
  if (gnorm > eps) return {gx / gnorm, gy / gnorm};

  double fx = apex.x - centroid.x;
  double fy = apex.y - centroid.y;
  double fnorm = std::hypot(fx, fy);
  if (fnorm > eps) return {fx / fnorm, fy / fnorm};
  throw DegenerateNormal("gradient and centroid offset both degenerate");
}

double inward_support(const Region& region, Vec2 apex, Vec2 u) {
  double last_inside = 0.0;
  for (double t = 0.5;; t += 0.5) {
    int c = static_cast<int>(std::lround(apex.x - t * u.x));
    int r = static_cast<int>(std::lround(apex.y - t * u.y));
    if (!region.contains(r, c)) break;
    last_inside = t;
  }
  return static_cast<double>(std::lround(last_inside));
}

}  // namespace morp
