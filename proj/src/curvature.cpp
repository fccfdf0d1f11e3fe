#include <cmath>

#include "morp/geometry.hpp"

namespace morp {
namespace {

// Circular central difference with index step d.
std::vector<double> circular_diff(const std::vector<double>& v, int d) {
  const int n = static_cast<int>(v.size());
  std::vector<double> out(n);
  for (int t = 0; t < n; ++t) {
    int fwd = (t + d) % n;
    int bwd = ((t - d) % n + n) % n;
    out[t] = (v[fwd] - v[bwd]) / (2.0 * d);
  }
  return out;
}

}  // namespace

CurvatureProfile curvature_profile(const Contour& contour,
                                   const CurvatureParams& params) {
  const int n = contour.size();
  CurvatureProfile prof;
  prof.smooth_x = sg_smooth_circular(contour.xs, params.window,
                                     params.polyorder);
  prof.smooth_y = sg_smooth_circular(contour.ys, params.window,
                                     params.polyorder);

  const int step = std::max(1, params.deriv_step);
  auto dx = circular_diff(prof.smooth_x, step);
  auto dy = circular_diff(prof.smooth_y, step);
  auto ddx = circular_diff(dx, step);
  auto ddy = circular_diff(dy, step);

  prof.kappa.resize(n);
  for (int t = 0; t < n; ++t) {
    double speed_sq = dx[t] * dx[t] + dy[t] * dy[t];
    prof.kappa[t] = (dx[t] * ddy[t] - dy[t] * ddx[t]) /
                    (std::pow(speed_sq, 1.5) + params.eps);
  }

  double cx = 0.0, cy = 0.0;
  for (int t = 0; t < n; ++t) {
    cx += prof.smooth_x[t];
    cy += prof.smooth_y[t];
  }
  prof.centroid_x = cx / n;
  prof.centroid_y = cy / n;

  prof.radii.resize(n);
  double mean_r = 0.0;
  for (int t = 0; t < n; ++t) {
    prof.radii[t] = std::hypot(prof.smooth_x[t] - prof.centroid_x,
                               prof.smooth_y[t] - prof.centroid_y);
    mean_r += prof.radii[t];
  }
  mean_r /= n;
  double var_r = 0.0;
  for (double r : prof.radii) var_r += (r - mean_r) * (r - mean_r);
  double sigma_r = std::sqrt(var_r / n);

  prof.kappa_plus.resize(n);
  for (int t = 0; t < n; ++t) {
    double kp = std::max(0.0, prof.kappa[t]);
    if (params.radial_boost != 0.0) {
      kp *= 1.0 + params.radial_boost * (prof.radii[t] - mean_r) /
                      (sigma_r + params.eps);
    }
    prof.kappa_plus[t] = std::max(0.0, kp);
  }
  return prof;
}

}  // namespace morp
