#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "morp/grid.hpp"
#include "morp/label_map.hpp"
#include "morp/rng.hpp"

namespace morp {

struct Vec2 {
  double x = 0.0;  // column axis
  double y = 0.0;  // row axis
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }

// Closed discrete boundary curve, CCW (shoelace signed area > 0) after
// normalization. Points are pixel centers, x = column, y = row.
struct Contour {
  std::vector<double> xs, ys;
  bool degenerate = false;  // fewer than 3 distinct boundary pixels

  int size() const { return static_cast<int>(xs.size()); }
};

double signed_area(const Contour& contour);

// Moore-neighbor border following over the outer boundary, starting at the
// topmost-then-leftmost boundary pixel.
Contour trace_outer_contour(const Region& region);

// --- circular Savitzky-Golay -------------------------------------------

// Center-point convolution weights for a window of odd length and the given
// polynomial order (least-squares fit evaluated at the window center).
std::vector<double> savgol_weights(int window, int polyorder);

// Periodic (wrap) smoothing. When window > n/2 the window is reduced to the
// largest odd value <= max(3, n/2) and polyorder capped below it.
std::vector<double> sg_smooth_circular(std::span<const double> values,
                                       int window, int polyorder);

// --- curvature ----------------------------------------------------------

struct CurvatureParams {
  int window = 9;
  int polyorder = 2;
  int deriv_step = 1;    // d_s
  double eps = 1e-6;
  double radial_boost = 0.0;  // rho
};

struct CurvatureProfile {
  std::vector<double> kappa;        // signed curvature
  std::vector<double> kappa_plus;   // clamped + optionally boosted
  std::vector<double> smooth_x, smooth_y;
  std::vector<double> radii;        // distance of smoothed points to centroid
  double centroid_x = 0.0, centroid_y = 0.0;
};

CurvatureProfile curvature_profile(const Contour& contour,
                                   const CurvatureParams& params);

// --- apex detection -----------------------------------------------------

// Peaks of the circular signal with topographic prominence above the
// q-quantile of the signal and pairwise circular distance >= min_distance.
// Ties are resolved toward the higher peak, then the smaller index.
std::vector<int> detect_apices(std::span<const double> kappa_plus,
                               double quantile_q, int min_distance);

double quantile(std::vector<double> values, double q);

// Lloyd k-means (<=50 iterations, farthest-first seeding from rng) over the
// apex coordinates; returns for each cluster the apex farthest from the
// centroid, as contour indices sorted ascending.
std::vector<int> select_apices_kmeans(const Contour& contour,
                                      std::span<const int> apex_indices, int m,
                                      Vec2 centroid, Rng& rng);

// --- distance transform -------------------------------------------------

// Exact Euclidean distances to the nearest nonzero cell of the reference
// mask (two-pass parabola-envelope method).
Grid<double> distance_transform(const Grid<std::uint8_t>& reference);

// Outward unit normal from the distance-field gradient at the apex, with
// centroid fallback when the gradient is degenerate.
Vec2 outward_normal(const Grid<double>& dist, Vec2 apex, Vec2 centroid,
                    double eps = 1e-6);

// Inward radial support length: how far the region extends from the apex
// against direction u (marched at half-pixel steps, rounded).
double inward_support(const Region& region, Vec2 apex, Vec2 u);

// --- fan polygon --------------------------------------------------------

struct FanPolygon {
  Vec2 apex;
  std::vector<Vec2> directions;
  std::vector<double> lengths;
  std::vector<std::pair<int, int>> raster;  // (row,col), sorted
};

// Unit directions rotated from `normal` by angles evenly spaced in
// [-half_angle, +half_angle].
std::vector<Vec2> fan_directions(Vec2 normal, double half_angle, int n_rays);

// Filled polygon with vertices [apex, apex + d_k u_k ...], closed at the
// apex. Raster = pixel centers inside (even-odd scanline) plus the rounded
// vertices; all-zero lengths yield just the apex pixel.
FanPolygon rasterize_fan_polygon(Vec2 apex, std::span<const Vec2> directions,
                                 std::span<const double> lengths);

}  // namespace morp
