#include <cmath>
#include <cstddef>

#include "morp/errors.hpp"
#include "morp/geometry.hpp"

namespace morp {
namespace {

// Solves the small SPD normal-equation system by Gaussian elimination with
// partial pivoting. Matrices here are (p+1)x(p+1) with p <= ~6.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b,
                                int n) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (pivot != col) {
      for (int k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
      std::swap(b[col], b[pivot]);
    }
    double d = a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      double f = a[r * n + col] / d;
      for (int k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= a[r * n + k] * x[k];
    x[r] = s / a[r * n + r];
  }
  return x;
}

}  // namespace

std::vector<double> savgol_weights(int window, int polyorder) {
  if (window < 1 || window % 2 == 0)
    throw Error("savgol window must be odd and positive");
  if (polyorder < 0 || polyorder >= window)
    throw Error("savgol polyorder must satisfy 0 <= p < w");

  const int half = window / 2;
  const int terms = polyorder + 1;

  // Normal equations for the least-squares polynomial over offsets -h..h;
  // the smoothing weight for offset j is row 0 of (A^T A)^{-1} A^T.
  std::vector<double> ata(static_cast<std::size_t>(terms) * terms, 0.0);
  for (int j = -half; j <= half; ++j) {
    double pow_i = 1.0;
    std::vector<double> powers(2 * terms - 1);
    powers[0] = 1.0;
    for (int k = 1; k < 2 * terms - 1; ++k) powers[k] = powers[k - 1] * j;
    (void)pow_i;
    for (int r = 0; r < terms; ++r)
      for (int c = 0; c < terms; ++c) ata[r * terms + c] += powers[r + c];
  }

  std::vector<double> weights(window);
  for (int j = -half; j <= half; ++j) {
    std::vector<double> rhs(terms);
    double p = 1.0;
    for (int r = 0; r < terms; ++r) {
      rhs[r] = p;
      p *= j;
    }
    // weight_j = e0^T (A^T A)^{-1} a_j
    std::vector<double> sol = solve_dense(ata, rhs, terms);
    weights[j + half] = sol[0];
  }
  return weights;
}

std::vector<double> sg_smooth_circular(std::span<const double> values,
                                       int window, int polyorder) {
  const int n = static_cast<int>(values.size());
  if (n < 3) throw Error("sg_smooth_circular needs at least 3 samples");

  // Short-contour fallback: shrink the window instead of failing.
  if (window > n / 2) {
    int reduced = std::max(3, n / 2);
    if (reduced % 2 == 0) reduced -= 1;
    window = reduced;
    polyorder = std::min(polyorder, window - 1);
  }

  const std::vector<double> w = savgol_weights(window, polyorder);
  const int half = window / 2;
  std::vector<double> out(n, 0.0);
  for (int t = 0; t < n; ++t) {
    double acc = 0.0;
    for (int j = -half; j <= half; ++j) {
      int idx = ((t + j) % n + n) % n;
      acc += w[j + half] * values[idx];
    }
    out[t] = acc;
  }
  return out;
}

}  // namespace morp
