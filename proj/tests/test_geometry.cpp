#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "morp/geometry.hpp"
#include "morp/reference.hpp"
#include "morp/rng.hpp"

using namespace morp;

namespace {

// least-squares polynomial fit evaluated at x=0, solved with plain Gaussian
// elimination; independent of the production filter path
double polyfit_at_zero(const std::vector<double>& xs,
                       const std::vector<double>& ys, int order) {
  const int n = order + 1;
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t k = 0; k < xs.size(); ++k)
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a[i][j] += std::pow(xs[k], i + j);
      a[i][n] += std::pow(xs[k], i) * ys[k];
    }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (int j = col; j <= n; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return a[0][n] / a[0][0];
}

Contour circle_contour(double cx, double cy, double r, int n) {
  Contour c;
  for (int i = 0; i < n; ++i) {
    double t = 2.0 * std::numbers::pi * i / n;
    c.xs.push_back(cx + r * std::cos(t));
    c.ys.push_back(cy + r * std::sin(t));
  }
  return c;
}

// even-odd point-in-polygon with the same half-open edge rule as the
// production scanline; used as the rasterization oracle
bool pip_even_odd(const std::vector<Vec2>& verts, double xc, double yc) {
  int below = 0;
  const int n = int(verts.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& p = verts[i];
    const Vec2& q = verts[(i + 1) % n];
    if ((p.y <= yc && q.y > yc) || (q.y <= yc && p.y > yc)) {
      double x = p.x + (yc - p.y) * (q.x - p.x) / (q.y - p.y);
      if (x == xc) return false;  // on an edge: excluded by the strict fill
      if (x < xc) below++;
    }
  }
  return below % 2 == 1;
}

}  // namespace

TEST_CASE("signed_area: unit square is +1 when CCW") {
  Contour c;
  c.xs = {0, 1, 1, 0};
  c.ys = {0, 0, 1, 1};
  CHECK(signed_area(c) == doctest::Approx(1.0));
  std::reverse(c.xs.begin(), c.xs.end());
  std::reverse(c.ys.begin(), c.ys.end());
  CHECK(signed_area(c) == doctest::Approx(-1.0));
}

TEST_CASE("trace_outer_contour on a 3x3 block") {
  Region r = make_region(ClassId::oil, {{1, 1}, {1, 2}, {1, 3},
                                        {2, 1}, {2, 2}, {2, 3},
                                        {3, 1}, {3, 2}, {3, 3}});
  Contour c = trace_outer_contour(r);
  CHECK_FALSE(c.degenerate);
  CHECK(c.size() == 8);  // boundary pixels, center excluded
  CHECK(signed_area(c) > 0);
}

TEST_CASE("tiny regions yield degenerate contours") {
  CHECK(trace_outer_contour(make_region(ClassId::oil, {{0, 0}})).degenerate);
  CHECK(trace_outer_contour(make_region(ClassId::oil, {{0, 0}, {0, 1}}))
            .degenerate);
}

TEST_CASE("outer contour ignores interior holes") {
  std::vector<std::pair<int, int>> px;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c)
      if (!(r == 2 && c == 2)) px.emplace_back(r, c);
  Contour c = trace_outer_contour(make_region(ClassId::oil, std::move(px)));
  for (int i = 0; i < c.size(); ++i)
    CHECK((c.xs[i] == 0 || c.xs[i] == 4 || c.ys[i] == 0 || c.ys[i] == 4));
}

TEST_CASE("savgol_weights: classic quadratic 5-point kernel") {
  auto w = savgol_weights(5, 2);
  std::vector<double> expected = {-3.0 / 35, 12.0 / 35, 17.0 / 35, 12.0 / 35,
                                  -3.0 / 35};
  REQUIRE(w.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(w[i] == doctest::Approx(expected[i]));
}

TEST_CASE("sg_smooth_circular matches a per-window least-squares oracle") {
  Rng rng(5);
  const int n = 50, window = 9, order = 3, half = window / 2;
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-2.0, 2.0);
  auto smoothed = sg_smooth_circular(v, window, order);
  REQUIRE(int(smoothed.size()) == n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> xs, ys;
    for (int o = -half; o <= half; ++o) {
      xs.push_back(o);
      ys.push_back(v[((i + o) % n + n) % n]);
    }
    CHECK(smoothed[i] == doctest::Approx(polyfit_at_zero(xs, ys, order))
                             .epsilon(1e-9));
  }
}

TEST_CASE("sg_smooth_circular is linear") {
  Rng rng(6);
  const int n = 40;
  std::vector<double> f(n), g(n), combo(n);
  for (int i = 0; i < n; ++i) {
    f[i] = rng.uniform(-1, 1);
    g[i] = rng.uniform(-1, 1);
    combo[i] = 2.0 * f[i] - 3.0 * g[i];
  }
  auto sf = sg_smooth_circular(f, 7, 2);
  auto sg = sg_smooth_circular(g, 7, 2);
  auto sc = sg_smooth_circular(combo, 7, 2);
  for (int i = 0; i < n; ++i)
    CHECK(sc[i] == doctest::Approx(2.0 * sf[i] - 3.0 * sg[i]).epsilon(1e-9));
}

TEST_CASE("short signals shrink the window instead of failing") {
  std::vector<double> v = {1, 2, 3, 4, 5};
  auto s = sg_smooth_circular(v, 21, 4);
  CHECK(s.size() == v.size());
}

TEST_CASE("circle curvature approximates 1/r") {
  for (double r : {10.0, 20.0, 40.0}) {
    Contour c = circle_contour(100, 100, r, 200);
    CurvatureParams params;
    auto prof = curvature_profile(c, params);
    double mean = 0.0;
    for (double k : prof.kappa) mean += k;
    mean /= prof.kappa.size();
    CHECK(std::fabs(std::fabs(mean) - 1.0 / r) < 0.1 / r);
  }
}

TEST_CASE("radial boost amplifies far-from-centroid curvature") {
  Contour c = circle_contour(50, 50, 20, 120);
  // stretch one lobe outward
  for (int i = 0; i < 10; ++i) c.xs[i] += 6.0;
  CurvatureParams flat, boosted;
  boosted.radial_boost = 1.0;
  auto p0 = curvature_profile(c, flat);
  auto p1 = curvature_profile(c, boosted);
  double far0 = 0, far1 = 0;
  for (int i = 0; i < 10; ++i) {
    far0 += p0.kappa_plus[i];
    far1 += p1.kappa_plus[i];
  }
  CHECK(far1 > far0);
  for (double k : p1.kappa_plus) CHECK(k >= 0.0);
}

TEST_CASE("quantile uses linear interpolation") {
  std::vector<double> v = {4, 1, 3, 2};
  CHECK(quantile(v, 0.0) == doctest::Approx(1.0));
  CHECK(quantile(v, 1.0) == doctest::Approx(4.0));
  CHECK(quantile(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile(v, 0.25) == doctest::Approx(1.75));
}

TEST_CASE("detect_apices finds separated peaks and suppresses close ones") {
  std::vector<double> sig(40, 0.0);
  sig[5] = 1.0;
  sig[7] = 0.9;   // within min_distance of the taller peak at 5
  sig[20] = 0.8;
  auto apices = detect_apices(sig, 0.5, 5);
  CHECK(apices == std::vector<int>{5, 20});
}

TEST_CASE("detect_apices is circular") {
  std::vector<double> sig(30, 0.0);
  sig[0] = 1.0;  // peak across the wrap point
  sig[29] = 0.5;
  auto apices = detect_apices(sig, 0.5, 3);
  CHECK(apices == std::vector<int>{0});
}

TEST_CASE("raising q only thins the apex set") {
  Rng rng(9);
  std::vector<double> sig(100);
  for (double& v : sig) v = rng.uniform();
  std::size_t prev = detect_apices(sig, 0.0, 2).size();
  for (double q : {0.3, 0.6, 0.9}) {
    std::size_t cur = detect_apices(sig, q, 2).size();
    CHECK(cur <= prev);
    prev = cur;
  }
}

TEST_CASE("kmeans apex selection separates far clusters") {
  Contour c;
  for (int i = 0; i < 20; ++i) {
    c.xs.push_back(i < 10 ? i : 100.0 + i);
    c.ys.push_back(0.0);
  }
  std::vector<int> apices = {0, 1, 2, 11, 12};
  Rng rng(4);
  auto sel = select_apices_kmeans(c, apices, 2, Vec2{5, 0}, rng);
  REQUIRE(sel.size() == 2);
  CHECK(std::is_sorted(sel.begin(), sel.end()));
  CHECK(sel[0] <= 2);
  CHECK(sel[1] >= 11);
}

TEST_CASE("kmeans with m >= |A| returns every apex") {
  Contour c = circle_contour(10, 10, 5, 30);
  std::vector<int> apices = {3, 17, 25};
  Rng rng(1);
  CHECK(select_apices_kmeans(c, apices, 5, Vec2{10, 10}, rng) == apices);
}

TEST_CASE("distance transform equals brute force on random grids") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    int w = 1 + int(rng.uniform_int(32)), h = 1 + int(rng.uniform_int(32));
    Grid<std::uint8_t> ref(w, h);
    for (auto& v : ref.data) v = rng.uniform() < 0.1 ? 1 : 0;
    ref.data[rng.uniform_int(ref.size())] = 1;
    auto fast = distance_transform(ref);
    auto slow = reference::distance_transform_bruteforce(ref);
    for (std::size_t i = 0; i < fast.size(); ++i)
      CHECK(fast.data[i] == slow.data[i]);
  }
}

TEST_CASE("distance transform with empty reference set throws") {
  Grid<std::uint8_t> ref(4, 4);
  CHECK_THROWS_AS(distance_transform(ref), EmptyReferenceSet);
}

TEST_CASE("outward normal follows the distance gradient") {
  Grid<std::uint8_t> ref(21, 21);
  ref.at(10, 10) = 1;
  auto dist = distance_transform(ref);
  Vec2 n = outward_normal(dist, Vec2{15, 10}, Vec2{10, 10});
  CHECK(n.x == doctest::Approx(1.0));
  CHECK(n.y == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("outward normal centroid fallback and degenerate case") {
  Grid<std::uint8_t> ref(9, 9, 1);  // distance field identically zero
  auto dist = distance_transform(ref);
  Vec2 n = outward_normal(dist, Vec2{4, 7}, Vec2{4, 4});
  CHECK(n.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(n.y == doctest::Approx(1.0));
  CHECK_THROWS_AS(outward_normal(dist, Vec2{4, 4}, Vec2{4, 4}),
                  DegenerateNormal);
}

TEST_CASE("inward support measures penetration depth") {
  std::vector<std::pair<int, int>> px;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 10; ++c) px.emplace_back(r, c);
  Region rect = make_region(ClassId::oil, std::move(px));
  double d = inward_support(rect, Vec2{9, 2}, Vec2{1, 0});
  CHECK(d == doctest::Approx(9.0));
  CHECK(inward_support(rect, Vec2{9, 2}, Vec2{0, -1}) == doctest::Approx(2.0));
}

TEST_CASE("fan directions are unit and span the half angle") {
  auto dirs = fan_directions(Vec2{0, -2}, 0.6, 7);
  REQUIRE(dirs.size() == 7);
  for (const Vec2& d : dirs)
    CHECK(std::hypot(d.x, d.y) == doctest::Approx(1.0));
  CHECK(dirs[3].x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dirs[3].y == doctest::Approx(-1.0));
  double a0 = std::atan2(dirs[0].x, -dirs[0].y);
  double a6 = std::atan2(dirs[6].x, -dirs[6].y);
  CHECK(a0 == doctest::Approx(-0.6));
  CHECK(a6 == doctest::Approx(0.6));
}

TEST_CASE("fan raster matches the point-in-polygon oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    Vec2 apex{rng.uniform(10, 50), rng.uniform(10, 50)};
    double angle = rng.uniform(-std::numbers::pi, std::numbers::pi);
    Vec2 normal{std::cos(angle), std::sin(angle)};
    int n_rays = 3 + int(rng.uniform_int(6));
    auto dirs = fan_directions(normal, rng.uniform(0.2, 1.0), n_rays);
    std::vector<double> lens(n_rays);
    for (double& l : lens) l = rng.uniform(0.0, 12.0);

    auto fan = rasterize_fan_polygon(apex, dirs, lens);

    std::vector<Vec2> verts{apex};
    for (int k = 0; k < n_rays; ++k) verts.push_back(apex + lens[k] * dirs[k]);
    std::vector<std::pair<int, int>> oracle;
    for (int r = 0; r < 80; ++r)
      for (int c = 0; c < 80; ++c)
        if (pip_even_odd(verts, c, r)) oracle.emplace_back(r, c);
    for (const Vec2& v : verts)
      oracle.emplace_back(int(std::lround(v.y)), int(std::lround(v.x)));
    std::sort(oracle.begin(), oracle.end());
    oracle.erase(std::unique(oracle.begin(), oracle.end()), oracle.end());

    CHECK(fan.raster == oracle);
  }
}

TEST_CASE("all-zero ray lengths collapse to the apex pixel") {
  auto dirs = fan_directions(Vec2{1, 0}, 0.5, 3);
  std::vector<double> lens = {0, 0, 0};
  auto fan = rasterize_fan_polygon(Vec2{7.3, 4.6}, dirs, lens);
  CHECK(fan.raster == std::vector<std::pair<int, int>>{{5, 7}});
}
