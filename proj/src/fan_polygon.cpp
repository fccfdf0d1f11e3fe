#include <algorithm>
#include <cmath>

#include "morp/errors.hpp"
#include "morp/geometry.hpp"

namespace morp {

std::vector<Vec2> fan_directions(Vec2 normal, double half_angle, int n_rays) {
  if (n_rays < 2) throw Error("fan needs at least 2 rays");
  double norm = std::hypot(normal.x, normal.y);
  if (norm <= 0.0) throw DegenerateNormal("zero fan normal");
  Vec2 n0{normal.x / norm, normal.y / norm};

  std::vector<Vec2> dirs(n_rays);
  for (int k = 0; k < n_rays; ++k) {
    double phi = -half_angle + 2.0 * half_angle * k / (n_rays - 1);
    double c = std::cos(phi), s = std::sin(phi);
    dirs[k] = {c * n0.x - s * n0.y, s * n0.x + c * n0.y};
  }
  return dirs;
}

FanPolygon rasterize_fan_polygon(Vec2 apex, std::span<const Vec2> directions,
                                 std::span<const double> lengths) {
  if (directions.size() != lengths.size() || directions.size() < 2)
    throw Error("fan polygon needs matching directions/lengths, >= 2 rays");

  FanPolygon fan;
  fan.apex = apex;
  fan.directions.assign(directions.begin(), directions.end());
  fan.lengths.assign(lengths.begin(), lengths.end());

  bool any_positive = false;
  for (double d : lengths)
    if (d > 0.0) any_positive = true;

  const auto apex_px = std::pair<int, int>{
      static_cast<int>(std::lround(apex.y)),
      static_cast<int>(std::lround(apex.x))};
  if (!any_positive) {
    fan.raster.push_back(apex_px);
    return fan;
  }

  std::vector<Vec2> verts;
  verts.push_back(apex);
  for (std::size_t k = 0; k < directions.size(); ++k)
    verts.push_back(apex + lengths[k] * directions[k]);
  const int nv = static_cast<int>(verts.size());

  double ymin = verts[0].y, ymax = verts[0].y;
  for (const Vec2& v : verts) {
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }

  // Even-odd scanline fill over pixel centers (integer y), half-open edge
  // rule so shared vertices are counted once.
  std::vector<std::pair<int, int>> raster;
  for (int row = static_cast<int>(std::floor(ymin));
       row <= static_cast<int>(std::ceil(ymax)); ++row) {
    const double yc = row;
    std::vector<double> crossings;
    for (int i = 0; i < nv; ++i) {
      const Vec2& p = verts[i];
      const Vec2& q = verts[(i + 1) % nv];
      if ((p.y <= yc && q.y > yc) || (q.y <= yc && p.y > yc))
        crossings.push_back(p.x + (yc - p.y) * (q.x - p.x) / (q.y - p.y));
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t i = 0; i + 1 < crossings.size(); i += 2) {
      int c0 = static_cast<int>(std::floor(crossings[i])) + 1;
      int c1 = static_cast<int>(std::ceil(crossings[i + 1])) - 1;
      for (int col = c0; col <= c1; ++col) {
        if (static_cast<double>(col) > crossings[i] &&
            static_cast<double>(col) < crossings[i + 1])
          raster.emplace_back(row, col);
      }
    }
  }

  for (const Vec2& v : verts)
    raster.emplace_back(static_cast<int>(std::lround(v.y)),
                        static_cast<int>(std::lround(v.x)));
  std::sort(raster.begin(), raster.end());
  raster.erase(std::unique(raster.begin(), raster.end()), raster.end());
  fan.raster = std::move(raster);
  return fan;
}

}  // namespace morp
