#include "morp/label_map.hpp"

#include <algorithm>
#include <queue>

namespace morp {

const char* class_name(ClassId c) {
  switch (c) {
    case ClassId::sea: return "sea";
    case ClassId::oil: return "oil";
    case ClassId::lookalike: return "look-alike";
    case ClassId::ship: return "ship";
    case ClassId::land: return "land";
  }
  return "?";
}

Region make_region(ClassId cls, std::vector<std::pair<int, int>> pixels) {
  Region reg;
  reg.cls = cls;
  std::sort(pixels.begin(), pixels.end());
  pixels.erase(std::unique(pixels.begin(), pixels.end()), pixels.end());
  reg.pixels = std::move(pixels);
  if (reg.pixels.empty()) return reg;

  reg.min_row = reg.max_row = reg.pixels[0].first;
  reg.min_col = reg.max_col = reg.pixels[0].second;
  double sr = 0, sc = 0;
  for (auto [r, c] : reg.pixels) {
    reg.min_row = std::min(reg.min_row, r);
    reg.max_row = std::max(reg.max_row, r);
    reg.min_col = std::min(reg.min_col, c);
    reg.max_col = std::max(reg.max_col, c);
    sr += r;
    sc += c;
  }
  reg.centroid_row = sr / reg.pixels.size();
  reg.centroid_col = sc / reg.pixels.size();
  reg.bbox_mask.assign(
      static_cast<std::size_t>(reg.bbox_height()) * reg.bbox_width(), 0);
  for (auto [r, c] : reg.pixels) {
    reg.bbox_mask[static_cast<std::size_t>(r - reg.min_row) * reg.bbox_width() +
                  (c - reg.min_col)] = 1;
  }
  return reg;
}

std::array<std::int64_t, kNumClasses> class_histogram(const LabelMap& map) {
  std::array<std::int64_t, kNumClasses> counts{};
  for (std::uint8_t v : map.data) counts[v]++;
  return counts;
}

std::vector<Region> connected_components(const LabelMap& map, ClassId cls,
                                         Connectivity conn) {
  const int h = map.height, w = map.width;
  const std::uint8_t target = raw(cls);
  std::vector<std::uint8_t> seen(map.size(), 0);
  std::vector<Region> regions;

  static const int dr8[] = {-1, -1, -1, 0, 0, 1, 1, 1};
  static const int dc8[] = {-1, 0, 1, -1, 1, -1, 0, 1};
  static const int dr4[] = {-1, 0, 0, 1};
  static const int dc4[] = {0, -1, 1, 0};
  const int* dr = conn == Connectivity::eight ? dr8 : dr4;
  const int* dc = conn == Connectivity::eight ? dc8 : dc4;
  const int nn = conn == Connectivity::eight ? 8 : 4;

  std::vector<std::pair<int, int>> stack;
  for (int r0 = 0; r0 < h; ++r0) {
    for (int c0 = 0; c0 < w; ++c0) {
      std::size_t idx0 = static_cast<std::size_t>(r0) * w + c0;
      if (map.data[idx0] != target || seen[idx0]) continue;
      std::vector<std::pair<int, int>> pixels;
      stack.clear();
      stack.emplace_back(r0, c0);
      seen[idx0] = 1;
      while (!stack.empty()) {
        auto [r, c] = stack.back();
        stack.pop_back();
        pixels.emplace_back(r, c);
        for (int k = 0; k < nn; ++k) {
          int nr = r + dr[k], nc = c + dc[k];
          if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
          std::size_t idx = static_cast<std::size_t>(nr) * w + nc;
          if (map.data[idx] == target && !seen[idx]) {
            seen[idx] = 1;
            stack.emplace_back(nr, nc);
          }
        }
      }
      regions.push_back(make_region(cls, std::move(pixels)));
    }
  }
  std::sort(regions.begin(), regions.end(),
            [](const Region& a, const Region& b) {
              return std::tie(a.min_row, a.min_col) <
                     std::tie(b.min_row, b.min_col);
            });
  return regions;
}

LabelMap remove_small(const LabelMap& map, int min_px,
                      const std::vector<ClassId>& classes, ClassId fill,
                      Connectivity conn) {
  LabelMap out = map;
  for (ClassId cls : classes) {
    for (const Region& reg : connected_components(map, cls, conn)) {
      if (reg.area() < min_px) {
        for (auto [r, c] : reg.pixels) out.at(r, c) = raw(fill);
      }
    }
  }
  return out;
}

}  // namespace morp
