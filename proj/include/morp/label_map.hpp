#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "morp/errors.hpp"

namespace morp {

inline constexpr int kNumClasses = 5;

enum class ClassId : std::uint8_t {
  sea = 0,
  oil = 1,
  lookalike = 2,
  ship = 3,
  land = 4,
};

constexpr std::uint8_t raw(ClassId c) { return static_cast<std::uint8_t>(c); }
constexpr ClassId class_from_value(std::uint8_t v) {
  return static_cast<ClassId>(v);
}

const char* class_name(ClassId c);

// Row-major grid of class ids, one byte per pixel.
struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  LabelMap() = default;
  LabelMap(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t& at(int r, int c) {
    return data[static_cast<std::size_t>(r) * width + c];
  }
  std::uint8_t at(int r, int c) const {
    return data[static_cast<std::size_t>(r) * width + c];
  }
  bool in_bounds(int r, int c) const {
    return r >= 0 && r < height && c >= 0 && c < width;
  }
  std::size_t size() const { return data.size(); }

  bool operator==(const LabelMap&) const = default;
};

enum class Connectivity { four = 4, eight = 8 };

// One connected component of a single class.
struct Region {
  ClassId cls = ClassId::sea;
  std::vector<std::pair<int, int>> pixels;  // (row,col), row-major order
  int min_row = 0, min_col = 0, max_row = -1, max_col = -1;
  double centroid_row = 0.0, centroid_col = 0.0;
  std::vector<std::uint8_t> bbox_mask;  // bbox-local bitmap, row-major

  int area() const { return static_cast<int>(pixels.size()); }
  int bbox_height() const { return max_row - min_row + 1; }
  int bbox_width() const { return max_col - min_col + 1; }

  bool contains(int r, int c) const {
    if (r < min_row || r > max_row || c < min_col || c > max_col) return false;
    return bbox_mask[static_cast<std::size_t>(r - min_row) * bbox_width() +
                     (c - min_col)] != 0;
  }
};

// Builds a Region (bbox, centroid, bitmap) from a pixel list.
Region make_region(ClassId cls, std::vector<std::pair<int, int>> pixels);

std::array<std::int64_t, kNumClasses> class_histogram(const LabelMap& map);

// Components of `cls`, ordered by (min_row, min_col) of their bbox.
std::vector<Region> connected_components(
    const LabelMap& map, ClassId cls,
    Connectivity conn = Connectivity::eight);

// Replaces every component of a listed class with area < min_px by `fill`.
LabelMap remove_small(const LabelMap& map, int min_px,
                      const std::vector<ClassId>& classes,
                      ClassId fill = ClassId::sea,
                      Connectivity conn = Connectivity::eight);

}  // namespace morp
