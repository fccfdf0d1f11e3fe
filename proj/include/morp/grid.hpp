#pragma once

#include <cstddef>
#include <vector>

namespace morp {

// Minimal row-major grid used for intensities, distances and scratch masks.
template <typename T>
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Grid() = default;
  Grid(int w, int h, T fill = T{})
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  T& at(int r, int c) { return data[static_cast<std::size_t>(r) * width + c]; }
  T at(int r, int c) const {
    return data[static_cast<std::size_t>(r) * width + c];
  }
  bool in_bounds(int r, int c) const {
    return r >= 0 && r < height && c >= 0 && c < width;
  }
  std::size_t size() const { return data.size(); }

  bool operator==(const Grid&) const = default;
};

}  // namespace morp
