#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "morp/grid.hpp"
#include "morp/label_map.hpp"

namespace morp {

// Canonical on-disk mask: binary PGM (P5), pixel values = class ids 0..4.
// palette_rgb is a binary PPM (P6) reader/writer for figure-style masks
// using the display palette (sea black, oil cyan, look-alike red, ship
// brown, land green).
enum class MaskFormat { indexed, palette_rgb };

struct Rgb {
  std::uint8_t r, g, b;
  bool operator==(const Rgb&) const = default;
};

// Display palette, index = class id.
const std::array<Rgb, kNumClasses>& class_palette();

LabelMap decode_mask(std::span<const std::uint8_t> bytes, MaskFormat format);
std::vector<std::uint8_t> encode_mask(const LabelMap& map, MaskFormat format);

LabelMap load_mask(const std::filesystem::path& path,
                   MaskFormat format = MaskFormat::indexed);
void save_mask(const LabelMap& map, const std::filesystem::path& path,
               MaskFormat format = MaskFormat::indexed);

// 16-bit grayscale PGM used for scene intensities. Values are scaled by
// `scale` on write and unscaled on read.
Grid<float> load_intensity(const std::filesystem::path& path, double scale);
void save_intensity(const Grid<float>& img, const std::filesystem::path& path,
                    double scale);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

}  // namespace morp
