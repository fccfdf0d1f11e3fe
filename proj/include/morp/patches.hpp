#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morp/grid.hpp"
#include "morp/label_map.hpp"

namespace morp {

struct Scene {
  Grid<float> intensity;
  LabelMap labels;
  std::string id;
  double pixel_spacing_m = 10.0;
};

// Clip to the per-scene [lo,hi] percentile range (nearest-rank on sorted
// finite values) and min-max scale to [0,1].
Grid<float> percentile_normalize(const Grid<float>& intensity, double lo = 0.5,
                                 double hi = 97.5);

// 3x3 median with reflect padding.
Grid<float> median_filter_3x3(const Grid<float>& intensity);

enum class PatchKind { positive, background, multiscale, hard_negative };

const char* patch_kind_name(PatchKind k);

struct Patch {
  Grid<float> intensity;  // window x window (512 after multiscale resize)
  LabelMap labels;
  int origin_row = 0, origin_col = 0, window = 0;
  PatchKind kind = PatchKind::positive;
};

// Sliding-window positives (any oil/look-alike pixel) plus seeded background
// tiles at the configured negative:positive ratio.
std::vector<Patch> extract_patches(const Scene& scene, int window, int stride,
                                   double neg_pos_ratio, std::uint64_t seed);

// Seeded large windows around annotated regions, resized to out_size
// (area-average intensity, nearest-neighbor labels).
std::vector<Patch> multiscale_patches(const Scene& scene, int min_window,
                                      int max_window, int count,
                                      std::uint64_t seed, int out_size = 512);

// Window origins where predicted spill over truth-sea covers >= fp_area_frac
// of the window and the window is >= sea_overlap_frac sea.
std::vector<std::pair<int, int>> hard_negative_filter(
    const LabelMap& pred, const LabelMap& truth, int window = 512,
    double fp_area_frac = 0.005, double sea_overlap_frac = 0.8);

// --- scene manifest ---------------------------------------------------------

struct ManifestRow {
  int img = 0;
  std::string spill_date;
  double lat = 0.0, lon = 0.0;
  std::string acq_date;
  int delta_days = 0;
  int patches = 0;
  std::string split;  // "Train" or "Test"
};

// CSV with header Img,SpillDate,Lat,Lon,AcqDate,DeltaDays,Patches,Split.
std::vector<ManifestRow> parse_manifest(const std::string& text);

// Throws SplitLeakage if any scene id appears in both splits.
void check_split_leakage(const std::vector<ManifestRow>& rows);

}  // namespace morp
