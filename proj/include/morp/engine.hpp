#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "morp/geometry.hpp"
#include "morp/label_map.hpp"
#include "morp/rng.hpp"

namespace morp {

enum class SelectionMode { largest, random };

struct ApexParams {
  int window = 9;
  int polyorder = 2;
  double quantile = 0.6;   // q for the prominence threshold
  int min_distance = 5;    // d
  double radial_boost = 0.5;  // rho
  int deriv_step = 1;      // d_s
};

struct EditParams {
  double fan_half_angle = 0.6;  // alpha, radians
  int n_rays = 7;
  double p_expand = 0.5;
  double s_expand = 1.2;   // must be >= 1
  double s_shrink = 1.0;
  double r_max_expand = 30.0;  // R_grow
  double r_max_shrink = 15.0;
};

struct MorpConfig {
  std::vector<ClassId> target_classes = {ClassId::oil, ClassId::lookalike};
  int n_regions = 4;                          // k
  SelectionMode selection_mode = SelectionMode::largest;
  bool diversity = true;
  double max_shift = 40.0;                    // S_max, pixels
  std::vector<ClassId> forbid = {ClassId::land};
  std::vector<ClassId> allow = {ClassId::sea};
  int max_paste_retries = 10;
  int apices_per_region = 3;                  // m
  ApexParams apex;                            // global defaults
  std::map<std::uint8_t, ApexParams> apex_per_class;
  EditParams edit;
  std::map<std::uint8_t, EditParams> edit_per_class;
  double large_area_fraction = 0.05;          // gamma
  int min_px = 8;
  int min_edit_area = 20;     // regions smaller than this are left alone
  int flat_run_min_len = 10;  // L_flat
  double flat_kappa = 0.02;   // kappa_flat
  double eps = 1e-6;
  std::uint64_t seed = 0;

  const ApexParams& apex_for(ClassId c) const;
  const EditParams& edit_for(ClassId c) const;
  void validate() const;
};

// Per-region provenance of one augmentation run.
struct EditRecord {
  int region_id = 0;
  ClassId cls = ClassId::sea;
  double theta = 0.0;
  int shift_row = 0, shift_col = 0;
  bool placed = false;     // paste accepted
  bool restored = false;   // fell back to RestoreNearOrigin
  int flat_bulges = 0;
  std::vector<int> apices;          // contour indices used in stage 3
  std::vector<bool> expand_modes;   // per apex
  std::vector<double> d_in, d_target, d_out;  // per ray, all apices
  bool easing_applied = false;
  bool skipped = false;
  std::string note;
};

struct AugmentedMask {
  LabelMap result;
  std::vector<EditRecord> records;
  std::uint64_t seed = 0;
};

// --- building blocks -------------------------------------------------------

std::vector<Region> select_regions(const std::vector<Region>& regions, int k,
                                   SelectionMode mode, bool diversity,
                                   Rng& rng);

// Rotation about the centroid (nearest-neighbor, no clipping of the shape)
// followed by integer translation.
Region rigid_transform(const Region& region, double theta, int d_row,
                       int d_col, int canvas_h, int canvas_w);

// Writes region.class over the target pixels if none is forbidden and every
// one is paste-allowed; returns false leaving the canvas untouched otherwise.
bool try_paste(LabelMap& canvas, const Region& region,
               const std::vector<ClassId>& forbid,
               const std::vector<ClassId>& allow);

// One bulge per long near-straight boundary run (up to 2 runs).
Region flat_aware_bulges(const Region& region, const MorpConfig& cfg, Rng& rng,
                         int canvas_h, int canvas_w, EditRecord* rec = nullptr);

struct ApexEdit {
  std::vector<std::pair<int, int>> add;     // bulge pixels
  std::vector<std::pair<int, int>> remove;  // wedge pixels (subset of region)
  bool expand = false;
  bool degenerate = false;
};

// Ray target length and the soft-easing cap, exposed for direct testing.
double ray_target_length(double d_in, double scale, int xi);
double soft_ease(double d_target, double r_max, double u01);

ApexEdit apex_edit_single(const Region& region, const Grid<double>& dist,
                          Vec2 apex, const EditParams& params, double eps,
                          Rng& rng, EditRecord* rec = nullptr,
                          std::optional<bool> force_expand = std::nullopt);

ApexEdit apex_edit_multi(const Region& region, const Grid<double>& dist,
                         const Contour& contour,
                         const std::vector<int>& apex_indices,
                         const EditParams& params, double eps, Rng& rng,
                         EditRecord* rec = nullptr);

// --- pipeline ---------------------------------------------------------------

// Full MORP run (placement + apex edits + cleanup). stage1_only stops after
// flat-aware placement, which is the m00 regime.
AugmentedMask morp_augment(const LabelMap& map, const MorpConfig& cfg,
                           bool stage1_only = false);

enum class Regime { nomove, m00, m50, m100 };

Regime regime_from_string(const std::string& name);
const char* regime_name(Regime r);

// Which of n masks receive the full pipeline under m50 (always exactly
// ceil(n/2) of them, chosen by a seeded shuffle).
std::vector<std::uint8_t> m50_full_morp_flags(int n, std::uint64_t seed);

// regime x pool expansion over a batch of masks; outputs are checked for
// pairwise-distinct geometry except under nomove.
std::vector<AugmentedMask> batch_generate(const std::vector<LabelMap>& masks,
                                          Regime regime, int pool_multiplier,
                                          const MorpConfig& cfg);

}  // namespace morp
