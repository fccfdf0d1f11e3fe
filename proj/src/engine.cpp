#include "morp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "morp/errors.hpp"

namespace morp {
namespace {

bool contains_class(const std::vector<ClassId>& v, std::uint8_t value) {
  for (ClassId c : v)
    if (raw(c) == value) return true;
  return false;
}

Grid<std::uint8_t> region_canvas_mask(const Region& region, int h, int w) {
  Grid<std::uint8_t> mask(w, h);
  for (auto [r, c] : region.pixels)
    if (mask.in_bounds(r, c)) mask.at(r, c) = 1;
  return mask;
}

// Deterministic Fisher-Yates.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = rng.uniform_int(i);
    std::swap(v[i - 1], v[j]);
  }
}

std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

const ApexParams& MorpConfig::apex_for(ClassId c) const {
  auto it = apex_per_class.find(raw(c));
  return it == apex_per_class.end() ? apex : it->second;
}

const EditParams& MorpConfig::edit_for(ClassId c) const {
  auto it = edit_per_class.find(raw(c));
  return it == edit_per_class.end() ? edit : it->second;
}

void MorpConfig::validate() const {
  for (ClassId f : forbid) {
    if (contains_class(allow, raw(f)))
      throw ConfigError("class in both forbid and allow sets");
    if (contains_class(target_classes, raw(f)))
      throw ConfigError("target class cannot be forbidden");
  }
  auto check_edit = [](const EditParams& e) {
    if (e.s_expand < 1.0) throw ConfigError("s_expand must be >= 1");
    if (e.p_expand < 0.0 || e.p_expand > 1.0)
      throw ConfigError("p_expand must be in [0,1]");
    if (e.n_rays < 2) throw ConfigError("n_rays must be >= 2");
  };
  check_edit(edit);
  for (const auto& [cls, e] : edit_per_class) check_edit(e);
  if (n_regions < 1) throw ConfigError("n_regions must be >= 1");
  if (apices_per_region < 1) throw ConfigError("apices_per_region must be >= 1");
  if (max_paste_retries < 1) throw ConfigError("max_paste_retries must be >= 1");
}

std::vector<Region> select_regions(const std::vector<Region>& regions, int k,
                                   SelectionMode mode, bool diversity,
                                   Rng& rng) {
  if (regions.empty() || k <= 0) return {};

  std::vector<int> order(regions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  if (mode == SelectionMode::largest) {
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const Region &ra = regions[a], &rb = regions[b];
      if (ra.area() != rb.area()) return ra.area() > rb.area();
      return std::tie(ra.min_row, ra.min_col) < std::tie(rb.min_row, rb.min_col);
    });
  } else {
    shuffle(order, rng);
  }

  std::vector<int> picked;
  if (!diversity) {
    for (int i : order) {
      if (static_cast<int>(picked.size()) >= k) break;
      picked.push_back(i);
    }
  } else {
    // Round-robin over classes so per-class counts differ by at most one
    // where availability allows.
    std::map<std::uint8_t, std::vector<int>> by_class;
    for (int i : order) by_class[raw(regions[i].cls)].push_back(i);
    std::size_t cursor = 0;
    while (static_cast<int>(picked.size()) < k) {
      bool any = false;
      for (auto& [cls, list] : by_class) {
        if (cursor < list.size()) {
          picked.push_back(list[cursor]);
          any = true;
          if (static_cast<int>(picked.size()) >= k) break;
        }
      }
      if (!any) break;
      ++cursor;
    }
  }

  std::vector<Region> out;
  out.reserve(picked.size());
  for (int i : picked) out.push_back(regions[i]);
  return out;
}

Region rigid_transform(const Region& region, double theta, int d_row,
                       int d_col, int canvas_h, int canvas_w) {
  const double cr = region.centroid_row, cc = region.centroid_col;
  const double ct = std::cos(theta), st = std::sin(theta);

  // Forward-rotate the bbox corners to bound the output, then fill by
  // inverse nearest-neighbor lookup so the shape has no holes.
  double rmin = 1e18, rmax = -1e18, cmin = 1e18, cmax = -1e18;
  for (int corner = 0; corner < 4; ++corner) {
    double r = (corner & 1) ? region.max_row : region.min_row;
    double c = (corner & 2) ? region.max_col : region.min_col;
    double dr = r - cr, dc = c - cc;
    double nr = cr + ct * dr - st * dc;
    double nc = cc + st * dr + ct * dc;
    rmin = std::min(rmin, nr);
    rmax = std::max(rmax, nr);
    cmin = std::min(cmin, nc);
    cmax = std::max(cmax, nc);
  }

  std::vector<std::pair<int, int>> pixels;
  for (int r = static_cast<int>(std::floor(rmin)) - 1;
       r <= static_cast<int>(std::ceil(rmax)) + 1; ++r) {
    for (int c = static_cast<int>(std::floor(cmin)) - 1;
         c <= static_cast<int>(std::ceil(cmax)) + 1; ++c) {
      double dr = r - cr, dc = c - cc;
      // inverse rotation
      double sr = cr + ct * dr + st * dc;
      double sc = cc - st * dr + ct * dc;
      int ir = static_cast<int>(std::lround(sr));
      int ic = static_cast<int>(std::lround(sc));
      if (region.contains(ir, ic)) pixels.emplace_back(r + d_row, c + d_col);
    }
  }

  bool any_inside = false;
  std::vector<std::pair<int, int>> clipped;
  for (auto [r, c] : pixels) {
    if (r >= 0 && r < canvas_h && c >= 0 && c < canvas_w) {
      clipped.emplace_back(r, c);
      any_inside = true;
    }
  }
  if (!any_inside)
    throw OutOfCanvas("transformed region left the canvas entirely");
  return make_region(region.cls, std::move(clipped));
}

bool try_paste(LabelMap& canvas, const Region& region,
               const std::vector<ClassId>& forbid,
               const std::vector<ClassId>& allow) {
  for (auto [r, c] : region.pixels) {
    std::uint8_t cur = canvas.at(r, c);
    if (contains_class(forbid, cur)) return false;
    if (!contains_class(allow, cur) && cur != raw(region.cls)) return false;
  }
  for (auto [r, c] : region.pixels) canvas.at(r, c) = raw(region.cls);
  return true;
}

double ray_target_length(double d_in, double scale, int xi) {
  return std::floor(scale * d_in + xi);
}

double soft_ease(double d_target, double r_max, double u01) {
  (void)d_target;
  return std::floor(r_max * (0.7 + 0.3 * u01));
}

ApexEdit apex_edit_single(const Region& region, const Grid<double>& dist,
                          Vec2 apex, const EditParams& params, double eps,
                          Rng& rng, EditRecord* rec,
                          std::optional<bool> force_expand) {
  ApexEdit edit;
  Vec2 centroid{region.centroid_col, region.centroid_row};

  Vec2 normal;
  try {
    normal = outward_normal(dist, apex, centroid, eps);
  } catch (const DegenerateNormal&) {
    edit.degenerate = true;
    if (rec) rec->note += "degenerate-normal;";
    return edit;
  }

  edit.expand = force_expand ? *force_expand : rng.bernoulli(params.p_expand);
  const double s = edit.expand ? params.s_expand : params.s_shrink;
  const double r_max = edit.expand ? params.r_max_expand : params.r_max_shrink;
  const Vec2 fan_normal = edit.expand ? normal : Vec2{-normal.x, -normal.y};

  auto dirs = fan_directions(fan_normal, params.fan_half_angle, params.n_rays);
  std::vector<double> lengths(dirs.size());
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    // Support is measured into the region: opposite the ray when expanding,
    // along the ray when shrinking.
    Vec2 probe = edit.expand ? dirs[k] : Vec2{-dirs[k].x, -dirs[k].y};
    double d_in = inward_support(region, apex, probe);
    double d_target = ray_target_length(d_in, s, rng.coin());
    double d_out = d_target;
    if (d_target >= r_max) {
      d_out = soft_ease(d_target, r_max, rng.uniform());
      if (rec) rec->easing_applied = true;
    }
    lengths[k] = d_out;
    if (rec) {
      rec->d_in.push_back(d_in);
      rec->d_target.push_back(d_target);
      rec->d_out.push_back(d_out);
    }
  }

  FanPolygon fan = rasterize_fan_polygon(apex, dirs, lengths);
  if (edit.expand) {
    edit.add = fan.raster;
  } else {
    for (auto [r, c] : fan.raster)
      if (region.contains(r, c)) edit.remove.emplace_back(r, c);
  }
  if (rec) rec->expand_modes.push_back(edit.expand);
  return edit;
}

ApexEdit apex_edit_multi(const Region& region, const Grid<double>& dist,
                         const Contour& contour,
                         const std::vector<int>& apex_indices,
                         const EditParams& params, double eps, Rng& rng,
                         EditRecord* rec) {
  ApexEdit total;
  bool all_degenerate = true;
  for (int idx : apex_indices) {
    Vec2 apex{contour.xs[idx], contour.ys[idx]};
    ApexEdit one =
        apex_edit_single(region, dist, apex, params, eps, rng, rec);
    if (one.degenerate) continue;
    all_degenerate = false;
    total.add.insert(total.add.end(), one.add.begin(), one.add.end());
    total.remove.insert(total.remove.end(), one.remove.begin(),
                        one.remove.end());
    if (rec) rec->apices.push_back(idx);
  }
  total.degenerate = all_degenerate;
  auto dedup = [](std::vector<std::pair<int, int>>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  dedup(total.add);
  dedup(total.remove);
  return total;
}

Region flat_aware_bulges(const Region& region, const MorpConfig& cfg, Rng& rng,
                         int canvas_h, int canvas_w, EditRecord* rec) {
  if (region.area() < cfg.min_edit_area) return region;
  Contour contour = trace_outer_contour(region);
  if (contour.degenerate) return region;

  const ApexParams& ap = cfg.apex_for(region.cls);
  CurvatureParams cp{ap.window, ap.polyorder, ap.deriv_step, cfg.eps, 0.0};
  CurvatureProfile prof = curvature_profile(contour, cp);
  const int n = contour.size();

  // Circular runs of near-zero curvature; longest two qualify.
  std::vector<std::uint8_t> flat(n);
  for (int t = 0; t < n; ++t)
    flat[t] = std::abs(prof.kappa[t]) < cfg.flat_kappa ? 1 : 0;

  struct Run {
    int start, len;
  };
  std::vector<Run> runs;
  int t = 0;
  while (t < n && flat[t]) ++t;  // skip a run crossing index 0; handled below
  if (t == n) {
    runs.push_back({0, n});  // fully flat boundary
  } else {
    int scanned = 0, pos = t;
    while (scanned < n) {
      if (flat[pos % n]) {
        int start = pos % n, len = 0;
        while (scanned < n && flat[pos % n]) {
          ++len;
          ++pos;
          ++scanned;
        }
        runs.push_back({start, len});
      } else {
        ++pos;
        ++scanned;
      }
    }
  }

  std::vector<Run> qualifying;
  for (const Run& r : runs)
    if (r.len >= cfg.flat_run_min_len) qualifying.push_back(r);
  std::sort(qualifying.begin(), qualifying.end(), [](const Run& a, const Run& b) {
    if (a.len != b.len) return a.len > b.len;
    return a.start < b.start;
  });
  if (qualifying.size() > 2) qualifying.resize(2);
  if (qualifying.empty()) return region;

  Grid<double> dist =
      distance_transform(region_canvas_mask(region, canvas_h, canvas_w));
  const EditParams& ep = cfg.edit_for(region.cls);

  std::vector<std::pair<int, int>> pixels = region.pixels;
  for (const Run& run : qualifying) {
    int mid = (run.start + run.len / 2) % n;
    Vec2 apex{contour.xs[mid], contour.ys[mid]};
    ApexEdit edit = apex_edit_single(region, dist, apex, ep, cfg.eps, rng, rec,
                                     /*force_expand=*/true);
    if (edit.degenerate) continue;
    for (auto [r, c] : edit.add)
      if (r >= 0 && r < canvas_h && c >= 0 && c < canvas_w)
        pixels.emplace_back(r, c);
    if (rec) rec->flat_bulges++;
  }
  return make_region(region.cls, std::move(pixels));
}

AugmentedMask morp_augment(const LabelMap& map, const MorpConfig& cfg,
                           bool stage1_only) {
  cfg.validate();
  AugmentedMask out;
  out.seed = cfg.seed;
  out.result = map;
  LabelMap& canvas = out.result;
  const int h = map.height, w = map.width;

  std::vector<Region> all;
  for (ClassId cls : cfg.target_classes) {
    auto regs = connected_components(map, cls);
    all.insert(all.end(), regs.begin(), regs.end());
  }

  Rng rng_select(derive_seed(cfg.seed, 1));
  std::vector<Region> selected =
      select_regions(all, cfg.n_regions, cfg.selection_mode, cfg.diversity,
                     rng_select);

  // Stage 1: flat-aware rigid placement.
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const Region& region = selected[i];
    EditRecord rec;
    rec.region_id = static_cast<int>(i);
    rec.cls = region.cls;
    Rng rng(derive_seed(cfg.seed, 2, i));

    // Clear the source footprint to sea (only where it still carries the
    // region's class; an earlier paste may have landed here legitimately).
    for (auto [r, c] : region.pixels)
      if (canvas.at(r, c) == raw(region.cls)) canvas.at(r, c) = raw(ClassId::sea);

    Region last_attempt = region;
    bool placed = false;
    for (int attempt = 0; attempt < cfg.max_paste_retries && !placed;
         ++attempt) {
      double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
      double dx = 0.0, dy = 0.0;
      for (int draw = 0; draw < 64; ++draw) {
        dx = rng.uniform(-cfg.max_shift, cfg.max_shift);
        dy = rng.uniform(-cfg.max_shift, cfg.max_shift);
        if (std::hypot(dx, dy) <= cfg.max_shift) break;
      }
      int d_row = static_cast<int>(std::lround(dy));
      int d_col = static_cast<int>(std::lround(dx));

      Region candidate;
      try {
        candidate = rigid_transform(region, theta, d_row, d_col, h, w);
      } catch (const OutOfCanvas&) {
        continue;
      }
      candidate = flat_aware_bulges(candidate, cfg, rng, h, w, &rec);
      last_attempt = candidate;
      if (try_paste(canvas, candidate, cfg.forbid, cfg.allow)) {
        placed = true;
        rec.placed = true;
        rec.theta = theta;
        rec.shift_row = d_row;
        rec.shift_col = d_col;
      }
    }

    if (!placed) {
      // RestoreNearOrigin: center the (possibly bulged) shape back on the
      // original centroid, writing only over paste-allowed pixels.
      int d_row = static_cast<int>(
          std::lround(region.centroid_row - last_attempt.centroid_row));
      int d_col = static_cast<int>(
          std::lround(region.centroid_col - last_attempt.centroid_col));
      for (auto [r, c] : last_attempt.pixels) {
        int rr = r + d_row, cc2 = c + d_col;
        if (rr < 0 || rr >= h || cc2 < 0 || cc2 >= w) continue;
        std::uint8_t cur = canvas.at(rr, cc2);
        if (contains_class(cfg.allow, cur) || cur == raw(region.cls))
          canvas.at(rr, cc2) = raw(region.cls);
      }
      rec.restored = true;
    }
    out.records.push_back(std::move(rec));
  }

  if (stage1_only) return out;

  // Stages 2-3: apex detection and perturbation on re-extracted components.
  std::vector<Region> fresh;
  for (ClassId cls : cfg.target_classes) {
    auto regs = connected_components(canvas, cls);
    fresh.insert(fresh.end(), regs.begin(), regs.end());
  }
  Rng rng_select2(derive_seed(cfg.seed, 4));
  std::vector<Region> edits =
      select_regions(fresh, cfg.n_regions, cfg.selection_mode, cfg.diversity,
                     rng_select2);

  // Force-include a dominant oil region.
  const Region* largest_oil = nullptr;
  for (const Region& r : fresh)
    if (r.cls == ClassId::oil &&
        (!largest_oil || r.area() > largest_oil->area()))
      largest_oil = &r;
  if (largest_oil &&
      static_cast<double>(largest_oil->area()) / (static_cast<double>(h) * w) >=
          cfg.large_area_fraction) {
    bool already = false;
    for (const Region& r : edits)
      if (r.min_row == largest_oil->min_row &&
          r.min_col == largest_oil->min_col &&
          r.area() == largest_oil->area() && r.cls == largest_oil->cls)
        already = true;
    if (!already) {
      if (static_cast<int>(edits.size()) >= cfg.n_regions && !edits.empty())
        edits.back() = *largest_oil;
      else
        edits.push_back(*largest_oil);
    }
  }

  for (std::size_t j = 0; j < edits.size(); ++j) {
    const Region& region = edits[j];
    EditRecord rec;
    rec.region_id = 1000 + static_cast<int>(j);
    rec.cls = region.cls;
    Rng rng(derive_seed(cfg.seed, 3, j));

    if (region.area() < cfg.min_edit_area) {
      rec.skipped = true;
      rec.note = "below-min-edit-area";
      out.records.push_back(std::move(rec));
      continue;
    }
    Contour contour = trace_outer_contour(region);
    if (contour.degenerate) {
      rec.skipped = true;
      rec.note = "degenerate-contour";
      out.records.push_back(std::move(rec));
      continue;
    }
    const ApexParams& ap = cfg.apex_for(region.cls);
    CurvatureParams cp{ap.window, ap.polyorder, ap.deriv_step, cfg.eps,
                       ap.radial_boost};
    CurvatureProfile prof = curvature_profile(contour, cp);
    std::vector<int> apices =
        detect_apices(prof.kappa_plus, ap.quantile, ap.min_distance);
    if (apices.empty()) {
      rec.skipped = true;
      rec.note = "no-apices";
      out.records.push_back(std::move(rec));
      continue;
    }
    std::vector<int> chosen = select_apices_kmeans(
        contour, apices, cfg.apices_per_region,
        Vec2{region.centroid_col, region.centroid_row}, rng);

    Grid<double> dist = distance_transform(region_canvas_mask(region, h, w));
    const EditParams& ep = cfg.edit_for(region.cls);
    ApexEdit edit =
        apex_edit_multi(region, dist, contour, chosen, ep, cfg.eps, rng, &rec);

    // (R u B) \ S at the region's label; bulges never overwrite anything
    // outside the paste whitelist.
    for (auto [r, c] : edit.add) {
      if (r < 0 || r >= h || c < 0 || c >= w) continue;
      std::uint8_t cur = canvas.at(r, c);
      if (contains_class(cfg.allow, cur) || cur == raw(region.cls))
        canvas.at(r, c) = raw(region.cls);
    }
    for (auto [r, c] : edit.remove)
      if (canvas.at(r, c) == raw(region.cls))
        canvas.at(r, c) = raw(ClassId::sea);

    canvas = remove_small(canvas, cfg.min_px, cfg.target_classes);
    out.records.push_back(std::move(rec));
  }

  return out;
}

Regime regime_from_string(const std::string& name) {
  if (name == "nomove") return Regime::nomove;
  if (name == "m00") return Regime::m00;
  if (name == "m50") return Regime::m50;
  if (name == "m100") return Regime::m100;
  throw ConfigError("unknown regime: " + name);
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::nomove: return "nomove";
    case Regime::m00: return "m00";
    case Regime::m50: return "m50";
    case Regime::m100: return "m100";
  }
  return "?";
}

std::vector<std::uint8_t> m50_full_morp_flags(int n, std::uint64_t seed) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  Rng rng(derive_seed(seed, 0xA11CE));
  shuffle(idx, rng);
  std::vector<std::uint8_t> flags(n, 0);
  for (int i = 0; i < (n + 1) / 2; ++i) flags[idx[i]] = 1;
  return flags;
}

std::vector<AugmentedMask> batch_generate(const std::vector<LabelMap>& masks,
                                          Regime regime, int pool_multiplier,
                                          const MorpConfig& cfg) {
  if (masks.empty()) throw Error("batch_generate: no input masks");
  if (pool_multiplier < 1) throw ConfigError("pool multiplier must be >= 1");
  const int n = static_cast<int>(masks.size());

  std::vector<std::uint8_t> full_morp(n, regime == Regime::m100 ? 1 : 0);
  if (regime == Regime::m50) full_morp = m50_full_morp_flags(n, cfg.seed);

  const int total = n * pool_multiplier;
  std::vector<AugmentedMask> out(total);

#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < total; ++t) {
    int i = t / pool_multiplier;
    int rep = t % pool_multiplier;
    if (regime == Regime::nomove) {
      out[t] = AugmentedMask{masks[i], {}, cfg.seed};
      continue;
    }
    MorpConfig sub = cfg;
    sub.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i),
                           static_cast<std::uint64_t>(rep));
    bool stage1_only = regime == Regime::m00 ||
                       (regime == Regime::m50 && !full_morp[i]);
    out[t] = morp_augment(masks[i], sub, stage1_only);
  }

  if (regime != Regime::nomove) {
    std::unordered_map<std::uint64_t, std::vector<int>> buckets;
    for (int t = 0; t < total; ++t)
      buckets[fnv1a(out[t].result.data)].push_back(t);
    for (const auto& [hash, members] : buckets) {
      for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b)
          if (out[members[a]].result == out[members[b]].result)
            throw DuplicateOutput("two generated masks are pixel-identical");
    }
  }
  return out;
}

}  // namespace morp
