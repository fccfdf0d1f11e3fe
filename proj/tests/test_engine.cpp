#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <set>

#include "morp/engine.hpp"
#include "morp/rng.hpp"

using namespace morp;

namespace {

void stamp_disc(LabelMap& m, int cr, int cc, int radius, ClassId cls) {
  for (int r = cr - radius; r <= cr + radius; ++r)
    for (int c = cc - radius; c <= cc + radius; ++c)
      if (m.in_bounds(r, c) &&
          (r - cr) * (r - cr) + (c - cc) * (c - cc) <= radius * radius)
        m.at(r, c) = raw(cls);
}

// sea scene with a land strip on the right and a few class blobs
LabelMap test_scene(std::uint64_t seed, int size = 128) {
  Rng rng(seed);
  LabelMap m(size, size);
  for (int r = 0; r < size; ++r)
    for (int c = size - 12; c < size; ++c) m.at(r, c) = raw(ClassId::land);
  int blobs = 3 + int(rng.uniform_int(3));
  for (int b = 0; b < blobs; ++b) {
    ClassId cls = rng.coin() ? ClassId::oil : ClassId::lookalike;
    stamp_disc(m, 15 + int(rng.uniform_int(size - 40)),
               15 + int(rng.uniform_int(size - 60)),
               6 + int(rng.uniform_int(8)), cls);
  }
  stamp_disc(m, 20 + int(rng.uniform_int(size - 50)),
             20 + int(rng.uniform_int(size - 70)), 2, ClassId::ship);
  return m;
}

}  // namespace

TEST_CASE("select_regions largest mode sorts by area then bbox") {
  std::vector<Region> regs = {
      make_region(ClassId::oil, {{0, 0}, {0, 1}}),
      make_region(ClassId::oil, {{5, 5}, {5, 6}, {6, 5}}),
      make_region(ClassId::oil, {{2, 0}, {2, 1}}),
  };
  Rng rng(1);
  auto sel = select_regions(regs, 2, SelectionMode::largest, false, rng);
  REQUIRE(sel.size() == 2);
  CHECK(sel[0].area() == 3);
  CHECK(sel[1].min_row == 0);  // area tie broken by bbox
}

TEST_CASE("select_regions diversity round-robins over classes") {
  std::vector<Region> regs = {
      make_region(ClassId::oil, {{0, 0}, {0, 1}, {0, 2}}),
      make_region(ClassId::oil, {{2, 0}, {2, 1}}),
      make_region(ClassId::oil, {{4, 0}}),
      make_region(ClassId::lookalike, {{6, 0}}),
  };
  Rng rng(1);
  auto sel = select_regions(regs, 2, SelectionMode::largest, true, rng);
  REQUIRE(sel.size() == 2);
  CHECK(sel[0].cls == ClassId::oil);
  CHECK(sel[1].cls == ClassId::lookalike);
}

TEST_CASE("select_regions random mode returns a permutation subset") {
  std::vector<Region> regs;
  for (int i = 0; i < 6; ++i)
    regs.push_back(make_region(ClassId::oil, {{i, 0}}));
  Rng rng(8);
  auto sel = select_regions(regs, 6, SelectionMode::random, false, rng);
  std::set<int> rows;
  for (const Region& r : sel) rows.insert(r.min_row);
  CHECK(rows.size() == 6);
}

TEST_CASE("rigid_transform with theta 0 is a pure translation") {
  Region r = make_region(ClassId::oil, {{3, 3}, {3, 4}, {4, 3}});
  Region t = rigid_transform(r, 0.0, 2, -1, 20, 20);
  std::vector<std::pair<int, int>> expect = {{5, 2}, {5, 3}, {6, 2}};
  CHECK(t.pixels == expect);
}

TEST_CASE("rigid_transform by pi/2 preserves a square") {
  std::vector<std::pair<int, int>> px;
  for (int r = 4; r < 8; ++r)
    for (int c = 4; c < 8; ++c) px.emplace_back(r, c);
  Region sq = make_region(ClassId::oil, px);
  Region t = rigid_transform(sq, std::numbers::pi / 2, 0, 0, 20, 20);
  CHECK(t.area() == 16);
  CHECK(t.min_row == 4);
  CHECK(t.max_col == 7);
}

TEST_CASE("rigid_transform throws when fully off canvas") {
  Region r = make_region(ClassId::oil, {{1, 1}});
  CHECK_THROWS_AS(rigid_transform(r, 0.0, 100, 100, 20, 20), OutOfCanvas);
}

TEST_CASE("try_paste whitelist semantics") {
  LabelMap canvas(8, 8);
  canvas.at(2, 2) = raw(ClassId::land);
  canvas.at(4, 4) = raw(ClassId::ship);
  Region r1 = make_region(ClassId::oil, {{2, 2}, {2, 3}});
  Region r2 = make_region(ClassId::oil, {{4, 4}, {4, 5}});
  Region r3 = make_region(ClassId::oil, {{6, 6}, {6, 7}});
  std::vector<ClassId> forbid = {ClassId::land}, allow = {ClassId::sea};
  CHECK_FALSE(try_paste(canvas, r1, forbid, allow));  // forbidden pixel
  CHECK(canvas.at(2, 3) == raw(ClassId::sea));        // untouched on failure
  CHECK_FALSE(try_paste(canvas, r2, forbid, allow));  // ship not in allow
  CHECK(try_paste(canvas, r3, forbid, allow));
  CHECK(canvas.at(6, 6) == raw(ClassId::oil));
}

TEST_CASE("try_paste accepts own-class overlap") {
  LabelMap canvas(4, 4);
  canvas.at(1, 1) = raw(ClassId::oil);
  Region r = make_region(ClassId::oil, {{1, 1}, {1, 2}});
  CHECK(try_paste(canvas, r, {ClassId::land}, {ClassId::sea}));
}

TEST_CASE("ray target length and soft easing formulas") {
  CHECK(ray_target_length(5.0, 1.2, 1) == 7.0);
  CHECK(ray_target_length(5.0, 1.2, 0) == 6.0);
  CHECK(ray_target_length(4.0, 1.0, 0) == 4.0);  // identity case
  CHECK(soft_ease(100.0, 30.0, 0.0) == std::floor(30.0 * 0.7));
  CHECK(soft_ease(100.0, 30.0, 1.0) == 30.0);
}

TEST_CASE("apex edits expand outward and shrink within the region") {
  std::vector<std::pair<int, int>> px;
  for (int r = 20; r < 30; ++r)
    for (int c = 20; c < 44; ++c) px.emplace_back(r, c);
  Region rect = make_region(ClassId::oil, px);
  Grid<std::uint8_t> mask(64, 64);
  for (auto [r, c] : rect.pixels) mask.at(r, c) = 1;
  auto dist = distance_transform(mask);

  EditParams ep;
  Rng rng(3);
  ApexEdit grow = apex_edit_single(rect, dist, Vec2{43, 24}, ep, 1e-6, rng,
                                   nullptr, true);
  CHECK_FALSE(grow.degenerate);
  CHECK(grow.expand);
  CHECK_FALSE(grow.add.empty());
  bool outside = false;
  for (auto [r, c] : grow.add) outside |= !rect.contains(r, c);
  CHECK(outside);

  ApexEdit cut = apex_edit_single(rect, dist, Vec2{43, 24}, ep, 1e-6, rng,
                                  nullptr, false);
  CHECK_FALSE(cut.degenerate);
  for (auto [r, c] : cut.remove) CHECK(rect.contains(r, c));
}

TEST_CASE("morp_augment is deterministic and seed-sensitive") {
  LabelMap scene = test_scene(17);
  MorpConfig cfg;
  cfg.seed = 99;
  AugmentedMask a = morp_augment(scene, cfg);
  AugmentedMask b = morp_augment(scene, cfg);
  CHECK(a.result == b.result);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].theta == b.records[i].theta);
    CHECK(a.records[i].d_out == b.records[i].d_out);
  }
  cfg.seed = 100;
  AugmentedMask c = morp_augment(scene, cfg);
  CHECK(a.result != c.result);
}

TEST_CASE("morp_augment conserves land and introduces no new classes") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    LabelMap scene = test_scene(s);
    MorpConfig cfg;
    cfg.seed = s * 31 + 7;
    AugmentedMask out = morp_augment(scene, cfg);
    REQUIRE(out.result.size() == scene.size());
    for (std::size_t i = 0; i < scene.size(); ++i) {
      CHECK(out.result.data[i] < kNumClasses);
      if (scene.data[i] == raw(ClassId::land))
        CHECK(out.result.data[i] == raw(ClassId::land));
      else
        CHECK(out.result.data[i] != raw(ClassId::land));
    }
    // remove_small post-condition on target classes
    LabelMap cleaned =
        remove_small(out.result, cfg.min_px, cfg.target_classes);
    CHECK(cleaned == out.result);
  }
}

TEST_CASE("config validation rejects inconsistent sets") {
  MorpConfig cfg;
  cfg.allow.push_back(ClassId::land);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = MorpConfig{};
  cfg.edit.s_expand = 0.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = MorpConfig{};
  cfg.n_regions = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("m50 flags mark exactly ceil(n/2) masks, deterministically") {
  for (int n : {1, 2, 3, 4, 5, 6, 7, 101}) {
    auto flags = m50_full_morp_flags(n, 42);
    int count = 0;
    for (auto f : flags) count += f;
    CHECK(count == (n + 1) / 2);
    CHECK(flags == m50_full_morp_flags(n, 42));
  }
  CHECK(m50_full_morp_flags(8, 1) != m50_full_morp_flags(8, 2));
}

TEST_CASE("regime names round-trip") {
  for (Regime r : {Regime::nomove, Regime::m00, Regime::m50, Regime::m100})
    CHECK(regime_from_string(regime_name(r)) == r);
  CHECK_THROWS_AS(regime_from_string("m25"), ConfigError);
}

TEST_CASE("batch_generate nomove copies inputs verbatim") {
  std::vector<LabelMap> masks = {test_scene(1), test_scene(2)};
  MorpConfig cfg;
  cfg.seed = 5;
  auto out = batch_generate(masks, Regime::nomove, 2, cfg);
  REQUIRE(out.size() == 4);
  CHECK(out[0].result == masks[0]);
  CHECK(out[1].result == masks[0]);
  CHECK(out[2].result == masks[1]);
  CHECK(out[3].result == masks[1]);
}

TEST_CASE("batch_generate m100 yields pairwise distinct masks") {
  std::vector<LabelMap> masks = {test_scene(3), test_scene(4), test_scene(5)};
  MorpConfig cfg;
  cfg.seed = 77;
  auto out = batch_generate(masks, Regime::m100, 2, cfg);
  REQUIRE(out.size() == 6);
  for (std::size_t a = 0; a < out.size(); ++a)
    for (std::size_t b = a + 1; b < out.size(); ++b)
      CHECK(out[a].result != out[b].result);
}

TEST_CASE("batch_generate m50 applies full morp only to flagged masks") {
  std::vector<LabelMap> masks;
  for (std::uint64_t s = 10; s < 14; ++s) masks.push_back(test_scene(s));
  MorpConfig cfg;
  cfg.seed = 12;
  auto flags = m50_full_morp_flags(int(masks.size()), cfg.seed);
  auto out = batch_generate(masks, Regime::m50, 1, cfg);
  REQUIRE(out.size() == masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i) {
    MorpConfig sub = cfg;
    sub.seed = derive_seed(cfg.seed, i, 0);
    AugmentedMask expect = morp_augment(masks[i], sub, !flags[i]);
    CHECK(out[i].result == expect.result);
  }
}
