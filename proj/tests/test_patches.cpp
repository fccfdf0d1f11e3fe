#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "morp/patches.hpp"
#include "morp/reference.hpp"
#include "morp/rng.hpp"

using namespace morp;

namespace {

Scene blob_scene(int size, int blob_r0, int blob_c0, int blob_side) {
  Scene s;
  s.id = "fixture";
  s.intensity = Grid<float>(size, size);
  Rng rng(size);
  for (auto& v : s.intensity.data) v = float(rng.uniform());
  s.labels = LabelMap(size, size);
  for (int r = blob_r0; r < blob_r0 + blob_side; ++r)
    for (int c = blob_c0; c < blob_c0 + blob_side; ++c)
      s.labels.at(r, c) = raw(ClassId::oil);
  return s;
}

}  // namespace

TEST_CASE("percentile_normalize nearest-rank clipping") {
  Grid<float> img(10, 1);
  for (int i = 0; i < 10; ++i) img.data[i] = float(i + 1);  // 1..10
  // lo=20% -> rank ceil(0.2*10)=2 -> value 2; hi=80% -> rank 8 -> value 8
  Grid<float> out = percentile_normalize(img, 20.0, 80.0);
  CHECK(out.data[0] == doctest::Approx(0.0));   // clipped at 2
  CHECK(out.data[1] == doctest::Approx(0.0));   // exactly p_lo
  CHECK(out.data[7] == doctest::Approx(1.0));   // exactly p_hi
  CHECK(out.data[9] == doctest::Approx(1.0));   // clipped at 8
  CHECK(out.data[4] == doctest::Approx(0.5));   // 5 -> (5-2)/6
  for (float v : out.data) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
  }
}

TEST_CASE("percentile_normalize rejects degenerate scenes") {
  Grid<float> flat(8, 8, 3.0f);
  CHECK_THROWS_AS(percentile_normalize(flat), DegenerateScene);
  Grid<float> nans(4, 4, std::numeric_limits<float>::quiet_NaN());
  CHECK_THROWS_AS(percentile_normalize(nans), DegenerateScene);
}

TEST_CASE("median filter matches the serial reference") {
  Rng rng(14);
  Grid<float> img(37, 23);
  for (auto& v : img.data) v = float(rng.uniform());
  Grid<float> a = median_filter_3x3(img);
  Grid<float> b = reference::median_filter_3x3_serial(img);
  CHECK(a == b);
  CHECK_THROWS_AS(median_filter_3x3(Grid<float>(2, 2)), TooSmall);
}

TEST_CASE("median filter removes isolated speckle") {
  Grid<float> img(9, 9, 0.5f);
  img.at(4, 4) = 100.0f;
  Grid<float> out = median_filter_3x3(img);
  CHECK(out.at(4, 4) == 0.5f);
}

TEST_CASE("extract_patches: positives cover the blob, ratio holds") {
  // 96x96 scene, 32px window, stride 32: 3x3 grid, blob in one corner tile
  Scene s = blob_scene(96, 4, 4, 16);
  auto patches = extract_patches(s, 32, 32, 1.25, 7);

  std::size_t n_pos = 0, n_neg = 0;
  for (const Patch& p : patches) {
    if (p.kind == PatchKind::positive) {
      n_pos++;
      bool any = false;
      for (auto v : p.labels.data) any |= v == raw(ClassId::oil);
      CHECK(any);
    } else {
      n_neg++;
      for (auto v : p.labels.data) CHECK(v == raw(ClassId::sea));
    }
    CHECK(p.window == 32);
    // patch content matches the scene at its origin
    CHECK(p.intensity.at(0, 0) == s.intensity.at(p.origin_row, p.origin_col));
  }
  CHECK(n_pos == 1);
  CHECK(n_neg == std::size_t(std::llround(1.25 * double(n_pos))));
}

TEST_CASE("extract_patches caps negatives at availability") {
  Scene s = blob_scene(64, 0, 0, 64);  // fully oil: no negatives exist
  auto patches = extract_patches(s, 32, 32, 1.25, 7);
  for (const Patch& p : patches) CHECK(p.kind == PatchKind::positive);
}

TEST_CASE("extract_patches includes the clamped final positions") {
  Scene s = blob_scene(100, 90, 90, 8);  // blob only in the bottom-right
  auto patches = extract_patches(s, 64, 64, 0.0, 7);
  bool found = false;
  for (const Patch& p : patches)
    found |= p.kind == PatchKind::positive && p.origin_row == 36 &&
             p.origin_col == 36;
  CHECK(found);
}

TEST_CASE("extract_patches is seed-deterministic") {
  Scene s = blob_scene(96, 40, 40, 10);
  auto a = extract_patches(s, 32, 16, 2.0, 123);
  auto b = extract_patches(s, 32, 16, 2.0, 123);
  auto c = extract_patches(s, 32, 16, 2.0, 124);
  REQUIRE(a.size() == b.size());
  bool same = true, diff = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same &= a[i].origin_row == b[i].origin_row &&
            a[i].origin_col == b[i].origin_col;
    if (i < c.size())
      diff |= a[i].origin_row != c[i].origin_row ||
              a[i].origin_col != c[i].origin_col;
  }
  CHECK(same);
  CHECK(diff);
  CHECK_THROWS_AS(extract_patches(blob_scene(16, 0, 0, 4), 32, 32, 1.0, 1),
                  SceneTooSmall);
}

TEST_CASE("multiscale patches resize to the output size") {
  Scene s = blob_scene(160, 60, 60, 30);
  auto patches = multiscale_patches(s, 96, 128, 4, 11, 48);
  REQUIRE(patches.size() == 4);
  for (const Patch& p : patches) {
    CHECK(p.kind == PatchKind::multiscale);
    CHECK(p.window >= 96);
    CHECK(p.window <= 128);
    CHECK(p.intensity.width == 48);
    CHECK(p.labels.height == 48);
    // labels stay in range, intensity stays within source bounds
    float lo = 1e9f, hi = -1e9f;
    for (float v : s.intensity.data) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    for (float v : p.intensity.data) {
      CHECK(v >= lo);
      CHECK(v <= hi);
    }
    for (auto v : p.labels.data) CHECK(v < kNumClasses);
  }
  // windows hug the annotated support
  for (const Patch& p : patches) {
    CHECK(p.origin_row <= 60 + 30);
    CHECK(p.origin_row + p.window >= 60 - 64);
  }
}

TEST_CASE("multiscale labels are nearest-neighbor exact on a 2:1 resize") {
  Scene s = blob_scene(128, 0, 0, 64);
  auto patches = multiscale_patches(s, 128, 128, 1, 5, 64);
  REQUIRE(patches.size() == 1);
  const Patch& p = patches[0];
  for (int r = 0; r < 64; ++r)
    for (int c = 0; c < 64; ++c)
      CHECK(p.labels.at(r, c) == s.labels.at(2 * r + 1, 2 * c + 1));
}

TEST_CASE("multiscale on a spill-free scene yields nothing") {
  Scene s = blob_scene(128, 0, 0, 0);
  CHECK(multiscale_patches(s, 96, 128, 3, 9).empty());
}

TEST_CASE("hard negative thresholds, both sides of each boundary") {
  const int win = 20;  // 400 px; 0.5% = 2 px, 80% = 320 px
  LabelMap truth(win, win), pred(win, win);

  auto run = [&](int fp_px, int land_px) {
    for (auto& v : truth.data) v = raw(ClassId::sea);
    for (auto& v : pred.data) v = raw(ClassId::sea);
    for (int i = 0; i < land_px; ++i) truth.data[i] = raw(ClassId::land);
    for (int i = land_px; i < land_px + fp_px; ++i)
      pred.data[i] = raw(ClassId::oil);
    return hard_negative_filter(pred, truth, win).size();
  };

  CHECK(run(2, 0) == 1);    // exactly at the FP-area boundary
  CHECK(run(1, 0) == 0);    // just below
  CHECK(run(3, 0) == 1);    // above
  CHECK(run(2, 80) == 1);   // sea = 320/400 exactly at the overlap boundary
  CHECK(run(2, 81) == 0);   // sea just below 80%
  CHECK(run(2, 79) == 1);   // sea just above
}

TEST_CASE("manifest parsing, validation and leakage") {
  std::string good =
      "Img,SpillDate,Lat,Lon,AcqDate,DeltaDays,Patches,Split\n"
      "1,2019-05-02,41.2,2.1,2019-05-03,1,12,Train\n"
      "2,2019-06-10,36.5,14.2,2019-06-12,2,8,Test\n";
  auto rows = parse_manifest(good);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].img == 1);
  CHECK(rows[0].lat == doctest::Approx(41.2));
  CHECK(rows[1].delta_days == 2);
  CHECK(rows[1].split == "Test");
  check_split_leakage(rows);

  CHECK_THROWS_AS(parse_manifest("Img,Nope\n1,2\n"), ManifestParse);
  CHECK_THROWS_AS(
      parse_manifest("Img,SpillDate,Lat,Lon,AcqDate,DeltaDays,Patches,Split\n"
                     "x,2019-05-02,41.2,2.1,2019-05-03,1,12,Train\n"),
      ManifestParse);
  CHECK_THROWS_AS(
      parse_manifest("Img,SpillDate,Lat,Lon,AcqDate,DeltaDays,Patches,Split\n"
                     "1,2019-05-02,41.2,2.1,2019-05-03,1,12,Val\n"),
      ManifestParse);

  std::string leaky =
      "Img,SpillDate,Lat,Lon,AcqDate,DeltaDays,Patches,Split\n"
      "1,2019-05-02,41.2,2.1,2019-05-03,1,12,Train\n"
      "1,2019-05-02,41.2,2.1,2019-05-06,4,9,Test\n";
  CHECK_THROWS_AS(check_split_leakage(parse_manifest(leaky)), SplitLeakage);
}
