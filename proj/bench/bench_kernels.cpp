// Timing comparison of the OpenMP kernels against their serial reference
// implementations. Sizes kept moderate so the brute-force EDT stays feasible.

#include <chrono>
#include <cstdio>
#include <functional>

#include "morp/geometry.hpp"
#include "morp/metrics.hpp"
#include "morp/patches.hpp"
#include "morp/reference.hpp"
#include "morp/rng.hpp"

using Clock = std::chrono::steady_clock;

static double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm-up
  auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) fn();
  auto t1 = Clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

int main() {
  morp::Rng rng(42);

  const int n = 512;
  morp::Grid<std::uint8_t> refset(n, n);
  for (auto& v : refset.data) v = rng.uniform() < 0.002 ? 1 : 0;
  refset.at(0, 0) = 1;

  morp::Grid<float> img(n, n);
  for (auto& v : img.data) v = static_cast<float>(rng.uniform());

  morp::LabelMap pred(n, n), truth(n, n);
  for (auto& v : pred.data) v = static_cast<std::uint8_t>(rng.uniform_int(5));
  for (auto& v : truth.data) v = static_cast<std::uint8_t>(rng.uniform_int(5));

  struct Row {
    const char* name;
    double parallel_ms, serial_ms;
  };
  Row rows[] = {
      {"distance_transform 512x512",
       time_ms([&] { morp::distance_transform(refset); }, 5),
       time_ms([&] { morp::reference::distance_transform_bruteforce(refset); },
               1)},
      {"median_filter_3x3 512x512",
       time_ms([&] { morp::median_filter_3x3(img); }, 10),
       time_ms([&] { morp::reference::median_filter_3x3_serial(img); }, 10)},
      {"confusion_counts 512x512",
       time_ms([&] { morp::confusion_counts(pred, truth); }, 20),
       time_ms([&] { morp::reference::confusion_counts_serial(pred, truth); },
               20)},
  };

  std::printf("%-30s %12s %12s %8s\n", "kernel", "parallel ms", "serial ms",
              "speedup");
  for (const auto& r : rows)
    std::printf("%-30s %12.3f %12.3f %7.2fx\n", r.name, r.parallel_ms,
                r.serial_ms, r.serial_ms / r.parallel_ms);
  return 0;
}
