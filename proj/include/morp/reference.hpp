#pragma once

#include "morp/grid.hpp"
#include "morp/label_map.hpp"
#include "morp/metrics.hpp"

// Straightforward serial implementations of the parallel kernels, kept as
// test oracles and as the baseline side of the benchmark.
namespace morp::reference {

// O(pixels x reference) nearest-reference search.
Grid<double> distance_transform_bruteforce(const Grid<std::uint8_t>& reference);

// Per-window 9-element sort.
Grid<float> median_filter_3x3_serial(const Grid<float>& intensity);

ConfusionCounts confusion_counts_serial(const LabelMap& pred,
                                        const LabelMap& truth);

}  // namespace morp::reference
