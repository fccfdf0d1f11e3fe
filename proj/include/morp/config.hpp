#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "morp/engine.hpp"
#include "morp/metrics.hpp"

namespace morp {

struct PatchConfig {
  int window = 512;
  int stride = 256;
  double neg_pos_ratio = 1.25;
  int multiscale_min = 1024;
  int multiscale_max = 2048;
  int multiscale_count = 0;
  double percentile_lo = 0.5;
  double percentile_hi = 97.5;
  bool median_filter = true;
};

struct RunConfig {
  MorpConfig morp;
  LossWeights loss;
  PatchConfig patches;
  bool seed_set = false;
};

// Parses the nested JSON config document; unknown keys are errors
// (ConfigError with the offending path).
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

// Fully resolved config (defaults expanded) as pretty JSON, for --dry-run.
std::string dump_run_config(const RunConfig& cfg);

}  // namespace morp
