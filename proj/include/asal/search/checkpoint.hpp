#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "asal/search/diversity_ga.hpp"
#include "asal/search/sep_cma_es.hpp"

namespace asal {

/// Resumable state of a target search.
struct TargetCheckpoint {
  SepCmaState cma;
  Genome best;
  double best_score = 0;
  std::vector<double> curve_best;  // best-so-far score per generation
  std::vector<double> curve_mean;  // population mean score per generation
  std::uint64_t config_digest = 0;

  friend bool operator==(const TargetCheckpoint&, const TargetCheckpoint&) = default;
};

/// Resumable state of an illumination run.
struct GaCheckpoint {
  GaState state;
  std::vector<double> curve;  // diversity per logged iteration
  std::uint64_t config_digest = 0;
};

/// Both formats are cereal portable-binary (little-endian) behind an 8-byte
/// magic and a kind tag; loading the wrong kind throws asal::Error.
void save_checkpoint(const std::filesystem::path& path, const TargetCheckpoint& ckpt);
void save_checkpoint(const std::filesystem::path& path, const GaCheckpoint& ckpt);
TargetCheckpoint load_target_checkpoint(const std::filesystem::path& path);
GaCheckpoint load_ga_checkpoint(const std::filesystem::path& path);

}  // namespace asal
