#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "asal/core/types.hpp"
#include "asal/substrates/registry.hpp"

namespace asal::cli {

using Json = nlohmann::json;

enum class Preset { Desk, Paper };

struct EmbedderSettings {
  std::string backend = "pixel";  // "pixel" | "sidecar"
  int pixel_grid = 8;
  std::string address;  // sidecar address; falls back to $ASAL_SIDECAR
  bool cache = true;
};

/// One scheduled target: a prompt (text backends) or an image file.
struct TargetEntry {
  int step = -1;  // -1 means the final step
  std::string text;
  std::string image;
};

struct RolloutSettings {
  int steps = 0;
  int captures = 1;
};

struct OptimizerSettings {
  int population = 16;
  double sigma = 0.1;
  int generations = 32;
  int checkpoint_every = 8;
  std::string center = "default";  // "default" | "zeros" | path to genome.json
};

struct EnumerateSettings {
  int seeds = 4;
  int steps = 128;
  int subsample = 32;
  int top_k = 8;
  int strip_frames = 8;
  std::uint32_t first_rule = 0;
  std::uint32_t rule_count = 1u << 18;
  int histogram_bins = 50;
};

struct IlluminateSettings {
  int capacity = 256;
  std::int64_t iterations = 500;
  int batch = 32;
  double mutation_sigma = 0.1;
  int log_every = 10;
  int checkpoint_every = 50;
  std::string init = "random";  // "random" | "zeros"
  double init_sigma = 1.0;
  /// Number of capture steps averaged into each genome's embedding (1 = final only).
  int embed_captures = 1;
  int atlas_grid = 8;
  int atlas_tile = 64;
  double max_divergence_fraction = 0.5;
};

struct QuantifySettings {
  std::string analysis = "interpolate";  // interpolate | importance | plateau | population
  std::string theta_a;                   // genome.json paths; empty means the substrate default
  std::string theta_b;
  std::string reference = "b";
  int points = 11;
  std::vector<double> deltas;  // empty means the default +-{1,2,3} x 0.05
  std::vector<std::size_t> dims;
  int window = 4;
  double epsilon = 1e-3;
  std::vector<int> counts;
};

struct AtlasSettings {
  std::string archive;  // archive.json from an illuminate run
  std::string layout;   // optional external layout CSV
  int grid = 8;
  int tile = 64;
};

struct RunConfig {
  Preset preset = Preset::Desk;
  SubstrateId substrate = SubstrateId::Lenia;
  SubstrateSettings settings;
  EmbedderSettings embedder;
  std::vector<TargetEntry> targets;
  RolloutSettings rollout;
  OptimizerSettings optimizer;
  EnumerateSettings enumerate;
  IlluminateSettings illuminate;
  QuantifySettings quantify;
  AtlasSettings atlas;
  std::uint64_t seed = 0;
  std::string output_dir = "runs/latest";
  Json resolved;  // the full config after preset defaults are applied

  /// FNV-1a over the canonical JSON dump; stored in checkpoints.
  std::uint64_t digest() const;
};

std::string_view to_string(Preset preset);
Preset preset_from_string(const std::string& name);

/// Defaults for a preset, specialised to a substrate.
Json preset_defaults(Preset preset, SubstrateId substrate);

/// Merges `user` over the preset defaults and validates. `preset_override`
/// wins over any "preset" key in the file. Throws ConfigError with a
/// JSON-pointer path to the offending field.
RunConfig resolve_config(const Json& user, std::optional<Preset> preset_override = std::nullopt);
RunConfig load_config(const std::filesystem::path& path, std::optional<Preset> preset_override = std::nullopt);

/// Target-objective consistency: at least one target; text targets need a
/// text-capable backend; steps must be captured.
void validate_targets(const RunConfig& config, bool backend_supports_text);

}  // namespace asal::cli
