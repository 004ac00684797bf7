#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>

#include "asal/cli/config.hpp"
#include "asal/embedding/embedder.hpp"

namespace asal::cli {

struct CommandOptions {
  int workers = 1;
  std::optional<std::filesystem::path> resume;
  /// Replaces the configured backend (tests inject fakes here).
  Embedder* embedder = nullptr;
  /// Progress log; null silences it.
  std::ostream* log = nullptr;
};

/// Builds the configured embedder: the pixel baseline or a sidecar client at
/// embedder.address, else $ASAL_SIDECAR.
std::unique_ptr<Embedder> make_embedder(const EmbedderSettings& settings);

/// Each command writes into config.output_dir and returns it.
std::filesystem::path cmd_target(const RunConfig& config, const CommandOptions& options);
std::filesystem::path cmd_enumerate(const RunConfig& config, const CommandOptions& options);
std::filesystem::path cmd_illuminate(const RunConfig& config, const CommandOptions& options);
std::filesystem::path cmd_quantify(const RunConfig& config, const CommandOptions& options);
std::filesystem::path cmd_atlas(const RunConfig& config, const CommandOptions& options);

}  // namespace asal::cli
