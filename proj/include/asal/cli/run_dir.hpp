#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "asal/cli/config.hpp"
#include "asal/search/diversity_ga.hpp"

namespace asal::cli {

/// Output directory of one run:
///   config.json  scores.csv  best/genome.json  frames/step_00000.png ...
///   checkpoint_<n>.bin  report/*.png|csv
class RunDir {
 public:
  /// Creates the directory tree and writes the resolved config.
  RunDir(std::filesystem::path root, const RunConfig& config);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path path(const std::string& name) const { return root_ / name; }
  std::filesystem::path report(const std::string& name) const { return root_ / "report" / name; }
  std::filesystem::path checkpoint(std::int64_t index) const;

  /// frames/step_<step>.png for every frame.
  void write_frames(const Trajectory& traj) const;

 private:
  std::filesystem::path root_;
};

void write_genome_json(const std::filesystem::path& path, const Theta& theta, std::optional<double> score = std::nullopt);
Theta read_genome_json(const std::filesystem::path& path);

/// archive.json: capacity, next_birth, members [{birth, theta, embedding}].
void write_archive_json(const std::filesystem::path& path, SubstrateId substrate, const Archive& archive);
Archive read_archive_json(const std::filesystem::path& path, SubstrateId* substrate = nullptr);

/// Single-writer text file helper that replaces the file atomically.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace asal::cli
