#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asal/core/types.hpp"
#include "asal/embedding/embedder.hpp"

namespace asal {

using Point2 = std::array<double, 2>;

/// PCA onto the top two components, min-max scaled to [0,1]^2. Each
/// component's sign is fixed so its largest-magnitude loading is positive.
/// A missing second component (rank < 2) leaves the second axis at 0.
std::vector<Point2> project_2d(std::span<const EmbeddingVector> embeddings);

struct AtlasLayout {
  int grid_w = 0;
  int grid_h = 0;
  /// tiles[row * grid_w + col] = genome index, or nullopt when empty.
  std::vector<std::optional<std::size_t>> tiles;
  std::vector<Point2> coords;
  std::string projector = "pca";

  std::optional<std::size_t> tile(int row, int col) const { return tiles[static_cast<std::size_t>(row) * grid_w + col]; }
  /// Tile (row, col) containing a point; x picks the column, y the row.
  std::array<int, 2> tile_of(const Point2& p) const;

  /// CSV: a `# projector=<name>` line, then genome_id,x,y,tile_row,tile_col.
  void write_csv(const std::filesystem::path& path) const;
  /// Reads coordinates (and projector) from a layout CSV and re-tiles them.
  static AtlasLayout read_csv(const std::filesystem::path& path, int grid_w, int grid_h);
};

/// Per tile, the genome nearest the tile centre among those inside it; ties
/// go to the lower genome index.
AtlasLayout grid_sample(std::span<const Point2> coords, int grid_w, int grid_h);

/// Mosaic of tile_size x tile_size cells; empty tiles are black. `frames`
/// maps genome index to its frame. Throws std::invalid_argument on a missing frame.
Frame render_atlas(const AtlasLayout& layout, const std::map<std::size_t, Frame>& frames, int tile_size);

}  // namespace asal
