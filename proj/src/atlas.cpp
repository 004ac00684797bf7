#include "asal/atlas.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "asal/core/errors.hpp"
#include "asal/core/image.hpp"

namespace asal {

std::vector<Point2> project_2d(std::span<const EmbeddingVector> embeddings) {
  const std::size_t n = embeddings.size();
  if (n < 2) throw std::invalid_argument("projection needs at least two embeddings");
  const std::size_t d = embeddings[0].dim();
  Eigen::MatrixXd x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    if (embeddings[i].dim() != d) throw std::invalid_argument("embedding dimension mismatch");
    for (std::size_t j = 0; j < d; ++j) x(i, j) = embeddings[i].values[j];
  }
  x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const double top = std::max(values(d - 1), 0.0);
  std::vector<Point2> out(n, Point2{0.0, 0.0});
  for (int axis = 0; axis < 2 && axis < static_cast<int>(d); ++axis) {
    const Eigen::Index col = static_cast<Eigen::Index>(d) - 1 - axis;
    if (!(values(col) > 1e-12 * std::max(top, 1e-300))) break;
    Eigen::VectorXd v = solver.eigenvectors().col(col);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    const Eigen::VectorXd proj = x * v;
    const double lo = proj.minCoeff(), hi = proj.maxCoeff();
    for (std::size_t i = 0; i < n; ++i) out[i][axis] = hi > lo ? (proj(i) - lo) / (hi - lo) : 0.0;
  }
  return out;
}

std::array<int, 2> AtlasLayout::tile_of(const Point2& p) const {
  const int col = std::clamp(static_cast<int>(std::floor(p[0] * grid_w)), 0, grid_w - 1);
  const int row = std::clamp(static_cast<int>(std::floor(p[1] * grid_h)), 0, grid_h - 1);
  return {row, col};
}

AtlasLayout grid_sample(std::span<const Point2> coords, int grid_w, int grid_h) {
  if (grid_w < 1 || grid_h < 1) throw std::invalid_argument("atlas grid must be at least 1x1");
  AtlasLayout layout;
  layout.grid_w = grid_w;
  layout.grid_h = grid_h;
  layout.coords.assign(coords.begin(), coords.end());
  layout.tiles.assign(static_cast<std::size_t>(grid_w) * grid_h, std::nullopt);
  std::vector<double> best(layout.tiles.size(), 0.0);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto [row, col] = layout.tile_of(coords[i]);
    const double cx = (col + 0.5) / grid_w, cy = (row + 0.5) / grid_h;
    const double d2 = (coords[i][0] - cx) * (coords[i][0] - cx) + (coords[i][1] - cy) * (coords[i][1] - cy);
    const std::size_t t = static_cast<std::size_t>(row) * grid_w + col;
    if (!layout.tiles[t] || d2 < best[t] || (d2 == best[t] && i < *layout.tiles[t])) {
      layout.tiles[t] = i;
      best[t] = d2;
    }
  }
  return layout;
}

Frame render_atlas(const AtlasLayout& layout, const std::map<std::size_t, Frame>& frames, int tile_size) {
  Frame mosaic(tile_size * layout.grid_h, tile_size * layout.grid_w);
  for (int row = 0; row < layout.grid_h; ++row) {
    for (int col = 0; col < layout.grid_w; ++col) {
      const auto idx = layout.tile(row, col);
      if (!idx) continue;
      const auto it = frames.find(*idx);
      if (it == frames.end()) throw std::invalid_argument("no frame for genome " + std::to_string(*idx));
      const Frame tile = it->second.height == tile_size && it->second.width == tile_size
                             ? it->second
                             : resample_nearest(it->second, tile_size, tile_size);
      // Row 0 is the bottom of the projection, so flip to keep "up" up.
      const int oy = (layout.grid_h - 1 - row) * tile_size, ox = col * tile_size;
      for (int y = 0; y < tile_size; ++y)
        for (int x = 0; x < tile_size; ++x)
          for (int c = 0; c < 3; ++c) mosaic.at(oy + y, ox + x, c) = tile.at(y, x, c);
    }
  }
  return mosaic;
}

void AtlasLayout::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "# projector=" << projector << '\n' << "genome_id,x,y,tile_row,tile_col\n";
  char buf[128];
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto [row, col] = tile_of(coords[i]);
    std::snprintf(buf, sizeof(buf), "%zu,%.9f,%.9f,%d,%d\n", i, coords[i][0], coords[i][1], row, col);
    out << buf;
  }
}

AtlasLayout AtlasLayout::read_csv(const std::filesystem::path& path, int grid_w, int grid_h) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::string line, projector = "external";
  std::vector<std::pair<std::size_t, Point2>> rows;
  while (std::getline(in, line)) {
    if (line.rfind("# projector=", 0) == 0) {
      projector = line.substr(12);
      continue;
    }
    if (line.empty() || line[0] == '#' || line.rfind("genome_id", 0) == 0) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() < 3) throw ParseError("layout row needs genome_id,x,y", rows.size());
    rows.push_back({std::stoull(fields[0]), Point2{std::stod(fields[1]), std::stod(fields[2])}});
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Point2> coords;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != i) throw Error("layout genome ids must be 0..n-1");
    coords.push_back(rows[i].second);
  }
  AtlasLayout layout = grid_sample(coords, grid_w, grid_h);
  layout.projector = projector;
  return layout;
}

}  // namespace asal
