#pragma once

// Independent reference implementations used to check the optimised code.

#include <vector>

#include "asal/substrates/lifelike_ca.hpp"

namespace oracle {

/// Per-cell Life-like step on a plain 2-D array: count the eight toroidal
/// Moore neighbours, then look the count up in the birth or survive table.
inline std::vector<std::vector<int>> ca_step(const std::vector<std::vector<int>>& grid, std::uint32_t packed) {
  const int h = static_cast<int>(grid.size()), w = static_cast<int>(grid[0].size());
  std::vector<std::vector<int>> next(h, std::vector<int>(w, 0));
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      int n = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (dy || dx) n += grid[(y + dy + h) % h][(x + dx + w) % w];
      const bool birth = (packed >> n) & 1u;
      const bool survive = (packed >> (9 + n)) & 1u;
      next[y][x] = grid[y][x] ? survive : birth;
    }
  return next;
}

inline std::vector<std::vector<int>> to_grid(const asal::CaState& s) {
  std::vector<std::vector<int>> g(s.height(), std::vector<int>(s.width()));
  for (int y = 0; y < s.height(); ++y)
    for (int x = 0; x < s.width(); ++x) g[y][x] = s.cell(y, x);
  return g;
}

inline asal::CaState from_grid(const std::vector<std::vector<int>>& g) {
  asal::CaState s(static_cast<int>(g.size()), static_cast<int>(g[0].size()));
  for (int y = 0; y < s.height(); ++y)
    for (int x = 0; x < s.width(); ++x) s.set(y, x, g[y][x] != 0);
  return s;
}

inline asal::CaState cells(int h, int w, std::initializer_list<std::pair<int, int>> alive) {
  asal::CaState s(h, w);
  for (auto [y, x] : alive) s.set(y, x, true);
  return s;
}

}  // namespace oracle
