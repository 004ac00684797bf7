#include "asal/substrates/nca.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "asal/core/image.hpp"

namespace asal {

std::size_t NcaConfig::weight_count() const {
  const std::size_t perception = static_cast<std::size_t>(channels) * filters;
  return perception * 9 + hidden * perception + hidden + static_cast<std::size_t>(channels) * hidden + channels;
}

NcaState nca_init(const NcaConfig& config, Rng& rng) {
  const int g = config.grid_size;
  NcaState state(g, config.channels);
  const double radius = std::min(rng.uniform(config.min_radius, config.max_radius), std::floor((g - 1) / 2.0));
  const int margin = static_cast<int>(std::ceil(radius));
  const int cy = margin + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(g - 2 * margin)));
  const int cx = margin + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(g - 2 * margin)));
  for (int y = cy - margin; y <= cy + margin; ++y)
    for (int x = cx - margin; x <= cx + margin; ++x) {
      const double dy = y - cy, dx = x - cx;
      if (dy * dy + dx * dx <= radius * radius)
        for (int c = 0; c < config.channels; ++c) state.at(y, x, c) = 1.0;
    }
  return state;
}

NcaState nca_step(const NcaState& state, const NcaGenome& genome, const NcaConfig& config) {
  if (genome.weights.size() != config.weight_count()) throw std::invalid_argument("NCA genome has wrong size");
  const int g = state.size, nc = state.channels, nf = config.filters, nh = config.hidden;
  const int np = nc * nf;
  const double* conv = genome.weights.data();
  const double* w1 = conv + static_cast<std::size_t>(np) * 9;
  const double* b1 = w1 + static_cast<std::size_t>(nh) * np;
  const double* w2 = b1 + nh;
  const double* b2 = w2 + static_cast<std::size_t>(nc) * nh;

  NcaState next(g, nc);
  std::vector<double> perception(np), hidden(nh);
  for (int y = 0; y < g; ++y) {
    for (int x = 0; x < g; ++x) {
      std::fill(perception.begin(), perception.end(), 0.0);
      for (int ky = 0; ky < 3; ++ky) {
        const int sy = (y + ky - 1 + g) % g;
        for (int kx = 0; kx < 3; ++kx) {
          const int sx = (x + kx - 1 + g) % g;
          const double* src = &state.cells[(static_cast<std::size_t>(sy) * g + sx) * nc];
          for (int c = 0; c < nc; ++c)
            for (int f = 0; f < nf; ++f) perception[c * nf + f] += conv[(c * nf + f) * 9 + ky * 3 + kx] * src[c];
        }
      }
      for (int h = 0; h < nh; ++h) {
        double a = b1[h];
        const double* w = w1 + static_cast<std::size_t>(h) * np;
        for (int p = 0; p < np; ++p) a += w[p] * perception[p];
        hidden[h] = a > 0 ? a : 0.0;
      }
      for (int c = 0; c < nc; ++c) {
        double d = b2[c];
        const double* w = w2 + static_cast<std::size_t>(c) * nh;
        for (int h = 0; h < nh; ++h) d += w[h] * hidden[h];
        const double v = state.at(y, x, c) + config.dt * d;
        next.at(y, x, c) = std::isfinite(v) ? std::clamp(v, -1.0, 1.0) : v;
      }
    }
  }
  return next;
}

Frame nca_render(const NcaState& state, int render_size) {
  Frame native(state.size, state.size);
  for (int y = 0; y < state.size; ++y)
    for (int x = 0; x < state.size; ++x)
      for (int c = 0; c < 3; ++c)
        native.at(y, x, c) = static_cast<float>(std::clamp((state.at(y, x, c) + 1.0) / 2.0, 0.0, 1.0));
  return resample_nearest(native, render_size, render_size);
}

namespace {

struct NcaModel {
  using State = NcaState;
  const NcaConfig* config;
  NcaGenome genome;

  State init(Rng& rng) const { return nca_init(*config, rng); }
  State step(const State& s) const { return nca_step(s, genome, *config); }
  Frame render(const State& s) const { return nca_render(s, config->render_size); }
  bool finite(const State& s) const {
    return std::all_of(s.cells.begin(), s.cells.end(), [](double v) { return std::isfinite(v); });
  }
};

}  // namespace

NcaSubstrate::NcaSubstrate(NcaConfig config) : config_(config) {
  if (config_.channels < 3 || config_.filters < 1 || config_.hidden < 1 || config_.grid_size < 3)
    throw std::invalid_argument("invalid NCA configuration");
  if (config_.min_radius < 0 || config_.max_radius < config_.min_radius)
    throw std::invalid_argument("invalid NCA radius range");
}

Trajectory NcaSubstrate::rollout(const Theta& theta, const RolloutSpec& spec) const {
  check_theta(theta);
  auto traj = run_rollout(NcaModel{&config_, NcaGenome{theta.values}}, spec);
  traj.theta_digest = theta.digest();
  return traj;
}

}  // namespace asal
