#include "asal/substrates/particle_life.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asal {

namespace {

double wrap_unit(double v) {
  v -= std::floor(v);
  return v >= 1.0 ? 0.0 : v;
}

double torus_delta(double d) { return d - std::nearbyint(d); }

// Adds the force of particle j on particle i into (fx, fy). Shared by both
// step variants so their sums are bit-identical when visited in index order.
inline void accumulate_pair(const ParticleLifeState& s, const ParticleLifeGenome& g, double cutoff, int i, int j,
                            double& fx, double& fy) {
  const double dx = torus_delta(s.x[j] - s.x[i]);
  const double dy = torus_delta(s.y[j] - s.y[i]);
  const double d2 = dx * dx + dy * dy;
  if (d2 >= cutoff * cutoff || d2 == 0.0) return;
  const double d = std::sqrt(d2);
  const double f = plife_force(d / cutoff, g.attraction[s.type[i] * g.types + s.type[j]], g.beta[s.type[j]]);
  fx += f * dx / d;
  fy += f * dy / d;
}

ParticleLifeState integrate(const ParticleLifeState& s, const std::vector<double>& fx, const std::vector<double>& fy,
                            const ParticleLifeConfig& c) {
  ParticleLifeState next = s;
  const double scale = c.dt * c.force_factor * c.cutoff;
  for (std::size_t i = 0; i < s.size(); ++i) {
    next.vx[i] = c.damping * s.vx[i] + scale * fx[i];
    next.vy[i] = c.damping * s.vy[i] + scale * fy[i];
    const double nx = s.x[i] + c.dt * next.vx[i];
    const double ny = s.y[i] + c.dt * next.vy[i];
    next.x[i] = std::isfinite(nx) ? wrap_unit(nx) : nx;
    next.y[i] = std::isfinite(ny) ? wrap_unit(ny) : ny;
  }
  return next;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

ParticleLifeGenome ParticleLifeGenome::decode(const Theta& theta, int types) {
  const std::size_t tt = static_cast<std::size_t>(types) * types;
  if (theta.dim() != tt + types) throw std::invalid_argument("particle life genome has wrong size");
  ParticleLifeGenome g;
  g.types = types;
  for (std::size_t i = 0; i < tt; ++i) g.attraction.push_back(std::tanh(theta.values[i]));
  for (int i = 0; i < types; ++i) g.beta.push_back(sigmoid(theta.values[tt + i]));
  return g;
}

double plife_force(double r, double a, double beta) {
  if (r < beta) return r / beta - 1.0;
  if (r < 1.0) return a * (1.0 - std::abs(2.0 * r - 1.0 - beta) / (1.0 - beta));
  return 0.0;
}

ParticleLifeState plife_init(const ParticleLifeConfig& config, Rng& rng) {
  ParticleLifeState s;
  const int n = config.particles;
  s.x.resize(n);
  s.y.resize(n);
  s.vx.assign(n, 0.0);
  s.vy.assign(n, 0.0);
  s.type.resize(n);
  for (int i = 0; i < n; ++i) {
    s.x[i] = rng.uniform();
    s.y[i] = rng.uniform();
    s.type[i] = i % config.types;
  }
  return s;
}

ParticleLifeState plife_step_naive(const ParticleLifeState& state, const ParticleLifeGenome& genome,
                                   const ParticleLifeConfig& config) {
  const int n = static_cast<int>(state.size());
  std::vector<double> fx(n, 0.0), fy(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) accumulate_pair(state, genome, config.cutoff, i, j, fx[i], fy[i]);
  return integrate(state, fx, fy, config);
}

ParticleLifeState plife_step(const ParticleLifeState& state, const ParticleLifeGenome& genome,
                             const ParticleLifeConfig& config) {
  const int n = static_cast<int>(state.size());
  const int cells = std::max(1, static_cast<int>(std::floor(1.0 / config.cutoff)));
  const auto cell_of = [cells](double v) { return std::min(cells - 1, static_cast<int>(v * cells)); };

  // Bucket particles; each bucket lists indices in increasing order.
  std::vector<std::vector<int>> buckets(static_cast<std::size_t>(cells) * cells);
  for (int i = 0; i < n; ++i) buckets[cell_of(state.y[i]) * cells + cell_of(state.x[i])].push_back(i);

  std::vector<double> fx(n, 0.0), fy(n, 0.0);
  std::vector<int> candidates;
  std::vector<int> cell_ids;
  for (int i = 0; i < n; ++i) {
    const int cy = cell_of(state.y[i]), cx = cell_of(state.x[i]);
    cell_ids.clear();
    for (int oy = -1; oy <= 1; ++oy)
      for (int ox = -1; ox <= 1; ++ox)
        cell_ids.push_back(((cy + oy + cells) % cells) * cells + (cx + ox + cells) % cells);
    std::sort(cell_ids.begin(), cell_ids.end());
    cell_ids.erase(std::unique(cell_ids.begin(), cell_ids.end()), cell_ids.end());
    candidates.clear();
    for (int c : cell_ids) candidates.insert(candidates.end(), buckets[c].begin(), buckets[c].end());
    std::sort(candidates.begin(), candidates.end());
    for (int j : candidates)
      if (j != i) accumulate_pair(state, genome, config.cutoff, i, j, fx[i], fy[i]);
  }
  return integrate(state, fx, fy, config);
}

const Rgb& plife_type_color(int type) {
  static const Rgb kPalette[] = {{1.0f, 0.0f, 0.0f}, {0.0f, 1.0f, 0.0f}, {0.0f, 0.4f, 1.0f},
                                 {1.0f, 1.0f, 0.0f}, {1.0f, 0.0f, 1.0f}, {0.0f, 1.0f, 1.0f},
                                 {1.0f, 0.5f, 0.0f}, {1.0f, 1.0f, 1.0f}};
  return kPalette[type % 8];
}

Frame plife_render(const ParticleLifeState& state, const ParticleLifeConfig& config) {
  const int r = config.render_size;
  Frame frame(r, r);
  for (std::size_t i = 0; i < state.size(); ++i)
    fill_disc(frame, state.y[i] * r, state.x[i] * r, config.particle_radius_px, plife_type_color(state.type[i]));
  return frame;
}

namespace {

struct ParticleLifeModel {
  using State = ParticleLifeState;
  const ParticleLifeConfig* config;
  ParticleLifeGenome genome;

  State init(Rng& rng) const { return plife_init(*config, rng); }
  State step(const State& s) const { return plife_step(s, genome, *config); }
  Frame render(const State& s) const { return plife_render(s, *config); }
  bool finite(const State& s) const {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || !std::isfinite(s.vx[i]) || !std::isfinite(s.vy[i]))
        return false;
    return true;
  }
};

}  // namespace

ParticleLifeSubstrate::ParticleLifeSubstrate(ParticleLifeConfig config) : config_(config) {
  if (config_.particles < 0 || config_.types < 1 || config_.cutoff <= 0 || config_.cutoff > 0.5)
    throw std::invalid_argument("invalid particle life configuration");
}

Trajectory ParticleLifeSubstrate::rollout(const Theta& theta, const RolloutSpec& spec) const {
  check_theta(theta);
  auto traj = run_rollout(ParticleLifeModel{&config_, ParticleLifeGenome::decode(theta, config_.types)}, spec);
  traj.theta_digest = theta.digest();
  return traj;
}

}  // namespace asal
