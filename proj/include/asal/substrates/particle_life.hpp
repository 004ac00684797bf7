#pragma once

#include <vector>

#include "asal/core/image.hpp"
#include "asal/core/substrate.hpp"

namespace asal {

struct ParticleLifeConfig {
  int particles = 5000;
  int types = 6;
  /// Interaction cutoff in world units (world is the unit torus).
  double cutoff = 0.1;
  /// Velocity multiplier applied every step.
  double damping = 0.9;
  double dt = 0.02;
  double force_factor = 10.0;
  int render_size = 224;
  double particle_radius_px = 1.0;

  std::size_t genome_dim() const { return static_cast<std::size_t>(types) * types + types; }
};

/// Decoded genome: attraction[i * types + j] is how type i responds to type j.
struct ParticleLifeGenome {
  int types = 0;
  std::vector<double> attraction;  // in [-1, 1]
  std::vector<double> beta;        // in (0, 1), per type

  /// Raw layout: types*types attraction logits (tanh), then types beta logits (sigmoid).
  static ParticleLifeGenome decode(const Theta& theta, int types);
};

struct ParticleLifeState {
  std::vector<double> x, y, vx, vy;
  std::vector<int> type;

  std::size_t size() const { return x.size(); }
};

/// Piecewise-linear force profile over normalised distance r = d / cutoff.
double plife_force(double r, double a, double beta);

ParticleLifeState plife_init(const ParticleLifeConfig& config, Rng& rng);
ParticleLifeState plife_step(const ParticleLifeState& state, const ParticleLifeGenome& genome,
                             const ParticleLifeConfig& config);
/// O(N^2) reference step, same arithmetic as plife_step.
ParticleLifeState plife_step_naive(const ParticleLifeState& state, const ParticleLifeGenome& genome,
                                   const ParticleLifeConfig& config);
Frame plife_render(const ParticleLifeState& state, const ParticleLifeConfig& config);

const Rgb& plife_type_color(int type);

class ParticleLifeSubstrate final : public Substrate {
 public:
  explicit ParticleLifeSubstrate(ParticleLifeConfig config = {});

  SubstrateId id() const override { return SubstrateId::ParticleLife; }
  std::size_t genome_dim() const override { return config_.genome_dim(); }
  Trajectory rollout(const Theta& theta, const RolloutSpec& spec) const override;

  const ParticleLifeConfig& config() const { return config_; }

 private:
  ParticleLifeConfig config_;
};

}  // namespace asal
