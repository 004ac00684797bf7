#pragma once

#include <vector>

#include "asal/core/substrate.hpp"

namespace asal {

/// Steering network shared by all boids:
///   per-neighbour encoder  4 -> hidden (ReLU)
///   mean pool over the K neighbours
///   head  hidden -> hidden (ReLU) -> 1, turn = max_turn * tanh(out)
/// Neighbour features, in the boid's local frame: relative position divided
/// by position_scale (2), relative heading as (cos, sin) (2).
struct BoidsConfig {
  int boids = 128;
  int neighbours = 16;
  int hidden = 32;
  /// World units travelled per step (world is the unit torus).
  double speed = 0.001;
  /// Maximum heading change per step, radians.
  double max_turn = 0.1;
  double position_scale = 0.1;
  int render_size = 224;
  /// Triangle length in world units.
  double glyph_size = 0.02;

  std::size_t weight_count() const;
};

struct BoidsGenome {
  std::vector<double> weights;
};

struct BoidsState {
  std::vector<double> x, y, heading;

  std::size_t size() const { return x.size(); }
};

BoidsState boids_init(const BoidsConfig& config, Rng& rng);
BoidsState boids_step(const BoidsState& state, const BoidsGenome& genome, const BoidsConfig& config);
/// Turn rate per boid for the given state (exposed for tests).
std::vector<double> boids_turn_rates(const BoidsState& state, const BoidsGenome& genome, const BoidsConfig& config);
Frame boids_render(const BoidsState& state, const BoidsConfig& config);

class BoidsSubstrate final : public Substrate {
 public:
  explicit BoidsSubstrate(BoidsConfig config = {});

  SubstrateId id() const override { return SubstrateId::Boids; }
  std::size_t genome_dim() const override { return config_.weight_count(); }
  Trajectory rollout(const Theta& theta, const RolloutSpec& spec) const override;

  const BoidsConfig& config() const { return config_; }

 private:
  BoidsConfig config_;
};

}  // namespace asal
