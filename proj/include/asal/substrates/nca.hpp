#pragma once

#include <vector>

#include "asal/core/substrate.hpp"

namespace asal {

/// Update rule: every channel is convolved with `filters` learned 3x3 kernels
/// (toroidal), the C * filters perception vector goes through a per-cell MLP
/// (ReLU hidden layer) and the output is added to the state, scaled by dt.
///
/// Genome layout:
///   conv   [channel][filter][3x3]        channels * filters * 9
///   w1     [hidden][channels * filters]
///   b1     [hidden]
///   w2     [channels][hidden]
///   b2     [channels]
struct NcaConfig {
  int grid_size = 64;
  int channels = 16;
  int filters = 3;
  int hidden = 64;
  double dt = 1.0;
  double min_radius = 3.0;
  double max_radius = 16.0;
  int render_size = 224;

  std::size_t weight_count() const;
};

struct NcaGenome {
  std::vector<double> weights;
};

/// G x G x C, channel-interleaved. Channels 0-2 are the visible RGB.
struct NcaState {
  int size = 0;
  int channels = 0;
  std::vector<double> cells;

  NcaState() = default;
  NcaState(int g, int c) : size(g), channels(c), cells(static_cast<std::size_t>(g) * g * c, 0.0) {}
  double& at(int y, int x, int c) { return cells[(static_cast<std::size_t>(y) * size + x) * channels + c]; }
  double at(int y, int x, int c) const { return cells[(static_cast<std::size_t>(y) * size + x) * channels + c]; }
};

NcaState nca_init(const NcaConfig& config, Rng& rng);
/// Non-finite results are left in place (unclamped) so the rollout can flag divergence.
NcaState nca_step(const NcaState& state, const NcaGenome& genome, const NcaConfig& config);
Frame nca_render(const NcaState& state, int render_size);

class NcaSubstrate final : public Substrate {
 public:
  explicit NcaSubstrate(NcaConfig config = {});

  SubstrateId id() const override { return SubstrateId::Nca; }
  std::size_t genome_dim() const override { return config_.weight_count(); }
  Trajectory rollout(const Theta& theta, const RolloutSpec& spec) const override;

  const NcaConfig& config() const { return config_; }

 private:
  NcaConfig config_;
};

}  // namespace asal
