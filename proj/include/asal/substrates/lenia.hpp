#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "asal/core/substrate.hpp"

namespace asal {

/// Genome layout (raw, pre-squash values):
///   [0, 45)            dynamics: 5 kernels x 9 parameters, see KernelParams
///   [45, 45 + 3072)    init patch, 32 x 32 x 3, index (y * 32 + x) * 3 + c
/// The full table of ranges lives in docs/lenia_genome.md.
inline constexpr int kLeniaKernels = 5;
inline constexpr int kLeniaParamsPerKernel = 9;
inline constexpr int kLeniaDynamicsDim = kLeniaKernels * kLeniaParamsPerKernel;
inline constexpr int kLeniaPatchSize = 32;
inline constexpr int kLeniaPatchDim = kLeniaPatchSize * kLeniaPatchSize * 3;
inline constexpr int kLeniaChannels = 3;

struct ParamRange {
  double lo;
  double hi;
};

/// Decoded value = lo + (hi - lo) * sigmoid(raw), in kernel-parameter order.
inline constexpr std::array<ParamRange, kLeniaParamsPerKernel> kLeniaParamRanges = {{
    {0.35, 1.0},    // radius, fraction of LeniaConfig::max_radius
    {0.0, 1.0},     // ring 1 peak
    {0.0, 1.0},     // ring 2 peak
    {0.0, 1.0},     // ring 3 peak
    {0.05, 0.5},    // growth centre mu
    {0.005, 0.2},   // growth width sigma
    {0.0, 1.0},     // growth weight h
    {0.0, 3.0},     // source channel (floored)
    {0.0, 3.0},     // target channel (floored)
}};

struct KernelParams {
  double radius;  // fraction of max_radius
  std::array<double, 3> rings;
  double mu;
  double sigma;
  double weight;
  double source;  // continuous; channel = min(floor(source), 2)
  double target;

  int source_channel() const;
  int target_channel() const;
};

struct KernelGrowthParams {
  std::array<KernelParams, kLeniaKernels> kernels;
  double dt = 0.1;
};

KernelGrowthParams lenia_decode_dynamics(std::span<const double> dynamics);

struct LeniaGenome {
  std::vector<double> dynamics;    // 45 raw values
  std::vector<double> init_patch;  // 3072 values in [0,1]

  static LeniaGenome from_theta(const Theta& theta);
};

struct LeniaConfig {
  int grid_size = 64;
  int render_size = 224;
  double max_radius = 12.0;
  double dt = 0.1;
};

/// G x G x 3 state stored as three planes, values in [0,1].
struct LeniaState {
  int size = 0;
  std::array<std::vector<double>, kLeniaChannels> channels;

  explicit LeniaState(int g = 0);
  double& at(int c, int y, int x) { return channels[c][static_cast<std::size_t>(y) * size + x]; }
  double at(int c, int y, int x) const { return channels[c][static_cast<std::size_t>(y) * size + x]; }
  double mass() const;
};

LeniaState lenia_init(const LeniaGenome& genome, int grid_size);

/// Precomputed kernel spectra for one parameter set and grid size.
class LeniaDynamics {
 public:
  LeniaDynamics(const KernelGrowthParams& params, const LeniaConfig& config);
  ~LeniaDynamics();
  LeniaDynamics(const LeniaDynamics&) = delete;
  LeniaDynamics& operator=(const LeniaDynamics&) = delete;

  /// Non-finite updates are written through as NaN so callers can detect
  /// divergence; finite values are clamped to [0,1].
  LeniaState step(const LeniaState& state) const;
  const KernelGrowthParams& params() const { return params_; }
  /// Kernel k in spatial form, G x G, centred at (0, 0) with wraparound.
  const std::vector<double>& kernel(int k) const { return kernels_[k]; }

 private:
  struct Spectra;
  KernelGrowthParams params_;
  int size_;
  std::vector<std::vector<double>> kernels_;
  std::unique_ptr<Spectra> spectra_;
};

LeniaState lenia_step(const LeniaState& state, const LeniaDynamics& dynamics);
double lenia_growth(double u, double mu, double sigma);
Frame lenia_render(const LeniaState& state, int render_size);

class LeniaSubstrate final : public Substrate {
 public:
  explicit LeniaSubstrate(LeniaConfig config = {});

  SubstrateId id() const override { return SubstrateId::Lenia; }
  std::size_t genome_dim() const override { return kLeniaDynamicsDim + kLeniaPatchDim; }
  /// The shipped stable fixture (data/lenia_fixture.txt).
  Theta default_theta() const override;
  Trajectory rollout(const Theta& theta, const RolloutSpec& spec) const override;
  /// Debug entry point: runs already-decoded parameters, skipping the sigmoid bounds.
  Trajectory rollout_params(const KernelGrowthParams& params, const LeniaGenome& genome,
                            const RolloutSpec& spec) const;

  const LeniaConfig& config() const { return config_; }

 private:
  LeniaConfig config_;
};

Theta load_lenia_fixture(const std::filesystem::path& path);
void save_lenia_fixture(const std::filesystem::path& path, const Theta& theta);
std::filesystem::path default_lenia_fixture_path();

}  // namespace asal
