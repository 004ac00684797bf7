#include "asal/substrates/lenia.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "asal/core/errors.hpp"
#include "asal/core/image.hpp"

namespace asal {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double squash(double raw, ParamRange r) { return r.lo + (r.hi - r.lo) * sigmoid(raw); }

int floor_channel(double v) { return std::clamp(static_cast<int>(std::floor(v)), 0, kLeniaChannels - 1); }

// FFTW planning is not thread-safe; plans are created once per grid size and
// then executed through the new-array interface, which is.
struct FftPlans {
  fftw_plan forward;
  fftw_plan backward;
};

const FftPlans& plans_for(int g) {
  static std::mutex mutex;
  static std::map<int, FftPlans> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(g);
  if (it != cache.end()) return it->second;
  const std::size_t n_real = static_cast<std::size_t>(g) * g;
  const std::size_t n_cplx = static_cast<std::size_t>(g) * (g / 2 + 1);
  double* real = fftw_alloc_real(n_real);
  fftw_complex* cplx = fftw_alloc_complex(n_cplx);
  FftPlans p{fftw_plan_dft_r2c_2d(g, g, real, cplx, FFTW_ESTIMATE),
             fftw_plan_dft_c2r_2d(g, g, cplx, real, FFTW_ESTIMATE)};
  fftw_free(real);
  fftw_free(cplx);
  return cache.emplace(g, p).first->second;
}

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : data(fftw_alloc_real(n)) {}
  ~RealBuffer() { fftw_free(data); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* data;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
  ~ComplexBuffer() { fftw_free(data); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

int KernelParams::source_channel() const { return floor_channel(source); }
int KernelParams::target_channel() const { return floor_channel(target); }

KernelGrowthParams lenia_decode_dynamics(std::span<const double> dynamics) {
  if (dynamics.size() != static_cast<std::size_t>(kLeniaDynamicsDim))
    throw std::invalid_argument("Lenia dynamics must have 45 values");
  KernelGrowthParams out;
  for (int k = 0; k < kLeniaKernels; ++k) {
    const auto v = [&](int j) { return squash(dynamics[k * kLeniaParamsPerKernel + j], kLeniaParamRanges[j]); };
    out.kernels[k] = KernelParams{v(0), {v(1), v(2), v(3)}, v(4), v(5), v(6), v(7), v(8)};
  }
  return out;
}

LeniaGenome LeniaGenome::from_theta(const Theta& theta) {
  if (theta.dim() != static_cast<std::size_t>(kLeniaDynamicsDim + kLeniaPatchDim))
    throw std::invalid_argument("Lenia genome has wrong dimension");
  LeniaGenome g;
  g.dynamics.assign(theta.values.begin(), theta.values.begin() + kLeniaDynamicsDim);
  g.init_patch.resize(kLeniaPatchDim);
  for (int i = 0; i < kLeniaPatchDim; ++i) g.init_patch[i] = std::clamp(theta.values[kLeniaDynamicsDim + i], 0.0, 1.0);
  return g;
}

LeniaState::LeniaState(int g) : size(g) {
  for (auto& ch : channels) ch.assign(static_cast<std::size_t>(g) * g, 0.0);
}

double LeniaState::mass() const {
  double m = 0;
  for (const auto& ch : channels)
    for (double v : ch) m += v;
  return m;
}

LeniaState lenia_init(const LeniaGenome& genome, int grid_size) {
  if (grid_size < kLeniaPatchSize) throw std::invalid_argument("Lenia grid must be at least 32 cells");
  LeniaState state(grid_size);
  const int offset = (grid_size - kLeniaPatchSize) / 2;
  for (int y = 0; y < kLeniaPatchSize; ++y)
    for (int x = 0; x < kLeniaPatchSize; ++x)
      for (int c = 0; c < kLeniaChannels; ++c)
        state.at(c, offset + y, offset + x) = genome.init_patch[(y * kLeniaPatchSize + x) * 3 + c];
  return state;
}

double lenia_growth(double u, double mu, double sigma) {
  const double d = (u - mu) / sigma;
  return 2.0 * std::exp(-0.5 * d * d) - 1.0;
}

struct LeniaDynamics::Spectra {
  std::vector<std::unique_ptr<ComplexBuffer>> kernels;
};

LeniaDynamics::LeniaDynamics(const KernelGrowthParams& params, const LeniaConfig& config)
    : params_(params), size_(config.grid_size), spectra_(std::make_unique<Spectra>()) {
  const int g = size_;
  const std::size_t n_real = static_cast<std::size_t>(g) * g;
  const std::size_t n_cplx = static_cast<std::size_t>(g) * (g / 2 + 1);
  const FftPlans& plans = plans_for(g);
  RealBuffer scratch(n_real);
  for (const auto& kp : params_.kernels) {
    // Ring kernel: three concentric shells with Gaussian radial bumps.
    std::vector<double> kernel(n_real, 0.0);
    const double radius = std::max(1.0, kp.radius * config.max_radius);
    const int reach = static_cast<int>(std::ceil(radius));
    double total = 0;
    for (int dy = -reach; dy <= reach; ++dy) {
      for (int dx = -reach; dx <= reach; ++dx) {
        const double d = std::sqrt(static_cast<double>(dy * dy + dx * dx)) / radius;
        if (d >= 1.0) continue;
        const double p = d * 3.0;
        const int ring = std::min(2, static_cast<int>(p));
        const double frac = p - ring;
        const double z = (frac - 0.5) / 0.15;
        const double v = kp.rings[ring] * std::exp(-0.5 * z * z);
        kernel[static_cast<std::size_t>(((dy % g) + g) % g) * g + ((dx % g) + g) % g] += v;
        total += v;
      }
    }
    if (total > 0)
      for (double& v : kernel) v /= total;
    auto spec = std::make_unique<ComplexBuffer>(n_cplx);
    std::copy(kernel.begin(), kernel.end(), scratch.data);
    fftw_execute_dft_r2c(plans.forward, scratch.data, spec->data);
    spectra_->kernels.push_back(std::move(spec));
    kernels_.push_back(std::move(kernel));
  }
}

LeniaDynamics::~LeniaDynamics() = default;

LeniaState LeniaDynamics::step(const LeniaState& state) const {
  const int g = size_;
  if (state.size != g) throw std::invalid_argument("Lenia state size does not match dynamics");
  const std::size_t n_real = static_cast<std::size_t>(g) * g;
  const std::size_t n_cplx = static_cast<std::size_t>(g) * (g / 2 + 1);
  const FftPlans& plans = plans_for(g);

  RealBuffer real(n_real);
  std::array<ComplexBuffer*, kLeniaChannels> channel_spec{};
  std::array<bool, kLeniaChannels> needed{};
  for (const auto& kp : params_.kernels) needed[kp.source_channel()] = true;
  std::vector<std::unique_ptr<ComplexBuffer>> owned;
  for (int c = 0; c < kLeniaChannels; ++c) {
    if (!needed[c]) continue;
    owned.push_back(std::make_unique<ComplexBuffer>(n_cplx));
    channel_spec[c] = owned.back().get();
    std::copy(state.channels[c].begin(), state.channels[c].end(), real.data);
    fftw_execute_dft_r2c(plans.forward, real.data, channel_spec[c]->data);
  }

  std::array<std::vector<double>, kLeniaChannels> update;
  for (auto& u : update) u.assign(n_real, 0.0);
  ComplexBuffer product(n_cplx);
  const double norm = 1.0 / static_cast<double>(n_real);
  for (int k = 0; k < kLeniaKernels; ++k) {
    const auto& kp = params_.kernels[k];
    const fftw_complex* a = channel_spec[kp.source_channel()]->data;
    const fftw_complex* b = spectra_->kernels[k]->data;
    for (std::size_t i = 0; i < n_cplx; ++i) {
      product.data[i][0] = a[i][0] * b[i][0] - a[i][1] * b[i][1];
      product.data[i][1] = a[i][0] * b[i][1] + a[i][1] * b[i][0];
    }
    fftw_execute_dft_c2r(plans.backward, product.data, real.data);
    auto& target = update[kp.target_channel()];
    for (std::size_t i = 0; i < n_real; ++i) target[i] += kp.weight * lenia_growth(real.data[i] * norm, kp.mu, kp.sigma);
  }

  LeniaState next(g);
  for (int c = 0; c < kLeniaChannels; ++c) {
    for (std::size_t i = 0; i < n_real; ++i) {
      const double v = state.channels[c][i] + params_.dt * update[c][i];
      next.channels[c][i] = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return next;
}

LeniaState lenia_step(const LeniaState& state, const LeniaDynamics& dynamics) { return dynamics.step(state); }

Frame lenia_render(const LeniaState& state, int render_size) {
  Frame native(state.size, state.size);
  for (int y = 0; y < state.size; ++y)
    for (int x = 0; x < state.size; ++x)
      for (int c = 0; c < 3; ++c) native.at(y, x, c) = static_cast<float>(std::clamp(state.at(c, y, x), 0.0, 1.0));
  return resample_nearest(native, render_size, render_size);
}

namespace {

struct LeniaModel {
  using State = LeniaState;
  const LeniaDynamics* dynamics;
  const LeniaGenome* genome;
  const LeniaConfig* config;

  State init(Rng&) const { return lenia_init(*genome, config->grid_size); }
  State step(const State& s) const { return dynamics->step(s); }
  Frame render(const State& s) const { return lenia_render(s, config->render_size); }
  bool finite(const State& s) const {
    for (const auto& ch : s.channels)
      for (double v : ch)
        if (!std::isfinite(v)) return false;
    return true;
  }
};

}  // namespace

LeniaSubstrate::LeniaSubstrate(LeniaConfig config) : config_(config) {
  if (config_.grid_size < kLeniaPatchSize) throw std::invalid_argument("Lenia grid_size must be >= 32");
}

Theta LeniaSubstrate::default_theta() const { return load_lenia_fixture(default_lenia_fixture_path()); }

Trajectory LeniaSubstrate::rollout(const Theta& theta, const RolloutSpec& spec) const {
  check_theta(theta);
  const LeniaGenome genome = LeniaGenome::from_theta(theta);
  KernelGrowthParams params = lenia_decode_dynamics(genome.dynamics);
  params.dt = config_.dt;
  auto traj = rollout_params(params, genome, spec);
  traj.theta_digest = theta.digest();
  return traj;
}

Trajectory LeniaSubstrate::rollout_params(const KernelGrowthParams& params, const LeniaGenome& genome,
                                          const RolloutSpec& spec) const {
  const LeniaDynamics dynamics(params, config_);
  return run_rollout(LeniaModel{&dynamics, &genome, &config_}, spec);
}

std::filesystem::path default_lenia_fixture_path() {
  if (const char* dir = std::getenv("ASAL_DATA_DIR")) return std::filesystem::path(dir) / "lenia_fixture.txt";
  return std::filesystem::path(ASAL_DATA_DIR) / "lenia_fixture.txt";
}

Theta load_lenia_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open Lenia fixture " + path.string());
  Theta theta{SubstrateId::Lenia, {}};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double v;
    while (ls >> v) theta.values.push_back(v);
  }
  if (theta.dim() != static_cast<std::size_t>(kLeniaDynamicsDim + kLeniaPatchDim))
    throw Error("Lenia fixture " + path.string() + " has " + std::to_string(theta.dim()) + " values");
  return theta;
}

void save_lenia_fixture(const std::filesystem::path& path, const Theta& theta) {
  std::ofstream out(path);
  out << "# Lenia genome: 45 raw dynamics values (5 kernels x 9), then 32x32x3 init patch\n";
  out << std::setprecision(17);
  for (int k = 0; k < kLeniaKernels; ++k) {
    for (int j = 0; j < kLeniaParamsPerKernel; ++j) out << (j ? " " : "") << theta.values[k * kLeniaParamsPerKernel + j];
    out << '\n';
  }
  for (int y = 0; y < kLeniaPatchSize; ++y) {
    for (int i = 0; i < kLeniaPatchSize * 3; ++i)
      out << (i ? " " : "") << theta.values[kLeniaDynamicsDim + y * kLeniaPatchSize * 3 + i];
    out << '\n';
  }
}

}  // namespace asal
