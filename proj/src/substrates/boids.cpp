#include "asal/substrates/boids.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "asal/core/image.hpp"

namespace asal {

namespace {

constexpr int kFeatures = 4;

double wrap_unit(double v) {
  v -= std::floor(v);
  return v >= 1.0 ? 0.0 : v;
}

// Minimal-image displacement on the unit torus, in [-0.5, 0.5]. Inputs lie in (-1, 1).
double torus_delta(double d) {
  return d - static_cast<double>(d > 0.5) + static_cast<double>(d < -0.5);
}

struct NetworkView {
  const double* enc_w;   // hidden x 4
  const double* enc_b;   // hidden
  const double* head_w;  // hidden x hidden
  const double* head_b;  // hidden
  const double* out_w;   // hidden
  const double* out_b;   // 1
};

NetworkView view_of(const BoidsGenome& genome, const BoidsConfig& config) {
  if (genome.weights.size() != config.weight_count()) throw std::invalid_argument("boids genome has wrong size");
  const int h = config.hidden;
  const double* p = genome.weights.data();
  NetworkView v{};
  v.enc_w = p; p += h * kFeatures;
  v.enc_b = p; p += h;
  v.head_w = p; p += h * h;
  v.head_b = p; p += h;
  v.out_w = p; p += h;
  v.out_b = p;
  return v;
}

// k-th smallest of a[0, n), reordering a. Quickselect with a branch-free Lomuto partition,
// since random distances make a branching partition mispredict on most comparisons.
double kth_smallest(double* a, int n, int k) {
  int lo = 0, hi = n;
  while (hi - lo > 1) {
    std::swap(a[lo + (hi - lo) / 2], a[hi - 1]);
    const double pivot = a[hi - 1];
    int store = lo;
    for (int i = lo; i < hi - 1; ++i) {
      const double v = a[i];
      a[i] = a[store];
      a[store] = v;
      store += v < pivot;
    }
    std::swap(a[store], a[hi - 1]);
    if (store == k) break;
    if (k < store) hi = store;
    else lo = store + 1;
  }
  return a[k];
}

}  // namespace

std::size_t BoidsConfig::weight_count() const {
  const std::size_t h = hidden;
  return h * kFeatures + h + h * h + h + h + 1;
}

BoidsState boids_init(const BoidsConfig& config, Rng& rng) {
  BoidsState s;
  s.x.resize(config.boids);
  s.y.resize(config.boids);
  s.heading.resize(config.boids);
  for (int i = 0; i < config.boids; ++i) {
    s.x[i] = rng.uniform();
    s.y[i] = rng.uniform();
    s.heading[i] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  return s;
}

std::vector<double> boids_turn_rates(const BoidsState& state, const BoidsGenome& genome, const BoidsConfig& config) {
  const int n = static_cast<int>(state.size());
  const int k = std::min(config.neighbours, n - 1);
  const int h = config.hidden;
  const NetworkView net = view_of(genome, config);
  std::vector<double> cos_h(n), sin_h(n);
  for (int i = 0; i < n; ++i) {
    cos_h[i] = std::cos(state.heading[i]);
    sin_h[i] = std::sin(state.heading[i]);
  }

  // The network runs in single precision on unit-major weight copies, so the loops over units vectorize.
  // Geometry and neighbour selection stay in double.
  std::vector<float> enc(static_cast<std::size_t>(kFeatures + 1) * h), head_t(static_cast<std::size_t>(h) * h);
  std::vector<float> head_b(h), out_w(h);
  for (int u = 0; u < h; ++u) {
    for (int f = 0; f < kFeatures; ++f) enc[f * h + u] = static_cast<float>(net.enc_w[u * kFeatures + f]);
    enc[kFeatures * h + u] = static_cast<float>(net.enc_b[u]);
    for (int v = 0; v < h; ++v) head_t[v * h + u] = static_cast<float>(net.head_w[u * h + v]);
    head_b[u] = static_cast<float>(net.head_b[u]);
    out_w[u] = static_cast<float>(net.out_w[u]);
  }
  const float* __restrict e0 = enc.data();
  const float* __restrict e1 = e0 + h;
  const float* __restrict e2 = e1 + h;
  const float* __restrict e3 = e2 + h;
  const float* __restrict eb = e3 + h;

  std::vector<double> turn(n, 0.0);
  std::vector<double> d2(n), scratch(n);
  std::vector<std::pair<double, int>> nearest(n);
  const auto closer = [](const std::pair<double, int>& a, const std::pair<double, int>& b) {
    return a.first < b.first || (a.first == b.first && a.second < b.second);
  };
  std::vector<float> pooled_buf(h), hidden_buf(h);
  float* __restrict pooled = pooled_buf.data();
  float* __restrict hidden = hidden_buf.data();
  const double* __restrict xs = state.x.data();
  const double* __restrict ys = state.y.data();
  for (int i = 0; i < n; ++i) {
    if (k <= 0) continue;
    double* __restrict dist = d2.data();
    for (int j = 0; j < n; ++j) {
      const double dx = torus_delta(xs[j] - xs[i]);
      const double dy = torus_delta(ys[j] - ys[i]);
      dist[j] = dx * dx + dy * dy;
    }
    // A boid is never its own neighbour.
    dist[i] = std::numeric_limits<double>::infinity();
    std::copy(d2.begin(), d2.end(), scratch.begin());
    // The k-th smallest distance bounds the neighbour set; ties at the bound are settled by index.
    const double bound = kth_smallest(scratch.data(), n, k - 1);
    int found = 0;
    for (int j = 0; j < n; ++j) {
      nearest[found] = {dist[j], j};
      found += dist[j] <= bound;
    }
    std::sort(nearest.begin(), nearest.begin() + found, closer);

    std::fill(pooled, pooled + h, 0.0f);
    for (int q = 0; q < k; ++q) {
      const int j = nearest[q].second;
      const double dx = torus_delta(state.x[j] - state.x[i]);
      const double dy = torus_delta(state.y[j] - state.y[i]);
      const auto f0 = static_cast<float>((cos_h[i] * dx + sin_h[i] * dy) / config.position_scale);
      const auto f1 = static_cast<float>((-sin_h[i] * dx + cos_h[i] * dy) / config.position_scale);
      const auto f2 = static_cast<float>(cos_h[j] * cos_h[i] + sin_h[j] * sin_h[i]);
      const auto f3 = static_cast<float>(sin_h[j] * cos_h[i] - cos_h[j] * sin_h[i]);
      for (int u = 0; u < h; ++u) {
        const float a = eb[u] + e0[u] * f0 + e1[u] * f1 + e2[u] * f2 + e3[u] * f3;
        pooled[u] += a > 0 ? a : 0.0f;
      }
    }
    const float inv_k = 1.0f / static_cast<float>(k);
    for (int u = 0; u < h; ++u) pooled[u] *= inv_k;
    std::copy(head_b.begin(), head_b.end(), hidden);
    for (int v = 0; v < h; ++v) {
      const float* __restrict w = head_t.data() + v * h;
      const float p = pooled[v];
      for (int u = 0; u < h; ++u) hidden[u] += w[u] * p;
    }
    double out = net.out_b[0];
    for (int u = 0; u < h; ++u) out += static_cast<double>(out_w[u] * (hidden[u] > 0 ? hidden[u] : 0.0f));
    turn[i] = config.max_turn * std::tanh(out);
  }
  return turn;
}

BoidsState boids_step(const BoidsState& state, const BoidsGenome& genome, const BoidsConfig& config) {
  const auto turn = boids_turn_rates(state, genome, config);
  BoidsState next = state;
  for (std::size_t i = 0; i < state.size(); ++i) {
    double heading = state.heading[i] + turn[i];
    heading -= 2.0 * std::numbers::pi * std::floor(heading / (2.0 * std::numbers::pi));
    next.heading[i] = heading;
    next.x[i] = wrap_unit(state.x[i] + config.speed * std::cos(heading));
    next.y[i] = wrap_unit(state.y[i] + config.speed * std::sin(heading));
  }
  return next;
}

Frame boids_render(const BoidsState& state, const BoidsConfig& config) {
  const int r = config.render_size;
  Frame frame(r, r);
  const double len = config.glyph_size * r;
  const Rgb white{1.0f, 1.0f, 1.0f};
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double cx = state.x[i] * r, cy = state.y[i] * r;
    const double c = std::cos(state.heading[i]), s = std::sin(state.heading[i]);
    // Tip ahead of the centre, base behind it; points are (y, x).
    const std::array<double, 2> tip{cy + s * len * 0.6, cx + c * len * 0.6};
    const std::array<double, 2> left{cy - s * len * 0.4 + c * len * 0.3, cx - c * len * 0.4 - s * len * 0.3};
    const std::array<double, 2> right{cy - s * len * 0.4 - c * len * 0.3, cx - c * len * 0.4 + s * len * 0.3};
    fill_triangle(frame, tip, left, right, white);
    if (len < 2.0) fill_disc(frame, cy, cx, 0.75, white);
  }
  return frame;
}

namespace {

struct BoidsModel {
  using State = BoidsState;
  const BoidsConfig* config;
  BoidsGenome genome;

  State init(Rng& rng) const { return boids_init(*config, rng); }
  State step(const State& s) const { return boids_step(s, genome, *config); }
  Frame render(const State& s) const { return boids_render(s, *config); }
  bool finite(const State& s) const {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || !std::isfinite(s.heading[i])) return false;
    return true;
  }
};

}  // namespace

BoidsSubstrate::BoidsSubstrate(BoidsConfig config) : config_(config) {
  if (config_.boids < 0 || config_.neighbours < 1 || config_.hidden < 1)
    throw std::invalid_argument("invalid boids configuration");
}

Trajectory BoidsSubstrate::rollout(const Theta& theta, const RolloutSpec& spec) const {
  check_theta(theta);
  auto traj = run_rollout(BoidsModel{&config_, BoidsGenome{theta.values}}, spec);
  traj.theta_digest = theta.digest();
  return traj;
}

}  // namespace asal
