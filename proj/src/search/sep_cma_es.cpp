#include "asal/search/sep_cma_es.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace asal {

SepCmaParams SepCmaParams::make(std::size_t dim, int population) {
  if (population < 2) throw std::invalid_argument("Sep-CMA-ES population must be at least 2");
  const double n = static_cast<double>(dim);
  SepCmaParams p;
  p.population = population;
  p.parents = population / 2;
  double wsum = 0;
  for (int i = 0; i < p.parents; ++i) {
    p.weights.push_back(std::log(population / 2.0 + 0.5) - std::log(i + 1.0));
    wsum += p.weights.back();
  }
  double wsq = 0;
  for (double& w : p.weights) {
    w /= wsum;
    wsq += w * w;
  }
  p.mu_eff = 1.0 / wsq;
  p.c_sigma = (p.mu_eff + 2.0) / (n + p.mu_eff + 5.0);
  p.d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((p.mu_eff - 1.0) / (n + 1.0)) - 1.0) + p.c_sigma;
  p.c_c = (4.0 + p.mu_eff / n) / (n + 4.0 + 2.0 * p.mu_eff / n);
  // Diagonal learning rates are scaled up by (n + 2) / 3 (Ros & Hansen 2008).
  const double sep = (n + 2.0) / 3.0;
  p.c_1 = std::min(1.0, sep * 2.0 / ((n + 1.3) * (n + 1.3) + p.mu_eff));
  p.c_mu = std::min(1.0 - p.c_1,
                    sep * 2.0 * (p.mu_eff - 2.0 + 1.0 / p.mu_eff) / ((n + 2.0) * (n + 2.0) + p.mu_eff));
  p.c_mu = std::max(0.0, p.c_mu);
  p.chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
  return p;
}

SepCmaState sep_cma_init(Genome mean, double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("initial sigma must be positive");
  SepCmaState s;
  const std::size_t n = mean.size();
  s.mean = std::move(mean);
  s.sigma = sigma;
  s.diag_cov.assign(n, 1.0);
  s.path_c.assign(n, 0.0);
  s.path_sigma.assign(n, 0.0);
  return s;
}

std::vector<Genome> sep_cma_ask(const SepCmaState& state, Rng& rng, int pop) {
  if (pop < 2) throw std::invalid_argument("population must be at least 2");
  std::vector<Genome> out(pop, Genome(state.dim()));
  for (int k = 0; k < pop; ++k)
    for (std::size_t i = 0; i < state.dim(); ++i)
      out[k][i] = state.mean[i] + state.sigma * std::sqrt(state.diag_cov[i]) * rng.normal();
  return out;
}

SepCmaState sep_cma_tell(const SepCmaState& state, std::span<const Genome> candidates,
                         std::span<const double> fitnesses) {
  if (candidates.size() != fitnesses.size()) throw std::invalid_argument("candidates and fitnesses differ in length");
  for (double f : fitnesses)
    if (!std::isfinite(f)) throw std::invalid_argument("non-finite fitness");
  const std::size_t n = state.dim();
  for (const auto& c : candidates)
    if (c.size() != n) throw std::invalid_argument("candidate has wrong dimension");
  const SepCmaParams p = SepCmaParams::make(n, static_cast<int>(candidates.size()));

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fitnesses[a] < fitnesses[b]; });

  SepCmaState next = state;
  std::vector<double> y_w(n, 0.0);
  std::vector<double> y_sq(n, 0.0);
  for (int r = 0; r < p.parents; ++r) {
    const Genome& x = candidates[order[r]];
    for (std::size_t i = 0; i < n; ++i) {
      const double y = (x[i] - state.mean[i]) / state.sigma;
      y_w[i] += p.weights[r] * y;
      y_sq[i] += p.weights[r] * y * y;
    }
  }
  for (std::size_t i = 0; i < n; ++i) next.mean[i] = state.mean[i] + state.sigma * y_w[i];

  const double cs = std::sqrt(p.c_sigma * (2.0 - p.c_sigma) * p.mu_eff);
  double ps_norm2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    next.path_sigma[i] = (1.0 - p.c_sigma) * state.path_sigma[i] + cs * y_w[i] / std::sqrt(state.diag_cov[i]);
    ps_norm2 += next.path_sigma[i] * next.path_sigma[i];
  }
  const double ps_norm = std::sqrt(ps_norm2);
  const double g = static_cast<double>(state.generation + 1);
  const double h_sigma =
      ps_norm / std::sqrt(1.0 - std::pow(1.0 - p.c_sigma, 2.0 * g)) < (1.4 + 2.0 / (n + 1.0)) * p.chi_n ? 1.0 : 0.0;

  const double cc = std::sqrt(p.c_c * (2.0 - p.c_c) * p.mu_eff);
  for (std::size_t i = 0; i < n; ++i) {
    next.path_c[i] = (1.0 - p.c_c) * state.path_c[i] + h_sigma * cc * y_w[i];
    const double rank_one = next.path_c[i] * next.path_c[i] + (1.0 - h_sigma) * p.c_c * (2.0 - p.c_c) * state.diag_cov[i];
    next.diag_cov[i] = (1.0 - p.c_1 - p.c_mu) * state.diag_cov[i] + p.c_1 * rank_one + p.c_mu * y_sq[i];
  }
  next.sigma = state.sigma * std::exp((p.c_sigma / p.d_sigma) * (ps_norm / p.chi_n - 1.0));
  next.generation = state.generation + 1;
  return next;
}

}  // namespace asal
