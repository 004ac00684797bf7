#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asal/core/rng.hpp"

namespace asal {

using Genome = std::vector<double>;

/// Separable CMA-ES (diagonal covariance). Minimises.
struct SepCmaState {
  Genome mean;
  double sigma = 0.1;
  std::vector<double> diag_cov;
  std::vector<double> path_c;
  std::vector<double> path_sigma;
  std::int64_t generation = 0;

  std::size_t dim() const { return mean.size(); }

  template <class Archive>
  void serialize(Archive& ar) {
    ar(mean, sigma, diag_cov, path_c, path_sigma, generation);
  }
  friend bool operator==(const SepCmaState&, const SepCmaState&) = default;
};

/// Strategy constants for a given dimension and population size.
struct SepCmaParams {
  int population = 0;
  int parents = 0;
  std::vector<double> weights;
  double mu_eff = 0;
  double c_sigma = 0;
  double d_sigma = 0;
  double c_c = 0;
  double c_1 = 0;
  double c_mu = 0;
  double chi_n = 0;

  static SepCmaParams make(std::size_t dim, int population);
};

SepCmaState sep_cma_init(Genome mean, double sigma);

/// pop samples mean + sigma * sqrt(diag_cov) * N(0, I). Draw order is
/// candidate-major, so the same rng yields the same population.
std::vector<Genome> sep_cma_ask(const SepCmaState& state, Rng& rng, int pop);

/// Rank-weighted recombination plus the separable covariance / step-size
/// update. Ties in fitness keep candidate index order. Throws
/// std::invalid_argument on size mismatch or non-finite fitness.
SepCmaState sep_cma_tell(const SepCmaState& state, std::span<const Genome> candidates,
                         std::span<const double> fitnesses);

}  // namespace asal
