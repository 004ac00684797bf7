#include "asal/quantify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "asal/core/errors.hpp"
#include "asal/core/image.hpp"
#include "asal/core/parallel.hpp"

namespace asal {

void SweepReport::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << axis_name << ",score\n";
  char buf[96];
  for (std::size_t i = 0; i < axis.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9f\n", axis[i], scores[i]);
    out << buf;
  }
}

void SweepReport::write_plot(const std::filesystem::path& path) const { write_png(path, plot_lines(axis, {scores})); }

namespace {

EmbeddingVector final_embedding(const Substrate& substrate, const Theta& theta, int total_steps, std::uint64_t seed,
                                Embedder& embedder) {
  const auto traj = substrate.rollout(theta, RolloutSpec::final_only(total_steps, seed));
  return embedder.embed_image(traj.frames.back());
}

}  // namespace

double final_frame_score(const Substrate& substrate, const Theta& theta, int total_steps, std::uint64_t seed,
                         Embedder& embedder, const EmbeddingVector& target) {
  return similarity(final_embedding(substrate, theta, total_steps, seed, embedder), target);
}

SweepReport interpolate_curve(const Substrate& substrate, const Theta& a, const Theta& b, int n_points,
                              InterpolationReference reference, int total_steps, std::uint64_t seed,
                              Embedder& embedder, int workers) {
  if (a.substrate != b.substrate || a.dim() != b.dim()) throw std::invalid_argument("interpolation endpoints differ in substrate or dim");
  if (n_points < 2) throw std::invalid_argument("interpolation needs at least two points");
  SweepReport report;
  report.axis_name = "alpha";
  report.substrate = std::string(to_string(a.substrate));
  report.target = reference == InterpolationReference::A ? "theta_a" : "theta_b";
  report.seed = seed;
  const EmbeddingVector ref =
      final_embedding(substrate, reference == InterpolationReference::A ? a : b, total_steps, seed, embedder);
  report.axis.resize(n_points);
  report.scores.resize(n_points);
  parallel_for(static_cast<std::size_t>(n_points), workers, [&](std::size_t k) {
    const double alpha = static_cast<double>(k) / (n_points - 1);
    Theta t{a.substrate, std::vector<double>(a.dim())};
    for (std::size_t i = 0; i < a.dim(); ++i) t.values[i] = (1.0 - alpha) * a.values[i] + alpha * b.values[i];
    report.axis[k] = alpha;
    report.scores[k] = similarity(final_embedding(substrate, t, total_steps, seed, embedder), ref);
  });
  return report;
}

std::vector<double> default_importance_deltas() { return {0.05, 0.10, 0.15}; }

std::vector<DimImportance> param_importance(const Theta& theta, const std::function<double(const Theta&)>& score,
                                            std::span<const double> deltas, std::span<const std::size_t> dims,
                                            int workers) {
  std::vector<std::size_t> chosen(dims.begin(), dims.end());
  if (chosen.empty()) {
    chosen.resize(theta.dim());
    std::iota(chosen.begin(), chosen.end(), 0);
  }
  std::vector<double> offsets{0.0};
  for (double d : deltas) {
    offsets.push_back(-d);
    offsets.push_back(d);
  }
  const std::size_t per_dim = offsets.size();
  std::vector<double> scores(chosen.size() * per_dim);
  parallel_for(scores.size(), workers, [&](std::size_t job) {
    const std::size_t dim = chosen[job / per_dim];
    if (dim >= theta.dim()) throw std::invalid_argument("importance dim out of range");
    Theta t = theta;
    t.values[dim] += offsets[job % per_dim];
    scores[job] = score(t);
  });
  std::vector<DimImportance> out;
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    const double* s = &scores[k * per_dim];
    double mean = 0;
    for (std::size_t i = 0; i < per_dim; ++i) mean += s[i];
    mean /= static_cast<double>(per_dim);
    double var = 0;
    for (std::size_t i = 0; i < per_dim; ++i) var += (s[i] - mean) * (s[i] - mean);
    out.push_back({chosen[k], std::sqrt(var / static_cast<double>(per_dim))});
  }
  std::stable_sort(out.begin(), out.end(), [](const DimImportance& a, const DimImportance& b) {
    return a.stddev != b.stddev ? a.stddev > b.stddev : a.dim < b.dim;
  });
  return out;
}

std::vector<double> embedding_speed(std::span<const EmbeddingVector> e, std::span<const int> steps) {
  if (e.size() != steps.size()) throw std::invalid_argument("embeddings and capture steps differ in length");
  if (e.size() < 2) throw std::invalid_argument("embedding speed needs at least two captures");
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < e.size(); ++k) {
    if (e[k].dim() != e[k + 1].dim()) throw std::invalid_argument("embedding dimension mismatch");
    double d2 = 0;
    for (std::size_t i = 0; i < e[k].dim(); ++i) {
      const double d = static_cast<double>(e[k + 1].values[i]) - e[k].values[i];
      d2 += d * d;
    }
    out.push_back(std::sqrt(d2) / static_cast<double>(steps[k + 1] - steps[k]));
  }
  return out;
}

std::optional<std::size_t> detect_plateau(std::span<const double> speeds, int window, double epsilon) {
  if (window < 1) throw std::invalid_argument("plateau window must be at least 1");
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    const std::size_t n = std::min<std::size_t>(i + 1, static_cast<std::size_t>(window));
    double total = 0;
    for (std::size_t j = i + 1 - n; j <= i; ++j) total += speeds[j];
    if (total / static_cast<double>(n) < epsilon) return i;
  }
  return std::nullopt;
}

SweepReport sweep_population(const std::function<std::unique_ptr<Substrate>(int)>& make, const Theta& theta,
                             std::span<const int> counts, int total_steps, std::uint64_t seed, Embedder& embedder,
                             const EmbeddingVector& target, int workers) {
  SweepReport report;
  report.axis_name = "particles";
  report.substrate = std::string(to_string(theta.substrate));
  report.seed = seed;
  report.axis.assign(counts.begin(), counts.end());
  if (!std::is_sorted(counts.begin(), counts.end())) throw std::invalid_argument("sweep axis must be monotone");
  report.scores.resize(counts.size());
  parallel_for(counts.size(), workers, [&](std::size_t k) {
    const auto substrate = make(counts[k]);
    report.scores[k] = final_frame_score(*substrate, theta, total_steps, seed, embedder, target);
  });
  return report;
}

}  // namespace asal
