#pragma once

#include <memory>
#include <string>

#include "asal/core/errors.hpp"
#include "asal/core/rng.hpp"
#include "asal/core/types.hpp"

namespace asal {

/// Runtime face of a substrate: a family of simulations indexed by Theta.
class Substrate {
 public:
  virtual ~Substrate() = default;

  virtual SubstrateId id() const = 0;
  virtual std::size_t genome_dim() const = 0;
  /// The search center (zeros unless the substrate ships a fixture).
  virtual Theta default_theta() const;
  /// init -> T steps -> render at each capture step. Pure in (theta, spec).
  virtual Trajectory rollout(const Theta& theta, const RolloutSpec& spec) const = 0;

  /// Throws std::invalid_argument when theta does not belong to this substrate.
  void check_theta(const Theta& theta) const;
};

/// Model requirements for run_rollout. A model is a substrate bound to one genome.
template <typename M>
concept RolloutModel = requires(const M& m, typename M::State s, Rng& rng) {
  { m.init(rng) } -> std::same_as<typename M::State>;
  { m.step(s) } -> std::same_as<typename M::State>;
  { m.render(s) } -> std::same_as<Frame>;
  { m.finite(s) } -> std::same_as<bool>;
};

template <RolloutModel M>
Trajectory run_rollout(const M& model, const RolloutSpec& spec) {
  spec.validate();
  Rng rng = make_rng(spec.seed, kInitStream);
  Trajectory traj;
  traj.frames.reserve(spec.capture_steps.size());
  auto state = model.init(rng);
  std::size_t next = 0;
  for (int t = 0;; ++t) {
    if (next < spec.capture_steps.size() && spec.capture_steps[next] == t) {
      Frame f = model.render(state);
      f.step_index = t;
      traj.frames.push_back(std::move(f));
      ++next;
    }
    if (t == spec.total_steps) break;
    state = model.step(state);
    if (!model.finite(state)) throw DivergedError(t + 1);
  }
  return traj;
}

}  // namespace asal
