#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace asal {

enum class SubstrateId : std::uint8_t { LifelikeCa, Lenia, Boids, ParticleLife, Nca };

std::string_view to_string(SubstrateId id);
SubstrateId substrate_from_string(std::string_view name);

/// Flat genome of one simulation. The Life-like CA stores its 18 rule bits
/// as 0/1 values (birth bits 0-8, survive bits 9-17).
struct Theta {
  SubstrateId substrate = SubstrateId::Lenia;
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
  bool all_finite() const;
  std::uint64_t digest() const;
  friend bool operator==(const Theta&, const Theta&) = default;
};

struct RolloutSpec {
  int total_steps = 0;
  std::vector<int> capture_steps;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on a malformed spec.
  void validate() const;

  /// `count` captures evenly spaced over (0, total_steps], ending at total_steps.
  static RolloutSpec subsampled(int total_steps, int count, std::uint64_t seed);
  /// Single capture of the final state.
  static RolloutSpec final_only(int total_steps, std::uint64_t seed);
  /// Every step 0..total_steps.
  static RolloutSpec every_step(int total_steps, std::uint64_t seed);
};

/// H x W x 3 image, row-major, channel-interleaved, values in [0,1].
struct Frame {
  int height = 0;
  int width = 0;
  int step_index = 0;
  std::vector<float> pixels;

  Frame() = default;
  Frame(int h, int w, float fill = 0.0f) : height(h), width(w), pixels(static_cast<std::size_t>(h) * w * 3, fill) {}

  float& at(int y, int x, int c) { return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  float at(int y, int x, int c) const { return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }

  bool in_unit_range() const;
  std::uint64_t digest() const;
};

struct Trajectory {
  std::vector<Frame> frames;
  std::uint64_t theta_digest = 0;
};

}  // namespace asal
