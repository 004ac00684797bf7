#include "asal/core/types.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "asal/core/rng.hpp"
#include "asal/core/substrate.hpp"

namespace asal {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Word-at-a-time variant for large buffers; the tail is hashed bytewise.
std::uint64_t hash_words(const void* data, std::size_t bytes, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::size_t i = 0;
  for (; i + 8 <= bytes; i += 8) {
    std::uint64_t w;
    std::memcpy(&w, p + i, 8);
    h = (h ^ w) * 0x9E3779B97F4A7C15ULL;
    h ^= h >> 29;
  }
  return fnv1a(p + i, bytes - i, h);
}

}  // namespace

std::string_view to_string(SubstrateId id) {
  switch (id) {
    case SubstrateId::LifelikeCa: return "lifelike_ca";
    case SubstrateId::Lenia: return "lenia";
    case SubstrateId::Boids: return "boids";
    case SubstrateId::ParticleLife: return "particle_life";
    case SubstrateId::Nca: return "nca";
  }
  return "unknown";
}

SubstrateId substrate_from_string(std::string_view name) {
  for (auto id : {SubstrateId::LifelikeCa, SubstrateId::Lenia, SubstrateId::Boids, SubstrateId::ParticleLife,
                  SubstrateId::Nca}) {
    if (to_string(id) == name) return id;
  }
  throw std::invalid_argument("unknown substrate '" + std::string(name) + "'");
}

bool Theta::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

std::uint64_t Theta::digest() const {
  auto h = fnv1a(&substrate, sizeof(substrate));
  return mix64(fnv1a(values.data(), values.size() * sizeof(double), h));
}

void RolloutSpec::validate() const {
  if (total_steps < 0) throw std::invalid_argument("total_steps must be non-negative");
  for (std::size_t i = 0; i < capture_steps.size(); ++i) {
    if (capture_steps[i] < 0 || capture_steps[i] > total_steps)
      throw std::invalid_argument("capture step outside [0, total_steps]");
    if (i > 0 && capture_steps[i] <= capture_steps[i - 1])
      throw std::invalid_argument("capture steps must be strictly increasing");
  }
}

RolloutSpec RolloutSpec::subsampled(int total_steps, int count, std::uint64_t seed) {
  if (count <= 0 || count > std::max(total_steps, 1))
    throw std::invalid_argument("capture count must be in [1, total_steps]");
  RolloutSpec spec{total_steps, {}, seed};
  for (int k = 0; k < count; ++k) {
    spec.capture_steps.push_back(static_cast<int>((static_cast<long long>(k + 1) * total_steps) / count));
  }
  spec.capture_steps.erase(std::unique(spec.capture_steps.begin(), spec.capture_steps.end()),
                           spec.capture_steps.end());
  return spec;
}

RolloutSpec RolloutSpec::final_only(int total_steps, std::uint64_t seed) {
  return RolloutSpec{total_steps, {total_steps}, seed};
}

RolloutSpec RolloutSpec::every_step(int total_steps, std::uint64_t seed) {
  RolloutSpec spec{total_steps, {}, seed};
  for (int t = 0; t <= total_steps; ++t) spec.capture_steps.push_back(t);
  return spec;
}

bool Frame::in_unit_range() const {
  return std::all_of(pixels.begin(), pixels.end(), [](float v) { return v >= 0.0f && v <= 1.0f; });
}

std::uint64_t Frame::digest() const {
  std::uint64_t h = fnv1a(&height, sizeof(height));
  h = fnv1a(&width, sizeof(width), h);
  return mix64(hash_words(pixels.data(), pixels.size() * sizeof(float), h));
}

Theta Substrate::default_theta() const {
  return Theta{id(), std::vector<double>(genome_dim(), 0.0)};
}

void Substrate::check_theta(const Theta& theta) const {
  if (theta.substrate != id())
    throw std::invalid_argument("theta belongs to substrate " + std::string(to_string(theta.substrate)) +
                                ", expected " + std::string(to_string(id())));
  if (theta.dim() != genome_dim())
    throw std::invalid_argument("theta has dim " + std::to_string(theta.dim()) + ", expected " +
                                std::to_string(genome_dim()));
  if (!theta.all_finite()) throw std::invalid_argument("theta has non-finite values");
}

}  // namespace asal
