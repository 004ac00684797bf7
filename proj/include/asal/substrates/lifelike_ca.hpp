#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asal/core/rng.hpp"
#include "asal/core/substrate.hpp"

namespace asal {

/// Outer-totalistic binary rule. Bits 0-8 of `packed` are the birth mask
/// (indexed by live Moore-neighbour count), bits 9-17 the survive mask.
struct CaRule {
  std::uint32_t packed = 0;

  static constexpr std::uint32_t kRuleCount = 1u << 18;

  static CaRule from_masks(std::uint16_t birth, std::uint16_t survive);
  std::uint16_t birth_mask() const { return packed & 0x1FF; }
  std::uint16_t survive_mask() const { return (packed >> 9) & 0x1FF; }
  bool births_on(int count) const { return (packed >> count) & 1u; }
  bool survives_on(int count) const { return (packed >> (9 + count)) & 1u; }

  friend bool operator==(CaRule, CaRule) = default;
};

/// Parses Golly "B.../S..." notation. Digits must be 0-8 and not repeat
/// within a mask.
CaRule rule_from_notation(std::string_view text);
std::string to_notation(CaRule rule);

Theta theta_from_rule(CaRule rule);
CaRule rule_from_theta(const Theta& theta);

/// Toroidal binary grid. Each row is packed into one 64-bit word, bit x is
/// column x, so width is limited to 64.
class CaState {
 public:
  CaState() = default;
  CaState(int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }
  bool cell(int y, int x) const { return (rows_[y] >> x) & 1u; }
  void set(int y, int x, bool alive);
  std::uint64_t row(int y) const { return rows_[y]; }
  std::uint64_t& row(int y) { return rows_[y]; }
  std::uint64_t row_mask() const { return width_ == 64 ? ~0ULL : ((1ULL << width_) - 1); }
  int alive_count() const;

  friend bool operator==(const CaState&, const CaState&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint64_t> rows_;
};

struct CaConfig {
  int grid_size = 64;
  int render_size = 224;
  double min_density = 0.05;
  double max_density = 0.4;
  /// Debug hook: bypasses the density draw when set.
  std::optional<double> forced_density;
};

CaState ca_init(const CaConfig& config, Rng& rng);
CaState ca_step(const CaState& state, CaRule rule);
Frame ca_render(const CaState& state, int render_size);

class LifelikeCaSubstrate final : public Substrate {
 public:
  explicit LifelikeCaSubstrate(CaConfig config = {});

  SubstrateId id() const override { return SubstrateId::LifelikeCa; }
  std::size_t genome_dim() const override { return 18; }
  Theta default_theta() const override;
  Trajectory rollout(const Theta& theta, const RolloutSpec& spec) const override;
  Trajectory rollout_rule(CaRule rule, const RolloutSpec& spec) const;

  const CaConfig& config() const { return config_; }

 private:
  CaConfig config_;
};

}  // namespace asal
