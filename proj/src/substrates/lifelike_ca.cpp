#include "asal/substrates/lifelike_ca.hpp"

#include <bit>
#include <stdexcept>

#include "asal/core/errors.hpp"
#include "asal/core/image.hpp"

namespace asal {

CaRule CaRule::from_masks(std::uint16_t birth, std::uint16_t survive) {
  return CaRule{static_cast<std::uint32_t>(birth & 0x1FF) | (static_cast<std::uint32_t>(survive & 0x1FF) << 9)};
}

CaRule rule_from_notation(std::string_view text) {
  std::size_t pos = 0;
  const auto parse_mask = [&](char letter) -> std::uint16_t {
    if (pos >= text.size() || (text[pos] != letter && text[pos] != letter + ('a' - 'A')))
      throw ParseError(std::string("expected '") + letter + "'", pos);
    ++pos;
    std::uint16_t mask = 0;
    while (pos < text.size() && text[pos] != '/') {
      const char c = text[pos];
      if (c < '0' || c > '8') throw ParseError(std::string("unexpected character '") + c + "'", pos);
      const std::uint16_t bit = 1u << (c - '0');
      if (mask & bit) throw ParseError(std::string("repeated digit '") + c + "'", pos);
      mask |= bit;
      ++pos;
    }
    return mask;
  };
  const std::uint16_t birth = parse_mask('B');
  if (pos >= text.size() || text[pos] != '/') throw ParseError("expected '/'", pos);
  ++pos;
  const std::uint16_t survive = parse_mask('S');
  if (pos != text.size()) throw ParseError("trailing characters", pos);
  return CaRule::from_masks(birth, survive);
}

std::string to_notation(CaRule rule) {
  std::string out = "B";
  for (int i = 0; i <= 8; ++i)
    if (rule.births_on(i)) out += static_cast<char>('0' + i);
  out += "/S";
  for (int i = 0; i <= 8; ++i)
    if (rule.survives_on(i)) out += static_cast<char>('0' + i);
  return out;
}

Theta theta_from_rule(CaRule rule) {
  Theta theta{SubstrateId::LifelikeCa, std::vector<double>(18)};
  for (int i = 0; i < 18; ++i) theta.values[i] = (rule.packed >> i) & 1u ? 1.0 : 0.0;
  return theta;
}

CaRule rule_from_theta(const Theta& theta) {
  if (theta.substrate != SubstrateId::LifelikeCa || theta.dim() != 18)
    throw std::invalid_argument("not a Life-like CA genome");
  CaRule rule;
  for (int i = 0; i < 18; ++i)
    if (theta.values[i] >= 0.5) rule.packed |= 1u << i;
  return rule;
}

CaState::CaState(int height, int width) : height_(height), width_(width), rows_(height, 0) {
  if (width < 1 || width > 64 || height < 1) throw std::invalid_argument("CA grid must be 1..64 wide");
}

void CaState::set(int y, int x, bool alive) {
  if (alive)
    rows_[y] |= 1ULL << x;
  else
    rows_[y] &= ~(1ULL << x);
}

int CaState::alive_count() const {
  int n = 0;
  for (auto r : rows_) n += std::popcount(r);
  return n;
}

CaState ca_init(const CaConfig& config, Rng& rng) {
  const double p = config.forced_density ? *config.forced_density : rng.uniform(config.min_density, config.max_density);
  CaState state(config.grid_size, config.grid_size);
  for (int y = 0; y < state.height(); ++y)
    for (int x = 0; x < state.width(); ++x)
      if (rng.uniform() < p) state.set(y, x, true);
  return state;
}

namespace {

// Rotations within a w-bit row; bit x of the result holds column x-1 (east) or x+1 (west).
inline std::uint64_t shift_east(std::uint64_t r, int w, std::uint64_t mask) {
  return ((r << 1) | (r >> (w - 1))) & mask;
}
inline std::uint64_t shift_west(std::uint64_t r, int w, std::uint64_t mask) {
  return ((r >> 1) | (r << (w - 1))) & mask;
}

}  // namespace

CaState ca_step(const CaState& state, CaRule rule) {
  const int h = state.height(), w = state.width();
  const std::uint64_t mask = state.row_mask();
  CaState next(h, w);
  for (int y = 0; y < h; ++y) {
    const std::uint64_t up = state.row((y + h - 1) % h);
    const std::uint64_t mid = state.row(y);
    const std::uint64_t down = state.row((y + 1) % h);
    const std::uint64_t neighbours[8] = {
        shift_east(up, w, mask),   up,   shift_west(up, w, mask),
        shift_east(mid, w, mask),        shift_west(mid, w, mask),
        shift_east(down, w, mask), down, shift_west(down, w, mask)};
    // Bit-sliced ripple counter: count = s0 + 2 s1 + 4 s2 + 8 s3.
    std::uint64_t s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    for (std::uint64_t a : neighbours) {
      const std::uint64_t c0 = s0 & a;
      s0 ^= a;
      const std::uint64_t c1 = s1 & c0;
      s1 ^= c0;
      const std::uint64_t c2 = s2 & c1;
      s2 ^= c1;
      s3 |= c2;
    }
    std::uint64_t birth = 0, survive = 0;
    for (int k = 0; k <= 8; ++k) {
      if (!rule.births_on(k) && !rule.survives_on(k)) continue;
      const std::uint64_t eq = ((k & 1) ? s0 : ~s0) & ((k & 2) ? s1 : ~s1) & ((k & 4) ? s2 : ~s2) &
                               ((k & 8) ? s3 : ~s3);
      if (rule.births_on(k)) birth |= eq;
      if (rule.survives_on(k)) survive |= eq;
    }
    next.row(y) = ((mid & survive) | (~mid & birth)) & mask;
  }
  return next;
}

Frame ca_render(const CaState& state, int render_size) {
  Frame native(state.height(), state.width());
  for (int y = 0; y < state.height(); ++y)
    for (int x = 0; x < state.width(); ++x)
      if (state.cell(y, x))
        for (int c = 0; c < 3; ++c) native.at(y, x, c) = 1.0f;
  return resample_nearest(native, render_size, render_size);
}

namespace {

struct CaModel {
  using State = CaState;
  const CaConfig* config;
  CaRule rule;

  State init(Rng& rng) const { return ca_init(*config, rng); }
  State step(const State& s) const { return ca_step(s, rule); }
  Frame render(const State& s) const { return ca_render(s, config->render_size); }
  bool finite(const State&) const { return true; }
};

}  // namespace

LifelikeCaSubstrate::LifelikeCaSubstrate(CaConfig config) : config_(config) {
  if (config_.grid_size < 1 || config_.grid_size > 64) throw std::invalid_argument("CA grid_size must be in [1, 64]");
}

Theta LifelikeCaSubstrate::default_theta() const { return theta_from_rule(rule_from_notation("B3/S23")); }

Trajectory LifelikeCaSubstrate::rollout(const Theta& theta, const RolloutSpec& spec) const {
  check_theta(theta);
  auto traj = rollout_rule(rule_from_theta(theta), spec);
  traj.theta_digest = theta.digest();
  return traj;
}

Trajectory LifelikeCaSubstrate::rollout_rule(CaRule rule, const RolloutSpec& spec) const {
  return run_rollout(CaModel{&config_, rule}, spec);
}

}  // namespace asal
