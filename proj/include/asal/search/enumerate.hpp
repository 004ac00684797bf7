#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "asal/embedding/embedder.hpp"
#include "asal/substrates/lifelike_ca.hpp"

namespace asal {

struct EnumerationConfig {
  CaConfig ca;
  int steps = 2048;
  int seeds = 256;
  int subsample = 32;
  std::uint64_t base_seed = 0;
  std::uint32_t first_rule = 0;
  std::uint32_t rule_count = CaRule::kRuleCount;
  int workers = 1;
};

struct EnumerationRecord {
  std::uint32_t rule = 0;
  double mean_score = 0;
  std::vector<double> seed_scores;
};

/// Records sorted by mean open-endedness score ascending (most open-ended
/// first), ties by rule number.
struct EnumerationReport {
  std::vector<EnumerationRecord> records;

  void write_csv(std::ostream& out) const;
};

/// Mean open-endedness of one rule over seeds base_seed .. base_seed + seeds - 1.
EnumerationRecord score_rule(CaRule rule, const EnumerationConfig& config, Embedder& embedder);

/// `progress` (optional) is called with the number of finished rules; it may
/// be called from worker threads.
EnumerationReport enumerate_rules(const EnumerationConfig& config, Embedder& embedder,
                                  const std::function<void(std::size_t)>& progress = {});

}  // namespace asal
