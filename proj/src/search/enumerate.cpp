#include "asal/search/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <ostream>

#include "asal/core/parallel.hpp"
#include "asal/objectives.hpp"

namespace asal {

EnumerationRecord score_rule(CaRule rule, const EnumerationConfig& config, Embedder& embedder) {
  const LifelikeCaSubstrate substrate(config.ca);
  EnumerationRecord rec;
  rec.rule = rule.packed;
  double total = 0;
  for (int s = 0; s < config.seeds; ++s) {
    const auto spec = RolloutSpec::subsampled(config.steps, config.subsample, config.base_seed + static_cast<std::uint64_t>(s));
    const Trajectory traj = substrate.rollout_rule(rule, spec);
    const auto embeddings = embedder.embed_images(traj.frames);
    rec.seed_scores.push_back(open_endedness_score(embeddings));
    total += rec.seed_scores.back();
  }
  rec.mean_score = total / config.seeds;
  return rec;
}

EnumerationReport enumerate_rules(const EnumerationConfig& config, Embedder& embedder,
                                  const std::function<void(std::size_t)>& progress) {
  if (config.first_rule + static_cast<std::uint64_t>(config.rule_count) > CaRule::kRuleCount)
    throw std::invalid_argument("rule range exceeds 2^18");
  EnumerationReport report;
  report.records.resize(config.rule_count);
  std::atomic<std::size_t> done{0};
  parallel_for(config.rule_count, config.workers, [&](std::size_t i) {
    report.records[i] = score_rule(CaRule{config.first_rule + static_cast<std::uint32_t>(i)}, config, embedder);
    const std::size_t d = ++done;
    if (progress) progress(d);
  });
  std::sort(report.records.begin(), report.records.end(), [](const auto& a, const auto& b) {
    return a.mean_score != b.mean_score ? a.mean_score < b.mean_score : a.rule < b.rule;
  });
  return report;
}

void EnumerationReport::write_csv(std::ostream& out) const {
  const std::size_t seeds = records.empty() ? 0 : records.front().seed_scores.size();
  out << "rank,rule,notation,mean_oe";
  for (std::size_t s = 0; s < seeds; ++s) out << ",seed_" << s;
  out << '\n';
  char buf[64];
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    std::snprintf(buf, sizeof(buf), "%.9f", rec.mean_score);
    out << r << ',' << rec.rule << ',' << to_notation(CaRule{rec.rule}) << ',' << buf;
    for (double v : rec.seed_scores) {
      std::snprintf(buf, sizeof(buf), "%.9f", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace asal
