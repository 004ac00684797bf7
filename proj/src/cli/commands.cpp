#include "asal/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "asal/atlas.hpp"
#include "asal/cli/run_dir.hpp"
#include "asal/core/errors.hpp"
#include "asal/core/image.hpp"
#include "asal/core/parallel.hpp"
#include "asal/embedding/caching_embedder.hpp"
#include "asal/embedding/pixel_embedder.hpp"
#include "asal/embedding/sidecar_client.hpp"
#include "asal/objectives.hpp"
#include "asal/quantify.hpp"
#include "asal/search/checkpoint.hpp"
#include "asal/search/enumerate.hpp"
#include "asal/search/target_search.hpp"

namespace asal::cli {

namespace fs = std::filesystem;

namespace {

/// Stream for drawing the initial illumination archive.
constexpr std::uint64_t kArchiveInitStream = 3ULL << 32;

class Log {
 public:
  explicit Log(std::ostream* out) : out_(out) {}
  template <typename... Args>
  void operator()(const char* fmt, Args... args) const {
    if (!out_) return;
    char buf[512];
    std::snprintf(buf, sizeof(buf), fmt, args...);
    *out_ << buf << '\n' << std::flush;
  }

 private:
  std::ostream* out_;
};

/// Owns the backend and an optional memoising layer on top of it.
struct EmbedderStack {
  std::unique_ptr<Embedder> owned;
  Embedder* base = nullptr;
  std::unique_ptr<CachingEmbedder> cache;

  EmbedderStack(const EmbedderSettings& settings, Embedder* injected) {
    if (injected) {
      base = injected;
    } else {
      owned = make_embedder(settings);
      base = owned.get();
    }
    // Pixel embeddings cost about as much as hashing the frame, so only remote backends are cached.
    if (settings.cache && (injected || settings.backend != "pixel")) cache = std::make_unique<CachingEmbedder>(*base);
  }
  Embedder& get() { return cache ? static_cast<Embedder&>(*cache) : *base; }
};

std::string format_row(std::initializer_list<double> values) {
  std::string out;
  char buf[40];
  bool first = true;
  for (double v : values) {
    std::snprintf(buf, sizeof(buf), "%s%.9g", first ? "" : ",", v);
    out += buf;
    first = false;
  }
  return out + "\n";
}

Theta resolve_center(const RunConfig& config, const Substrate& substrate, const std::string& spec) {
  if (spec.empty() || spec == "default") return substrate.default_theta();
  if (spec == "zeros") return Theta{substrate.id(), std::vector<double>(substrate.genome_dim(), 0.0)};
  Theta t = read_genome_json(spec);
  if (t.substrate != config.substrate || t.dim() != substrate.genome_dim())
    throw ConfigError("/optimizer/center", spec + " does not hold a " + std::string(to_string(config.substrate)) +
                                               " genome of dim " + std::to_string(substrate.genome_dim()));
  return t;
}

Theta load_theta(const RunConfig& config, const Substrate& substrate, const std::string& path, const char* field) {
  if (path.empty()) return substrate.default_theta();
  Theta t = read_genome_json(path);
  if (t.substrate != config.substrate || t.dim() != substrate.genome_dim())
    throw ConfigError(field, path + " does not match the configured substrate");
  return t;
}

EmbeddingVector embed_target(const TargetEntry& entry, Embedder& embedder) {
  if (!entry.text.empty()) return embedder.embed_text(entry.text);
  return embedder.embed_image(read_png(entry.image));
}

/// Sorted, de-duplicated capture steps covering the target schedule.
struct TargetPlan {
  PromptSchedule schedule;
  std::vector<EmbeddingVector> prompts;
  std::vector<int> captures;
};

TargetPlan plan_targets(const RunConfig& config, Embedder& embedder) {
  validate_targets(config, embedder.describe().supports_text);
  TargetPlan plan;
  std::set<int> steps;
  for (const auto& t : config.targets) {
    const int step = t.step < 0 ? config.rollout.steps : t.step;
    plan.schedule.entries.push_back({step, t.text.empty() ? t.image : t.text});
    plan.prompts.push_back(embed_target(t, embedder));
    steps.insert(step);
  }
  plan.captures.assign(steps.begin(), steps.end());
  return plan;
}

double score_schedule(const Substrate& substrate, const Theta& theta, const RunConfig& config, const TargetPlan& plan,
                      Embedder& embedder) {
  RolloutSpec spec{config.rollout.steps, plan.captures, config.seed};
  const auto traj = substrate.rollout(theta, spec);
  const auto embs = embedder.embed_images(traj.frames);
  return target_score(embs, plan.captures, plan.schedule, plan.prompts);
}

/// Captures for preview frames: the configured subsample plus `extra` steps.
RolloutSpec preview_spec(const RunConfig& config, const std::vector<int>& extra = {}) {
  RolloutSpec spec = RolloutSpec::subsampled(config.rollout.steps, config.rollout.captures, config.seed);
  std::set<int> steps(spec.capture_steps.begin(), spec.capture_steps.end());
  steps.insert(0);
  steps.insert(extra.begin(), extra.end());
  spec.capture_steps.assign(steps.begin(), steps.end());
  return spec;
}

std::string scores_csv(const TargetCheckpoint& run, int population) {
  std::string out = "generation,evaluations,best_score,mean_score\n";
  for (std::size_t g = 0; g < run.curve_best.size(); ++g)
    out += format_row({static_cast<double>(g + 1), static_cast<double>((g + 1) * population), run.curve_best[g],
                       run.curve_mean[g]});
  return out;
}

void check_digest(std::uint64_t stored, const RunConfig& config, const fs::path& ckpt) {
  if (stored != config.digest())
    throw Error(ckpt.string() + " was written by a different configuration; refusing to resume");
}

/// Horizontal strip of frames separated by 2px black gaps.
Frame frame_strip(const std::vector<Frame>& frames) {
  if (frames.empty()) return Frame(1, 1);
  const int h = frames[0].height, w = frames[0].width, gap = 2;
  Frame strip(h, static_cast<int>(frames.size()) * (w + gap) - gap);
  for (std::size_t i = 0; i < frames.size(); ++i)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        for (int c = 0; c < 3; ++c) strip.at(y, static_cast<int>(i) * (w + gap) + x, c) = frames[i].at(y, x, c);
  return strip;
}

std::string file_safe(std::string s) {
  std::replace(s.begin(), s.end(), '/', '_');
  return s;
}

}  // namespace

std::unique_ptr<Embedder> make_embedder(const EmbedderSettings& settings) {
  if (settings.backend == "pixel") return std::make_unique<PixelEmbedder>(settings.pixel_grid);
  std::string address = settings.address;
  if (address.empty()) {
    const char* env = std::getenv(kSidecarEnv);
    if (env) address = env;
  }
  if (address.empty())
    throw ConfigError("/embedder/address",
                      std::string("the sidecar backend needs an address here or in $") + kSidecarEnv);
  return std::make_unique<SidecarEmbedder>(SidecarAddress::parse(address));
}

// ---------------------------------------------------------------------------
// target

fs::path cmd_target(const RunConfig& config, const CommandOptions& options) {
  const Log log(options.log);
  EmbedderStack stack(config.embedder, options.embedder);
  Embedder& embedder = stack.get();
  const auto substrate = make_substrate(config.substrate, config.settings);
  const TargetPlan plan = plan_targets(config, embedder);
  RunDir dir(config.output_dir, config);

  TargetSearchConfig search{config.optimizer.population, config.optimizer.sigma, config.seed, options.workers};
  TargetCheckpoint run;
  if (options.resume) {
    run = load_target_checkpoint(*options.resume);
    check_digest(run.config_digest, config, *options.resume);
    log("resumed at generation %lld", static_cast<long long>(run.cma.generation));
  } else {
    Theta center = resolve_center(config, *substrate, config.optimizer.center);
    run = target_search_start(std::move(center.values), config.optimizer.sigma);
    run.config_digest = config.digest();
  }

  const ScoreFn score = [&](const Genome& g) {
    return score_schedule(*substrate, Theta{config.substrate, g}, config, plan, embedder);
  };
  const auto flush = [&] {
    save_checkpoint(dir.checkpoint(run.cma.generation), run);
    write_text_file(dir.path("scores.csv"), scores_csv(run, config.optimizer.population));
  };
  while (run.cma.generation < config.optimizer.generations) {
    target_search_generation(run, search, score);
    log("generation %lld best %.6f mean %.6f", static_cast<long long>(run.cma.generation), run.best_score,
        run.curve_mean.back());
    if (run.cma.generation % config.optimizer.checkpoint_every == 0) flush();
  }
  flush();

  const Theta best{config.substrate, run.best};
  write_genome_json(dir.path("best/genome.json"), best, run.best_score);
  dir.write_frames(substrate->rollout(best, preview_spec(config, plan.captures)));
  if (!run.curve_best.empty()) {
    std::vector<double> xs(run.curve_best.size());
    std::iota(xs.begin(), xs.end(), 1.0);
    write_png(dir.report("score_curve.png"), plot_lines(xs, {run.curve_best, run.curve_mean}));
  }
  return dir.root();
}

// ---------------------------------------------------------------------------
// enumerate

fs::path cmd_enumerate(const RunConfig& config, const CommandOptions& options) {
  if (config.substrate != SubstrateId::LifelikeCa)
    throw ConfigError("/substrate", "enumeration needs the lifelike_ca substrate");
  const Log log(options.log);
  EmbedderStack stack(config.embedder, options.embedder);
  Embedder& embedder = stack.get();
  RunDir dir(config.output_dir, config);

  EnumerationConfig ec;
  ec.ca = config.settings.ca;
  ec.steps = config.enumerate.steps;
  ec.seeds = config.enumerate.seeds;
  ec.subsample = config.enumerate.subsample;
  ec.base_seed = config.seed;
  ec.first_rule = config.enumerate.first_rule;
  ec.rule_count = config.enumerate.rule_count;
  ec.workers = options.workers;

  const std::size_t report_every = std::max<std::size_t>(1, ec.rule_count / 64);
  std::mutex log_mutex;
  const auto report = enumerate_rules(ec, embedder, [&](std::size_t done) {
    if (done % report_every == 0 || done == ec.rule_count) {
      std::lock_guard lock(log_mutex);
      log("%zu / %u rules", done, ec.rule_count);
    }
  });
  {
    std::ostringstream csv;
    report.write_csv(csv);
    write_text_file(dir.path("scores.csv"), csv.str());
  }

  // OE histogram of per-rule means.
  if (!report.records.empty()) {
    double lo = report.records.front().mean_score, hi = lo;
    for (const auto& r : report.records) {
      lo = std::min(lo, r.mean_score);
      hi = std::max(hi, r.mean_score);
    }
    const int bins = config.enumerate.histogram_bins;
    const double width = hi > lo ? (hi - lo) / bins : 1.0;
    std::vector<double> counts(bins, 0.0), centres(bins);
    for (const auto& r : report.records)
      ++counts[std::min(bins - 1, static_cast<int>((r.mean_score - lo) / width))];
    std::string hist = "bin_lo,bin_hi,count\n";
    for (int b = 0; b < bins; ++b) {
      centres[b] = lo + (b + 0.5) * width;
      hist += format_row({lo + b * width, lo + (b + 1) * width, counts[b]});
    }
    write_text_file(dir.report("oe_histogram.csv"), hist);
    write_png(dir.report("oe_histogram.png"), plot_lines(centres, {counts}));
  }

  LifelikeCaSubstrate ca(config.settings.ca);
  const int k = std::min<int>(config.enumerate.top_k, static_cast<int>(report.records.size()));
  const RolloutSpec strip_spec =
      RolloutSpec::subsampled(config.enumerate.steps, std::min(config.enumerate.strip_frames, config.enumerate.steps),
                              config.seed);
  std::vector<Frame> strips(k);
  parallel_for(static_cast<std::size_t>(k), options.workers, [&](std::size_t i) {
    strips[i] = frame_strip(ca.rollout_rule(CaRule{report.records[i].rule}, strip_spec).frames);
  });
  for (int i = 0; i < k; ++i) {
    char name[96];
    std::snprintf(name, sizeof(name), "top_%02d_%s.png", i,
                  file_safe(to_notation(CaRule{report.records[i].rule})).c_str());
    write_png(dir.report(name), strips[i]);
  }
  if (!report.records.empty()) {
    const CaRule best{report.records.front().rule};
    write_genome_json(dir.path("best/genome.json"), theta_from_rule(best), report.records.front().mean_score);
    dir.write_frames(ca.rollout_rule(best, strip_spec));
  }
  return dir.root();
}

// ---------------------------------------------------------------------------
// illuminate

namespace {

GenomeEvaluator make_evaluator(const Substrate& substrate, const RunConfig& config, Embedder& embedder) {
  const int steps = config.rollout.steps;
  const int captures = config.illuminate.embed_captures;
  const RolloutSpec spec =
      captures == 1 ? RolloutSpec::final_only(steps, config.seed) : RolloutSpec::subsampled(steps, captures, config.seed);
  return [&substrate, &embedder, spec, id = config.substrate](const Genome& g) {
    const auto traj = substrate.rollout(Theta{id, g}, spec);
    const auto embs = embedder.embed_images(traj.frames);
    if (embs.size() == 1) return embs[0];
    std::vector<float> mean(embs[0].dim(), 0.0f);
    for (const auto& e : embs)
      for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += e.values[i];
    return EmbeddingVector::normalized(std::move(mean));
  };
}

/// Initial archive; diverging draws are redrawn (bounded) from the same stream.
Archive initial_archive(const RunConfig& config, const Substrate& substrate, const GenomeEvaluator& evaluate,
                        int workers) {
  const auto& g = config.illuminate;
  const Theta center = substrate.default_theta();
  const std::size_t n = static_cast<std::size_t>(g.capacity);
  Rng rng = make_rng(config.seed, kArchiveInitStream);
  const auto draw = [&] {
    Genome x = center.values;
    if (g.init == "random")
      for (double& v : x) v += g.init_sigma * rng.normal();
    return x;
  };
  std::vector<Genome> genomes(n);
  std::vector<std::optional<EmbeddingVector>> embs(n);
  std::vector<std::size_t> pending(n);
  std::iota(pending.begin(), pending.end(), 0);
  for (int round = 0; !pending.empty(); ++round) {
    if (round == 8)
      throw DivergenceBudgetExceeded(std::to_string(pending.size()) + " initial genomes still diverging");
    for (std::size_t i : pending) genomes[i] = draw();
    parallel_for(pending.size(), workers, [&](std::size_t k) {
      try {
        embs[pending[k]] = evaluate(genomes[pending[k]]);
      } catch (const DivergedError&) {
        embs[pending[k]].reset();
      }
    });
    std::vector<std::size_t> still;
    for (std::size_t i : pending)
      if (!embs[i]) still.push_back(i);
    pending = std::move(still);
  }
  Archive archive(n);
  for (std::size_t i = 0; i < n; ++i) archive.insert(std::move(genomes[i]), std::move(*embs[i]));
  return archive;
}

void write_atlas(const RunDir& dir, const Substrate& substrate, SubstrateId id, const Archive& archive,
                 const AtlasLayout* given, int grid, int tile, int steps, std::uint64_t seed, int workers) {
  const auto embs = archive.embeddings();
  AtlasLayout layout = given ? *given : grid_sample(project_2d(embs), grid, grid);
  std::vector<std::size_t> used;
  for (const auto& t : layout.tiles)
    if (t) used.push_back(*t);
  std::vector<Frame> frames(used.size());
  parallel_for(used.size(), workers, [&](std::size_t k) {
    const auto traj = substrate.rollout(Theta{id, archive.members()[used[k]].theta}, RolloutSpec::final_only(steps, seed));
    frames[k] = traj.frames.back();
  });
  std::map<std::size_t, Frame> by_index;
  for (std::size_t k = 0; k < used.size(); ++k) by_index.emplace(used[k], std::move(frames[k]));
  layout.write_csv(dir.report("atlas_layout.csv"));
  write_png(dir.report("atlas.png"), render_atlas(layout, by_index, tile));
}

std::string diversity_csv(const GaCheckpoint& ck, int log_every) {
  std::string out = "iteration,diversity\n";
  for (std::size_t i = 0; i < ck.curve.size(); ++i)
    out += format_row({static_cast<double>((i + 1) * log_every), ck.curve[i]});
  return out;
}

}  // namespace

fs::path cmd_illuminate(const RunConfig& config, const CommandOptions& options) {
  const Log log(options.log);
  EmbedderStack stack(config.embedder, options.embedder);
  Embedder& embedder = stack.get();
  const auto substrate = make_substrate(config.substrate, config.settings);
  RunDir dir(config.output_dir, config);
  const auto evaluate = make_evaluator(*substrate, config, embedder);
  const auto& g = config.illuminate;

  GaCheckpoint ck;
  if (options.resume) {
    ck = load_ga_checkpoint(*options.resume);
    check_digest(ck.config_digest, config, *options.resume);
    log("resumed at iteration %lld", static_cast<long long>(ck.state.iteration));
  } else {
    ck.state.archive = initial_archive(config, *substrate, evaluate, options.workers);
    ck.config_digest = config.digest();
    const double d0 = ck.state.archive.diversity();
    write_text_file(dir.report("initial_diversity.txt"), format_row({d0}));
    log("initial archive of %zu, diversity %.6f", ck.state.archive.size(), d0);
  }

  GaConfig ga;
  ga.batch = g.batch;
  ga.mutation_sigma = g.mutation_sigma;
  ga.seed = config.seed;
  ga.workers = options.workers;
  ga.max_divergence_fraction = g.max_divergence_fraction;

  const auto flush = [&] {
    save_checkpoint(dir.checkpoint(ck.state.iteration), ck);
    write_text_file(dir.path("scores.csv"), diversity_csv(ck, g.log_every));
  };
  try {
    ga_illuminate(ck.state, ga, evaluate, g.iterations - ck.state.iteration, [&](const GaState& s) {
      if (s.iteration % g.log_every == 0) {
        ck.curve.push_back(s.archive.diversity());
        log("iteration %lld diversity %.6f diverged %llu/%llu", static_cast<long long>(s.iteration), ck.curve.back(),
            static_cast<unsigned long long>(s.diverged), static_cast<unsigned long long>(s.attempts));
      }
      if (s.iteration % g.checkpoint_every == 0) flush();
    });
  } catch (const DivergenceBudgetExceeded& e) {
    flush();
    throw DivergenceBudgetExceeded(std::string(e.what()) + "; last checkpoint " +
                                   dir.checkpoint(ck.state.iteration).string());
  }
  flush();

  write_archive_json(dir.path("archive.json"), config.substrate, ck.state.archive);
  const auto& members = ck.state.archive.members();
  std::size_t most_novel = 0;
  for (std::size_t i = 1; i < members.size(); ++i)
    if (ck.state.archive.novelty(i) > ck.state.archive.novelty(most_novel)) most_novel = i;
  const Theta best{config.substrate, members[most_novel].theta};
  write_genome_json(dir.path("best/genome.json"), best, ck.state.archive.novelty(most_novel));
  dir.write_frames(substrate->rollout(best, preview_spec(config)));
  if (!ck.curve.empty()) {
    std::vector<double> xs(ck.curve.size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>((i + 1) * g.log_every);
    write_png(dir.report("diversity_curve.png"), plot_lines(xs, {ck.curve}));
  }
  write_atlas(dir, *substrate, config.substrate, ck.state.archive, nullptr, g.atlas_grid, g.atlas_tile,
              config.rollout.steps, config.seed, options.workers);
  return dir.root();
}

// ---------------------------------------------------------------------------
// quantify

fs::path cmd_quantify(const RunConfig& config, const CommandOptions& options) {
  const Log log(options.log);
  EmbedderStack stack(config.embedder, options.embedder);
  Embedder& embedder = stack.get();
  const auto substrate = make_substrate(config.substrate, config.settings);
  const auto& q = config.quantify;
  const int steps = config.rollout.steps;
  RunDir dir(config.output_dir, config);

  if (q.analysis == "interpolate") {
    const Theta a = load_theta(config, *substrate, q.theta_a, "/quantify/theta_a");
    const Theta b = load_theta(config, *substrate, q.theta_b, "/quantify/theta_b");
    const auto ref = q.reference == "a" ? InterpolationReference::A : InterpolationReference::B;
    const SweepReport rep = interpolate_curve(*substrate, a, b, q.points, ref, steps, config.seed, embedder, options.workers);
    rep.write_csv(dir.report("interpolation.csv"));
    rep.write_plot(dir.report("interpolation.png"));
    rep.write_csv(dir.path("scores.csv"));
    log("interpolation: %d points", q.points);
  } else if (q.analysis == "importance") {
    const Theta theta = load_theta(config, *substrate, q.theta_a, "/quantify/theta_a");
    const TargetPlan plan = plan_targets(config, embedder);
    const auto score = [&](const Theta& t) { return score_schedule(*substrate, t, config, plan, embedder); };
    const std::vector<double> deltas = q.deltas.empty() ? default_importance_deltas() : q.deltas;
    const auto ranking = param_importance(theta, score, deltas, q.dims, options.workers);
    std::string csv = "rank,dim,std\n";
    std::vector<double> xs, stds;
    for (std::size_t r = 0; r < ranking.size(); ++r) {
      csv += format_row({static_cast<double>(r), static_cast<double>(ranking[r].dim), ranking[r].stddev});
      xs.push_back(static_cast<double>(r));
      stds.push_back(ranking[r].stddev);
    }
    write_text_file(dir.report("importance.csv"), csv);
    write_text_file(dir.path("scores.csv"), csv);
    write_png(dir.report("importance.png"), plot_lines(xs, {stds}));
    log("importance: %zu dims ranked", ranking.size());
  } else if (q.analysis == "plateau") {
    const Theta theta = load_theta(config, *substrate, q.theta_a, "/quantify/theta_a");
    const RolloutSpec spec = config.rollout.captures >= steps ? RolloutSpec::every_step(steps, config.seed)
                                                              : RolloutSpec::subsampled(steps, config.rollout.captures, config.seed);
    const auto traj = substrate->rollout(theta, spec);
    const auto embs = embedder.embed_images(traj.frames);
    const auto speeds = embedding_speed(embs, spec.capture_steps);
    const auto plateau = detect_plateau(speeds, q.window, q.epsilon);
    std::string csv = "index,step,speed\n";
    std::vector<double> xs;
    for (std::size_t i = 0; i < speeds.size(); ++i) {
      csv += format_row({static_cast<double>(i), static_cast<double>(spec.capture_steps[i + 1]), speeds[i]});
      xs.push_back(spec.capture_steps[i + 1]);
    }
    write_text_file(dir.report("speed.csv"), csv);
    write_text_file(dir.path("scores.csv"), csv);
    if (!speeds.empty()) write_png(dir.report("speed.png"), plot_lines(xs, {speeds}));
    Json result;
    result["window"] = q.window;
    result["epsilon"] = q.epsilon;
    if (plateau) {
      result["index"] = *plateau;
      // Speed i spans captures i..i+1, so a plateau at index i starts at capture i.
      result["step"] = spec.capture_steps[*plateau];
    } else {
      result["index"] = nullptr;
      result["step"] = nullptr;
    }
    write_text_file(dir.report("plateau.json"), result.dump(2) + "\n");
    dir.write_frames(traj);
    log("plateau: %s", plateau ? std::to_string(spec.capture_steps[*plateau]).c_str() : "none");
  } else {
    const Theta theta = load_theta(config, *substrate, q.theta_a, "/quantify/theta_a");
    if (config.targets.empty()) throw ConfigError("/targets", "a population sweep needs one target");
    validate_targets(config, embedder.describe().supports_text);
    const EmbeddingVector target = embed_target(config.targets.front(), embedder);
    const auto make = [&](int n) -> std::unique_ptr<Substrate> {
      ParticleLifeConfig pc = config.settings.particle_life;
      pc.particles = n;
      return std::make_unique<ParticleLifeSubstrate>(pc);
    };
    SweepReport rep = sweep_population(make, theta, q.counts, steps, config.seed, embedder, target, options.workers);
    rep.target = config.targets.front().text.empty() ? config.targets.front().image : config.targets.front().text;
    rep.write_csv(dir.report("population.csv"));
    rep.write_plot(dir.report("population.png"));
    rep.write_csv(dir.path("scores.csv"));
    log("population sweep: %zu counts", q.counts.size());
  }
  return dir.root();
}

// ---------------------------------------------------------------------------
// atlas

fs::path cmd_atlas(const RunConfig& config, const CommandOptions& options) {
  if (config.atlas.archive.empty()) throw ConfigError("/atlas/archive", "is required");
  SubstrateId stored{};
  const Archive archive = read_archive_json(config.atlas.archive, &stored);
  if (stored != config.substrate)
    throw ConfigError("/atlas/archive", "archive holds " + std::string(to_string(stored)) + " genomes");
  if (archive.size() < 2) throw ConfigError("/atlas/archive", "needs at least two members");
  const auto substrate = make_substrate(config.substrate, config.settings);
  RunDir dir(config.output_dir, config);
  std::optional<AtlasLayout> layout;
  if (!config.atlas.layout.empty()) {
    layout = AtlasLayout::read_csv(config.atlas.layout, config.atlas.grid, config.atlas.grid);
    if (layout->coords.size() != archive.size())
      throw ConfigError("/atlas/layout", "row count does not match the archive");
  }
  write_atlas(dir, *substrate, config.substrate, archive, layout ? &*layout : nullptr, config.atlas.grid,
              config.atlas.tile, config.rollout.steps, config.seed, options.workers);
  Log(options.log)("atlas written to %s", dir.report("atlas.png").c_str());
  return dir.root();
}

}  // namespace asal::cli
