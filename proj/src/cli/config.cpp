#include "asal/cli/config.hpp"

#include <fstream>
#include <set>

#include "asal/core/errors.hpp"

namespace asal::cli {
namespace {

/// Walks one JSON object, reporting errors against its pointer path and
/// rejecting keys that were never read.
class Reader {
 public:
  Reader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "/" : path_, "expected an object");
  }
  ~Reader() = default;

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    const auto it = node_.find(key);
    if (it == node_.end() || it->is_null()) return;
    try {
      out = it->template get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(field(key), "has the wrong type");
    }
  }

  Reader child(const char* key) {
    seen_.insert(key);
    static const Json empty = Json::object();
    const auto it = node_.find(key);
    return Reader(it == node_.end() ? empty : *it, field(key));
  }

  const Json* raw(const char* key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  std::string field(const std::string& key) const { return path_ + "/" + key; }
  const std::string& path() const { return path_; }

  void finish() const {
    for (const auto& [key, value] : node_.items())
      if (!seen_.contains(key)) throw ConfigError(field(key), "unknown field");
  }

 private:
  const Json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

Json substrate_params(Preset preset, SubstrateId id) {
  const bool desk = preset == Preset::Desk;
  switch (id) {
    case SubstrateId::LifelikeCa:
      return {{"grid_size", desk ? 32 : 64}, {"render_size", desk ? 32 : 224}, {"min_density", 0.05}, {"max_density", 0.4}};
    case SubstrateId::Lenia:
      return {{"grid_size", 64}, {"render_size", desk ? 64 : 224}, {"max_radius", 12.0}, {"dt", 0.1}};
    case SubstrateId::Boids:
      return {{"boids", 128},          {"neighbours", 16},      {"hidden", 32},
              {"speed", desk ? 1.0 / 48 : 0.001}, {"max_turn", 0.1}, {"position_scale", 0.1},
              {"render_size", desk ? 64 : 224}, {"glyph_size", desk ? 0.05 : 0.02}};
    case SubstrateId::ParticleLife:
      return {{"particles", desk ? 1000 : 5000}, {"types", 6}, {"cutoff", 0.1},
              {"damping", 0.9}, {"dt", 0.02}, {"force_factor", 10.0},
              {"render_size", desk ? 64 : 224}, {"particle_radius_px", 1.0}};
    case SubstrateId::Nca:
      return {{"grid_size", desk ? 32 : 64}, {"channels", 16}, {"filters", 3}, {"hidden", 64}, {"dt", 1.0},
              {"min_radius", 3.0}, {"max_radius", 16.0}, {"render_size", desk ? 64 : 224}};
  }
  return Json::object();
}

int paper_steps(SubstrateId id) {
  switch (id) {
    case SubstrateId::LifelikeCa: return 2048;
    case SubstrateId::Boids:
    case SubstrateId::ParticleLife: return 1000;
    case SubstrateId::Lenia:
    case SubstrateId::Nca: return 256;
  }
  return 256;
}

int desk_steps(SubstrateId id) {
  switch (id) {
    case SubstrateId::LifelikeCa: return 128;
    case SubstrateId::Boids: return 48;
    case SubstrateId::ParticleLife: return 200;
    case SubstrateId::Lenia: return 64;
    case SubstrateId::Nca: return 64;
  }
  return 64;
}

void read_substrate(Reader r, SubstrateId id, SubstrateSettings& s) {
  switch (id) {
    case SubstrateId::LifelikeCa: {
      auto& c = s.ca;
      r.get("grid_size", c.grid_size);
      r.get("render_size", c.render_size);
      r.get("min_density", c.min_density);
      r.get("max_density", c.max_density);
      require(c.grid_size >= 3 && c.grid_size <= 64, r.field("grid_size"), "must be in [3, 64]");
      require(0 <= c.min_density && c.min_density <= c.max_density && c.max_density <= 1, r.field("max_density"),
              "densities must satisfy 0 <= min <= max <= 1");
      break;
    }
    case SubstrateId::Lenia: {
      auto& c = s.lenia;
      r.get("grid_size", c.grid_size);
      r.get("render_size", c.render_size);
      r.get("max_radius", c.max_radius);
      r.get("dt", c.dt);
      require(c.grid_size >= 32, r.field("grid_size"), "must be at least 32 (the init patch size)");
      require(c.max_radius > 0 && c.max_radius < c.grid_size / 2.0, r.field("max_radius"), "must be in (0, grid_size/2)");
      require(c.dt > 0, r.field("dt"), "must be positive");
      break;
    }
    case SubstrateId::Boids: {
      auto& c = s.boids;
      r.get("boids", c.boids);
      r.get("neighbours", c.neighbours);
      r.get("hidden", c.hidden);
      r.get("speed", c.speed);
      r.get("max_turn", c.max_turn);
      r.get("position_scale", c.position_scale);
      r.get("render_size", c.render_size);
      r.get("glyph_size", c.glyph_size);
      require(c.boids >= 2, r.field("boids"), "must be at least 2");
      require(c.neighbours >= 1 && c.neighbours < c.boids, r.field("neighbours"), "must be in [1, boids)");
      require(c.hidden >= 1, r.field("hidden"), "must be positive");
      require(c.position_scale > 0, r.field("position_scale"), "must be positive");
      break;
    }
    case SubstrateId::ParticleLife: {
      auto& c = s.particle_life;
      r.get("particles", c.particles);
      r.get("types", c.types);
      r.get("cutoff", c.cutoff);
      r.get("damping", c.damping);
      r.get("dt", c.dt);
      r.get("force_factor", c.force_factor);
      r.get("render_size", c.render_size);
      r.get("particle_radius_px", c.particle_radius_px);
      require(c.particles >= 1, r.field("particles"), "must be positive");
      require(c.types >= 1, r.field("types"), "must be positive");
      require(c.cutoff > 0 && c.cutoff <= 0.5, r.field("cutoff"), "must be in (0, 0.5]");
      break;
    }
    case SubstrateId::Nca: {
      auto& c = s.nca;
      r.get("grid_size", c.grid_size);
      r.get("channels", c.channels);
      r.get("filters", c.filters);
      r.get("hidden", c.hidden);
      r.get("dt", c.dt);
      r.get("min_radius", c.min_radius);
      r.get("max_radius", c.max_radius);
      r.get("render_size", c.render_size);
      require(c.channels >= 3, r.field("channels"), "must be at least 3 (RGB)");
      require(c.grid_size >= 4, r.field("grid_size"), "must be at least 4");
      require(0 < c.min_radius && c.min_radius <= c.max_radius, r.field("min_radius"), "must be in (0, max_radius]");
      break;
    }
  }
  int render = 0;
  switch (id) {
    case SubstrateId::LifelikeCa: render = s.ca.render_size; break;
    case SubstrateId::Lenia: render = s.lenia.render_size; break;
    case SubstrateId::Boids: render = s.boids.render_size; break;
    case SubstrateId::ParticleLife: render = s.particle_life.render_size; break;
    case SubstrateId::Nca: render = s.nca.render_size; break;
  }
  require(render >= 1, r.field("render_size"), "must be positive");
  r.finish();
}

}  // namespace

std::string_view to_string(Preset preset) { return preset == Preset::Desk ? "desk" : "paper"; }

Preset preset_from_string(const std::string& name) {
  if (name == "desk") return Preset::Desk;
  if (name == "paper") return Preset::Paper;
  throw ConfigError("/preset", "must be \"desk\" or \"paper\", got \"" + name + "\"");
}

Json preset_defaults(Preset preset, SubstrateId substrate) {
  const bool desk = preset == Preset::Desk;
  const int steps = desk ? desk_steps(substrate) : paper_steps(substrate);
  Json j;
  j["preset"] = std::string(to_string(preset));
  j["substrate"] = std::string(to_string(substrate));
  j["substrate_params"] = substrate_params(preset, substrate);
  j["embedder"] = {{"backend", desk ? "pixel" : "sidecar"}, {"pixel_grid", 8}, {"address", ""}, {"cache", true}};
  j["targets"] = Json::array();
  j["rollout"] = {{"steps", steps}, {"captures", substrate == SubstrateId::LifelikeCa ? 32 : 16}};
  j["optimizer"] = {{"population", 16},
                    {"sigma", 0.1},
                    {"generations", desk ? 32 : 10000},
                    {"checkpoint_every", desk ? 8 : 100},
                    {"center", "default"}};
  j["enumerate"] = {{"seeds", desk ? 4 : 256}, {"steps", desk ? 128 : 2048}, {"subsample", 32},
                    {"top_k", 8},             {"strip_frames", 8},          {"first_rule", 0},
                    {"rule_count", 1 << 18},  {"histogram_bins", 50}};
  j["illuminate"] = {{"capacity", desk ? 256 : 8192},
                     {"iterations", desk ? 500 : 100000},
                     {"batch", 32},
                     {"mutation_sigma", 0.1},
                     {"log_every", desk ? 10 : 100},
                     {"checkpoint_every", desk ? 50 : 1000},
                     {"init", desk ? "random" : "zeros"},
                     {"init_sigma", 1.0},
                     {"embed_captures", 1},
                     {"atlas_grid", desk ? 8 : 16},
                     {"atlas_tile", desk ? 64 : 128},
                     {"max_divergence_fraction", 0.5}};
  j["quantify"] = {{"analysis", "interpolate"}, {"theta_a", ""},      {"theta_b", ""},
                   {"reference", "b"},          {"points", 11},       {"deltas", Json::array()},
                   {"dims", Json::array()},     {"window", 4},        {"epsilon", 1e-3},
                   {"counts", desk ? Json{50, 100, 200, 400, 800} : Json{100, 250, 500, 1000, 2000, 5000}}};
  j["atlas"] = {{"archive", ""}, {"layout", ""}, {"grid", 8}, {"tile", 64}};
  j["seed"] = 0;
  j["output_dir"] = "runs/latest";
  return j;
}

std::uint64_t RunConfig::digest() const {
  Json copy = resolved;
  copy.erase("output_dir");
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : copy.dump()) h = (h ^ c) * 1099511628211ull;
  return h;
}

RunConfig resolve_config(const Json& user, std::optional<Preset> preset_override) {
  if (!user.is_object()) throw ConfigError("/", "expected an object");
  Preset preset = Preset::Desk;
  if (preset_override) {
    preset = *preset_override;
  } else if (user.contains("preset")) {
    require(user["preset"].is_string(), "/preset", "must be a string");
    preset = preset_from_string(user["preset"].get<std::string>());
  }
  require(user.contains("substrate"), "/substrate", "is required");
  require(user["substrate"].is_string(), "/substrate", "must be a string");
  SubstrateId id;
  try {
    id = substrate_from_string(user["substrate"].get<std::string>());
  } catch (const std::exception&) {
    throw ConfigError("/substrate", "unknown substrate \"" + user["substrate"].get<std::string>() + "\"");
  }

  Json merged = preset_defaults(preset, id);
  Json patch = user;
  patch["preset"] = std::string(to_string(preset));
  // Arrays are replaced wholesale by merge_patch, which is what targets/deltas/counts want.
  merged.merge_patch(patch);

  RunConfig cfg;
  cfg.preset = preset;
  cfg.substrate = id;
  cfg.resolved = merged;

  Reader root(merged, "");
  std::string ignored;
  root.get("preset", ignored);
  root.get("substrate", ignored);
  root.get("seed", cfg.seed);
  root.get("output_dir", cfg.output_dir);
  require(!cfg.output_dir.empty(), "/output_dir", "must not be empty");

  read_substrate(root.child("substrate_params"), id, cfg.settings);

  {
    Reader r = root.child("embedder");
    r.get("backend", cfg.embedder.backend);
    r.get("pixel_grid", cfg.embedder.pixel_grid);
    r.get("address", cfg.embedder.address);
    r.get("cache", cfg.embedder.cache);
    require(cfg.embedder.backend == "pixel" || cfg.embedder.backend == "sidecar", r.field("backend"),
            "must be \"pixel\" or \"sidecar\"");
    require(cfg.embedder.pixel_grid >= 1, r.field("pixel_grid"), "must be positive");
    require(preset != Preset::Paper || cfg.embedder.backend == "sidecar", r.field("backend"),
            "the paper preset requires the sidecar backend");
    r.finish();
  }

  if (const Json* targets = root.raw("targets")) {
    require(targets->is_array(), "/targets", "must be an array");
    for (std::size_t i = 0; i < targets->size(); ++i) {
      Reader r((*targets)[i], "/targets/" + std::to_string(i));
      TargetEntry e;
      r.get("step", e.step);
      r.get("text", e.text);
      r.get("image", e.image);
      require(e.text.empty() != e.image.empty(), r.path(), "needs exactly one of \"text\" or \"image\"");
      r.finish();
      cfg.targets.push_back(std::move(e));
    }
  }

  {
    Reader r = root.child("rollout");
    r.get("steps", cfg.rollout.steps);
    r.get("captures", cfg.rollout.captures);
    require(cfg.rollout.steps >= 1, r.field("steps"), "must be positive");
    require(cfg.rollout.captures >= 1 && cfg.rollout.captures <= cfg.rollout.steps, r.field("captures"),
            "must be in [1, steps]");
    r.finish();
  }
  {
    Reader r = root.child("optimizer");
    auto& o = cfg.optimizer;
    r.get("population", o.population);
    r.get("sigma", o.sigma);
    r.get("generations", o.generations);
    r.get("checkpoint_every", o.checkpoint_every);
    r.get("center", o.center);
    require(o.population >= 2, r.field("population"), "must be at least 2");
    require(o.sigma > 0, r.field("sigma"), "must be positive");
    require(o.generations >= 0, r.field("generations"), "must be non-negative");
    require(o.checkpoint_every >= 1, r.field("checkpoint_every"), "must be positive");
    r.finish();
  }
  {
    Reader r = root.child("enumerate");
    auto& e = cfg.enumerate;
    r.get("seeds", e.seeds);
    r.get("steps", e.steps);
    r.get("subsample", e.subsample);
    r.get("top_k", e.top_k);
    r.get("strip_frames", e.strip_frames);
    r.get("first_rule", e.first_rule);
    r.get("rule_count", e.rule_count);
    r.get("histogram_bins", e.histogram_bins);
    require(e.seeds >= 1, r.field("seeds"), "must be positive");
    require(e.steps >= 1, r.field("steps"), "must be positive");
    require(e.subsample >= 2 && e.subsample <= e.steps, r.field("subsample"), "must be in [2, steps]");
    require(e.top_k >= 0, r.field("top_k"), "must be non-negative");
    require(e.strip_frames >= 1, r.field("strip_frames"), "must be positive");
    require(e.histogram_bins >= 1, r.field("histogram_bins"), "must be positive");
    require(static_cast<std::uint64_t>(e.first_rule) + e.rule_count <= (1u << 18), r.field("rule_count"),
            "first_rule + rule_count exceeds the 2^18 rule space");
    r.finish();
  }
  {
    Reader r = root.child("illuminate");
    auto& g = cfg.illuminate;
    r.get("capacity", g.capacity);
    r.get("iterations", g.iterations);
    r.get("batch", g.batch);
    r.get("mutation_sigma", g.mutation_sigma);
    r.get("log_every", g.log_every);
    r.get("checkpoint_every", g.checkpoint_every);
    r.get("init", g.init);
    r.get("init_sigma", g.init_sigma);
    r.get("embed_captures", g.embed_captures);
    r.get("atlas_grid", g.atlas_grid);
    r.get("atlas_tile", g.atlas_tile);
    r.get("max_divergence_fraction", g.max_divergence_fraction);
    require(g.capacity >= 3, r.field("capacity"), "must be at least 3");
    require(g.iterations >= 0, r.field("iterations"), "must be non-negative");
    require(g.batch >= 1, r.field("batch"), "must be positive");
    require(g.mutation_sigma >= 0, r.field("mutation_sigma"), "must be non-negative");
    require(g.log_every >= 1, r.field("log_every"), "must be positive");
    require(g.checkpoint_every >= 1, r.field("checkpoint_every"), "must be positive");
    require(g.init == "random" || g.init == "zeros", r.field("init"), "must be \"random\" or \"zeros\"");
    require(g.embed_captures >= 1 && g.embed_captures <= cfg.rollout.steps, r.field("embed_captures"),
            "must be in [1, rollout steps]");
    require(g.atlas_grid >= 1, r.field("atlas_grid"), "must be positive");
    require(g.atlas_tile >= 1, r.field("atlas_tile"), "must be positive");
    require(g.max_divergence_fraction > 0 && g.max_divergence_fraction <= 1, r.field("max_divergence_fraction"),
            "must be in (0, 1]");
    r.finish();
  }
  {
    Reader r = root.child("quantify");
    auto& q = cfg.quantify;
    r.get("analysis", q.analysis);
    r.get("theta_a", q.theta_a);
    r.get("theta_b", q.theta_b);
    r.get("reference", q.reference);
    r.get("points", q.points);
    r.get("deltas", q.deltas);
    r.get("dims", q.dims);
    r.get("window", q.window);
    r.get("epsilon", q.epsilon);
    r.get("counts", q.counts);
    require(q.analysis == "interpolate" || q.analysis == "importance" || q.analysis == "plateau" ||
                q.analysis == "population",
            r.field("analysis"), "must be one of interpolate, importance, plateau, population");
    require(q.reference == "a" || q.reference == "b", r.field("reference"), "must be \"a\" or \"b\"");
    require(q.points >= 2, r.field("points"), "must be at least 2");
    require(q.window >= 1, r.field("window"), "must be positive");
    require(q.analysis != "population" || id == SubstrateId::ParticleLife, r.field("analysis"),
            "population sweeps need the particle_life substrate");
    require(q.analysis != "population" || !q.counts.empty(), r.field("counts"), "must not be empty");
    for (std::size_t i = 0; i < q.counts.size(); ++i)
      require(q.counts[i] >= 1 && (i == 0 || q.counts[i] > q.counts[i - 1]), r.field("counts"),
              "must be positive and strictly increasing");
    r.finish();
  }
  {
    Reader r = root.child("atlas");
    r.get("archive", cfg.atlas.archive);
    r.get("layout", cfg.atlas.layout);
    r.get("grid", cfg.atlas.grid);
    r.get("tile", cfg.atlas.tile);
    require(cfg.atlas.grid >= 1, r.field("grid"), "must be positive");
    require(cfg.atlas.tile >= 1, r.field("tile"), "must be positive");
    r.finish();
  }
  root.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, std::optional<Preset> preset_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot read config file " + path.string());
  Json user;
  try {
    user = Json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("/", std::string("invalid JSON: ") + e.what());
  }
  return resolve_config(user, preset_override);
}

void validate_targets(const RunConfig& config, bool backend_supports_text) {
  require(!config.targets.empty(), "/targets", "a target run needs at least one prompt or target image");
  for (std::size_t i = 0; i < config.targets.size(); ++i) {
    const auto& t = config.targets[i];
    const std::string path = "/targets/" + std::to_string(i);
    require(t.text.empty() || backend_supports_text, path + "/text",
            "the configured embedder cannot embed text; supply an \"image\" target instead");
    require(t.step == -1 || (t.step >= 0 && t.step <= config.rollout.steps), path + "/step",
            "must be in [0, rollout.steps] or -1 for the final step");
  }
}

}  // namespace asal::cli
