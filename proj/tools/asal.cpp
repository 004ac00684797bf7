// Command-line entry point: asal target|enumerate|illuminate|quantify|atlas --config <file>

#include <CLI11.hpp>

#include <iostream>

#include "asal/cli/commands.hpp"
#include "asal/cli/config.hpp"
#include "asal/core/errors.hpp"
#include "asal/core/parallel.hpp"

int main(int argc, char** argv) {
  using namespace asal::cli;
  CLI::App app{"asal: search simulation substrates through image embeddings"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset;
  int workers = asal::default_workers();
  std::string resume;
  bool quiet = false;

  const auto add_common = [&](CLI::App* sub, bool resumable) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--preset", preset, "desk or paper; overrides the config's preset")
        ->check(CLI::IsMember({"desk", "paper"}));
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    if (resumable) sub->add_option("--resume", resume, "checkpoint to resume from")->check(CLI::ExistingFile);
    sub->add_flag("--quiet", quiet, "suppress progress output");
  };
  auto* target = app.add_subcommand("target", "Sep-CMA-ES toward prompts or target images");
  auto* enumerate = app.add_subcommand("enumerate", "score every Life-like rule for open-endedness");
  auto* illuminate = app.add_subcommand("illuminate", "nearest-neighbour diversity search");
  auto* quantify = app.add_subcommand("quantify", "interpolation, importance, plateau or population sweeps");
  auto* atlas = app.add_subcommand("atlas", "project an archive and render its atlas");
  add_common(target, true);
  add_common(enumerate, false);
  add_common(illuminate, true);
  add_common(quantify, false);
  add_common(atlas, false);

  CLI11_PARSE(app, argc, argv);

  try {
    std::optional<Preset> preset_override;
    if (!preset.empty()) preset_override = preset_from_string(preset);
    const RunConfig config = load_config(config_path, preset_override);
    CommandOptions options;
    options.workers = workers;
    if (!resume.empty()) options.resume = resume;
    options.log = quiet ? nullptr : &std::cerr;

    std::filesystem::path out;
    if (target->parsed()) out = cmd_target(config, options);
    else if (enumerate->parsed()) out = cmd_enumerate(config, options);
    else if (illuminate->parsed()) out = cmd_illuminate(config, options);
    else if (quantify->parsed()) out = cmd_quantify(config, options);
    else out = cmd_atlas(config, options);
    std::cout << out.string() << '\n';
    return 0;
  } catch (const asal::ConfigError& e) {
    std::cerr << "config error at " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
