// Command-line frontend: wires JSON experiment configs to the library and
// serializes reports.  See README for the config schema per command.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "csdc/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"companion-surface laboratory for the P3P danger cylinder"};
  app.set_version_flag("--version", csdc::version_string());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  unsigned threads = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;

  const char* commands[] = {"sweep", "fit", "member", "cross", "map", "fold", "rank",
                            "rieck-report"};
  const char* descr[] = {
      "sweep the danger cylinder and emit companion samples",
      "fit an implicit polynomial to companion samples",
      "classify viewpoints against the danger cylinder and its companion surface",
      "detect and classify solution-count crossings along a path",
      "rasterize the P3P solution count over a plane slice",
      "measure the square-root fold scaling at a danger-cylinder point",
      "singular-value analysis of the angle/distance differential",
      "survey the printed entity identities and the P-constraint diagnostic"};

  for (int i = 0; i < 8; ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], descr[i]);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker thread cap");
    sub->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
      seed_set = true;
    });
  }

  CLI11_PARSE(app, argc, argv);

  std::string command = app.get_subcommands().front()->get_name();
  std::ifstream is(config_path);
  if (!is) {
    std::cerr << "error: cannot open config file '" << config_path << "'\n";
    return csdc::kExitConfigInvalid;
  }
  std::stringstream buf;
  buf << is.rdbuf();

  csdc::RunOptions opts;
  opts.out_dir = out_dir;
  opts.threads = threads;
  if (seed_set) opts.seed_override = seed;

  try {
    return csdc::run_command(command, buf.str(), opts);
  } catch (const csdc::ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return csdc::kExitConfigInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return csdc::kExitExperimentFailed;
  }
}
