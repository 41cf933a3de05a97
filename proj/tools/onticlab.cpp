// onticlab: runs one experiment and writes its report.
//
//   onticlab <experiment> [--config <path>] [--out <path>] [--format csv|json]
//            [--seed N] [--threads N]
//
// Exit status: 0 success, 1 configuration error, 2 numerical failure.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "onticlab/config.hpp"
#include "onticlab/error.hpp"
#include "onticlab/experiment.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on ontological models of quantum states", "onticlab"};
  app.set_version_flag("--version", std::string("onticlab ") + onticlab::kVersion);

  std::string experiment;
  std::string config_path;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  app.add_option("experiment", experiment,
                 "born-check | theorem1 | hidden-roundtrip | theorem2 | sharpen-sweep")
      ->required();
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--out", out_path, "output file (default: standard output)");
  app.add_option("--format", format, "csv or json");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads for grid integrals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  using namespace onticlab;
  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : parse_config(config_path);
    apply_setting(cfg, "experiment", experiment);
    if (!out_path.empty()) apply_setting(cfg, "output_path", out_path);
    if (!format.empty()) apply_setting(cfg, "format", format);
    if (*seed_opt) cfg.seed = seed;
    if (*threads_opt) apply_setting(cfg, "threads", std::to_string(threads));
    run(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "onticlab: config error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "onticlab: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
