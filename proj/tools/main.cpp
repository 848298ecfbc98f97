#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include "fdlab/errors.hpp"
#include "runner/config.hpp"
#include "runner/scenarios.hpp"

namespace {

constexpr int kAssertionExit = 1;
constexpr int kConfigExit = 2;
constexpr int kSolverExit = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fdlab experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool check_only = false;
  int scale = 1;

  CLI::App* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", config_path, "path to the experiment config")->required();
  run->add_option("--out", out_dir, "output directory (overrides output.dir)");
  run->add_flag("--check", check_only, "evaluate the assertions without writing artifacts");
  run->add_option("--resolution-scale", scale, "multiply grid and basis sizes by k")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  using namespace fdlab;
  try {
    runner::ExperimentConfig config = runner::load_config(config_path);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (scale != 1) runner::apply_resolution_scale(config, scale);

    const runner::RunResult result = runner::run_experiment(config, !check_only);
    for (const auto& c : result.checks) {
      std::printf("%s  %s: %s\n", c.passed ? "ok  " : "FAIL", c.name.c_str(), c.detail.c_str());
    }
    if (!check_only) {
      std::printf("artifacts written to %s\n", config.out_dir.string().c_str());
    }
    runner::enforce(result);
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kConfigExit;
  } catch (const AssertionFailure& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kAssertionExit;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kSolverExit;
  }
}
