// Command-line experiment runner. `run` executes a config grid and writes
// CSV/JSON reports; `validate` checks a config without running anything.
// Exit codes: 0 success, 2 config error, 1 runtime fault.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "gaugeoco/harness.hpp"

namespace {

int env_threads() {
  if (const char* env = std::getenv("GAUGE_OCO_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::string env_out_dir() {
  if (const char* env = std::getenv("GAUGE_OCO_OUT")) return env;
  return ".";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gauge-projection OCO benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = env_out_dir();
  int threads = env_threads();
  std::string format = "csv";
  bool timing = false;

  CLI::App* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("config", config_path, "path to the JSON config")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--threads", threads, "worker threads for the grid");
  run->add_option("--format", format, "csv | json | both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  run->add_flag("--timing", timing,
                "emit measured wall times (breaks byte-stable output)");

  CLI::App* validate = app.add_subcommand("validate", "check a config and exit");
  validate->add_option("config", config_path, "path to the JSON config")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      gaugeoco::ExperimentConfig::from_file(config_path);
      std::cout << "config ok\n";
      return 0;
    }

    const auto config = gaugeoco::ExperimentConfig::from_file(config_path);
    const auto report = gaugeoco::run_experiment(config, threads);

    gaugeoco::EmitOptions options;
    options.out_dir = out_dir;
    options.write_csv = format == "csv" || format == "both";
    options.write_json = format == "json" || format == "both";
    options.timing = timing;
    const auto files = gaugeoco::emit(report, config, options);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    return 0;
  } catch (const gaugeoco::UsageError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime fault: " << e.what() << "\n";
    return 1;
  }
}
