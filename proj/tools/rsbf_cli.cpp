// Experiment driver: one subcommand per scenario, each reading a JSON
// ExperimentConfig and writing a CSV table.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rsbf/harness.hpp"
#include "rsbf/json_io.hpp"

namespace {

struct RunArgs {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
};

int run(rsbf::Scenario scenario, const RunArgs& args) {
  rsbf::ExperimentConfig cfg =
      args.config_path.empty() ? rsbf::ExperimentConfig{} : rsbf::load_experiment_config(args.config_path);
  cfg.scenario = scenario;
  if (args.seed) cfg.master_seed = *args.seed;
  if (!args.out_path.empty()) cfg.output_path = args.out_path;
  cfg.validate();

  const rsbf::CsvTable table = rsbf::run_scenario(cfg);
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    std::cout << table.to_string();
  } else {
    table.write(cfg.output_path);
    std::cerr << "wrote " << table.rows().size() << " rows to " << cfg.output_path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized-sketching RZF beamforming experiments"};
  app.require_subcommand(1);

  RunArgs args;
  rsbf::Scenario chosen = rsbf::Scenario::sampling_compare;
  const std::pair<const char*, const char*> commands[] = {
      {"sampling-compare", "solution error vs sketch size for each sampling scheme"},
      {"snr-sweep", "average per-user rate vs SNR (SNR = P / sigma^2)"},
      {"convergence", "solution error and error bounds vs iteration"},
      {"sumrate-convergence", "sum-rate error and sum-rate bounds vs iteration"},
      {"bench", "direct solve vs sketched solve timings"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config_path, "ExperimentConfig JSON file")->check(CLI::ExistingFile);
    sub->add_option("--out", args.out_path, "output CSV path ('-' for stdout)");
    sub->add_option("--seed", args.seed, "override the config master seed");
    sub->callback([&chosen, n = std::string(name)] { chosen = rsbf::parse_scenario(n); });
  }

  CLI::App* dump = app.add_subcommand("default-config", "print the default ExperimentConfig as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (dump->parsed()) {
      std::cout << rsbf::to_json(rsbf::ExperimentConfig{}).dump(2) << '\n';
      return 0;
    }
    return run(chosen, args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
