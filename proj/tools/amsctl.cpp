#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ams/cli/commands.hpp"
#include "ams/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adaptive multilevel splitting workbench"};
  app.require_subcommand(1);

  ams::cli::Overrides overrides;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;

  using Command = int (*)(const ams::io::Json&, std::ostream&);
  const std::vector<std::tuple<std::string, std::string, Command>> commands = {
      {"run-ams", "Independent AMS realizations: records.jsonl and summary.csv", ams::cli::cmd_run_ams},
      {"run-dns", "Direct simulation estimate of the crossing probability", ams::cli::cmd_run_dns},
      {"committor", "Committor table (1-D) or grid file (2-D)", ams::cli::cmd_committor},
      {"ensemble-sweep", "AMS ensembles over the N, dt and beta lists with convergence fits",
       ams::cli::cmd_ensemble_sweep},
      {"three-level", "Tables of the three-level Markov model", ams::cli::cmd_three_level},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", overrides.configPath, "JSON configuration or a manifest.json to rerun")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Master seed (overrides masterSeed)");
    sub->add_option("--threads", threads, "Worker threads (overrides threads)")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "Output directory (overrides output)");
    subs.emplace_back(sub, fn);
  }
  std::string referencePath;
  CLI::App* defaults = app.add_subcommand("defaults", "Print or write the configuration reference page");
  defaults->add_option("--write", referencePath, "Write the page to this path instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (defaults->parsed()) {
      const std::string page = ams::io::config_reference_markdown();
      if (referencePath.empty()) {
        std::cout << page;
      } else {
        std::ofstream(referencePath, std::ios::binary) << page;
      }
      return ams::cli::kExitOk;
    }
    for (const auto& [sub, fn] : subs) {
      if (!sub->parsed()) continue;
      if (sub->count("--seed")) overrides.seed = seed;
      if (sub->count("--threads")) overrides.threads = threads;
      if (sub->count("--out")) overrides.out = out;
      return fn(ams::cli::prepare_config(overrides), std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ams::cli::kExitError;
  }
  return ams::cli::kExitError;
}
