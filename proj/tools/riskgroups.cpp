// Command-line front end: generate, optimize, cv, report.
#include <iostream>

#include "CLI11.hpp"
#include "riskgroups/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Learn diagnostic risk groups for expenditure prediction by MCMC search over code partitions"};
  app.require_subcommand(1, 1);

  riskgroups::CommandOptions options;
  std::string config, out;
  std::uint64_t seed = 0;
  int threads = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* c = cmd->add_option("--config", config, "Run configuration (JSON)");
    if (needs_config) c->required();
    cmd->add_option("--out", out, "Output directory");
    cmd->add_option("--seed", seed, "Override the seed of this command");
    cmd->add_option("--threads", threads, "Worker threads (default: $RISKGROUPS_THREADS, then the config)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--quiet", options.quiet, "Only print warnings and errors");
  };
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset with a planted partition");
  auto* optimize = app.add_subcommand("optimize", "Run the (k, lambda, T) grid of Metropolis-Hastings chains");
  auto* cv = app.add_subcommand("cv", "Cross-validate the specification ladder");
  auto* report = app.add_subcommand("report", "Render a markdown report of an optimize run");
  add_common(generate, true);
  add_common(optimize, true);
  add_common(cv, true);
  add_common(report, false);
  report->add_option("run_dir", out, "Run directory (same as --out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : riskgroups::kExitUsage;
  }

  auto* chosen = app.get_subcommands().front();
  if (!config.empty()) options.config = config;
  if (!out.empty()) options.out = out;
  if (chosen->count("--seed")) options.seed = seed;
  if (chosen->count("--threads")) options.threads = threads;
  if (chosen == report && !options.out && !options.config) {
    std::cerr << "error: report needs a run directory (positional or --out) or --config\n";
    return riskgroups::kExitUsage;
  }
  return riskgroups::run_command(chosen->get_name(), options, std::cout, std::cerr);
}
