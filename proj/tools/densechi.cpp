#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "densechi/campaigns.hpp"
#include "densechi/config.hpp"
#include "densechi/error.hpp"

namespace {

using densechi::ExperimentConfig;

struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
};

// Command-line flags map one-to-one onto config keys.
constexpr FlagSpec kFlags[] = {
    {"--n", "n", "vertex count (n' for coupling-sprinkle)"},
    {"--q", "q", "literal edge probability, overrides the q family"},
    {"--q-coeff", "q_coeff", "family coefficient c in q = c n^-a"},
    {"--q-exp", "q_exp", "family exponent a in q = c n^-a"},
    {"--trials", "trials", "number of trials"},
    {"--seed", "seed", "master seed"},
    {"--threads", "threads", "worker threads (default: DENSECHI_THREADS or 1)"},
    {"--delta", "delta", "fraction threshold for the D(T) audit"},
    {"--eps", "eps", "coupling step parameter"},
    {"--hall-c", "hall_c", "Hall witnesses with |T| <= C/q count as small"},
    {"--equipartition-attempts", "equipartition_attempts", "random equipartitions tried per trial"},
    {"--inner-samples", "inner_samples", "Monte Carlo completions per martingale estimate"},
    {"--samples-per-size", "samples_per_size", "sampled sets per size in the property audit"},
    {"--triangle-budget", "triangle_budget", "branch nodes per conflict component"},
    {"--packing-budget", "packing_budget", "branch nodes of the exact packing search"},
    {"--output", "output", "output path (default: standard output)"},
    {"--format", "format", "json or csv"},
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw densechi::ParameterError("cannot open output '" + path + "'");
  out << text;
}

int run(const ExperimentConfig& cfg) {
  const auto result = densechi::run_campaign(cfg);
  const std::string json = densechi::render_json(result);
  if (cfg.format == "csv") {
    const std::string csv = densechi::render_csv(result);
    if (cfg.output.empty()) {
      std::cout << csv;
      std::cerr << json;
    } else {
      write_text(cfg.output, csv);
      write_text(cfg.output + ".summary.json", json);
    }
  } else if (cfg.output.empty()) {
    std::cout << json;
  } else {
    write_text(cfg.output, json);
  }
  if (result.partial) std::cerr << "densechi: solver budget exceeded in some trials; report is partial\n";
  return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dense random graph chromatic number laboratory"};
  app.set_version_flag("--version", std::string(DENSECHI_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::App*> commands;
  for (const auto& name : densechi::campaign_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key=value config file; flags override it");
    for (const auto& f : kFlags) sub->add_option(f.flag, flag_values[f.key], f.help);
    commands[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig cfg;
    cfg.threads = densechi::default_threads();
    if (!config_path.empty()) cfg = densechi::load_config_file(config_path, cfg);
    for (const auto& [name, sub] : commands)
      if (sub->parsed()) cfg.subcommand = name;
    for (const auto& f : kFlags)
      if (commands[cfg.subcommand]->count(f.flag) > 0) cfg.set(f.key, flag_values[f.key]);
    return run(cfg);
  } catch (const densechi::ParameterError& e) {
    std::cerr << "densechi: " << e.what() << '\n';
    return 2;
  } catch (const densechi::BudgetExceeded& e) {
    std::cerr << "densechi: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "densechi: " << e.what() << '\n';
    return 1;
  }
}
