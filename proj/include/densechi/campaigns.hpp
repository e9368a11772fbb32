#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "densechi/config.hpp"

namespace densechi {

/// Outcome of one experiment campaign. `summary` is the full JSON document
/// (version, resolved config, run metadata, results); the CSV table holds one
/// row per trial where the campaign has trials.
struct CampaignResult {
  nlohmann::json summary;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  bool partial = false;  // some trial exceeded a solver budget

  int exit_code() const { return partial ? 3 : 0; }
};

const std::vector<std::string>& campaign_names();

/// Runs cfg.subcommand. Throws ParameterError for an unknown subcommand or an
/// invalid config. Trials run on cfg.threads workers; trial i always draws
/// from stream i of cfg.seed, so results do not depend on the thread count.
CampaignResult run_campaign(const ExperimentConfig& cfg);

/// The summary without the "run" block (thread count and timestamp), which is
/// the part that must be identical across reruns.
nlohmann::json deterministic_view(const nlohmann::json& summary);

/// '#'-prefixed version and config lines, the header row, then the rows.
std::string render_csv(const CampaignResult& r);
std::string render_json(const CampaignResult& r);

/// Fixed-format CSV cells: 17 significant digits for doubles.
std::string csv_cell(double x);
std::string csv_cell(std::uint64_t x);
std::string csv_cell(bool x);

}  // namespace densechi
