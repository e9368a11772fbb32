#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace densechi {

/// Resolved settings for one experiment run. Text form is key=value, one
/// per line, '#' starting a comment.
struct ExperimentConfig {
  std::string subcommand;
  std::size_t n = 1000;
  std::optional<double> q;  // literal edge probability; overrides the family
  double q_coeff = 1.0;
  double q_exp = 0.75;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  double delta = 0.1;
  double eps = 0.1;
  double hall_c = 10.0;
  int equipartition_attempts = 1;
  std::size_t inner_samples = 200;
  std::size_t samples_per_size = 200;
  std::uint64_t triangle_budget = 1'000'000;
  std::uint64_t packing_budget = 20'000;
  std::string output;  // empty: standard output
  std::string format = "json";

  /// q if given, else q_coeff * n^{-q_exp}.
  double resolved_q() const;
  double q_at(double m) const;

  void validate() const;

  /// Sets one key from its text value; throws ParameterError for unknown
  /// keys or unparsable values.
  void set(const std::string& key, const std::string& value);

  /// Every key in a fixed order, values in round-trip form.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});
std::string serialize_config(const ExperimentConfig& c);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

/// Default worker count: the DENSECHI_THREADS environment variable, else 1.
std::size_t default_threads();

}  // namespace densechi
