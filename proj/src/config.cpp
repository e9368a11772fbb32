#include "densechi/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "densechi/error.hpp"

namespace densechi {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty())
    throw ParameterError("config: cannot parse value '" + text + "' for key '" + key + "'");
  return value;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::logic_error("format_double: buffer too small");
  return std::string(buf, ptr);
}

double ExperimentConfig::q_at(double m) const { return q ? *q : q_coeff * std::pow(m, -q_exp); }

double ExperimentConfig::resolved_q() const { return q_at(static_cast<double>(n)); }

void ExperimentConfig::validate() const {
  require(n >= 1, "config: n must be positive");
  require(trials >= 1, "config: trials must be positive");
  require(threads >= 1, "config: threads must be positive");
  const double qr = resolved_q();
  require(qr >= 0.0 && qr <= 1.0, "config: resolved q " + format_double(qr) + " lies outside [0,1]");
  require(q_coeff > 0.0 && q_exp > 0.0, "config: q family needs positive coefficient and exponent");
  require(delta >= 0.0 && delta <= 1.0, "config: delta must lie in [0,1]");
  require(eps > 0.0, "config: eps must be positive");
  require(hall_c > 0.0, "config: hall_c must be positive");
  require(equipartition_attempts >= 1, "config: equipartition_attempts must be positive");
  require(inner_samples >= 1 && samples_per_size >= 1, "config: sample counts must be positive");
  require(format == "json" || format == "csv", "config: format must be json or csv");
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "subcommand")
    subcommand = value;
  else if (key == "n")
    n = parse_number<std::size_t>(key, value);
  else if (key == "q")
    q = value.empty() ? std::nullopt : std::optional<double>(parse_number<double>(key, value));
  else if (key == "q_coeff")
    q_coeff = parse_number<double>(key, value);
  else if (key == "q_exp")
    q_exp = parse_number<double>(key, value);
  else if (key == "trials")
    trials = parse_number<std::size_t>(key, value);
  else if (key == "seed")
    seed = parse_number<std::uint64_t>(key, value);
  else if (key == "threads")
    threads = parse_number<std::size_t>(key, value);
  else if (key == "delta")
    delta = parse_number<double>(key, value);
  else if (key == "eps")
    eps = parse_number<double>(key, value);
  else if (key == "hall_c")
    hall_c = parse_number<double>(key, value);
  else if (key == "equipartition_attempts")
    equipartition_attempts = parse_number<int>(key, value);
  else if (key == "inner_samples")
    inner_samples = parse_number<std::size_t>(key, value);
  else if (key == "samples_per_size")
    samples_per_size = parse_number<std::size_t>(key, value);
  else if (key == "triangle_budget")
    triangle_budget = parse_number<std::uint64_t>(key, value);
  else if (key == "packing_budget")
    packing_budget = parse_number<std::uint64_t>(key, value);
  else if (key == "output")
    output = value;
  else if (key == "format")
    format = value;
  else
    throw ParameterError("config: unknown key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  return {{"subcommand", subcommand},
          {"n", std::to_string(n)},
          {"q", q ? format_double(*q) : std::string()},
          {"q_coeff", format_double(q_coeff)},
          {"q_exp", format_double(q_exp)},
          {"trials", std::to_string(trials)},
          {"seed", std::to_string(seed)},
          {"threads", std::to_string(threads)},
          {"delta", format_double(delta)},
          {"eps", format_double(eps)},
          {"hall_c", format_double(hall_c)},
          {"equipartition_attempts", std::to_string(equipartition_attempts)},
          {"inner_samples", std::to_string(inner_samples)},
          {"samples_per_size", std::to_string(samples_per_size)},
          {"triangle_budget", std::to_string(triangle_budget)},
          {"packing_budget", std::to_string(packing_budget)},
          {"output", output},
          {"format", format}};
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(lineno) + ": expected key=value");
    base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ParameterError("config: cannot open '" + path + "'");
  return parse_config(in, std::move(base));
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  for (const auto& [k, v] : c.entries()) out << k << '=' << v << '\n';
  return out.str();
}

std::size_t default_threads() {
  if (const char* env = std::getenv("DENSECHI_THREADS")) {
    const std::string text = env;
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc{} && ptr == text.data() + text.size() && v >= 1) return v;
  }
  return 1;
}

}  // namespace densechi
