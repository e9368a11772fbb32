// Runs every acceptance criterion at its stated scale and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "densechi/campaigns.hpp"
#include "densechi/config.hpp"
#include "densechi/oracles.hpp"

using namespace densechi;
using nlohmann::json;

namespace {

// Pinned tolerances.
constexpr std::size_t kOracleTriangleGraphs = 10'000;
constexpr std::size_t kOracleTriangleMaxN = 12;
constexpr std::size_t kOracleChiGraphs = 1'000;
constexpr std::size_t kOracleChiMaxN = 14;
constexpr std::size_t kStructureNearPerfectMin = 90;  // of 100
constexpr double kChiAgreeFractionMin = 0.90;
constexpr double kMomentZMax = 4.0;
constexpr double kYMeanSeSlack = 3.0;
constexpr double kVarRatioLo = 0.8, kVarRatioHi = 1.2;
constexpr double kSkewMax = 0.25;
constexpr double kKsMax = 0.06;
constexpr double kFarFractionMax = 0.05;
constexpr double kIqrOverScaleMin = 0.2;
constexpr double kIdentityZMax = 4.0;
constexpr double kSprinkleZMax = 3.0;
constexpr std::size_t kSingleStepInstances = 1'000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ExperimentConfig make(const std::string& sub, std::size_t n, std::optional<double> q, std::size_t trials) {
  ExperimentConfig c;
  c.subcommand = sub;
  c.n = n;
  c.q = q;
  c.trials = trials;
  c.seed = 1;
  c.threads = default_threads();
  return c;
}

// Campaign summaries kept for the cross-campaign sandwich check.
std::vector<std::pair<std::string, json>> g_sampled;

json run_results(const ExperimentConfig& c) {
  const CampaignResult r = run_campaign(c);
  if (r.partial) throw std::runtime_error(c.subcommand + ": a trial exceeded its solver budget");
  const json& res = r.summary.at("results");
  if (res.contains("sandwich")) g_sampled.emplace_back(c.subcommand, res);
  return res;
}

Outcome oracle(const OracleCheck& c) {
  std::string d = c.name + " " + std::to_string(c.agreed) + "/" + std::to_string(c.checked) + " agree";
  if (!c.first_mismatch.empty()) d += "; first mismatch:\n" + c.first_mismatch;
  return {c.passed(), d};
}

Outcome triangle_oracle() {
  return oracle(check_triangle_matching(kOracleTriangleGraphs, kOracleTriangleMaxN, 1));
}

Outcome chromatic_oracle() { return oracle(check_packing_chi(kOracleChiGraphs, kOracleChiMaxN, 1)); }

Outcome structure_near_perfect() {
  const json r = run_results(make("structure", 50'000, 4.5e-4, 100));
  const std::size_t near = r.at("near_perfect"), done = r.at("completed");
  return {done == 100 && near >= kStructureNearPerfectMin,
          std::to_string(near) + "/" + std::to_string(done) + " near-perfect (need >= 90/100)"};
}

Outcome formula_agreement() {
  const json r = run_results(make("chi-verify", 5000, 2.5e-3, 200));
  const double frac = r.at("agree_fraction");
  const std::size_t violations = r.at("bound_violations_when_near_perfect");
  const bool reached = r.at("target_reached");
  return {reached && frac >= kChiAgreeFractionMin && violations == 0,
          "agree " + std::to_string(r.at("agree").get<std::size_t>()) + "/" +
              std::to_string(r.at("k4_free_trials").get<std::size_t>()) + fmt(" (%.3f)", frac) +
              ", bound violations when near-perfect " + std::to_string(violations) + ", K4 skipped " +
              std::to_string(r.at("k4_skipped").get<std::size_t>())};
}

json g_triangles, g_clt;

Outcome moment_oracle() {
  g_triangles = run_results(make("triangles", 2000, 2.5e-3, 2000));
  const json& m = g_triangles.at("moments");
  const double zm = m.at("x_mean_z"), zv = m.at("x_variance_z");
  const double y_mean = g_triangles.at("y").at("mean");
  const double y_limit = m.at("y_mean_bound").get<double>() + kYMeanSeSlack * m.at("y_mean_se").get<double>();
  return {std::abs(zm) <= kMomentZMax && std::abs(zv) <= kMomentZMax && y_mean <= y_limit,
          fmt("x mean z %.3f", zm) + fmt(", x variance z %.3f", zv) + fmt(", y mean %.3f", y_mean) +
              fmt(" <= %.3f", y_limit)};
}

Outcome variance_scale() {
  g_clt = run_results(make("clt", 20'000, 4e-4, 2000));
  const double ratio = g_clt.at("clt").at("var_ratio");
  return {ratio >= kVarRatioLo && ratio <= kVarRatioHi, fmt("Var(s)/Var(x) = %.4f in [0.8, 1.2]", ratio)};
}

Outcome clt_diagnostic() {
  const double skew = g_clt.at("clt").at("skew"), ks = g_clt.at("clt").at("ks");
  return {std::abs(skew) <= kSkewMax && ks <= kKsMax, fmt("skew %.4f", skew) + fmt(", KS %.4f", ks)};
}

Outcome concentration_scale() {
  const json& c = g_clt.at("concentration");
  const double far = c.at("far_fraction"), iqr = c.at("iqr_over_scale");
  return {far <= kFarFractionMax && iqr >= kIqrOverScaleMin,
          fmt("far fraction %.4f", far) + fmt(", IQR / (nq)^1.5 = %.4f", iqr)};
}

Outcome planted_coupling() {
  const json r = run_results(make("coupling-plant", 300, 0.02, 10'000));
  const std::size_t plus = r.at("plus_one_holds"), trials = r.at("completed");
  const double z = r.at("identity_z");
  return {trials == 10'000 && plus == trials && std::abs(z) <= kIdentityZMax,
          "+1 gap " + std::to_string(plus) + "/" + std::to_string(trials) + fmt(", reweighting z %.3f", z)};
}

Outcome sprinkling_coupling() {
  ExperimentConfig c = make("coupling-sprinkle", 50'000, std::nullopt, 50);
  c.q_coeff = 1.0;
  c.q_exp = 0.75;
  const json r = run_results(c);
  const bool law = r.at("union_law_exact");
  const double z = r.at("z");
  const std::size_t ok = r.at("s_diff_ok"), trials = r.at("completed");
  return {trials == 50 && law && std::abs(z) <= kSprinkleZMax && ok == trials,
          std::string("union law exact ") + (law ? "yes" : "no") + fmt(", new-triangle z %.3f", z) +
              ", s(G)-s(H) <= new " + std::to_string(ok) + "/" + std::to_string(trials)};
}

Outcome martingale_exactness() {
  ExperimentConfig c = make("martingale", 16, 0.3, kSingleStepInstances);
  const json r = run_results(c);
  const json& ex = r.at("exhaustive");
  const json& ss = r.at("single_step");
  bool pass = ex.at("martingale_failures") == 0 && ex.at("increment_failures") == 0 &&
              ex.at("telescoping_failures") == 0 && ex.at("tally_mismatches") == 0 && ex.at("max_vertices") == 5;
  pass = pass && ss.at("instances") == kSingleStepInstances && ss.at("increments_ok") == kSingleStepInstances &&
         ss.at("table_matches") == kSingleStepInstances;
  std::size_t hand_ok = 0;
  for (const auto& h : r.at("hand_values")) hand_ok += h.at("agree_12_digits").get<bool>();
  pass = pass && hand_ok == r.at("hand_values").size() && hand_ok == 3;
  return {pass, "exhaustive graphs " + std::to_string(ex.at("graphs").get<std::size_t>()) + " (n <= 5) failures " +
                    std::to_string(ex.at("telescoping_failures").get<std::size_t>() +
                                   ex.at("increment_failures").get<std::size_t>() +
                                   ex.at("martingale_failures").get<std::size_t>()) +
                    ", single-step " + std::to_string(ss.at("increments_ok").get<std::size_t>()) + "/" +
                    std::to_string(ss.at("instances").get<std::size_t>()) + ", hand values " +
                    std::to_string(hand_ok) + "/3"};
}

Outcome sandwich_everywhere() {
  std::size_t checked = 0, violations = 0;
  std::string names;
  for (const auto& [name, res] : g_sampled) {
    checked += res.at("sandwich").at("checked").get<std::size_t>();
    violations += res.at("sandwich").at("violations").get<std::size_t>();
    names += (names.empty() ? "" : ",") + name;
  }
  return {checked > 0 && violations == 0, std::to_string(violations) + " violations in " + std::to_string(checked) +
                                              " sampled graphs across " + names};
}

Outcome determinism() {
  std::vector<ExperimentConfig> configs;
  for (const auto& sub : campaign_names()) {
    ExperimentConfig c = make(sub, 150, 0.05, 16);
    c.seed = 2024;
    c.inner_samples = 20;
    c.samples_per_size = 10;
    if (sub == "martingale") c.n = 12;
    if (sub == "coupling-sprinkle") {
      c.q.reset();
      c.n = 3000;
    }
    configs.push_back(c);
  }
  std::size_t identical = 0;
  std::string differing;
  for (auto& c : configs) {
    std::string reference;
    bool same = true;
    for (std::size_t threads : {1, 4, 16}) {
      c.threads = threads;
      const CampaignResult r = run_campaign(c);
      // summary without the run block, then every CSV row
      std::string body = deterministic_view(r.summary).dump(2);
      for (const auto& row : r.csv_rows)
        for (const auto& cell : row) body += cell + ',';
      if (threads == 1)
        reference = body;
      else
        same = same && body == reference;
    }
    if (same)
      ++identical;
    else
      differing += " " + c.subcommand;
  }
  return {identical == configs.size(), std::to_string(identical) + "/" + std::to_string(configs.size()) +
                                           " campaigns identical at 1, 4 and 16 threads" + differing};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  // Criterion 5 aggregates over the sampling campaigns, so it runs after them.
  const std::vector<Criterion> order{
      {1, "oracle equivalence: triangle matching", triangle_oracle},
      {2, "oracle equivalence: chromatic number", chromatic_oracle},
      {3, "structure: near-perfect matching after removing S", structure_near_perfect},
      {4, "formula agreement for chi", formula_agreement},
      {6, "moment oracle for x and y", moment_oracle},
      {7, "variance scale of s", variance_scale},
      {8, "CLT diagnostic", clt_diagnostic},
      {9, "concentration scale", concentration_scale},
      {10, "planted coupling", planted_coupling},
      {11, "sprinkling coupling", sprinkling_coupling},
      {12, "martingale exactness", martingale_exactness},
      {5, "sandwich invariant s <= x <= s + y", sandwich_everywhere},
      {13, "determinism across thread counts", determinism},
  };
  bool all = true;
  for (const auto& c : order) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && o.pass;
    char head[160];
    std::snprintf(head, sizeof head, "%s criterion %2d  %-52s [%6.1fs] ", o.pass ? "PASS" : "FAIL", c.id, c.name,
                  secs);
    std::printf("%s%s\n", head, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
