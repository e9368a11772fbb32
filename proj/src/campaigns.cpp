#include "densechi/campaigns.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "densechi/audit.hpp"
#include "densechi/chromatic.hpp"
#include "densechi/coupling.hpp"
#include "densechi/error.hpp"
#include "densechi/martingale.hpp"
#include "densechi/matching.hpp"
#include "densechi/oracles.hpp"
#include "densechi/parallel.hpp"
#include "densechi/stats.hpp"
#include "densechi/triangles.hpp"

namespace densechi {

using json = nlohmann::json;

std::string csv_cell(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_cell(std::uint64_t x) { return std::to_string(x); }

std::string csv_cell(bool x) { return x ? "1" : "0"; }

namespace {

// Stream ids above this are reserved for campaign-level draws that are not
// tied to a trial index.
constexpr std::uint64_t kAuxStream = std::uint64_t{1} << 48;

json stats_json(const SampleStats& s) {
  json j{{"n_trials", s.count()}, {"mean", s.mean()}, {"var", s.variance()}, {"sd", s.sd()}};
  if (s.count() > 0) {
    j["min"] = s.min();
    j["max"] = s.max();
  }
  if (s.count() >= 3 && s.m2() > 0.0) {
    j["skew"] = s.skewness();
    if (s.retains_samples()) {
      auto z = standardize(s.samples(), s.mean(), s.sd());
      std::sort(z.begin(), z.end());
      j["ks"] = ks_distance(z);
    }
  }
  return j;
}

TriangleSolverOptions triangle_options(const ExperimentConfig& cfg) { return {cfg.triangle_budget}; }

PackingOptions packing_options(const ExperimentConfig& cfg) {
  PackingOptions o;
  o.node_budget = cfg.packing_budget;
  o.triangle = triangle_options(cfg);
  return o;
}

struct SandwichTally {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;

  void add(bool ok) {
    ++checked;
    violations += ok ? 0 : 1;
  }
  json to_json() const { return {{"checked", checked}, {"violations", violations}}; }
};

// Trial i runs on stream i; a trial that exceeds a solver budget yields nothing.
template <typename R, typename F>
std::vector<std::optional<R>> run_trials(const ExperimentConfig& cfg, std::uint64_t first, std::size_t count, F&& fn) {
  return parallel_map<std::optional<R>>(count, cfg.threads, [&](std::size_t k) -> std::optional<R> {
    RandomSource rng(cfg.seed, first + k);
    try {
      return fn(first + k, rng);
    } catch (const BudgetExceeded&) {
      return std::nullopt;
    }
  });
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

// ---------------------------------------------------------------- sample

CampaignResult sample_campaign(const ExperimentConfig& cfg) {
  CampaignResult r;
  RandomSource rng(cfg.seed, 0);
  const double q = cfg.resolved_q();
  const Graph g = sample_gnq(cfg.n, q, rng);
  const auto edges = g.edges();
  json edge_list = json::array();
  r.csv_header = {"u", "v"};
  for (auto [u, v] : edges) {
    edge_list.push_back({u, v});
    r.csv_rows.push_back({csv_cell(std::uint64_t{u}), csv_cell(std::uint64_t{v})});
  }
  r.summary = {{"n", g.n()},
               {"q", q},
               {"edge_count", g.edge_count()},
               {"max_degree", g.max_degree()},
               {"triangles", count_x(g)},
               {"edges", edge_list}};
  return r;
}

// ------------------------------------------------- triangles / clt / concentration

struct TriangleRow {
  std::uint64_t s = 0, x = 0, y = 0;
};

CampaignResult triangle_stats_campaign(const ExperimentConfig& cfg) {
  const double q = cfg.resolved_q();
  const auto opts = triangle_options(cfg);
  const auto rows = run_trials<TriangleRow>(cfg, 0, cfg.trials, [&](std::uint64_t, RandomSource& rng) {
    const Graph g = sample_gnq(cfg.n, q, rng);
    const auto tri = enumerate_triangles(g);
    return TriangleRow{max_triangle_matching(tri, opts).size(), tri.size(), count_y(g)};
  });

  CampaignResult r;
  r.csv_header = {"trial", "budget_exceeded", "s", "x", "y", "sandwich_ok"};
  SampleStats s_stats(true), x_stats(true), y_stats(true);
  SandwichTally sandwich;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i]) {
      r.partial = true;
      r.csv_rows.push_back({csv_cell(std::uint64_t{i}), "1", "", "", "", ""});
      continue;
    }
    const auto& row = *rows[i];
    const bool ok = sandwich_holds(row.s, row.x, row.y);
    sandwich.add(ok);
    s_stats.add(static_cast<double>(row.s));
    x_stats.add(static_cast<double>(row.x));
    y_stats.add(static_cast<double>(row.y));
    r.csv_rows.push_back({csv_cell(std::uint64_t{i}), "0", csv_cell(row.s), csv_cell(row.x), csv_cell(row.y),
                          csv_cell(ok)});
  }

  const double n = static_cast<double>(cfg.n);
  const TriangleMoments exact = exact_triangle_moments(cfg.n, q);
  json moments{{"x_mean_exact", exact.mean}, {"x_variance_exact", exact.variance}};
  if (x_stats.count() >= 2) {
    const double se_mean = std::sqrt(exact.variance / static_cast<double>(x_stats.count()));
    const double se_var = x_stats.variance_standard_error();
    moments["x_mean_se"] = se_mean;
    moments["x_mean_z"] = se_mean > 0 ? (x_stats.mean() - exact.mean) / se_mean : 0.0;
    moments["x_variance_se"] = se_var;
    moments["x_variance_z"] = se_var > 0 ? (x_stats.variance() - exact.variance) / se_var : 0.0;
  }
  const auto [y_first, y_second] = y_moment_bounds(n, q);
  moments["y_mean_bound"] = y_first;
  moments["y_second_moment_bound"] = y_second;
  moments["y_mean_se"] = y_stats.mean_standard_error();

  json clt;
  json concentration;
  const double scale = std::pow(n * q, 1.5);
  concentration["scale"] = scale;
  if (s_stats.count() >= 3 && s_stats.sd() > 0.0) {
    clt["var_ratio"] = exact.variance > 0 ? s_stats.variance() / exact.variance : 0.0;
    const auto z = standardize(s_stats.samples(), s_stats.mean(), s_stats.sd());
    std::vector<double> sorted(z);
    std::sort(sorted.begin(), sorted.end());
    clt["skew"] = skewness(z);
    clt["ks"] = ks_distance(sorted);

    std::size_t far = 0;
    for (double v : s_stats.samples())
      if (std::abs(v - s_stats.mean()) >= 3.0 * scale) ++far;
    concentration["far_fraction"] = static_cast<double>(far) / static_cast<double>(s_stats.count());
    const double iqr = s_stats.quantile(0.75) - s_stats.quantile(0.25);
    concentration["iqr"] = iqr;
    concentration["iqr_over_scale"] = scale > 0 ? iqr / scale : 0.0;
  }

  r.summary = {{"n", cfg.n},
               {"q", q},
               {"trials", cfg.trials},
               {"completed", s_stats.count()},
               {"s", stats_json(s_stats)},
               {"x", stats_json(x_stats)},
               {"y", stats_json(y_stats)},
               {"moments", moments},
               {"clt", clt},
               {"concentration", concentration},
               {"sandwich", sandwich.to_json()}};
  return r;
}

// ---------------------------------------------------------------- structure

struct StructureRow {
  StructureReport report;
  std::uint64_t x = 0, y = 0;
  bool k4_free = true;
};

StructureRow structure_trial(const ExperimentConfig& cfg, double q, RandomSource& rng, bool need_k4_free) {
  RandomSource graph_rng = rng.child(0), part_rng = rng.child(1);
  const Graph g = sample_gnq(cfg.n, q, graph_rng);
  StructureRow row;
  if (need_k4_free && has_k4(g)) {
    row.k4_free = false;
    return row;
  }
  const auto tri = enumerate_triangles(g);
  const auto tm = max_triangle_matching(tri, triangle_options(cfg));
  StructureOptions opts;
  opts.q = q;
  opts.seed = cfg.seed;
  opts.equipartition_attempts = cfg.equipartition_attempts;
  opts.hall_c = cfg.hall_c;
  opts.triangle = triangle_options(cfg);
  row.report = structure_check(g, tm, part_rng, opts);
  row.x = tri.size();
  row.y = count_y(g);
  if (need_k4_free) row.report.chi_exact = packing_chi_from_complement(g, packing_options(cfg)).chi;
  return row;
}

CampaignResult structure_campaign(const ExperimentConfig& cfg) {
  const double q = cfg.resolved_q();
  const auto rows = run_trials<StructureRow>(
      cfg, 0, cfg.trials, [&](std::uint64_t, RandomSource& rng) { return structure_trial(cfg, q, rng, false); });

  CampaignResult r;
  r.csv_header = {"trial",          "n",
                  "q",              "seed",
                  "budget_exceeded", "s",
                  "deficiency",     "near_perfect",
                  "chi_structural", "chi_exact",
                  "equipartition_near_perfect", "bipartite_matching_size",
                  "witness_size",   "witness_class",
                  "x",              "y"};
  const std::string n_cell = csv_cell(std::uint64_t{cfg.n}), q_cell = csv_cell(q), seed_cell = csv_cell(cfg.seed);
  std::size_t completed = 0, near_perfect = 0, equi = 0;
  std::map<std::string, std::size_t> classes;
  std::map<std::size_t, std::size_t> deficiencies;
  SampleStats s_stats;
  SandwichTally sandwich;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i]) {
      r.partial = true;
      r.csv_rows.push_back({csv_cell(std::uint64_t{i}), n_cell, q_cell, seed_cell, "1", "", "", "", "", "", "", "", "",
                            "", "", ""});
      continue;
    }
    const auto& row = *rows[i];
    const auto& rep = row.report;
    ++completed;
    near_perfect += rep.near_perfect;
    equi += rep.equipartition_near_perfect;
    ++deficiencies[rep.deficiency];
    if (!rep.witness_class.empty()) ++classes[rep.witness_class];
    s_stats.add(static_cast<double>(rep.s));
    sandwich.add(sandwich_holds(rep.s, row.x, row.y));
    r.csv_rows.push_back({csv_cell(std::uint64_t{i}), n_cell, q_cell, seed_cell, "0", csv_cell(rep.s),
                          csv_cell(rep.deficiency), csv_cell(rep.near_perfect), csv_cell(rep.chi_structural), "",
                          csv_cell(rep.equipartition_near_perfect), csv_cell(rep.bipartite_matching_size),
                          rep.witness_size ? csv_cell(*rep.witness_size) : "", rep.witness_class, csv_cell(row.x),
                          csv_cell(row.y)});
  }
  json deficiency_hist = json::object();
  for (auto [d, c] : deficiencies) deficiency_hist[std::to_string(d)] = c;
  json class_counts = json::object();
  for (const auto& [k, c] : classes) class_counts[k] = c;
  r.summary = {{"n", cfg.n},
               {"q", q},
               {"trials", cfg.trials},
               {"completed", completed},
               {"near_perfect", near_perfect},
               {"deficiency_histogram", deficiency_hist},
               {"equipartition_near_perfect", equi},
               {"witness_classes", class_counts},
               {"s", stats_json(s_stats)},
               {"sandwich", sandwich.to_json()}};
  return r;
}

// ---------------------------------------------------------------- chi-verify

CampaignResult chi_verify_campaign(const ExperimentConfig& cfg) {
  const double q = cfg.resolved_q();
  const std::uint64_t max_index = 20 * static_cast<std::uint64_t>(cfg.trials) + 100;

  // Trial indices are scanned in order; the first `trials` K4-free samples
  // are kept, so chunking never changes which samples are used.
  std::vector<std::pair<std::uint64_t, std::optional<StructureRow>>> accepted;
  std::uint64_t next = 0, k4_skipped = 0;
  while (accepted.size() < cfg.trials && next < max_index) {
    const std::size_t chunk = std::min<std::uint64_t>(cfg.trials - accepted.size(), max_index - next);
    const auto rows = run_trials<StructureRow>(
        cfg, next, chunk, [&](std::uint64_t, RandomSource& rng) { return structure_trial(cfg, q, rng, true); });
    for (std::size_t k = 0; k < rows.size() && accepted.size() < cfg.trials; ++k) {
      if (rows[k] && !rows[k]->k4_free) {
        ++k4_skipped;
        continue;
      }
      accepted.emplace_back(next + k, rows[k]);
    }
    next += chunk;
  }

  CampaignResult r;
  r.csv_header = {"trial", "n", "q", "seed", "budget_exceeded", "s", "deficiency", "near_perfect", "chi_structural",
                  "chi_exact", "agree", "bound_ok"};
  const std::string n_cell = csv_cell(std::uint64_t{cfg.n}), q_cell = csv_cell(q), seed_cell = csv_cell(cfg.seed);
  std::size_t completed = 0, agree = 0, near_perfect = 0, bound_violations = 0;
  SandwichTally sandwich;
  for (const auto& [index, row] : accepted) {
    if (!row) {
      r.partial = true;
      r.csv_rows.push_back({csv_cell(index), n_cell, q_cell, seed_cell, "1", "", "", "", "", "", "", ""});
      continue;
    }
    const auto& rep = row->report;
    const std::size_t chi = *rep.chi_exact;
    const bool same = chi == rep.chi_structural;
    const bool bound_ok = !rep.near_perfect || chi <= rep.chi_structural;
    ++completed;
    agree += same;
    near_perfect += rep.near_perfect;
    bound_violations += bound_ok ? 0 : 1;
    sandwich.add(sandwich_holds(rep.s, row->x, row->y));
    r.csv_rows.push_back({csv_cell(index), n_cell, q_cell, seed_cell, "0", csv_cell(rep.s), csv_cell(rep.deficiency),
                          csv_cell(rep.near_perfect),
                          csv_cell(rep.chi_structural), csv_cell(chi), csv_cell(same), csv_cell(bound_ok)});
  }
  r.summary = {{"n", cfg.n},
               {"q", q},
               {"target_trials", cfg.trials},
               {"target_reached", accepted.size() == cfg.trials},
               {"k4_free_trials", accepted.size()},
               {"k4_skipped", k4_skipped},
               {"completed", completed},
               {"agree", agree},
               {"agree_fraction", completed ? static_cast<double>(agree) / static_cast<double>(completed) : 0.0},
               {"near_perfect", near_perfect},
               {"bound_violations_when_near_perfect", bound_violations},
               {"sandwich", sandwich.to_json()}};
  return r;
}

// ---------------------------------------------------------------- props

struct PropsRow {
  Omega0Choice omega0;
  RAuditReport r_audit;
  DAuditReport d_audit;
  std::uint64_t s = 0, x = 0, y = 0;
};

CampaignResult props_campaign(const ExperimentConfig& cfg) {
  const double q = cfg.resolved_q();
  AuditPlan plan;
  plan.samples_per_size = cfg.samples_per_size;
  const auto rows = run_trials<PropsRow>(cfg, 0, cfg.trials, [&](std::uint64_t, RandomSource& rng) {
    RandomSource graph_rng = rng.child(0), r_rng = rng.child(1), d_rng = rng.child(2);
    const Graph g = sample_gnq(cfg.n, q, graph_rng);
    PropsRow row;
    row.omega0 = choose_omega0(cfg.n, q);
    row.r_audit = audit_R(g, q, row.omega0.value, r_rng, plan);
    const auto tri = enumerate_triangles(g);
    const auto tm = max_triangle_matching(tri, triangle_options(cfg));
    row.d_audit = audit_D(g, tm.covered, cfg.delta, d_rng, plan);
    row.s = tm.size();
    row.x = tri.size();
    row.y = count_y(g);
    return row;
  });

  CampaignResult r;
  r.csv_header = {"trial",       "budget_exceeded", "omega0",        "prop_i",       "prop_ii_edges",
                  "prop_ii_codeg", "prop_iii_rate", "prop_iv_rate", "s_size"};
  std::size_t completed = 0, prop_i = 0, prop_ii_edges = 0, prop_ii_codeg = 0;
  SampleStats rate_iii, rate_iv;
  std::map<std::size_t, std::pair<std::uint64_t, std::uint64_t>> d_by_size;  // size -> (checked, holds)
  SandwichTally sandwich;
  json first;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i]) {
      r.partial = true;
      r.csv_rows.push_back({csv_cell(std::uint64_t{i}), "1", "", "", "", "", "", "", ""});
      continue;
    }
    const auto& row = *rows[i];
    ++completed;
    prop_i += row.r_audit.prop_i;
    prop_ii_edges += row.r_audit.prop_ii_edges;
    prop_ii_codeg += row.r_audit.prop_ii_codeg;
    rate_iii.add(row.r_audit.prop_iii_rate);
    rate_iv.add(row.r_audit.prop_iv_rate);
    for (const auto& b : row.d_audit.buckets) {
      d_by_size[b.size].first += b.checked;
      d_by_size[b.size].second += b.holds;
    }
    sandwich.add(sandwich_holds(row.s, row.x, row.y));
    if (first.is_null())
      first = {{"trial", i},
               {"omega0", to_json(row.omega0)},
               {"R", to_json(row.r_audit)},
               {"D", to_json(row.d_audit)}};
    r.csv_rows.push_back({csv_cell(std::uint64_t{i}), "0", csv_cell(row.omega0.value), csv_cell(row.r_audit.prop_i),
                          csv_cell(row.r_audit.prop_ii_edges), csv_cell(row.r_audit.prop_ii_codeg),
                          csv_cell(row.r_audit.prop_iii_rate), csv_cell(row.r_audit.prop_iv_rate),
                          csv_cell(std::uint64_t{row.d_audit.s_size})});
  }
  json d_rates = json::array();
  for (auto [size, ch] : d_by_size)
    d_rates.push_back({{"size", size},
                       {"checked", ch.first},
                       {"holds", ch.second},
                       {"rate", ch.first ? static_cast<double>(ch.second) / static_cast<double>(ch.first) : 0.0}});
  r.summary = {{"n", cfg.n},
               {"q", q},
               {"delta", cfg.delta},
               {"trials", cfg.trials},
               {"completed", completed},
               {"prop_i", prop_i},
               {"prop_ii_edges", prop_ii_edges},
               {"prop_ii_codeg", prop_ii_codeg},
               {"prop_iii_rate", stats_json(rate_iii)},
               {"prop_iv_rate", stats_json(rate_iv)},
               {"D_rates", d_rates},
               {"first_trial", first},
               {"sandwich", sandwich.to_json()}};
  return r;
}

// ---------------------------------------------------------------- martingale

Rational rational_power(const Rational& base, std::size_t k) {
  Rational p = 1;
  for (std::size_t i = 0; i < k; ++i) p *= base;
  return p;
}

// Graph on m vertices whose pairs, in exposure order, are the bits of mask.
SmallGraph graph_from_pair_mask(std::size_t m, std::size_t mask) {
  SmallGraph g(m);
  std::size_t bit = 0;
  for (std::size_t v = 1; v < m; ++v)
    for (std::size_t u = 0; u < v; ++u, ++bit)
      if ((mask >> bit) & 1U) g.add_edge(u, v);
  return g;
}

struct ExhaustiveSummary {
  std::size_t graphs = 0;
  std::size_t telescoping_failures = 0;
  std::size_t increment_failures = 0;
  std::size_t martingale_failures = 0;
  std::size_t tally_mismatches = 0;
  double max_abs_increment = 0.0;
};

void exhaustive_check(std::size_t m, const Rational& q, ExhaustiveSummary& out) {
  const auto levels = all_prefix_tallies(m);
  std::vector<std::vector<Rational>> x(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    x[i].reserve(levels[i].tally.size());
    for (const auto& t : levels[i].tally) x[i].push_back(weighted_tally(t, q));
  }
  const Rational one_minus = 1 - q;

  // Each level-(i-1) prefix is the conditional average of its children.
  for (std::size_t i = 1; i <= m; ++i) {
    const std::size_t parent_bits = levels[i - 1].pairs;
    const std::size_t fresh = levels[i].pairs - parent_bits;
    for (std::size_t parent = 0; parent < x[i - 1].size(); ++parent) {
      Rational avg = 0;
      for (std::size_t ext = 0; ext < (std::size_t{1} << fresh); ++ext) {
        const auto k = static_cast<std::size_t>(std::popcount(ext));
        avg += rational_power(q, k) * rational_power(one_minus, fresh - k) * x[i][parent | (ext << parent_bits)];
      }
      if (avg != x[i - 1][parent]) ++out.martingale_failures;
    }
  }

  const std::size_t full_pairs = levels[m].pairs;
  for (std::size_t mask = 0; mask < (std::size_t{1} << full_pairs); ++mask) {
    ++out.graphs;
    const SmallGraph sg = graph_from_pair_mask(m, mask);
    const Graph g = sg.to_graph();
    Rational sum = x[0][0];
    for (std::size_t i = 1; i <= m; ++i) {
      const std::size_t here = mask & ((std::size_t{1} << levels[i].pairs) - 1);
      const std::size_t up = mask & ((std::size_t{1} << levels[i - 1].pairs) - 1);
      const Rational d = x[i][here] - x[i - 1][up];
      const Rational abs_d = d < 0 ? Rational(-d) : d;
      if (abs_d > 1) ++out.increment_failures;
      out.max_abs_increment = std::max(out.max_abs_increment, abs_d.convert_to<double>());
      sum += d;
      if (weighted_tally(completion_tally(prefix_of(g, i), m), q) != x[i][here]) ++out.tally_mismatches;
    }
    if (sum != Rational(small_triangle_matching_size(sg)) || x[m][mask] != sum) ++out.telescoping_failures;
  }
}

struct SingleStepRow {
  std::size_t vertices = 0;
  double x_prev = 0.0, x_last = 0.0, increment = 0.0;
  bool increment_ok = false;
  bool table_matches = false;
  IncrementScaleCheck scale;
};

json hand_value_checks(double delta) {
  const double expected = std::exp(-1.0);
  struct Case {
    const char* name;
    double value;
  };
  const Case cases[] = {{"freedman(t=2,sigma2=1,r=1)", freedman_bound(2.0, 1.0, 1.0)},
                        {"deletion(r=3,t=1,k=1,ex=1)", deletion_bound(3.0, 1.0, 1.0, 1.0)},
                        {"kimvu(n=10,q=0.1,c=1)", kimvu_bound(10.0, 0.1, delta, 1.0)}};
  json out = json::array();
  for (const auto& c : cases) {
    const double rel = std::abs(c.value - expected) / expected;
    out.push_back({{"case", c.name}, {"value", c.value}, {"expected", expected}, {"relative_error", rel},
                   {"agree_12_digits", rel <= 5e-13}});
  }
  return out;
}

CampaignResult martingale_campaign(const ExperimentConfig& cfg) {
  const double q = cfg.resolved_q();
  const Rational q_exact(q);
  CampaignResult r;

  ExhaustiveSummary ex;
  const std::size_t max_exhaustive = std::min<std::size_t>(cfg.n, 5);
  for (std::size_t m = 1; m <= max_exhaustive; ++m) exhaustive_check(m, q_exact, ex);
  json exhaustive{{"max_vertices", max_exhaustive},
                  {"graphs", ex.graphs},
                  {"telescoping_failures", ex.telescoping_failures},
                  {"increment_failures", ex.increment_failures},
                  {"martingale_failures", ex.martingale_failures},
                  {"tally_mismatches", ex.tally_mismatches},
                  {"max_abs_increment", ex.max_abs_increment}};

  json single = json::object();
  r.csv_header = {"trial", "vertices", "x_prev", "x_last", "increment", "increment_ok", "table_matches",
                  "class", "scale_bound", "scale_applicable", "scale_violated"};
  const std::size_t max_single = std::min<std::size_t>(cfg.n, 16);
  if (max_single >= 4) {
    const auto rows = run_trials<SingleStepRow>(cfg, 0, cfg.trials, [&](std::uint64_t, RandomSource& rng) {
      SingleStepRow row;
      row.vertices = 4 + rng.below(max_single - 3);
      const Graph g = sample_gnq(row.vertices, q, rng);
      const auto step = exact_single_step<Rational>(g, q_exact);
      const Rational inc = step.increment();
      row.increment_ok = inc <= 1 && inc >= -1;
      row.table_matches =
          weighted_tally(completion_tally(prefix_of(g, row.vertices - 1), row.vertices), q_exact) == step.x_prev &&
          step.x_last == Rational(small_triangle_matching_size(SmallGraph::from_graph(g)));
      row.x_prev = step.x_prev.convert_to<double>();
      row.x_last = step.x_last.convert_to<double>();
      row.increment = inc.convert_to<double>();
      row.scale = check_increment_scale(g, q);
      return row;
    });
    std::size_t inc_ok = 0, table_ok = 0, applicable = 0, violated = 0;
    double max_abs = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = *rows[i];  // exact enumeration has no budget
      inc_ok += row.increment_ok;
      table_ok += row.table_matches;
      applicable += row.scale.applicable;
      violated += row.scale.violated;
      max_abs = std::max(max_abs, std::abs(row.increment));
      r.csv_rows.push_back({csv_cell(std::uint64_t{i}), csv_cell(std::uint64_t{row.vertices}), csv_cell(row.x_prev),
                            csv_cell(row.x_last), csv_cell(row.increment), csv_cell(row.increment_ok),
                            csv_cell(row.table_matches), class_label(row.scale.cls), csv_cell(row.scale.bound),
                            csv_cell(row.scale.applicable), csv_cell(row.scale.violated)});
    }
    single = {{"instances", rows.size()},
              {"max_vertices", max_single},
              {"increments_ok", inc_ok},
              {"table_matches", table_ok},
              {"max_abs_increment", max_abs},
              {"scale_applicable", applicable},
              {"scale_violations", violated}};
  }

  json qv = json::object();
  if (cfg.n <= kMaxExactQuadraticVertices) qv["exact"] = exact_quadratic_variation<double>(cfg.n, q);
  if (cfg.n <= 64) {
    RandomSource rng(cfg.seed, kAuxStream);
    const std::size_t outer = std::min<std::size_t>(cfg.trials, 200);
    const auto est = estimate_quadratic_variation(cfg.n, q, outer, cfg.inner_samples, rng);
    qv["estimate"] = est.value;
    qv["std_error"] = est.std_error;
    qv["outer_trials"] = est.outer_trials;

    RandomSource graph_rng(cfg.seed, kAuxStream + 1), trace_rng(cfg.seed, kAuxStream + 2);
    const Graph g = sample_gnq(cfg.n, q, graph_rng);
    json trace = json::array();
    for (const auto& rec : trace_increments(g, q, cfg.inner_samples, trace_rng))
      trace.push_back({{"i", rec.i}, {"increment_estimate", rec.increment}, {"std_error", rec.std_error},
                       {"class", class_label(rec.cls)}});
    r.summary["trace"] = trace;
  }

  r.summary["n"] = cfg.n;
  r.summary["q"] = q;
  r.summary["exhaustive"] = exhaustive;
  r.summary["single_step"] = single;
  r.summary["quadratic_variation"] = qv;
  r.summary["hand_values"] = hand_value_checks(cfg.delta);
  return r;
}

// ---------------------------------------------------------------- coupling

CampaignResult coupling_plant_campaign(const ExperimentConfig& cfg) {
  const double q = cfg.resolved_q();
  const auto opts = triangle_options(cfg);
  const auto rows = run_trials<PlantedTrial>(
      cfg, 0, cfg.trials, [&](std::uint64_t, RandomSource& rng) { return planted_trial(cfg.n, q, rng, opts); });

  CampaignResult r;
  r.csv_header = {"trial", "seed", "budget_exceeded", "s_large", "s_small", "k3_planted", "k3_plain", "s_plain",
                  "ratio", "sandwich_ok"};
  const std::string seed_cell = csv_cell(cfg.seed);
  std::vector<PlantedTrial> done;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i]) {
      r.partial = true;
      r.csv_rows.push_back({csv_cell(std::uint64_t{i}), seed_cell, "1", "", "", "", "", "", "", ""});
      continue;
    }
    const auto& t = *rows[i];
    done.push_back(t);
    r.csv_rows.push_back({csv_cell(std::uint64_t{i}), seed_cell, "0", csv_cell(t.s_large), csv_cell(t.s_small),
                          csv_cell(t.k3_planted), csv_cell(t.k3_plain), csv_cell(t.s_plain), csv_cell(t.ratio),
                          csv_cell(t.sandwich_ok)});
  }
  const PlantedReport rep = summarize_planted(cfg.n, q, done);
  const double se_p = rep.k3_planted.mean_standard_error();
  const double se_r = rep.k3_reweighted.mean_standard_error();
  const double se_pair = std::sqrt(se_p * se_p + se_r * se_r);
  r.summary = {
      {"n", cfg.n},
      {"q", q},
      {"trials", cfg.trials},
      {"completed", rep.trials},
      {"plus_one_holds", rep.plus_one_holds},
      {"plus_one_frequency", rep.plus_one_frequency()},
      {"k3_planted", stats_json(rep.k3_planted)},
      {"k3_reweighted", stats_json(rep.k3_reweighted)},
      {"k3_planted_exact", rep.k3_planted_exact},
      {"identity_z", se_pair > 0 ? (rep.k3_planted.mean() - rep.k3_reweighted.mean()) / se_pair : 0.0},
      {"planted_exact_z", se_p > 0 ? (rep.k3_planted.mean() - rep.k3_planted_exact) / se_p : 0.0},
      {"reweighted_exact_z", se_r > 0 ? (rep.k3_reweighted.mean() - rep.k3_planted_exact) / se_r : 0.0},
      {"s_large", stats_json(rep.s_large)},
      {"s_small", stats_json(rep.s_small)},
      {"s_reweighted", stats_json(rep.s_reweighted)},
      {"tv_bound", rep.tv_bound},
      {"sandwich", {{"checked", rep.trials}, {"violations", rep.trials - rep.sandwich_ok}}}};
  return r;
}

CampaignResult coupling_sprinkle_campaign(const ExperimentConfig& cfg) {
  require(!cfg.q, "coupling-sprinkle: q is taken from the family q_coeff * n^-q_exp; do not set a literal q");
  const QFamily family{cfg.q_coeff, cfg.q_exp};
  const SprinkleParams p = sprinkle_params(cfg.n, family, cfg.eps);
  const auto opts = triangle_options(cfg);
  const auto rows = run_trials<SprinkleTrial>(
      cfg, 0, cfg.trials, [&](std::uint64_t, RandomSource& rng) { return sprinkle_trial(p, rng, opts); });

  CampaignResult r;
  r.csv_header = {"trial",      "seed",      "budget_exceeded", "s_small", "s_large",   "new_triangles", "expected_new",
                  "max_degree", "degree_ok", "few_new",         "s_close", "s_diff_ok", "sandwich_ok"};
  const std::string seed_cell = csv_cell(cfg.seed);
  std::vector<SprinkleTrial> done;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i]) {
      r.partial = true;
      r.csv_rows.push_back({csv_cell(std::uint64_t{i}), seed_cell, "1", "", "", "", "", "", "", "", "", "", ""});
      continue;
    }
    const auto& t = *rows[i];
    done.push_back(t);
    r.csv_rows.push_back({csv_cell(std::uint64_t{i}), seed_cell, "0", csv_cell(t.s_small), csv_cell(t.s_large),
                          csv_cell(t.new_triangles), csv_cell(t.expected_new), csv_cell(t.max_degree),
                          csv_cell(t.degree_ok), csv_cell(t.few_new), csv_cell(t.s_close), csv_cell(t.s_diff_ok),
                          csv_cell(t.sandwich_ok)});
  }
  const SprinkleReport rep = summarize_sprinkle(p, done);
  const double mean_diff = rep.new_minus_expected.mean();
  r.summary = {{"n_prime", p.n_prime},
               {"n", p.n},
               {"q_n", p.q_n},
               {"q_nprime", p.q_nprime},
               {"x", p.x()},
               {"eps", p.eps},
               {"alpha_n", alpha(p.n, p.eps, p.q_n)},
               {"degree_cap", p.degree_cap()},
               {"trials", cfg.trials},
               {"completed", rep.trials},
               {"degree_ok", rep.degree_ok},
               {"few_new", rep.few_new},
               {"s_close", rep.s_close},
               {"s_diff_ok", rep.s_diff_ok},
               {"union_law_exact", rep.union_law_exact},
               {"mean_expected_new", rep.mean_expected},
               {"mean_new_minus_expected", mean_diff},
               {"standard_error", rep.standard_error},
               {"z", rep.standard_error > 0 ? mean_diff / rep.standard_error : 0.0},
               {"sandwich", {{"checked", rep.trials}, {"violations", rep.trials - rep.sandwich_ok}}}};
  return r;
}

CampaignResult smooth_check_campaign(const ExperimentConfig& cfg) {
  const QFamily family{cfg.q_coeff, cfg.q_exp};
  const SmoothnessVerdict v = smoothness_verdict(family);
  CampaignResult r;
  r.csv_header = {"n", "score"};
  for (auto [n, score] : v.samples) r.csv_rows.push_back({csv_cell(std::uint64_t{n}), csv_cell(score)});
  json chain;
  try {
    const auto schedule = chain_schedule(cfg.n, family, cfg.eps);
    chain = {{"start", schedule.front()}, {"end", schedule.back()}, {"steps", schedule.size() - 1}};
  } catch (const ParameterError& e) {
    chain = {{"error", e.what()}};
  }
  r.summary = {{"q_coeff", cfg.q_coeff},
               {"q_exp", cfg.q_exp},
               {"slope", v.slope},
               {"smooth", v.smooth},
               {"threshold", kSmoothSlopeThreshold},
               {"alpha_at_n", alpha(cfg.n, cfg.eps, family(static_cast<double>(cfg.n)))},
               {"chain", chain}};
  return r;
}

CampaignResult oracle_suite_campaign(const ExperimentConfig& cfg) {
  using Check = std::function<OracleCheck()>;
  const std::size_t count = cfg.trials;
  const std::uint64_t seed = cfg.seed;
  const std::vector<Check> checks = {
      [&] { return check_triangle_matching(count, 12, seed); },
      [&] { return check_packing_chi(count, 14, seed); },
      [&] { return check_general_matching(count, 16, seed); },
      [&] { return check_hall_duality(count, 16, seed); },
      [&] { return check_packing_weight(count, 14, seed); },
  };
  const auto results = parallel_map<OracleCheck>(checks.size(), cfg.threads, [&](std::size_t i) { return checks[i](); });
  CampaignResult r;
  r.csv_header = {"check", "checked", "agreed", "passed"};
  json list = json::array();
  bool all = true;
  for (const auto& c : results) {
    all = all && c.passed();
    list.push_back({{"name", c.name}, {"checked", c.checked}, {"agreed", c.agreed}, {"passed", c.passed()},
                    {"first_mismatch", c.first_mismatch}});
    r.csv_rows.push_back({c.name, csv_cell(c.checked), csv_cell(c.agreed), csv_cell(c.passed())});
  }
  r.summary = {{"checks", list}, {"all_passed", all}};
  return r;
}

using CampaignFn = CampaignResult (*)(const ExperimentConfig&);

const std::map<std::string, CampaignFn>& registry() {
  static const std::map<std::string, CampaignFn> table = {
      {"sample", sample_campaign},
      {"triangles", triangle_stats_campaign},
      {"structure", structure_campaign},
      {"chi-verify", chi_verify_campaign},
      {"props", props_campaign},
      {"martingale", martingale_campaign},
      {"clt", triangle_stats_campaign},
      {"concentration", triangle_stats_campaign},
      {"coupling-plant", coupling_plant_campaign},
      {"coupling-sprinkle", coupling_sprinkle_campaign},
      {"smooth-check", smooth_check_campaign},
      {"oracle-suite", oracle_suite_campaign},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& campaign_names() {
  static const std::vector<std::string> names = {"sample",         "triangles",         "structure",   "chi-verify",
                                                 "props",          "martingale",        "clt",         "concentration",
                                                 "coupling-plant", "coupling-sprinkle", "smooth-check", "oracle-suite"};
  return names;
}

CampaignResult run_campaign(const ExperimentConfig& cfg) {
  const auto& table = registry();
  const auto it = table.find(cfg.subcommand);
  if (it == table.end()) throw ParameterError("unknown subcommand '" + cfg.subcommand + "'");
  cfg.validate();

  CampaignResult r = it->second(cfg);
  json config = json::object();
  for (const auto& [k, v] : cfg.entries())
    if (k != "threads") config[k] = v;
  json results = std::move(r.summary);
  r.summary = {{"version", DENSECHI_VERSION},
               {"subcommand", cfg.subcommand},
               {"config", config},
               {"run", {{"threads", cfg.threads}, {"generated_at", iso_timestamp()}}},
               {"partial", r.partial},
               {"results", results}};
  return r;
}

json deterministic_view(const json& summary) {
  json copy = summary;
  copy.erase("run");
  return copy;
}

std::string render_json(const CampaignResult& r) { return r.summary.dump(2) + "\n"; }

std::string render_csv(const CampaignResult& r) {
  std::ostringstream out;
  out << "# version=" << r.summary.value("version", "") << '\n';
  if (r.summary.contains("config"))
    for (const auto& [k, v] : r.summary["config"].items()) out << "# " << k << '=' << v.get<std::string>() << '\n';
  if (r.summary.contains("run")) out << "# threads=" << r.summary["run"].value("threads", 0) << '\n';
  for (std::size_t i = 0; i < r.csv_header.size(); ++i) out << (i ? "," : "") << r.csv_header[i];
  out << '\n';
  for (const auto& row : r.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace densechi
