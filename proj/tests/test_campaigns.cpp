#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "densechi/campaigns.hpp"
#include "densechi/config.hpp"
#include "densechi/error.hpp"

using namespace densechi;

namespace {

ExperimentConfig small_config(const std::string& sub) {
  ExperimentConfig c;
  c.subcommand = sub;
  c.n = 120;
  c.q = 0.05;
  c.trials = 12;
  c.seed = 9;
  c.inner_samples = 20;
  c.samples_per_size = 10;
  return c;
}

}  // namespace

TEST_CASE("config round trip") {
  ExperimentConfig c;
  c.subcommand = "clt";
  c.n = 20000;
  c.q = 4e-4;
  c.trials = 7;
  c.seed = 123456789012345ULL;
  c.eps = 0.1 + 0.2;  // not exactly representable as a short decimal
  c.output = "out.csv";
  c.format = "csv";
  std::istringstream in(serialize_config(c));
  const ExperimentConfig back = parse_config(in);
  CHECK(back.entries() == c.entries());
  CHECK(back.eps == c.eps);
  CHECK(back.q == c.q);

  ExperimentConfig family;
  std::istringstream in2(serialize_config(family));
  CHECK_FALSE(parse_config(in2).q.has_value());
}

TEST_CASE("config parsing rules") {
  std::istringstream ok("# comment\n\nn = 500\nq_exp=0.8\n");
  const auto c = parse_config(ok);
  CHECK(c.n == 500);
  CHECK(c.q_exp == 0.8);
  CHECK(c.resolved_q() == doctest::Approx(std::pow(500.0, -0.8)));

  std::istringstream unknown("colour=blue\n");
  CHECK_THROWS_AS(parse_config(unknown), ParameterError);
  std::istringstream garbage("n=12abc\n");
  CHECK_THROWS_AS(parse_config(garbage), ParameterError);
  std::istringstream no_equals("n 12\n");
  CHECK_THROWS_AS(parse_config(no_equals), ParameterError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/densechi.cfg"), ParameterError);

  ExperimentConfig bad;
  bad.q = 1.5;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad.q.reset();
  bad.format = "xml";
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("config file then overrides") {
  const std::string path = "densechi_test_config.cfg";
  {
    std::ofstream f(path);
    f << "n=700\ntrials=5\nseed=3\n";
  }
  ExperimentConfig c = load_config_file(path);
  c.set("trials", "9");  // a later flag wins
  CHECK(c.n == 700);
  CHECK(c.trials == 9);
  CHECK(c.seed == 3);
  std::remove(path.c_str());
}

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3.0, 4.5e-4, 1e300, -2.5, 0.0}) CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("unknown subcommand") {
  ExperimentConfig c;
  c.subcommand = "nope";
  CHECK_THROWS_AS(run_campaign(c), ParameterError);
}

TEST_CASE("summaries do not depend on the thread count") {
  for (const std::string& sub : {"triangles", "structure", "chi-verify", "props", "coupling-plant", "martingale",
                                 "sample", "oracle-suite"}) {
    CAPTURE(sub);
    ExperimentConfig c = small_config(sub);
    if (sub == "martingale") c.n = 10;
    c.threads = 1;
    const auto one = run_campaign(c);
    c.threads = 4;
    const auto four = run_campaign(c);
    CHECK(deterministic_view(one.summary).dump() == deterministic_view(four.summary).dump());
    CHECK(one.csv_rows == four.csv_rows);
    CHECK(one.summary["run"]["threads"] == 1);
    CHECK_FALSE(deterministic_view(one.summary).contains("run"));
  }
}

TEST_CASE("summary layout") {
  const auto r = run_campaign(small_config("triangles"));
  const auto& s = r.summary;
  CHECK(s.contains("version"));
  CHECK(s["subcommand"] == "triangles");
  CHECK(s["config"]["n"] == "120");
  CHECK_FALSE(s["config"].contains("threads"));
  CHECK_FALSE(s["partial"].get<bool>());
  for (const char* key : {"mean", "var", "skew", "ks", "n_trials"}) CHECK(s["results"]["s"].contains(key));
  CHECK(r.csv_rows.size() == 12);
  CHECK(r.exit_code() == 0);

  const std::string csv = render_csv(r);
  CHECK(csv.rfind("# version=", 0) == 0);
  CHECK(csv.find("# n=120\n") != std::string::npos);
  CHECK(csv.find("trial,budget_exceeded,s,x,y,sandwich_ok\n") != std::string::npos);
  CHECK(nlohmann::json::parse(render_json(r)) == s);
}

TEST_CASE("budget overrun marks the report partial") {
  ExperimentConfig c = small_config("triangles");
  c.n = 60;
  c.q = 0.6;
  c.trials = 3;
  c.triangle_budget = 1;
  const auto r = run_campaign(c);
  CHECK(r.partial);
  CHECK(r.exit_code() == 3);
  CHECK(r.summary["partial"].get<bool>());
}

TEST_CASE("csv cells") {
  CHECK(csv_cell(0.1) == "0.10000000000000001");
  CHECK(csv_cell(std::uint64_t{42}) == "42");
  CHECK(csv_cell(true) == "1");
}
