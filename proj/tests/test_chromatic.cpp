#include <doctest.h>

#include <set>

#include "brute.hpp"
#include "densechi/chromatic.hpp"
#include "densechi/error.hpp"

using namespace densechi;

namespace {

// G(n, q) conditioned on having no K4, by rejection over a seed sequence.
Graph k4_free_sample(std::size_t n, double q, std::uint64_t& seed) {
  for (;; ++seed) {
    Graph g = brute::random_graph(n, q, seed);
    if (!brute::has_k4(g)) return g;
  }
}

void check_certificate(const Graph& dense, const ChiResult& r) {
  REQUIRE(r.certificate.has_value());
  const auto used = check_coloring(dense, *r.certificate);
  REQUIRE(used.has_value());
  CHECK(*used == r.chi);
}

}  // namespace

TEST_CASE("structural chi formula") {
  CHECK(structural_chi(10, 2) == 4);
  CHECK(structural_chi(7, 0) == 4);
  CHECK(structural_chi(9, 3) == 3);
  CHECK(structural_chi(0, 0) == 0);
  CHECK_THROWS_AS(structural_chi(8, 3), ParameterError);
}

TEST_CASE("packing chi examples") {
  const auto two = packing_chi_from_complement(brute::two_triangles());
  CHECK(two.chi == 2);
  CHECK(two.method == ChiMethod::packing_exact);
  check_certificate(complement(brute::two_triangles()), two);

  CHECK(packing_chi(brute::cycle(5)).chi == 3);
  CHECK(packing_chi(brute::complete(4)).chi == 4);
  CHECK_THROWS_AS(packing_chi_from_complement(brute::complete(4)), K4Present);
  CHECK_THROWS_AS(packing_chi(Graph(5)), K4Present);
}

TEST_CASE("generic exact chi examples") {
  CHECK(generic_exact_chi(brute::cycle(5)).chi == 3);
  CHECK(generic_exact_chi(brute::complete(4)).chi == 4);
  const auto pet = generic_exact_chi(brute::petersen());
  CHECK(pet.chi == 3);
  check_certificate(brute::petersen(), pet);
  CHECK_THROWS_AS(generic_exact_chi(Graph(21)), ParameterError);
  CHECK(generic_exact_chi(Graph(0)).chi == 0);
}

TEST_CASE("structural formula verification examples") {
  const auto tri = verify_structural_formula(brute::complete(3));
  CHECK(tri.chi_structural == 1);
  CHECK(tri.chi_exact == 1);
  CHECK(tri.agree);

  const auto bow = verify_structural_formula(brute::bowtie());
  CHECK(bow.chi_structural == 2);
  CHECK(bow.chi_exact == 2);
  CHECK(bow.agree);

  const auto star = verify_structural_formula(brute::star(3));
  CHECK(star.chi_structural == 2);
  CHECK(star.chi_exact == 3);
  CHECK_FALSE(star.agree);
}

TEST_CASE("k4 detection and colouring checker") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph g = brute::random_graph(9, 0.55, seed);
    CHECK(has_k4(g) == brute::has_k4(g));
  }
  const Graph c5 = brute::cycle(5);
  CHECK(check_coloring(c5, {0, 1, 0, 1, 2}) == std::optional<std::size_t>{3});
  CHECK_FALSE(check_coloring(c5, {0, 1, 0, 1, 0}).has_value());
  CHECK_FALSE(check_coloring(c5, {0, 1}).has_value());
}

TEST_CASE("packing weight against brute force") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const std::size_t n = 1 + seed % 12;
    const Graph g = brute::random_graph(n, 0.1 + 0.1 * static_cast<double>(seed % 7), seed);
    CAPTURE(seed);
    const Packing p = max_weight_packing(g);
    CHECK(p.weight() == brute::max_packing(g));
    std::set<Vertex> used;
    for (const auto& t : p.triangles) {
      CHECK(g.has_edge(t.v[0], t.v[1]));
      CHECK(g.has_edge(t.v[0], t.v[2]));
      CHECK(g.has_edge(t.v[1], t.v[2]));
      for (Vertex v : t.v) CHECK(used.insert(v).second);
    }
    for (auto [u, v] : p.edges) {
      CHECK(g.has_edge(u, v));
      CHECK(used.insert(u).second);
      CHECK(used.insert(v).second);
    }
  }
}

TEST_CASE("packing chi equals exhaustive colouring on K4-free complements") {
  std::uint64_t seed = 0;
  for (int trial = 0; trial < 150; ++trial, ++seed) {
    const std::size_t n = 4 + static_cast<std::size_t>(trial) % 8;
    const Graph sparse = k4_free_sample(n, 0.15 + 0.05 * (trial % 6), seed);
    const Graph dense = complement(sparse);
    CAPTURE(seed);
    const ChiResult r = packing_chi(dense);
    CHECK(r.chi == brute::chromatic(dense));
    CHECK(generic_exact_chi(dense).chi == r.chi);
    check_certificate(dense, r);
    CHECK(r.chi == n - brute::max_packing(sparse));
    // with a near-perfect matching of G - S the structural colouring is feasible
    const auto s = max_triangle_matching(sparse);
    const auto rest = induced_remove(sparse, s.covered).graph;
    if (rest.n() - 2 * brute::max_matching(rest) <= 1) CHECK(r.chi <= structural_chi(n, s.size()));
  }
}

TEST_CASE("packing budget is enforced") {
  PackingOptions tiny;
  tiny.node_budget = 0;
  std::uint64_t seed = 0;
  bool threw = false;
  for (int trial = 0; trial < 40 && !threw; ++trial, ++seed) {
    const Graph sparse = k4_free_sample(40, 0.12, seed);
    try {
      max_weight_packing(sparse, tiny);
    } catch (const BudgetExceeded&) {
      threw = true;
    }
  }
  CHECK(threw);
}
