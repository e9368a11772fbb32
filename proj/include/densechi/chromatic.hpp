#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "densechi/graph.hpp"
#include "densechi/triangles.hpp"

namespace densechi {

enum class ChiMethod { structural, packing_exact, generic_exact };

std::string_view to_string(ChiMethod m);

using Coloring = std::vector<std::uint32_t>;  // vertex -> colour index

struct ChiResult {
  std::size_t chi = 0;
  ChiMethod method = ChiMethod::structural;
  std::optional<Coloring> certificate;  // proper, uses exactly chi colours
};

/// ceil((n - s) / 2): s triangle classes plus a near-perfect matching of the
/// remaining n - 3s vertices. Requires 3s <= n.
std::size_t structural_chi(std::size_t n, std::size_t s);

/// True when g contains a 4-clique.
bool has_k4(const Graph& g);

/// Number of distinct colours used, or nothing if the colouring is not proper
/// for g (or has the wrong length).
std::optional<std::size_t> check_coloring(const Graph& g, const Coloring& colors);

struct PackingOptions {
  std::uint64_t node_budget = 20'000;  // branch nodes of the packing search
  TriangleSolverOptions triangle;
};

/// Best disjoint packing of triangles (weight 2) and edges (weight 1).
struct Packing {
  std::vector<Triangle> triangles;
  std::vector<Edge> edges;

  std::size_t weight() const { return 2 * triangles.size() + edges.size(); }
};

/// Maximum-weight triangle/edge packing of a graph. Exact; throws
/// BudgetExceeded rather than returning a suboptimal packing.
Packing max_weight_packing(const Graph& g, const PackingOptions& opts = {});

/// chi of the dense graph whose complement is `complement_graph`, as
/// n - max packing weight. Colour classes of the dense graph are cliques of
/// the complement, so this needs the complement to be K4-free (K4Present
/// otherwise).
ChiResult packing_chi_from_complement(const Graph& complement_graph, const PackingOptions& opts = {});

ChiResult packing_chi(const Graph& g_dense, const PackingOptions& opts = {});

/// Exact chromatic number by DSATUR-ordered branch and bound.
ChiResult generic_exact_chi(const Graph& g, std::size_t max_vertices = 20);

struct FormulaCheck {
  std::size_t chi_structural = 0;
  std::size_t chi_exact = 0;
  bool agree = false;
};

FormulaCheck verify_structural_formula(const Graph& g_complement, const PackingOptions& opts = {});

}  // namespace densechi
