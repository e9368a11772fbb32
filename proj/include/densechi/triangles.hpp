#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "densechi/graph.hpp"

namespace densechi {

/// A 3-clique, vertices strictly increasing.
struct Triangle {
  std::array<Vertex, 3> v{};

  Triangle() = default;
  Triangle(Vertex a, Vertex b, Vertex c);

  bool contains(Vertex x) const { return v[0] == x || v[1] == x || v[2] == x; }
  bool intersects(const Triangle& o) const {
    return o.contains(v[0]) || o.contains(v[1]) || o.contains(v[2]);
  }
  friend auto operator<=>(const Triangle&, const Triangle&) = default;
};

/// Vertex-disjoint triangles in canonical (lexicographic) order.
struct TriangleMatching {
  std::vector<Triangle> triangles;
  VertexSet covered;
  bool maximum = false;  // only set by the exact solver

  std::size_t size() const { return triangles.size(); }
};

/// Every triangle of g exactly once, sorted lexicographically.
std::vector<Triangle> enumerate_triangles(const Graph& g);

/// x(G): number of triangles.
std::uint64_t count_x(const Graph& g);

/// y(G): number of triangles sharing at least one vertex with another triangle.
std::uint64_t count_y(const Graph& g);

/// s <= x <= s + y, which every graph satisfies.
inline bool sandwich_holds(std::uint64_t s, std::uint64_t x, std::uint64_t y) { return s <= x && x <= s + y; }

/// Groups of triangles connected through shared vertices. Each component is
/// a sorted list of indices into `triangles`; components are ordered by their
/// smallest triangle.
std::vector<std::vector<std::size_t>> conflict_components(const std::vector<Triangle>& triangles);

struct TriangleSolverOptions {
  std::uint64_t node_budget = 1'000'000;  // per conflict component
};

/// Maximum triangle-matching. Among all maximum matchings the lexicographically
/// smallest canonical triangle list is returned. Throws BudgetExceeded when a
/// conflict component needs more than `node_budget` branch nodes.
TriangleMatching max_triangle_matching(const Graph& g, const TriangleSolverOptions& opts = {});

/// Same, for a precomputed triangle list of g (must be sorted, as returned by
/// enumerate_triangles).
TriangleMatching max_triangle_matching(const std::vector<Triangle>& triangles,
                                       const TriangleSolverOptions& opts = {});

/// Greedy maximal matching scanning triangles in canonical order.
TriangleMatching greedy_triangle_matching(const Graph& g);

/// One "a b c" line per triangle.
void write_triangle_matching(std::ostream& out, const TriangleMatching& m);
TriangleMatching read_triangle_matching(std::istream& in);

}  // namespace densechi
