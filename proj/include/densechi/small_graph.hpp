#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "densechi/graph.hpp"

namespace densechi {

/// Adjacency bitmasks for graphs with at most 64 vertices. Used where the
/// same tiny graph family is evaluated millions of times (exhaustive
/// conditional expectations), so Graph construction would dominate.
struct SmallGraph {
  using Mask = std::uint64_t;
  std::vector<Mask> adj;

  SmallGraph() = default;
  explicit SmallGraph(std::size_t n) : adj(n, 0) {}
  static SmallGraph from_graph(const Graph& g);
  Graph to_graph() const;

  std::size_t n() const { return adj.size(); }
  void add_edge(std::size_t u, std::size_t v) {
    adj[u] |= Mask{1} << v;
    adj[v] |= Mask{1} << u;
  }
  void clear_vertex_edges(std::size_t v);
  bool has_edge(std::size_t u, std::size_t v) const { return (adj[u] >> v) & 1U; }
};

/// s(G[alive]) by exhaustive search on the lowest alive vertex.
int small_triangle_matching_size(const SmallGraph& g, SmallGraph::Mask alive);
int small_triangle_matching_size(const SmallGraph& g);

}  // namespace densechi
