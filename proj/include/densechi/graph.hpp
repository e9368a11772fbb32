#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "densechi/random.hpp"

namespace densechi {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Sorted, duplicate-free set of vertex indices.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<Vertex> members);
  explicit VertexSet(std::vector<Vertex> members);

  std::span<const Vertex> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(Vertex v) const;
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> members_;
};

VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);

/// Undirected simple graph on vertices 0..n-1, stored as CSR with every
/// neighbour list sorted ascending. Immutable once built, so it can be
/// shared freely between worker threads.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}
  explicit Graph(std::size_t n) : n_(n), offsets_(n + 1, 0) {}

  /// Builds a graph from an edge list. Duplicates (in either orientation)
  /// are merged; self-loops and out-of-range endpoints are rejected.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);
  static Graph from_edges(std::size_t n, std::initializer_list<Edge> edges) {
    return from_edges(n, std::span<const Edge>(edges.begin(), edges.size()));
  }

  std::size_t n() const { return n_; }
  std::size_t edge_count() const { return neighbors_.size() / 2; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const;
  bool has_edge(Vertex u, Vertex v) const;

  /// Edges (u, v) with u < v in lexicographic order.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> neighbors_;
};

/// G(n, q): every pair independently an edge with probability q.
/// Uses geometric skipping over the pair order when q <= 0.1.
Graph sample_gnq(std::size_t n, double q, RandomSource& rng);

Graph complement(const Graph& g);

/// Vertices outside t with a neighbour in t.
VertexSet neighborhood(const Graph& g, const VertexSet& t);

struct InducedSubgraph {
  Graph graph;
  std::vector<Vertex> to_original;  // new index -> original vertex
};

/// G - S: the subgraph induced on V(G) \ S, relabelled in increasing order.
InducedSubgraph induced_remove(const Graph& g, const VertexSet& s);

Graph union_graphs(const Graph& g1, const Graph& g2);

/// Edge-list text format: header "n m", then one "u v" line per edge, u < v,
/// in lexicographic order.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

}  // namespace densechi
