#include "densechi/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "densechi/error.hpp"

namespace densechi {

VertexSet::VertexSet(std::initializer_list<Vertex> members)
    : VertexSet(std::vector<Vertex>(members)) {}

VertexSet::VertexSet(std::vector<Vertex> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool VertexSet::contains(Vertex v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(std::move(out));
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(std::move(out));
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  std::vector<Vertex> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(std::move(out));
}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  Graph g(n);
  std::vector<std::size_t> degree(n, 0);
  for (auto [u, v] : edges) {
    require(u < n && v < n, "edge endpoint out of range");
    require(u != v, "self-loop in edge list");
    ++degree[u];
    ++degree[v];
  }
  std::vector<std::size_t> cursor(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) cursor[v + 1] = cursor[v] + degree[v];
  std::vector<Vertex> raw(cursor[n]);
  std::vector<std::size_t> fill(cursor.begin(), cursor.end() - 1);
  for (auto [u, v] : edges) {
    raw[fill[u]++] = v;
    raw[fill[v]++] = u;
  }
  g.neighbors_.reserve(raw.size());
  for (std::size_t v = 0; v < n; ++v) {
    auto first = raw.begin() + static_cast<std::ptrdiff_t>(cursor[v]);
    auto last = raw.begin() + static_cast<std::ptrdiff_t>(cursor[v + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    g.neighbors_.insert(g.neighbors_.end(), first, last);
    g.offsets_[v + 1] = g.neighbors_.size();
  }
  return g;
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (std::size_t v = 0; v < n_; ++v) best = std::max(best, degree(static_cast<Vertex>(v)));
  return best;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (u >= n_ || v >= n_) return false;
  if (degree(u) > degree(v)) std::swap(u, v);
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph sample_gnq(std::size_t n, double q, RandomSource& rng) {
  require(q >= 0.0 && q <= 1.0, "q must lie in [0, 1]");
  std::vector<Edge> edges;
  if (n < 2 || q == 0.0) return Graph::from_edges(n, edges);
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  edges.reserve(static_cast<std::size_t>(pairs * q * 1.05 + 16));

  if (q <= 0.1) {
    // Walk the row-major pair order (0,1),(0,2),...,(n-2,n-1), jumping over
    // geometrically distributed runs of non-edges.
    const double log1m_q = std::log1p(-q);
    std::uint64_t u = 0, v = 0;  // v is the last visited column in row u
    for (;;) {
      const std::uint64_t skip = rng.geometric_skip(log1m_q);
      if (static_cast<double>(skip) >= pairs) break;
      std::uint64_t step = skip + 1;
      while (u < n - 1) {
        const std::uint64_t remaining = (n - 1) - v;  // pairs left in row u
        if (step <= remaining) {
          v += step;
          break;
        }
        step -= remaining;
        ++u;
        v = u;
      }
      if (u >= n - 1) break;
      edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
  } else {
    for (Vertex u = 0; u + 1 < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (rng.bernoulli(q)) edges.emplace_back(u, v);
  }
  return Graph::from_edges(n, edges);
}

Graph complement(const Graph& g) {
  const std::size_t n = g.n();
  std::vector<Edge> edges;
  std::vector<char> adjacent(n, 0);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex w : g.neighbors(u)) adjacent[w] = 1;
    for (Vertex v = u + 1; v < n; ++v)
      if (!adjacent[v]) edges.emplace_back(u, v);
    for (Vertex w : g.neighbors(u)) adjacent[w] = 0;
  }
  return Graph::from_edges(n, edges);
}

VertexSet neighborhood(const Graph& g, const VertexSet& t) {
  std::vector<Vertex> out;
  for (Vertex x : t) {
    require(x < g.n(), "vertex out of range in neighborhood()");
    auto nb = g.neighbors(x);
    out.insert(out.end(), nb.begin(), nb.end());
  }
  VertexSet all(std::move(out));
  return set_difference(all, t);
}

InducedSubgraph induced_remove(const Graph& g, const VertexSet& s) {
  const std::size_t n = g.n();
  constexpr Vertex kRemoved = ~Vertex{0};
  std::vector<Vertex> relabel(n, kRemoved);
  InducedSubgraph out;
  for (Vertex v = 0; v < n; ++v) {
    if (s.contains(v)) continue;
    relabel[v] = static_cast<Vertex>(out.to_original.size());
    out.to_original.push_back(v);
  }
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    if (relabel[u] == kRemoved) continue;
    for (Vertex v : g.neighbors(u))
      if (u < v && relabel[v] != kRemoved) edges.emplace_back(relabel[u], relabel[v]);
  }
  out.graph = Graph::from_edges(out.to_original.size(), edges);
  return out;
}

Graph union_graphs(const Graph& g1, const Graph& g2) {
  require(g1.n() == g2.n(), "union_graphs: vertex counts differ");
  auto edges = g1.edges();
  auto more = g2.edges();
  edges.insert(edges.end(), more.begin(), more.end());
  return Graph::from_edges(g1.n(), edges);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.n() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& in) {
  std::size_t n = 0, m = 0;
  if (!(in >> n >> m)) throw ParameterError("edge list: missing 'n m' header");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::uint64_t u, v;
    if (!(in >> u >> v)) throw ParameterError("edge list: expected " + std::to_string(m) + " edges");
    require(u < n && v < n, "edge list: endpoint out of range");
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  Graph g = Graph::from_edges(n, edges);
  require(g.edge_count() == m, "edge list: duplicate edges");
  return g;
}

}  // namespace densechi
