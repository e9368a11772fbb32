#include "densechi/small_graph.hpp"

#include <bit>

#include "densechi/error.hpp"

namespace densechi {

SmallGraph SmallGraph::from_graph(const Graph& g) {
  require(g.n() <= 64, "SmallGraph supports at most 64 vertices");
  SmallGraph s(g.n());
  for (auto [u, v] : g.edges()) s.add_edge(u, v);
  return s;
}

Graph SmallGraph::to_graph() const {
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n(); ++u)
    for (std::size_t v = u + 1; v < n(); ++v)
      if (has_edge(u, v)) edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  return Graph::from_edges(n(), edges);
}

void SmallGraph::clear_vertex_edges(std::size_t v) {
  Mask nb = adj[v];
  while (nb) {
    const int u = std::countr_zero(nb);
    nb &= nb - 1;
    adj[static_cast<std::size_t>(u)] &= ~(Mask{1} << v);
  }
  adj[v] = 0;
}

namespace {

using Mask = SmallGraph::Mask;

// Returns s(G[alive]) when it is below cap, otherwise some value >= cap.
int search(const SmallGraph& g, Mask alive, int cap) {
  if (cap <= 0) return 0;
  int best = 0;
  while (alive) {
    const int v = std::countr_zero(alive);
    const Mask vbit = Mask{1} << v;
    const Mask nb = g.adj[static_cast<std::size_t>(v)] & alive;
    // Does v lie in a triangle inside alive?
    bool in_triangle = false;
    for (Mask rest = nb; rest && !in_triangle; rest &= rest - 1) {
      const int a = std::countr_zero(rest);
      if (g.adj[static_cast<std::size_t>(a)] & nb) in_triangle = true;
    }
    if (!in_triangle) {
      alive &= ~vbit;
      continue;
    }
    const int bound = std::popcount(alive) / 3;
    const int limit = bound < cap ? bound : cap;
    // Leave v uncovered.
    best = search(g, alive & ~vbit, limit);
    if (best >= limit) return best;
    for (Mask rest = nb; rest; rest &= rest - 1) {
      const int a = std::countr_zero(rest);
      const Mask abit = Mask{1} << a;
      for (Mask cs = g.adj[static_cast<std::size_t>(a)] & nb & ~((abit << 1) - 1); cs; cs &= cs - 1) {
        const int c = std::countr_zero(cs);
        const Mask remaining = alive & ~(vbit | abit | (Mask{1} << c));
        const int value = 1 + search(g, remaining, limit - 1);
        if (value > best) {
          best = value;
          if (best >= limit) return best;
        }
      }
    }
    return best;
  }
  return best;
}

}  // namespace

int small_triangle_matching_size(const SmallGraph& g, SmallGraph::Mask alive) {
  return search(g, alive, 64);
}

int small_triangle_matching_size(const SmallGraph& g) {
  const Mask all = g.n() == 64 ? ~Mask{0} : ((Mask{1} << g.n()) - 1);
  return search(g, all, 64);
}

}  // namespace densechi
