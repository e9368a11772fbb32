#include "densechi/oracles.hpp"

#include <bit>
#include <sstream>

#include "densechi/chromatic.hpp"
#include "densechi/error.hpp"
#include "densechi/matching.hpp"
#include "densechi/triangles.hpp"

namespace densechi {

namespace oracle {

namespace {

using Mask = std::uint32_t;

std::vector<Mask> adjacency_masks(const Graph& g, std::size_t cap) {
  require(g.n() <= cap, "oracle: graph too large for subset enumeration");
  std::vector<Mask> adj(g.n(), 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= Mask{1} << v;
    adj[v] |= Mask{1} << u;
  }
  return adj;
}

// best[mask] over vertex subsets; pieces are edges (weight edge_w) and
// triangles (weight tri_w) containing the lowest vertex of the mask.
std::size_t subset_dp(const Graph& g, std::size_t edge_w, std::size_t tri_w) {
  const auto adj = adjacency_masks(g, 20);
  const std::size_t n = g.n();
  std::vector<std::uint8_t> best(std::size_t{1} << n, 0);
  for (std::size_t mask = 1; mask < best.size(); ++mask) {
    const auto v = static_cast<std::size_t>(std::countr_zero(mask));
    const Mask rest = static_cast<Mask>(mask) & ~(Mask{1} << v);
    std::size_t b = best[rest];
    for (Mask as = adj[v] & rest; as; as &= as - 1) {
      const auto a = static_cast<std::size_t>(std::countr_zero(as));
      const Mask without_a = rest & ~(Mask{1} << a);
      if (edge_w) b = std::max(b, edge_w + best[without_a]);
      if (tri_w)
        for (Mask cs = adj[a] & adj[v] & without_a; cs; cs &= cs - 1) {
          const auto c = static_cast<std::size_t>(std::countr_zero(cs));
          b = std::max(b, tri_w + best[without_a & ~(Mask{1} << c)]);
        }
    }
    best[mask] = static_cast<std::uint8_t>(b);
  }
  return best.back();
}

bool colorable(const std::vector<Mask>& adj, std::vector<int>& color, std::size_t v, int k, int used) {
  if (v == adj.size()) return true;
  for (int c = 0; c < k && c <= used; ++c) {
    bool ok = true;
    for (std::size_t w = 0; w < v; ++w)
      if (((adj[v] >> w) & 1U) && color[w] == c) {
        ok = false;
        break;
      }
    if (!ok) continue;
    color[v] = c;
    if (colorable(adj, color, v + 1, k, std::max(used, c + 1))) return true;
  }
  return false;
}

}  // namespace

std::size_t triangle_matching_size(const Graph& g) { return subset_dp(g, 0, 1); }

std::size_t matching_size(const Graph& g) { return subset_dp(g, 1, 0); }

std::size_t packing_weight(const Graph& g) { return subset_dp(g, 1, 2); }

std::size_t chromatic_number(const Graph& g) {
  const auto adj = adjacency_masks(g, 16);
  std::vector<int> color(g.n(), -1);
  for (int k = 1; k <= static_cast<int>(g.n()); ++k)
    if (colorable(adj, color, 0, k, 0)) return static_cast<std::size_t>(k);
  return 0;
}

std::size_t max_hall_deficiency(const Graph& g, const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
  require(a.size() <= 20, "oracle: side A too large");
  std::vector<char> in_b(g.n(), 0);
  for (Vertex x : b) in_b[x] = 1;
  std::size_t best = 0;
  for (std::uint32_t sub = 0; sub < (std::uint32_t{1} << a.size()); ++sub) {
    std::vector<char> hit(g.n(), 0);
    std::size_t t = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!((sub >> i) & 1U)) continue;
      ++t;
      for (Vertex w : g.neighbors(a[i]))
        if (in_b[w] && !hit[w]) {
          hit[w] = 1;
          ++nb;
        }
    }
    if (t > nb) best = std::max(best, t - nb);
  }
  return best;
}

}  // namespace oracle

std::string edge_list_text(const Graph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

namespace {

double grid_q(RandomSource& rng, int max_tenths) {
  return 0.1 * static_cast<double>(1 + rng.below(static_cast<std::uint64_t>(max_tenths)));
}

template <typename Check>
OracleCheck run_check(const std::string& name, std::size_t count, Check&& check) {
  OracleCheck r;
  r.name = name;
  for (std::size_t i = 0; i < count; ++i) {
    ++r.checked;
    std::string mismatch;
    if (check(i, mismatch))
      ++r.agreed;
    else if (r.first_mismatch.empty())
      r.first_mismatch = mismatch;
  }
  return r;
}

}  // namespace

OracleCheck check_triangle_matching(std::size_t count, std::size_t max_n, std::uint64_t seed) {
  require(max_n >= 3 && max_n <= 20, "check_triangle_matching: max_n must lie in [3, 20]");
  return run_check("triangle_matching", count, [&](std::size_t i, std::string& mismatch) {
    RandomSource rng(seed, i);
    const std::size_t n = 3 + rng.below(max_n - 2);
    const Graph g = sample_gnq(n, grid_q(rng, 9), rng);
    const auto m = max_triangle_matching(g);
    bool ok = m.size() == oracle::triangle_matching_size(g) && m.covered.size() == 3 * m.size();
    for (const auto& t : m.triangles)
      ok = ok && g.has_edge(t.v[0], t.v[1]) && g.has_edge(t.v[0], t.v[2]) && g.has_edge(t.v[1], t.v[2]);
    if (!ok) mismatch = edge_list_text(g);
    return ok;
  });
}

OracleCheck check_packing_chi(std::size_t count, std::size_t max_n, std::uint64_t seed) {
  require(max_n >= 4 && max_n <= 16, "check_packing_chi: max_n must lie in [4, 16]");
  std::uint64_t attempt = 0;
  return run_check("packing_chi", count, [&](std::size_t, std::string& mismatch) {
    for (;;) {
      RandomSource rng(seed, attempt++);
      const std::size_t n = 4 + rng.below(max_n - 3);
      const Graph sparse = sample_gnq(n, grid_q(rng, 5), rng);
      if (has_k4(sparse)) continue;
      const Graph dense = complement(sparse);
      const ChiResult packed = packing_chi(dense);
      const ChiResult generic = generic_exact_chi(dense);
      const bool ok = packed.chi == generic.chi && packed.certificate &&
                      check_coloring(dense, *packed.certificate) == packed.chi;
      if (!ok) mismatch = edge_list_text(dense);
      return ok;
    }
  });
}

OracleCheck check_general_matching(std::size_t count, std::size_t max_n, std::uint64_t seed) {
  require(max_n >= 2 && max_n <= 20, "check_general_matching: max_n must lie in [2, 20]");
  return run_check("general_matching", count, [&](std::size_t i, std::string& mismatch) {
    RandomSource rng(seed, i);
    const std::size_t n = 2 + rng.below(max_n - 1);
    const Graph g = sample_gnq(n, grid_q(rng, 9) * 0.6, rng);
    const Matching m = general_max_matching(g);
    bool ok = m.size == oracle::matching_size(g);
    for (auto [u, v] : m.edges()) ok = ok && g.has_edge(u, v);
    if (!ok) mismatch = edge_list_text(g);
    return ok;
  });
}

OracleCheck check_hall_duality(std::size_t count, std::size_t max_n, std::uint64_t seed) {
  require(max_n >= 2 && max_n <= 24, "check_hall_duality: max_n must lie in [2, 24]");
  return run_check("hall_duality", count, [&](std::size_t i, std::string& mismatch) {
    RandomSource rng(seed, i);
    const std::size_t n = 2 + rng.below(max_n - 1);
    const Graph g = sample_gnq(n, grid_q(rng, 9) * 0.5, rng);
    const Bipartition part = random_equipartition(n, rng);
    const std::vector<Vertex> a(part.a.begin(), part.a.end()), b(part.b.begin(), part.b.end());
    const std::size_t size = bipartite_max_matching(g, part).size();
    const std::size_t deficiency = oracle::max_hall_deficiency(g, a, b);
    bool ok = size == a.size() - deficiency;
    const auto w = hall_witness(g, part);
    if (w) {
      const VertexSet nb = set_intersection(neighborhood(g, w->t), part.b);
      ok = ok && w->deficiency == deficiency && w->t.size() == w->deficiency + nb.size() &&
           set_difference(w->t, part.a).empty();
    } else {
      ok = ok && deficiency == 0;
    }
    if (!ok) mismatch = edge_list_text(g);
    return ok;
  });
}

OracleCheck check_packing_weight(std::size_t count, std::size_t max_n, std::uint64_t seed) {
  require(max_n >= 3 && max_n <= 20, "check_packing_weight: max_n must lie in [3, 20]");
  return run_check("packing_weight", count, [&](std::size_t i, std::string& mismatch) {
    RandomSource rng(seed, i);
    const std::size_t n = 3 + rng.below(max_n - 2);
    const Graph g = sample_gnq(n, grid_q(rng, 9), rng);
    const Packing p = max_weight_packing(g);
    const bool ok = p.weight() == oracle::packing_weight(g);
    if (!ok) mismatch = edge_list_text(g);
    return ok;
  });
}

}  // namespace densechi
