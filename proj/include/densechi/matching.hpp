#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "densechi/graph.hpp"
#include "densechi/random.hpp"
#include "densechi/triangles.hpp"

namespace densechi {

inline constexpr Vertex kUnmatched = ~Vertex{0};

/// Disjoint split of a vertex set into sides A and B. An equipartition
/// additionally has |A| <= |B| <= |A| + 1.
struct Bipartition {
  VertexSet a;
  VertexSet b;

  bool is_equipartition() const { return a.size() <= b.size() && b.size() <= a.size() + 1; }
};

/// Uniformly random balanced split of {0..m-1} with |A| = floor(m/2).
Bipartition random_equipartition(std::size_t m, RandomSource& rng);

/// Maximum matching using only A-B edges of g (Hopcroft-Karp). Each edge is
/// reported as (a-side vertex, b-side vertex), sorted by the A endpoint.
std::vector<Edge> bipartite_max_matching(const Graph& g, const Bipartition& part);

/// A set T ⊆ A violating Hall's condition towards B.
struct HallWitness {
  VertexSet t;
  std::size_t deficiency = 0;  // |T| - |N(T) ∩ B|
};

/// Returns a maximum-deficiency Hall violator when the A-B matching cannot
/// saturate A, otherwise nothing. T is the set of A vertices reachable by
/// alternating paths from unmatched A vertices.
std::optional<HallWitness> hall_witness(const Graph& g, const Bipartition& part);

struct Matching {
  std::vector<Vertex> mate;  // kUnmatched for exposed vertices
  std::size_t size = 0;

  std::vector<Edge> edges() const;
};

/// Maximum matching in a general graph (Edmonds' blossom algorithm with
/// union-find blossom bases). Optionally warm-started from a valid matching.
Matching general_max_matching(const Graph& g);
Matching general_max_matching(const Graph& g, std::vector<Vertex> initial_mate);

struct StructureOptions {
  double q = 0.0;                     // only used to label the report and size-classify witnesses
  std::uint64_t seed = 0;             // copied into the report
  int equipartition_attempts = 1;
  double hall_c = 10.0;               // "small" Hall violators have |T| <= C/q
  TriangleSolverOptions triangle;
};

/// Outcome of the remove-S-then-match pipeline for one sample.
struct StructureReport {
  std::size_t n = 0;
  double q = 0.0;
  std::uint64_t seed = 0;
  std::size_t s = 0;
  std::size_t deficiency = 0;  // (n - |S|) - 2 * nu(G - S)
  bool near_perfect = false;   // deficiency <= 1
  std::size_t chi_structural = 0;
  std::optional<std::size_t> chi_exact;

  // Random-equipartition route, recorded separately from the verdict above.
  int equipartition_attempts = 0;
  bool equipartition_near_perfect = false;
  std::size_t bipartite_matching_size = 0;
  std::optional<std::size_t> witness_size;
  std::string witness_class;  // "small", "medium", "huge" or empty
};

StructureReport structure_check(const Graph& g, RandomSource& rng, const StructureOptions& opts = {});

/// Same pipeline with S supplied by the caller.
StructureReport structure_check(const Graph& g, const TriangleMatching& s, RandomSource& rng,
                                const StructureOptions& opts = {});

}  // namespace densechi
