#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "densechi/graph.hpp"
#include "densechi/random.hpp"

namespace densechi {

// Slow reference implementations for cross-validation on small graphs.
// They share no code with the production solvers.
namespace oracle {

/// Maximum number of disjoint triangles, by dynamic programming over vertex
/// subsets (n <= 20).
std::size_t triangle_matching_size(const Graph& g);

/// Maximum matching size by dynamic programming over vertex subsets (n <= 20).
std::size_t matching_size(const Graph& g);

/// Maximum weight of a disjoint triangle (2) / edge (1) packing (n <= 20).
std::size_t packing_weight(const Graph& g);

/// Chromatic number by testing k = 1, 2, ... with plain backtracking (n <= 16).
std::size_t chromatic_number(const Graph& g);

/// max over T ⊆ A of |T| - |N(T) ∩ B|, by enumerating subsets of A (|A| <= 20).
std::size_t max_hall_deficiency(const Graph& g, const std::vector<Vertex>& a, const std::vector<Vertex>& b);

}  // namespace oracle

struct OracleCheck {
  std::string name;
  std::size_t checked = 0;
  std::size_t agreed = 0;
  std::string first_mismatch;  // edge list of the first disagreeing graph

  bool passed() const { return checked > 0 && checked == agreed; }
};

/// max_triangle_matching vs the subset DP on `count` graphs with n in
/// [3, max_n] and q drawn from {0.1, ..., 0.9}.
OracleCheck check_triangle_matching(std::size_t count, std::size_t max_n, std::uint64_t seed);

/// packing_chi vs generic_exact_chi on `count` dense graphs with n in
/// [4, max_n] whose complements are K4-free.
OracleCheck check_packing_chi(std::size_t count, std::size_t max_n, std::uint64_t seed);

/// general_max_matching vs the subset DP.
OracleCheck check_general_matching(std::size_t count, std::size_t max_n, std::uint64_t seed);

/// Hopcroft-Karp size and Hall witness deficiency vs König duality by subset
/// enumeration, on random equipartitions.
OracleCheck check_hall_duality(std::size_t count, std::size_t max_n, std::uint64_t seed);

/// max_weight_packing weight vs the subset DP.
OracleCheck check_packing_weight(std::size_t count, std::size_t max_n, std::uint64_t seed);

std::string edge_list_text(const Graph& g);

}  // namespace densechi
