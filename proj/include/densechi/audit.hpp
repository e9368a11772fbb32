#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "densechi/graph.hpp"
#include "densechi/random.hpp"
#include "densechi/triangles.hpp"

namespace densechi {

struct Omega0Choice {
  double value = 1.0;
  std::size_t n = 0;
  double q = 0.0;
  bool regime_warning = false;  // n^2 q^3 >= 1: the exp(-omega0) constraint cannot hold
};

/// max(1, min((nq / ln n)^{1/3}, ln(1 / (n^2 q^3)))). When n^2 q^3 >= 1 only
/// the first term is used and the warning flag is set.
Omega0Choice choose_omega0(std::size_t n, double q);

struct AuditPlan {
  std::size_t samples_per_size = 200;
  std::size_t exhaustive_max_size = 2;  // 0, 1 or 2
};

/// Checks at one set size |T|; rates are violations / checked.
struct SizeBucket {
  std::size_t size = 0;
  bool exhaustive = false;
  std::uint64_t checked_iii = 0, violations_iii = 0;
  std::uint64_t checked_iv = 0, violations_iv = 0;
};

struct RAuditReport {
  std::size_t n = 0;
  double q = 0.0;
  double omega0 = 0.0;

  std::uint64_t x3 = 0;
  double x3_bound = 0.0;  // n^3 q^3
  bool prop_i = false;

  std::uint64_t max_edges_in_neighborhood = 0;
  double edges_bound = 0.0;  // omega0 * ln n
  bool prop_ii_edges = false;
  std::uint64_t max_codegree = 0;
  double codegree_bound = 0.0;  // omega0
  bool prop_ii_codeg = false;

  double prop_iii_rate = 0.0;  // nq|T|/2 <= |N(T)| <= 3nq|T|/2 fails
  double prop_iv_rate = 0.0;   // |N(T)| >= (1 - e^{-q|T|/2}) n fails
  std::vector<SizeBucket> buckets;
  AuditPlan plan;
};

/// Properties (i) and (ii) exhaustively; (iii) and (iv) exhaustively for
/// |T| <= plan.exhaustive_max_size and on uniformly sampled T for sizes on
/// the geometric grids 4, 8, ..., floor(1/q) and ceil(1/q) .. floor(omega0/q).
RAuditReport audit_R(const Graph& g, double q, double omega0, RandomSource& sampler,
                     const AuditPlan& plan = {});

/// Vertices of N(T) lying in a triangle that meets T.
VertexSet count_lambda1(const Graph& g, const VertexSet& t);
/// Vertices of N(T) lying in a triangle disjoint from T.
VertexSet count_lambda2(const Graph& g, const VertexSet& t);
/// Triangles with a vertex in A and no vertex in T, each counted once.
/// A and T must be disjoint.
std::uint64_t count_Z(const Graph& g, const VertexSet& t, const VertexSet& a);

struct DBucket {
  std::size_t size = 0;
  bool exhaustive = false;
  std::uint64_t checked = 0;
  std::uint64_t holds = 0;  // |N(T) ∩ S| > delta |N(T)|

  double rate() const { return checked == 0 ? 0.0 : static_cast<double>(holds) / static_cast<double>(checked); }
};

struct DAuditReport {
  double delta = 0.1;
  std::size_t s_size = 0;
  std::vector<DBucket> buckets;
};

/// Frequency of the event D(T) by |T|: exhaustive for small T, sampled on
/// the grid 4, 8, ..., floor(n/2).
DAuditReport audit_D(const Graph& g, const VertexSet& s, double delta, RandomSource& sampler,
                     const AuditPlan& plan = {});

/// exp(-r t / (k (2 ex + t))). All inputs positive.
double deletion_bound(double r, double t, double k, double ex);

/// exp(-c n^2 q^2). delta is carried for the record; it does not enter the value.
double kimvu_bound(double n, double q, double delta, double c);

nlohmann::json to_json(const Omega0Choice& w);
nlohmann::json to_json(const RAuditReport& r);
nlohmann::json to_json(const DAuditReport& r);

}  // namespace densechi
