#include "densechi/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "densechi/error.hpp"

namespace densechi {

Omega0Choice choose_omega0(std::size_t n, double q) {
  require(q > 0.0 && q < 1.0, "choose_omega0: q must lie in (0,1)");
  require(n >= 3, "choose_omega0: n must be at least 3");
  const double nd = static_cast<double>(n);
  Omega0Choice w;
  w.n = n;
  w.q = q;
  const double first = std::cbrt(nd * q / std::log(nd));
  const double density = nd * nd * q * q * q;
  double value = first;
  if (density >= 1.0)
    w.regime_warning = true;
  else
    value = std::min(first, -std::log(density));
  w.value = std::max(1.0, value);
  return w;
}

namespace {

// Sizes 4, 8, 16, ... below hi, then hi itself.
std::vector<std::size_t> doubling_grid(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (std::size_t k = lo; k < hi; k *= 2) out.push_back(k);
  if (hi >= lo) out.push_back(hi);
  return out;
}

class NeighborhoodCounter {
 public:
  explicit NeighborhoodCounter(const Graph& g) : g_(g), stamp_(g.n(), 0) {}

  // |N(T)| and |N(T) ∩ marked|.
  std::pair<std::size_t, std::size_t> count(std::span<const Vertex> t, const std::vector<char>* marked) {
    ++epoch_;
    for (Vertex x : t) stamp_[x] = epoch_;
    std::size_t total = 0, in_marked = 0;
    const std::uint32_t seen = epoch_ + 0x80000000U;
    for (Vertex x : t)
      for (Vertex y : g_.neighbors(x)) {
        if (stamp_[y] == epoch_ || stamp_[y] == seen) continue;
        stamp_[y] = seen;
        ++total;
        if (marked && (*marked)[y]) ++in_marked;
      }
    return {total, in_marked};
  }

 private:
  const Graph& g_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

// Uniform k-subset by a partial Fisher-Yates pass over a reusable permutation.
class SubsetSampler {
 public:
  explicit SubsetSampler(std::size_t n) : perm_(n) { std::iota(perm_.begin(), perm_.end(), Vertex{0}); }

  std::span<const Vertex> draw(std::size_t k, RandomSource& rng) {
    for (std::size_t i = 0; i < k; ++i) std::swap(perm_[i], perm_[i + rng.below(perm_.size() - i)]);
    return {perm_.data(), k};
  }

 private:
  std::vector<Vertex> perm_;
};

// Visits every unordered pair {x, y} with |N(x)|, |N(y)|, adjacency,
// codegree and the number of common neighbours in `marked`.
template <typename Visit>
void for_each_pair(const Graph& g, const std::vector<char>* marked, Visit&& visit) {
  const std::size_t n = g.n();
  std::vector<std::uint32_t> codeg(n, 0), codeg_marked(n, 0);
  std::vector<Vertex> touched;
  for (Vertex x = 0; x < n; ++x) {
    touched.clear();
    for (Vertex w : g.neighbors(x))
      for (Vertex y : g.neighbors(w)) {
        if (y <= x) continue;
        if (codeg[y] == 0) touched.push_back(y);
        ++codeg[y];
        if (marked && (*marked)[w]) ++codeg_marked[y];
      }
    for (Vertex y = x + 1; y < n; ++y) visit(x, y, codeg[y], codeg_marked[y]);
    for (Vertex y : touched) codeg[y] = codeg_marked[y] = 0;
  }
}

}  // namespace

RAuditReport audit_R(const Graph& g, double q, double omega0, RandomSource& sampler, const AuditPlan& plan) {
  require(q > 0.0 && q < 1.0, "audit_R: q must lie in (0,1)");
  require(plan.exhaustive_max_size <= 2, "audit_R: exhaustive sizes above 2 are not supported");
  const std::size_t n = g.n();
  const double nd = static_cast<double>(n);
  RAuditReport r;
  r.n = n;
  r.q = q;
  r.omega0 = omega0;
  r.plan = plan;

  const auto tris = enumerate_triangles(g);
  r.x3 = tris.size();
  r.x3_bound = nd * nd * nd * q * q * q;
  r.prop_i = static_cast<double>(r.x3) <= r.x3_bound;

  // e(N(x)) is the number of triangles through x.
  std::vector<std::uint64_t> through(n, 0);
  for (const auto& t : tris)
    for (Vertex x : t.v) ++through[x];
  r.max_edges_in_neighborhood = n == 0 ? 0 : *std::max_element(through.begin(), through.end());
  r.edges_bound = omega0 * std::log(nd);
  r.prop_ii_edges = static_cast<double>(r.max_edges_in_neighborhood) <= r.edges_bound;

  const double upper_iii = 1.0 / q;
  const double lower_iv = 1.0 / q, upper_iv = omega0 / q;
  auto iii_ok = [&](double size, double nt) {
    const double half = nd * q * size / 2.0;
    return half <= nt && nt <= 3.0 * half;
  };
  auto iv_ok = [&](double size, double nt) { return nt >= -std::expm1(-q * size / 2.0) * nd; };
  auto applies_iii = [&](double size) { return size <= upper_iii; };
  auto applies_iv = [&](double size) { return size >= lower_iv && size <= upper_iv; };

  auto tally = [&](SizeBucket& b, double nt) {
    const double size = static_cast<double>(b.size);
    if (applies_iii(size)) {
      ++b.checked_iii;
      if (!iii_ok(size, nt)) ++b.violations_iii;
    }
    if (applies_iv(size)) {
      ++b.checked_iv;
      if (!iv_ok(size, nt)) ++b.violations_iv;
    }
  };

  // Codegree maximum over all pairs, together with |T| = 2 checks.
  SizeBucket one{1, true}, two{2, true};
  if (plan.exhaustive_max_size >= 1)
    for (Vertex x = 0; x < n; ++x) tally(one, static_cast<double>(g.degree(x)));
  std::uint64_t max_codeg = 0;
  const bool pairs = plan.exhaustive_max_size >= 2;
  for_each_pair(g, nullptr, [&](Vertex x, Vertex y, std::uint32_t codeg, std::uint32_t) {
    max_codeg = std::max<std::uint64_t>(max_codeg, codeg);
    if (!pairs) return;
    const std::size_t adjacent = g.has_edge(x, y) ? 2 : 0;
    tally(two, static_cast<double>(g.degree(x) + g.degree(y) - codeg - adjacent));
  });
  r.max_codegree = max_codeg;
  r.codegree_bound = omega0;
  r.prop_ii_codeg = static_cast<double>(max_codeg) <= omega0;
  if (plan.exhaustive_max_size >= 1) r.buckets.push_back(one);
  if (pairs) r.buckets.push_back(two);

  // Sampled sizes beyond the exhaustive range.
  std::vector<std::size_t> sizes = doubling_grid(4, static_cast<std::size_t>(std::floor(upper_iii)));
  for (std::size_t k : doubling_grid(static_cast<std::size_t>(std::ceil(lower_iv)),
                                     static_cast<std::size_t>(std::floor(upper_iv))))
    sizes.push_back(k);
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  NeighborhoodCounter counter(g);
  SubsetSampler subsets(n);
  std::uint64_t draw_id = 0;
  for (std::size_t k : sizes) {
    if (k <= plan.exhaustive_max_size || k > n) continue;
    SizeBucket b{k, false};
    for (std::size_t i = 0; i < plan.samples_per_size; ++i) {
      RandomSource rng = sampler.child(draw_id++);
      const auto t = subsets.draw(k, rng);
      tally(b, static_cast<double>(counter.count(t, nullptr).first));
    }
    r.buckets.push_back(b);
  }

  std::uint64_t c3 = 0, v3 = 0, c4 = 0, v4 = 0;
  for (const auto& b : r.buckets) {
    c3 += b.checked_iii;
    v3 += b.violations_iii;
    c4 += b.checked_iv;
    v4 += b.violations_iv;
  }
  r.prop_iii_rate = c3 == 0 ? 0.0 : static_cast<double>(v3) / static_cast<double>(c3);
  r.prop_iv_rate = c4 == 0 ? 0.0 : static_cast<double>(v4) / static_cast<double>(c4);
  return r;
}

namespace {

// Vertices of N(T) on a triangle that meets T (meeting = true) or avoids it.
VertexSet lambda(const Graph& g, const VertexSet& t, bool meeting) {
  for (Vertex x : t) require(x < g.n(), "lambda: vertex out of range");
  const VertexSet nt = neighborhood(g, t);
  std::vector<char> in_nt(g.n(), 0);
  for (Vertex x : nt) in_nt[x] = 1;
  std::vector<Vertex> out;
  for (const auto& tri : enumerate_triangles(g)) {
    const bool meets = t.contains(tri.v[0]) || t.contains(tri.v[1]) || t.contains(tri.v[2]);
    if (meets != meeting) continue;
    for (Vertex x : tri.v)
      if (in_nt[x]) out.push_back(x);
  }
  return VertexSet(std::move(out));
}

}  // namespace

VertexSet count_lambda1(const Graph& g, const VertexSet& t) { return lambda(g, t, true); }

VertexSet count_lambda2(const Graph& g, const VertexSet& t) { return lambda(g, t, false); }

std::uint64_t count_Z(const Graph& g, const VertexSet& t, const VertexSet& a) {
  require(set_intersection(t, a).empty(), "count_Z: A and T overlap");
  std::uint64_t z = 0;
  for (const auto& tri : enumerate_triangles(g)) {
    bool in_t = false, in_a = false;
    for (Vertex x : tri.v) {
      in_t = in_t || t.contains(x);
      in_a = in_a || a.contains(x);
    }
    if (in_a && !in_t) ++z;
  }
  return z;
}

DAuditReport audit_D(const Graph& g, const VertexSet& s, double delta, RandomSource& sampler,
                     const AuditPlan& plan) {
  require(delta >= 0.0, "audit_D: delta must be nonnegative");
  require(plan.exhaustive_max_size <= 2, "audit_D: exhaustive sizes above 2 are not supported");
  const std::size_t n = g.n();
  std::vector<char> in_s(n, 0);
  for (Vertex x : s) {
    require(x < n, "audit_D: S vertex out of range");
    in_s[x] = 1;
  }
  DAuditReport r;
  r.delta = delta;
  r.s_size = s.size();
  auto record = [&](DBucket& b, std::size_t nt, std::size_t nts) {
    ++b.checked;
    if (static_cast<double>(nts) > delta * static_cast<double>(nt)) ++b.holds;
  };

  std::vector<std::size_t> deg_s(n, 0);
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y : g.neighbors(x)) deg_s[x] += in_s[y];

  if (plan.exhaustive_max_size >= 1) {
    DBucket one{1, true};
    for (Vertex x = 0; x < n; ++x) record(one, g.degree(x), deg_s[x]);
    r.buckets.push_back(one);
  }
  if (plan.exhaustive_max_size >= 2) {
    DBucket two{2, true};
    for_each_pair(g, &in_s, [&](Vertex x, Vertex y, std::uint32_t codeg, std::uint32_t codeg_s) {
      const bool adjacent = g.has_edge(x, y);
      const std::size_t nt = g.degree(x) + g.degree(y) - codeg - (adjacent ? 2 : 0);
      const std::size_t nts = deg_s[x] + deg_s[y] - codeg_s - (adjacent ? in_s[x] + in_s[y] : 0);
      record(two, nt, nts);
    });
    r.buckets.push_back(two);
  }

  NeighborhoodCounter counter(g);
  SubsetSampler subsets(n);
  std::uint64_t draw_id = 0;
  for (std::size_t k : doubling_grid(4, n / 2)) {
    if (k <= plan.exhaustive_max_size) continue;
    DBucket b{k, false};
    for (std::size_t i = 0; i < plan.samples_per_size; ++i) {
      RandomSource rng = sampler.child(draw_id++);
      const auto [nt, nts] = counter.count(subsets.draw(k, rng), &in_s);
      record(b, nt, nts);
    }
    r.buckets.push_back(b);
  }
  return r;
}

double deletion_bound(double r, double t, double k, double ex) {
  require(r > 0.0 && t > 0.0 && k > 0.0 && ex > 0.0, "deletion_bound: inputs must be positive");
  return std::exp(-r * t / (k * (2.0 * ex + t)));
}

double kimvu_bound(double n, double q, double delta, double c) {
  require(n > 0.0 && q >= 0.0 && delta > 0.0 && c > 0.0, "kimvu_bound: invalid input");
  return std::exp(-c * n * n * q * q);
}

nlohmann::json to_json(const Omega0Choice& w) {
  return {{"value", w.value}, {"n", w.n}, {"q", w.q}, {"regime_warning", w.regime_warning}};
}

nlohmann::json to_json(const RAuditReport& r) {
  nlohmann::json buckets = nlohmann::json::array();
  for (const auto& b : r.buckets)
    buckets.push_back({{"size", b.size},
                       {"exhaustive", b.exhaustive},
                       {"checked_iii", b.checked_iii},
                       {"violations_iii", b.violations_iii},
                       {"checked_iv", b.checked_iv},
                       {"violations_iv", b.violations_iv}});
  return {{"n", r.n},
          {"q", r.q},
          {"omega0", r.omega0},
          {"x3", r.x3},
          {"x3_bound", r.x3_bound},
          {"prop_i", r.prop_i},
          {"max_edges_in_neighborhood", r.max_edges_in_neighborhood},
          {"edges_bound", r.edges_bound},
          {"prop_ii_edges", r.prop_ii_edges},
          {"max_codegree", r.max_codegree},
          {"codegree_bound", r.codegree_bound},
          {"prop_ii_codeg", r.prop_ii_codeg},
          {"prop_iii_rate", r.prop_iii_rate},
          {"prop_iv_rate", r.prop_iv_rate},
          {"sampling_plan",
           {{"samples_per_size", r.plan.samples_per_size}, {"exhaustive_max_size", r.plan.exhaustive_max_size}}},
          {"buckets", buckets}};
}

nlohmann::json to_json(const DAuditReport& r) {
  nlohmann::json buckets = nlohmann::json::array();
  for (const auto& b : r.buckets)
    buckets.push_back(
        {{"size", b.size}, {"exhaustive", b.exhaustive}, {"checked", b.checked}, {"holds", b.holds}, {"rate", b.rate()}});
  return {{"delta", r.delta}, {"s_size", r.s_size}, {"buckets", buckets}};
}

}  // namespace densechi
