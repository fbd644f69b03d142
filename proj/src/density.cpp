#include <bit>
#include <cstdint>
#include <deque>

#include "ricci/errors.hpp"
#include "ricci/max_flow.hpp"
#include "ricci/uniformization.hpp"

namespace ricci {

namespace {

Rational global_density(const Graph& g) {
  return Rational(static_cast<long long>(g.edge_count()), static_cast<long long>(g.vertex_count()));
}

struct DenseSet {
  std::vector<bool> members;
  Rational density;
};

std::size_t induced_edges(const Graph& g, const std::vector<bool>& in) {
  std::size_t count = 0;
  for (const auto& e : g.edges())
    if (in[e.u] && in[e.v]) ++count;
  return count;
}

std::size_t count_members(const std::vector<bool>& in) {
  std::size_t count = 0;
  for (bool b : in) count += b;
  return count;
}

// Max over Ω ⊆ allowed of q |E(Ω)| - p |Ω|, returning the minimal maximizer.
std::pair<long long, std::vector<bool>> best_excess(const Graph& g, const std::vector<bool>& allowed,
                                                    long long p, long long q) {
  const std::size_t n = g.vertex_count();
  const std::size_t source = 0;
  const std::size_t sink = 1;
  std::vector<EdgeIndex> inside;
  for (EdgeIndex i = 0; i < g.edge_count(); ++i)
    if (allowed[g.edge(i).u] && allowed[g.edge(i).v]) inside.push_back(i);

  MaxFlow flow(2 + n + inside.size());
  for (std::size_t k = 0; k < inside.size(); ++k) {
    const std::size_t node = 2 + n + k;
    flow.add_edge(source, node, q);
    flow.add_edge(node, 2 + g.edge(inside[k]).u, MaxFlow::kInfinite);
    flow.add_edge(node, 2 + g.edge(inside[k]).v, MaxFlow::kInfinite);
  }
  for (Vertex x = 0; x < n; ++x)
    if (allowed[x]) flow.add_edge(2 + x, sink, p);

  const long long cut = flow.solve(source, sink);
  const long long excess = q * static_cast<long long>(inside.size()) - cut;
  const auto side = flow.source_side(source);
  std::vector<bool> omega(n, false);
  for (Vertex x = 0; x < n; ++x) omega[x] = side[2 + x];
  return {excess, std::move(omega)};
}

// Densest subgraph inside `allowed` by Dinkelbach iteration on exact ratios.
DenseSet densest_within(const Graph& g, const std::vector<bool>& allowed) {
  DenseSet best{allowed, Rational(static_cast<long long>(induced_edges(g, allowed)),
                                  static_cast<long long>(count_members(allowed)))};
  while (true) {
    auto [excess, omega] = best_excess(g, allowed, best.density.numerator(), best.density.denominator());
    if (excess <= 0) return best;
    const Rational d(static_cast<long long>(induced_edges(g, omega)),
                     static_cast<long long>(count_members(omega)));
    if (d <= best.density) throw NumericalFailure("densest-subgraph iteration failed to improve");
    best = {std::move(omega), d};
  }
}

DensityCertificate finish(const Graph& g, Rational max_proper, std::vector<bool> witness,
                          DensityMethod method) {
  DensityCertificate cert;
  cert.method = method;
  cert.global_density = global_density(g);
  cert.max_proper_density = max_proper;
  cert.satisfied = max_proper < cert.global_density;
  if (!cert.satisfied) cert.witness = VertexSubset(g, std::move(witness));
  return cert;
}

}  // namespace

std::string_view to_string(DensityMethod m) {
  return m == DensityMethod::brute_force ? "brute_force" : "max_flow";
}

DensityCertificate check_condition_brute(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n > kBruteForceVertexLimit)
    throw SizeError("brute-force density check is limited to " + std::to_string(kBruteForceVertexLimit) +
                    " vertices (graph has " + std::to_string(n) + ")");
  std::vector<std::uint32_t> adj(n, 0);
  for (const auto& e : g.edges()) {
    adj[e.u] |= 1U << e.v;
    adj[e.v] |= 1U << e.u;
  }
  const std::uint32_t full = n == 32 ? ~0U : (1U << n) - 1U;
  std::uint32_t best_mask = 0;
  std::size_t best_edges = 0;
  std::size_t best_size = 1;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    std::size_t twice_edges = 0;
    for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
      const auto x = static_cast<std::size_t>(std::countr_zero(rest));
      twice_edges += static_cast<std::size_t>(std::popcount(adj[x] & mask));
    }
    const std::size_t edges = twice_edges / 2;
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    // edges/size > best_edges/best_size, strictly, keeps the smallest mask on ties.
    if (best_mask == 0 || edges * best_size > best_edges * size) {
      best_mask = mask;
      best_edges = edges;
      best_size = size;
    }
  }
  std::vector<bool> witness(n, false);
  for (std::size_t x = 0; x < n; ++x) witness[x] = (best_mask >> x) & 1U;
  return finish(g, Rational(static_cast<long long>(best_edges), static_cast<long long>(best_size)),
                std::move(witness), DensityMethod::brute_force);
}

DensityCertificate check_condition_flow(const Graph& g) {
  // Every proper subset misses some vertex v, so the densest proper subset
  // is the best densest subgraph of G - v over all v.
  const std::size_t n = g.vertex_count();
  std::optional<DenseSet> best;
  for (Vertex v = 0; v < n; ++v) {
    std::vector<bool> allowed(n, true);
    allowed[v] = false;
    auto candidate = densest_within(g, allowed);
    if (!best || candidate.density > best->density) best = std::move(candidate);
  }
  return finish(g, best->density, std::move(best->members), DensityMethod::max_flow);
}

DensityCertificate check_condition(const Graph& g) { return check_condition_flow(g); }

ConstantWeightClass classify_constant_weight(const Graph& g) {
  const std::size_t n = g.vertex_count();
  bool regular = true;
  for (Vertex x = 1; x < n; ++x) regular = regular && g.degree(x) == g.degree(0);
  if (regular) return {ConstantWeightClass::Kind::regular, g.degree(0), 0};

  std::vector<int> color(n, -1);
  color[0] = 0;
  std::deque<Vertex> queue{0};
  while (!queue.empty()) {
    const Vertex x = queue.front();
    queue.pop_front();
    for (const auto& inc : g.neighbors(x)) {
      if (color[inc.neighbor] < 0) {
        color[inc.neighbor] = 1 - color[x];
        queue.push_back(inc.neighbor);
      } else if (color[inc.neighbor] == color[x]) {
        return {};
      }
    }
  }
  std::optional<std::size_t> side_degree[2];
  for (Vertex x = 0; x < n; ++x) {
    auto& d = side_degree[color[x]];
    if (!d) d = g.degree(x);
    else if (*d != g.degree(x)) return {};
  }
  return {ConstantWeightClass::Kind::semi_regular_bipartite, *side_degree[0], *side_degree[1]};
}

std::string describe(const ConstantWeightClass& c) {
  switch (c.kind) {
    case ConstantWeightClass::Kind::regular:
      return "regular(" + std::to_string(c.a) + ")";
    case ConstantWeightClass::Kind::semi_regular_bipartite:
      return "semi_regular_bipartite(" + std::to_string(c.a) + "," + std::to_string(c.b) + ")";
    case ConstantWeightClass::Kind::neither:
      break;
  }
  return "neither";
}

}  // namespace ricci
