#include "ricci/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "ricci/errors.hpp"

namespace ricci {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

}  // namespace

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges, std::vector<std::string> labels)
    : edges_(std::move(edges)), adjacency_(vertex_count), labels_(std::move(labels)) {
  if (vertex_count == 0) throw ValidationError("graph has no vertices");
  if (!labels_.empty() && labels_.size() != vertex_count)
    throw ValidationError("label count does not match vertex count");
  if (edges_.empty()) throw ValidationError("graph has no edges");

  for (EdgeIndex i = 0; i < edges_.size(); ++i) {
    const auto [u, v] = edges_[i];
    if (u >= vertex_count || v >= vertex_count)
      throw ValidationError("edge " + std::to_string(i) + " references a missing vertex");
    if (u == v) throw ValidationError("self-loop at vertex " + label(u));
    if (edge_between(u, v))
      throw ValidationError("duplicate edge " + label(u) + " - " + label(v));
    adjacency_[u].push_back({v, i});
    adjacency_[v].push_back({u, i});
  }

  const auto dist = hop_distances_from(*this, 0);
  if (std::any_of(dist.begin(), dist.end(), [](std::size_t d) { return d == kUnreached; }))
    throw ValidationError("graph is disconnected");
}

std::optional<EdgeIndex> Graph::edge_between(Vertex u, Vertex v) const {
  if (u >= adjacency_.size() || v >= adjacency_.size()) return std::nullopt;
  const auto& small = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
  const Vertex other = &small == &adjacency_[u] ? v : u;
  for (const auto& inc : small)
    if (inc.neighbor == other) return inc.edge;
  return std::nullopt;
}

std::string Graph::label(Vertex x) const {
  if (labels_.empty()) return std::to_string(x);
  return labels_.at(x);
}

WeightVector::WeightVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] <= 0.0)
      throw ValidationError("weight of edge " + std::to_string(i) + " must be finite and positive");
  }
}

WeightVector WeightVector::scaled(double factor) const {
  std::vector<double> out(values_);
  for (auto& x : out) x *= factor;
  return WeightVector(std::move(out));
}

WeightVector WeightVector::normalized() const {
  const double total = std::accumulate(values_.begin(), values_.end(), 0.0);
  return scaled(1.0 / total);
}

void check_compatible(const Graph& g, const WeightVector& w) {
  if (w.size() != g.edge_count())
    throw ValidationError("weight vector has " + std::to_string(w.size()) + " entries, graph has " +
                          std::to_string(g.edge_count()) + " edges");
}

VertexSubset::VertexSubset(const Graph& g, std::vector<bool> membership)
    : membership_(std::move(membership)) {
  if (membership_.size() != g.vertex_count())
    throw ValidationError("subset universe does not match the graph");
  for (Vertex x = 0; x < membership_.size(); ++x)
    if (membership_[x]) ++stats_.size;
  for (const auto& e : g.edges()) {
    const bool a = membership_[e.u];
    const bool b = membership_[e.v];
    if (a && b) ++stats_.inner_edges;
    else if (a != b) ++stats_.boundary_edges;
  }
}

VertexSubset::VertexSubset(const Graph& g, std::span<const Vertex> members)
    : VertexSubset(g, [&] {
        std::vector<bool> m(g.vertex_count(), false);
        for (Vertex x : members) m.at(x) = true;
        return m;
      }()) {}

VertexSubset VertexSubset::from_mask(const Graph& g, std::uint64_t mask) {
  std::vector<bool> m(g.vertex_count(), false);
  for (Vertex x = 0; x < m.size() && x < 64; ++x) m[x] = (mask >> x) & 1U;
  return VertexSubset(g, std::move(m));
}

std::vector<Vertex> VertexSubset::members() const {
  std::vector<Vertex> out;
  for (Vertex x = 0; x < membership_.size(); ++x)
    if (membership_[x]) out.push_back(x);
  return out;
}

SubsetStats subset_stats(const Graph& g, const VertexSubset& s) {
  if (s.vertex_universe() != g.vertex_count())
    throw ValidationError("subset belongs to a different graph");
  return s.stats();
}

std::vector<std::size_t> hop_distances_from(const Graph& g, Vertex source) {
  std::vector<std::size_t> dist(g.vertex_count(), kUnreached);
  std::deque<Vertex> queue{source};
  dist.at(source) = 0;
  while (!queue.empty()) {
    const Vertex x = queue.front();
    queue.pop_front();
    for (const auto& inc : g.neighbors(x)) {
      if (dist[inc.neighbor] != kUnreached) continue;
      dist[inc.neighbor] = dist[x] + 1;
      queue.push_back(inc.neighbor);
    }
  }
  return dist;
}

std::size_t hop_distance(const Graph& g, Vertex u, Vertex v) {
  if (v >= g.vertex_count()) throw ValidationError("vertex out of range");
  return hop_distances_from(g, u)[v];
}

std::optional<std::size_t> girth(const Graph& g) {
  // BFS from every root; a non-tree edge (x, y) closes a walk of length
  // dist[x] + dist[y] + 1, and the minimum over all roots is the girth.
  std::size_t best = kUnreached;
  std::vector<std::size_t> dist(g.vertex_count());
  std::vector<EdgeIndex> via(g.vertex_count());
  for (Vertex root = 0; root < g.vertex_count(); ++root) {
    std::fill(dist.begin(), dist.end(), kUnreached);
    dist[root] = 0;
    via[root] = kUnreached;
    std::deque<Vertex> queue{root};
    while (!queue.empty()) {
      const Vertex x = queue.front();
      queue.pop_front();
      if (2 * dist[x] >= best) break;
      for (const auto& inc : g.neighbors(x)) {
        if (inc.edge == via[x]) continue;
        if (dist[inc.neighbor] == kUnreached) {
          dist[inc.neighbor] = dist[x] + 1;
          via[inc.neighbor] = inc.edge;
          queue.push_back(inc.neighbor);
        } else {
          best = std::min(best, dist[x] + dist[inc.neighbor] + 1);
        }
      }
    }
  }
  if (best == kUnreached) return std::nullopt;
  return best;
}

bool girth_at_least(const Graph& g, std::size_t bound) {
  const auto len = girth(g);
  return !len || *len >= bound;
}

double vertex_mass(const Graph& g, const WeightVector& w, Vertex x) {
  check_compatible(g, w);
  double m = 0.0;
  for (const auto& inc : g.neighbors(x)) m += w[inc.edge];
  return m;
}

std::vector<double> vertex_masses(const Graph& g, const WeightVector& w) {
  check_compatible(g, w);
  std::vector<double> m(g.vertex_count(), 0.0);
  for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
    m[g.edge(i).u] += w[i];
    m[g.edge(i).v] += w[i];
  }
  return m;
}

}  // namespace ricci
