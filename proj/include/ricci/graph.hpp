#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ricci {

using Vertex = std::size_t;
using EdgeIndex = std::size_t;

struct Edge {
  Vertex u;
  Vertex v;
};

struct Incidence {
  Vertex neighbor;
  EdgeIndex edge;
};

// Finite, simple, connected, undirected graph. Immutable after construction.
// Edge i keeps the position it had in the constructor's edge list.
class Graph {
 public:
  // Throws ValidationError on empty / disconnected / non-simple input.
  Graph(std::size_t vertex_count, std::vector<Edge> edges,
        std::vector<std::string> labels = {});

  std::size_t vertex_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeIndex i) const { return edges_.at(i); }

  std::span<const Incidence> neighbors(Vertex x) const { return adjacency_.at(x); }
  std::size_t degree(Vertex x) const { return adjacency_.at(x).size(); }

  std::optional<EdgeIndex> edge_between(Vertex u, Vertex v) const;
  bool adjacent(Vertex u, Vertex v) const { return edge_between(u, v).has_value(); }

  // External name of x; the decimal index when the graph was built unlabeled.
  std::string label(Vertex x) const;
  bool has_labels() const noexcept { return !labels_.empty(); }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::vector<std::string> labels_;
};

// Strictly positive edge weights, indexed like Graph::edges().
class WeightVector {
 public:
  WeightVector() = default;
  // Throws ValidationError if any entry is not finite and > 0.
  explicit WeightVector(std::vector<double> values);

  static WeightVector constant(std::size_t n, double value = 1.0) {
    return WeightVector(std::vector<double>(n, value));
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](EdgeIndex i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  WeightVector scaled(double factor) const;
  // Rescaled so the entries sum to one.
  WeightVector normalized() const;

 private:
  std::vector<double> values_;
};

// Throws ValidationError unless w has one entry per edge of g.
void check_compatible(const Graph& g, const WeightVector& w);

struct SubsetStats {
  std::size_t size = 0;            // |Ω|
  std::size_t inner_edges = 0;     // |E(Ω)|
  std::size_t boundary_edges = 0;  // |E(Ω, Ω^c)|
};

// Vertex subset with cached counts relative to the graph it was built from.
class VertexSubset {
 public:
  VertexSubset(const Graph& g, std::vector<bool> membership);
  VertexSubset(const Graph& g, std::span<const Vertex> members);
  static VertexSubset from_mask(const Graph& g, std::uint64_t mask);

  bool contains(Vertex x) const { return membership_.at(x); }
  std::vector<Vertex> members() const;
  const SubsetStats& stats() const noexcept { return stats_; }
  std::size_t size() const noexcept { return stats_.size; }
  std::size_t vertex_universe() const noexcept { return membership_.size(); }

  bool operator==(const VertexSubset& other) const { return membership_ == other.membership_; }

 private:
  std::vector<bool> membership_;
  SubsetStats stats_;
};

SubsetStats subset_stats(const Graph& g, const VertexSubset& s);

// Hop metric: number of edges on a shortest path.
std::size_t hop_distance(const Graph& g, Vertex u, Vertex v);
std::vector<std::size_t> hop_distances_from(const Graph& g, Vertex source);

// Length of the shortest cycle; nullopt for trees.
std::optional<std::size_t> girth(const Graph& g);
bool girth_at_least(const Graph& g, std::size_t bound);

// m(x): sum of the weights of edges incident to x.
double vertex_mass(const Graph& g, const WeightVector& w, Vertex x);
std::vector<double> vertex_masses(const Graph& g, const WeightVector& w);

}  // namespace ricci
