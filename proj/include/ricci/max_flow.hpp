#pragma once

#include <cstdint>
#include <vector>

namespace ricci {

// Dinic's algorithm on integer capacities.
class MaxFlow {
 public:
  using Capacity = std::int64_t;
  static constexpr Capacity kInfinite = INT64_MAX / 4;

  explicit MaxFlow(std::size_t nodes) : adj_(nodes) {}

  void add_edge(std::size_t from, std::size_t to, Capacity cap);
  Capacity solve(std::size_t source, std::size_t sink);

  // Nodes reachable from source in the final residual graph: the minimal
  // source side of a minimum cut. Valid after solve().
  std::vector<bool> source_side(std::size_t source) const;

 private:
  struct Arc {
    std::size_t to;
    std::size_t rev;
    Capacity cap;
  };

  bool build_levels(std::size_t s, std::size_t t);
  Capacity push(std::size_t u, std::size_t t, Capacity limit);

  std::vector<std::vector<Arc>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

}  // namespace ricci
