#include "ricci/builders.hpp"

#include <algorithm>

#include "ricci/errors.hpp"

namespace ricci::builders {

namespace {

void append_cycle(std::vector<Edge>& edges, std::size_t first, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) edges.push_back({first + i, first + (i + 1) % n});
}

}  // namespace

Graph path(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Graph(n, std::move(edges));
}

Graph cycle(std::size_t n) {
  if (n < 3) throw ValidationError("a cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  append_cycle(edges, 0, n);
  return Graph(n, std::move(edges));
}

Graph star(std::size_t k) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= k; ++i) edges.push_back({0, i});
  return Graph(k + 1, std::move(edges));
}

Graph complete(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j});
  return Graph(n, std::move(edges));
}

Graph generalized_petersen(std::size_t n, std::size_t k) {
  if (n < 3 || k == 0 || 2 * k >= n) throw ValidationError("GP(n,k) needs n >= 3 and 0 < k < n/2");
  std::vector<Edge> edges;
  append_cycle(edges, 0, n);
  for (std::size_t i = 0; i < n; ++i) edges.push_back({i, n + i});
  for (std::size_t i = 0; i < n; ++i) edges.push_back({n + i, n + (i + k) % n});
  return Graph(2 * n, std::move(edges));
}

Graph dumbbell(std::size_t a, std::size_t b) {
  std::vector<Edge> edges;
  append_cycle(edges, 0, a);
  append_cycle(edges, a, b);
  edges.push_back({0, a});
  return Graph(a + b, std::move(edges));
}

Graph tadpole(std::size_t a, std::size_t b) {
  std::vector<Edge> edges;
  append_cycle(edges, 0, a);
  Vertex prev = 0;
  for (std::size_t i = 0; i < b; ++i) {
    edges.push_back({prev, a + i});
    prev = a + i;
  }
  return Graph(a + b, std::move(edges));
}

Graph heawood() {
  std::vector<Edge> edges;
  append_cycle(edges, 0, 14);
  for (std::size_t i = 0; i < 14; i += 2) edges.push_back({i, (i + 5) % 14});
  return Graph(14, std::move(edges));
}

Graph heawood_hexagon_dumbbell() {
  std::vector<Edge> edges;
  append_cycle(edges, 0, 14);
  for (std::size_t i = 0; i < 14; i += 2) edges.push_back({i, (i + 5) % 14});
  append_cycle(edges, 14, 6);
  edges.push_back({3, 17});
  return Graph(20, std::move(edges));
}

Graph gp83_asymmetric() {
  const Graph base = generalized_petersen(8, 3);
  std::vector<Edge> edges;
  for (const auto& e : base.edges()) {
    const auto has = [&](Vertex a, Vertex b) {
      return (e.u == a && e.v == b) || (e.u == b && e.v == a);
    };
    if (has(0, 1)) {
      edges.push_back({0, 16});
      edges.push_back({16, 1});
    } else if (!has(5, 6)) {
      edges.push_back(e);
    }
  }
  return Graph(17, std::move(edges));
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{
      "k2", "p3", "c6", "star_1_3", "d6_6", "tadpole_6_1", "heawood", "heawood_hex",
      "gp_8_3", "gp83_asym", "triangle", "k4"};
  return names;
}

Graph builtin(std::string_view name) {
  if (name == "k2") return complete(2);
  if (name == "p3") return path(3);
  if (name == "c6") return cycle(6);
  if (name == "star_1_3") return star(3);
  if (name == "d6_6") return dumbbell(6, 6);
  if (name == "tadpole_6_1") return tadpole(6, 1);
  if (name == "heawood") return heawood();
  if (name == "heawood_hex") return heawood_hexagon_dumbbell();
  if (name == "gp_8_3") return generalized_petersen(8, 3);
  if (name == "gp83_asym") return gp83_asymmetric();
  if (name == "triangle") return complete(3);
  if (name == "k4") return complete(4);
  throw ValidationError("unknown builtin graph '" + std::string(name) + "'");
}

}  // namespace ricci::builders
