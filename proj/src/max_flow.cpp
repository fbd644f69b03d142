#include "ricci/max_flow.hpp"

#include <algorithm>
#include <deque>

namespace ricci {

void MaxFlow::add_edge(std::size_t from, std::size_t to, Capacity cap) {
  adj_[from].push_back({to, adj_[to].size(), cap});
  adj_[to].push_back({from, adj_[from].size() - 1, 0});
}

bool MaxFlow::build_levels(std::size_t s, std::size_t t) {
  level_.assign(adj_.size(), -1);
  level_[s] = 0;
  std::deque<std::size_t> queue{s};
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (const auto& a : adj_[u]) {
      if (a.cap > 0 && level_[a.to] < 0) {
        level_[a.to] = level_[u] + 1;
        queue.push_back(a.to);
      }
    }
  }
  return level_[t] >= 0;
}

MaxFlow::Capacity MaxFlow::push(std::size_t u, std::size_t t, Capacity limit) {
  if (u == t) return limit;
  for (auto& i = next_[u]; i < adj_[u].size(); ++i) {
    auto& a = adj_[u][i];
    if (a.cap <= 0 || level_[a.to] != level_[u] + 1) continue;
    const Capacity got = push(a.to, t, std::min(limit, a.cap));
    if (got > 0) {
      a.cap -= got;
      adj_[a.to][a.rev].cap += got;
      return got;
    }
  }
  return 0;
}

MaxFlow::Capacity MaxFlow::solve(std::size_t source, std::size_t sink) {
  Capacity total = 0;
  while (build_levels(source, sink)) {
    next_.assign(adj_.size(), 0);
    while (const Capacity f = push(source, sink, kInfinite)) total += f;
  }
  return total;
}

std::vector<bool> MaxFlow::source_side(std::size_t source) const {
  std::vector<bool> seen(adj_.size(), false);
  seen[source] = true;
  std::deque<std::size_t> queue{source};
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (const auto& a : adj_[u]) {
      if (a.cap > 0 && !seen[a.to]) {
        seen[a.to] = true;
        queue.push_back(a.to);
      }
    }
  }
  return seen;
}

}  // namespace ricci
