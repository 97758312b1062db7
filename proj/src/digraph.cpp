#include "fsrlab/digraph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace fsrlab {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::vector<int> shortest_cycle_through(const Adjacency& succ, int start) {
  const int n = static_cast<int>(succ.size());
  std::vector<int> pred(n, -1);
  std::vector<char> seen(n, 0);
  std::deque<int> queue{start};
  seen[start] = 1;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int w : sorted_unique(succ[u])) {
      if (w == start) {
        std::vector<int> cycle;
        for (int x = u; x != -1; x = pred[x]) cycle.push_back(x);
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
      if (!seen[w]) {
        seen[w] = 1;
        pred[w] = u;
        queue.push_back(w);
      }
    }
  }
  return {};
}

std::vector<int> shortest_cycle(const Adjacency& succ) {
  std::vector<int> best;
  for (int s = 0; s < static_cast<int>(succ.size()); ++s) {
    std::vector<int> c = shortest_cycle_through(succ, s);
    if (!c.empty() && (best.empty() || c.size() < best.size())) {
      best = std::move(c);
      if (best.size() == 1) break;
    }
  }
  return best;
}

std::vector<int> longest_path_from(const Adjacency& succ) {
  const int n = static_cast<int>(succ.size());
  // Kahn order on the reversed graph: sinks first.
  std::vector<int> outdeg(n, 0);
  Adjacency pred(n);
  for (int u = 0; u < n; ++u) {
    outdeg[u] = static_cast<int>(succ[u].size());
    for (int w : succ[u]) pred[w].push_back(u);
  }
  std::vector<int> len(n, 0);
  std::deque<int> ready;
  for (int u = 0; u < n; ++u) {
    if (outdeg[u] == 0) ready.push_back(u);
  }
  int done = 0;
  while (!ready.empty()) {
    int w = ready.front();
    ready.pop_front();
    ++done;
    for (int u : pred[w]) {
      len[u] = std::max(len[u], len[w] + 1);
      if (--outdeg[u] == 0) ready.push_back(u);
    }
  }
  if (done != n) throw std::logic_error("longest_path on a graph with a cycle");
  return len;
}

int longest_path(const Adjacency& succ) {
  std::vector<int> len = longest_path_from(succ);
  return len.empty() ? 0 : *std::max_element(len.begin(), len.end());
}

}  // namespace fsrlab
