#include "rgraph/scc.hpp"

#include <algorithm>
#include <utility>

namespace rgraph {

SccResult strongly_connected_components(const Adjacency& graph) {
  const int n = static_cast<int>(graph.size());
  constexpr int kUnvisited = -1;
  std::vector<int> index(n, kUnvisited), lowlink(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  // (vertex, next edge position) frames replace the recursion.
  std::vector<std::pair<int, std::size_t>> frames;

  SccResult out;
  out.component.assign(n, -1);
  int counter = 0;

  for (int root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    frames.emplace_back(root, 0);
    index[root] = lowlink[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;

    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < graph[v].size()) {
        const int w = graph[v][pos++];
        if (index[w] == kUnvisited) {
          index[w] = lowlink[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
        continue;
      }
      const int done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const int parent = frames.back().first;
        lowlink[parent] = std::min(lowlink[parent], lowlink[done]);
      }
      if (lowlink[done] == index[done]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          out.component[w] = out.count;
        } while (w != done);
        ++out.count;
      }
    }
  }
  return out;
}

std::vector<bool> sink_components(const Adjacency& graph, const SccResult& scc) {
  std::vector<bool> sink(scc.count, true);
  for (std::size_t v = 0; v < graph.size(); ++v) {
    for (const int w : graph[v]) {
      if (scc.component[v] != scc.component[w]) sink[scc.component[v]] = false;
    }
  }
  return sink;
}

}  // namespace rgraph
