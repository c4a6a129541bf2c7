#pragma once

#include <vector>

namespace rgraph {

using Adjacency = std::vector<std::vector<int>>;

struct SccResult {
  std::vector<int> component;  // component id per vertex
  int count = 0;
};

// Tarjan's algorithm without recursion. Component ids come out in reverse
// topological order of the condensation: every edge u -> v between different
// components has component[u] > component[v].
SccResult strongly_connected_components(const Adjacency& graph);

// Components with no edge leaving them.
std::vector<bool> sink_components(const Adjacency& graph, const SccResult& scc);

}  // namespace rgraph
