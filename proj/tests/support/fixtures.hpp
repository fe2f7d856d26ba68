#pragma once

#include <vector>

#include "brute_force.hpp"
#include "usched/model.hpp"

namespace usched::testing {

inline Instance make(int n, int m, const RawEdges& raw) {
  std::vector<Edge> edges;
  for (const auto& [u, v] : raw) edges.push_back({u, v});
  return Instance::build(n, m, edges);
}

inline Instance chain(int n, int m) {
  RawEdges raw;
  for (int j = 0; j + 1 < n; ++j) raw.emplace_back(j, j + 1);
  return make(n, m, raw);
}

inline Instance antichain(int n, int m) { return make(n, m, {}); }

// a=0, b=1, c=2, d=3 with a before b and c, both before d.
inline RawEdges diamond_edges() { return {{0, 1}, {0, 2}, {1, 3}, {2, 3}}; }
inline Instance diamond(int m) { return make(4, m, diamond_edges()); }

inline RawEdges raw_edges(const Instance& inst) {
  RawEdges out;
  for (const Edge& e : inst.reduction_edges()) out.emplace_back(e.pred, e.succ);
  return out;
}

}  // namespace usched::testing
