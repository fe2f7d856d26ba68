#pragma once

// Reference solvers for tests. They work from raw edge lists and try every
// slot assignment, so they share no code path with the library's search.

#include <cstdint>
#include <utility>
#include <vector>

namespace usched::testing {

using RawEdges = std::vector<std::pair<int, int>>;

class SlotBruteForce {
 public:
  SlotBruteForce(int n, int m, RawEdges edges) : n_(n), m_(m), edges_(std::move(edges)) {}

  /// True if every job fits in [0, T).
  bool fits(int T) {
    start_.assign(n_, -1);
    load_.assign(T, 0);
    T_ = T;
    return place(0);
  }

  /// Smallest T with fits(T); 0 for n = 0.
  int makespan() {
    if (n_ == 0) return 0;
    for (int T = (n_ + m_ - 1) / m_;; ++T) {
      if (fits(T)) return T;
    }
  }

  const std::vector<int>& starts() const { return start_; }

 private:
  bool consistent(int j) const {
    for (const auto& [u, v] : edges_) {
      if (u != j && v != j) continue;
      if (start_[u] < 0 || start_[v] < 0) continue;
      if (start_[u] + 1 > start_[v]) return false;
    }
    return true;
  }

  bool place(int j) {
    if (j == n_) return true;
    for (int t = 0; t < T_; ++t) {
      if (load_[t] == m_) continue;
      start_[j] = t;
      ++load_[t];
      if (consistent(j) && place(j + 1)) return true;
      --load_[t];
      start_[j] = -1;
    }
    return false;
  }

  int n_;
  int m_;
  RawEdges edges_;
  int T_ = 0;
  std::vector<int> start_;
  std::vector<int> load_;
};

inline int brute_force_makespan(int n, int m, const RawEdges& edges) {
  return SlotBruteForce(n, m, edges).makespan();
}

/// Transitive closure by repeated relaxation, as an n x n matrix.
inline std::vector<std::vector<bool>> brute_force_closure(int n, const RawEdges& edges) {
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (const auto& [u, v] : edges) reach[u][v] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (!reach[a][b]) continue;
        for (int c = 0; c < n; ++c) {
          if (reach[b][c] && !reach[a][c]) {
            reach[a][c] = true;
            changed = true;
          }
        }
      }
    }
  }
  return reach;
}

}  // namespace usched::testing
