#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "usched/model.hpp"

namespace usched {

/// A permutation of [0, n) used as list-scheduling priority (earlier = higher).
class PriorityOrder {
 public:
  /// Throws IndexError unless `perm` is a bijection on [0, n).
  PriorityOrder(std::vector<JobId> perm, int n);

  static PriorityOrder identity(int n);
  static PriorityOrder random(int n, std::uint64_t seed);

  const std::vector<JobId>& perm() const { return perm_; }

 private:
  std::vector<JobId> perm_;
};

/// Graham's greedy sweep: at each slot, start up to m available jobs in
/// priority order. Complete and feasible; never idles a machine while a job
/// is available.
Schedule list_schedule(const Instance& inst, const PriorityOrder& order);

/// Coffman-Graham labels 1..n (index = job). Ties go to the smaller JobId.
std::vector<int> coffman_graham_labels(const Instance& inst);

/// List schedule with jobs ordered by decreasing Coffman-Graham label.
Schedule coffman_graham_schedule(const Instance& inst);
PriorityOrder coffman_graham_order(const Instance& inst);

}  // namespace usched
