#pragma once

#include <cstdint>
#include <optional>

#include "usched/model.hpp"

namespace usched {

class TooLarge : public Error {
 public:
  using Error::Error;
};

class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

struct OracleOptions {
  /// Largest job count the exact search accepts.
  int max_jobs = 24;
  /// Cap on expanded states; BudgetExhausted when hit.
  std::optional<std::uint64_t> state_limit;
  /// Skip the search when a list schedule already meets the lower bound.
  bool use_bounds = true;
};

// Exact search over order ideals. A state is a downward-closed set of
// finished jobs; one step finishes a set A of available jobs with |A| <= m.
//
// Only maximal steps are expanded (|A| = min(m, |available|)). Proof sketch:
// take an optimal schedule in which slot t runs a non-maximal set while some
// job j is available at t. Moving j from its later slot to t keeps every
// predecessor of j before t (they are finished, j is available) and every
// successor of j after its old slot, hence after t. Capacity at t grows by
// one and stays <= m. The makespan does not increase, and repeating the move
// from t = 0 upwards yields an optimal schedule using maximal steps only.
//
// States that cannot finish within a list-scheduling upper bound
// (depth + remaining lower bound > bound) are never expanded; every state on
// an optimal path survives this filter.

int optimal_makespan(const Instance& inst,
                     std::optional<std::uint64_t> limit = std::nullopt,
                     const OracleOptions& options = {});

/// Deterministic optimal schedule: at every step the lexicographically
/// smallest job set that still leads to an optimum is chosen.
Schedule optimal_schedule(const Instance& inst, const OracleOptions& options = {});

}  // namespace usched
