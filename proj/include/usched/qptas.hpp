#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "usched/laminar.hpp"
#include "usched/model.hpp"
#include "usched/parameters.hpp"

namespace usched {

class InfeasibleHorizon : public Error {
 public:
  using Error::Error;
};

class NoSlot : public Error {
 public:
  using Error::Error;
};

enum class PartitionMode {
  laminar,     // children of the current interval in the laminar family
  exhaustive,  // every split of the interval into at most k cells
};

struct GuessConfig {
  /// Cap on jobs guessed per call, and on cells per exhaustive partition.
  std::uint64_t k_max = 0;
  PartitionMode partition_mode = PartitionMode::laminar;
  /// Calls at this depth or deeper discard every job that is not pinned.
  int depth_max = 1;
  Rational eps{1, 1};
  /// Try every subset of free jobs with every consistent slot assignment.
  bool exhaustive_job_guessing = false;
  /// Laminar mode: fixed shift offset. Unset means try every offset.
  std::optional<int> offset;
  /// Laminar mode: guess exactly the jobs this assignment guesses, at their
  /// slots in its schedule. Not owned.
  const LevelAssignment* guide = nullptr;
  /// Laminar mode without a guide: random guesses tried after the empty one.
  int samples = 4;
  std::uint64_t seed = 0;
  /// Stop enumerating after this many guesses (0 = unlimited). Each call
  /// still evaluates one guess so a complete result always exists.
  std::uint64_t node_budget = 0;
  bool record_trace = false;
};

/// Release r and deadline d of a top job, both cell boundaries. r >= d marks
/// a degenerate job.
struct TopWindow {
  JobId job = -1;
  Slot r = 0;
  Slot d = 0;
  bool degenerate() const { return r >= d; }
  bool operator==(const TopWindow&) const = default;
};

struct SlotTrace {
  Slot t = 0;
  int load_before = 0;
  int load_after = 0;
  /// Non-degenerate tops with r <= t < d still unplaced when t starts.
  std::vector<JobId> pending;
};

/// One recursive call of the winning branch.
struct CallTrace {
  Interval interval;
  int depth = 0;
  int level = -1;        // laminar level of `interval`, -1 in exhaustive mode
  int child_level = -1;
  std::vector<Interval> cells;
  std::vector<std::pair<JobId, Slot>> guessed;
  std::vector<TopWindow> tops;
  std::vector<SlotTrace> slots;
};

struct SolveStats {
  std::uint64_t explored = 0;
  std::uint64_t edf_discards = 0;
  std::uint64_t degenerate_discards = 0;
  std::uint64_t depth_discards = 0;
  std::uint64_t unit_discards = 0;
  bool budget_hit = false;
  int offset = -1;
};

struct SolveResult {
  Schedule schedule;
  std::vector<JobId> discarded;  // ascending
  SolveStats stats;
  std::vector<CallTrace> traces;
};

struct RecursionInput {
  Interval interval;
  /// Every pinned job so far, over all jobs of the instance.
  PinMap pinned;
  /// Jobs to schedule inside `interval` that are not pinned.
  std::vector<JobId> jobs;
  int depth = 0;
  /// Laminar level of `interval` (laminar mode only).
  int level = 0;
};

struct Guess {
  std::vector<std::pair<JobId, Slot>> jobs;
  std::vector<Interval> cells;
  bool operator==(const Guess&) const = default;
};

struct Classification {
  /// Per cell: bottom jobs plus newly pinned jobs whose slot is in the cell.
  std::vector<std::vector<JobId>> bottom;
  std::vector<JobId> top;
};

/// Splits `jobs` by their windows under pinned_old ∪ pinned_new. Throws
/// EmptyWindow when a job has no slot left.
Classification classify(const Instance& inst, const std::vector<JobId>& jobs,
                        const std::vector<std::pair<JobId, Slot>>& pinned_new,
                        const std::vector<Interval>& cells, const PinMap& pinned_old,
                        Slot T);

/// r = first cell boundary at or after every placed predecessor's
/// completion (and the interval start), d = last boundary at or before every
/// placed successor's start (and the interval end).
std::vector<TopWindow> windows_for_top(const Instance& inst, const std::vector<JobId>& top,
                                       const std::vector<Interval>& cells,
                                       const PinMap& placed);

struct EdfResult {
  std::vector<std::pair<JobId, Slot>> placements;
  std::vector<JobId> discarded;  // degenerate ones included
  std::uint64_t degenerate = 0;
  std::vector<SlotTrace> trace;
};

/// Earliest-deadline-first sweep over `interval`. `occupancy[t - start]`
/// is the load already placed at t. Ties go to the smaller deadline, then
/// the smaller id.
EdfResult edf_insert(const Instance& inst, const std::vector<TopWindow>& tops,
                     const std::vector<int>& occupancy, Interval interval,
                     const PinMap& placed, bool record_trace = false);

/// Calls `visit` on each guess in enumeration order until it returns false.
/// `fam` is required in laminar mode.
void for_each_guess(const Instance& inst, const RecursionInput& input, const GuessConfig& cfg,
                    const LaminarFamily* fam, Slot T,
                    const std::function<bool(const Guess&)>& visit);

/// The first `limit` guesses of for_each_guess.
std::vector<Guess> enumerate_guesses(const Instance& inst, const RecursionInput& input,
                                     const GuessConfig& cfg, const LaminarFamily* fam, Slot T,
                                     std::size_t limit = SIZE_MAX);

/// Guess, split, recurse, then place top jobs by EDF, keeping the guess with
/// the fewest discards. Laminar mode needs a power-of-two T. Throws
/// InfeasibleHorizon when T is below the longest chain.
SolveResult solve(const Instance& inst, Slot T, const GuessConfig& cfg);

/// Inserts each discarded job (ascending id) into a fresh slot right after
/// its last scheduled predecessor, shifting later jobs by one. The horizon
/// grows by one per job.
Schedule insert_discarded(const Schedule& sched, const std::vector<JobId>& discards,
                          const Instance& inst);

}  // namespace usched
