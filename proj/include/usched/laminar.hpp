#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "usched/model.hpp"
#include "usched/parameters.hpp"

namespace usched {

class BadHorizon : public Error {
 public:
  using Error::Error;
};

class EmptyWindow : public Error {
 public:
  using Error::Error;
};

/// Jobs pinned to a known slot. Dense over the instance's jobs.
class PinMap {
 public:
  PinMap() = default;
  explicit PinMap(int n) : slot_(n, kUnpinned) {}

  void pin(JobId j, Slot t) { slot_[j] = t; }
  void unpin(JobId j) { slot_[j] = kUnpinned; }
  bool pinned(JobId j) const { return slot_[j] != kUnpinned; }
  std::optional<Slot> slot(JobId j) const {
    if (slot_[j] == kUnpinned) return std::nullopt;
    return slot_[j];
  }
  Slot raw(JobId j) const { return slot_[j]; }
  int size() const { return static_cast<int>(slot_.size()); }
  std::size_t count() const;
  std::vector<std::pair<JobId, Slot>> entries() const;

  static PinMap from(int n, std::span<const std::pair<JobId, Slot>> pins);
  static PinMap from(int n, const Schedule& sched);

  bool operator==(const PinMap&) const = default;

  static constexpr Slot kUnpinned = -1;

 private:
  std::vector<Slot> slot_;
};

struct IntervalNode {
  Interval span;
  int level = 0;
  int parent = -1;       // index in the previous level
  int first_child = -1;  // index in the next level
  int child_count = 0;
};

/// Aligned laminar tree over [0, T). Level 0 is the root; an interval of
/// length >= 2^rho has 2^rho equal children, a shorter one of length > 1
/// has unit children, unit intervals are leaves.
class LaminarFamily {
 public:
  Slot horizon() const { return horizon_; }
  int rho() const { return rho_; }
  int branching() const { return 1 << rho_; }
  int level_count() const { return static_cast<int>(levels_.size()); }
  int leaf_level() const { return level_count() - 1; }

  const std::vector<IntervalNode>& level(int l) const { return levels_.at(l); }
  const IntervalNode& node(int l, int index) const { return levels_.at(l).at(index); }
  std::span<const IntervalNode> children(int l, int index) const;
  /// Length shared by every interval of level l.
  Slot length_at(int l) const { return levels_.at(l).front().span.length(); }
  /// Index of the level-l interval containing slot t.
  int index_at(int l, Slot t) const { return static_cast<int>(t / length_at(l)); }
  /// Level-l intervals inside `outer`, in order.
  std::vector<Interval> intervals_within(int l, Interval outer) const;

  friend LaminarFamily build_laminar(Slot T, int n, Rational eps);

 private:
  Slot horizon_ = 1;
  int rho_ = 1;
  std::vector<std::vector<IntervalNode>> levels_;
};

/// Throws BadHorizon unless T is a power of two, BadEps outside (0, 1].
LaminarFamily build_laminar(Slot T, int n, Rational eps);

bool is_power_of_two(Slot T);
Slot next_power_of_two(Slot T);

struct PaddedInstance {
  Instance instance;
  Slot horizon = 0;        // T*, the next power of two >= T
  int original_jobs = 0;   // jobs [original_jobs, n) are dummies
};

/// Appends m·(T* − T) dummy jobs as m chains of length T* − T that follow
/// every original job. When T is optimal for `inst`, T* is optimal for the
/// padded instance.
PaddedInstance pad_to_power_of_two(const Instance& inst, Slot T);

/// Extends an optimal schedule of the original jobs to the padded instance:
/// the k-th job of each dummy chain runs at T + k.
Schedule pad_schedule(const PaddedInstance& padded, const Schedule& original, Slot T);

/// Slots where j may sit given only pinned jobs: [max pinned pred + 1,
/// min pinned succ) intersected with [0, T). May be empty. j's own pin is
/// ignored.
Interval window_of(const Instance& inst, JobId j, const PinMap& pins, Slot T);

/// As window_of, but throws EmptyWindow for an empty window.
Interval feasible_window(const Instance& inst, JobId j, const PinMap& pins, Slot T);

enum class ChainDivisor {
  with_machines,     // eps|I| / (m 2^ceil(log log n))
  without_machines,  // eps|I| / 2^ceil(log log n)
};

struct IntervalSets {
  Interval span;
  std::vector<JobId> guess;
  std::vector<JobId> top;
};

/// Per level and per interval of that level (same indexing as the family):
/// the jobs to guess and the top jobs, derived from one optimal schedule.
struct LevelAssignment {
  std::vector<std::vector<IntervalSets>> levels;
  Schedule opt;
  Slot horizon = 0;

  std::vector<JobId> guess_at(int level) const;
  std::vector<JobId> top_at(int level) const;
  /// Level of the guess set holding j, or -1.
  int guess_level(JobId j) const;
  /// Level of the top set holding j, or -1.
  int top_level(JobId j) const;
};

struct LevelOptions {
  ChainDivisor divisor = ChainDivisor::with_machines;
};

/// Walks the levels top-down, pinning guessed jobs at their `opt` slots.
/// In an interval I, J_I holds the unassigned jobs whose window lies in I;
/// a flexible job's window meets two or more children of I. While a chain
/// of flexible, unguessed jobs reaches the threshold, the first and last
/// chain job (by opt slot) inside each child are guessed. Leftover flexible
/// jobs become top jobs of I. Jobs still confined to a unit leaf are
/// recorded as guesses of that leaf, so the result partitions all jobs.
LevelAssignment assign_levels(const Instance& inst, const Schedule& opt,
                              const LaminarFamily& fam, int m, Rational eps,
                              const LevelOptions& options = {});

struct OffsetChoice {
  int offset = 0;
  std::size_t count = 0;
};

/// Offset a in [0, m/eps) minimising |∪_r top[a + r·m/eps + 1]|; ties go
/// to the smallest a.
OffsetChoice best_offset(const LevelAssignment& assign, int m, Rational eps, Slot T);

/// Size of the bucket for offset a.
std::size_t offset_bucket_size(const LevelAssignment& assign, int m, Rational eps, int a);

}  // namespace usched
