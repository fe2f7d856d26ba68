#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace usched {

// Jobs are dense zero-based indices; every job has processing time 1.
using JobId = std::int32_t;
// A slot t stands for the half-open time interval [t, t+1).
using Slot = std::int32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CycleError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class BadMachineCount : public Error {
 public:
  using Error::Error;
};

struct Edge {
  JobId pred = 0;
  JobId succ = 0;

  auto operator<=>(const Edge&) const = default;
};

struct Interval {
  Slot start = 0;
  Slot end = 0;

  Slot length() const { return end - start; }
  bool empty() const { return end <= start; }
  bool contains(Slot t) const { return start <= t && t < end; }
  bool contains(const Interval& other) const {
    return start <= other.start && other.end <= end;
  }
  bool intersects(const Interval& other) const {
    return start < other.end && other.start < end;
  }

  auto operator<=>(const Interval&) const = default;
};

/// A set of unit jobs on `m` identical machines under a transitively closed
/// precedence order. Immutable once built.
class Instance {
 public:
  Instance() = default;

  /// Builds the instance and closes `edges` transitively. Throws CycleError
  /// (including self-loops), IndexError or BadMachineCount.
  static Instance build(int n, int m, std::span<const Edge> edges);

  int n() const { return n_; }
  int m() const { return m_; }

  bool precedes(JobId a, JobId b) const;

  /// All jobs i with i ≺ j, ascending. Throws IndexError.
  const std::vector<JobId>& predecessors(JobId j) const;
  /// All jobs k with j ≺ k, ascending. Throws IndexError.
  const std::vector<JobId>& successors(JobId j) const;

  /// Every pair of the closed relation, sorted.
  std::vector<Edge> closure_edges() const;
  /// Hasse diagram of the order (covering pairs only), sorted.
  std::vector<Edge> reduction_edges() const;
  std::size_t relation_size() const;

  /// Kahn order, smallest ready id first.
  const std::vector<JobId>& topological_order() const { return topo_; }
  /// Position of each job in topological_order().
  const std::vector<int>& topological_rank() const { return rank_; }

  bool operator==(const Instance& other) const;

 private:
  void check_job(JobId j) const;

  int n_ = 0;
  int m_ = 1;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> reach_;
  std::vector<std::vector<JobId>> preds_;
  std::vector<std::vector<JobId>> succs_;
  std::vector<JobId> topo_;
  std::vector<int> rank_;
};

Instance build_instance(int n, int m, std::span<const Edge> edges);

/// Partial assignment of jobs to start slots, plus the horizon T' the
/// schedule claims to fit in. Machine identities are not stored: with unit
/// jobs a per-slot load of at most m is equivalent to a machine assignment.
class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(Slot horizon) : horizon_(horizon) {}

  /// Returns false (and leaves the schedule unchanged) if j already has a slot.
  bool try_assign(JobId j, Slot t);
  void assign(JobId j, Slot t) { starts_[j] = t; }
  void erase(JobId j) { starts_.erase(j); }

  bool contains(JobId j) const { return starts_.count(j) != 0; }
  std::optional<Slot> start(JobId j) const;
  std::size_t size() const { return starts_.size(); }
  bool empty() const { return starts_.empty(); }

  Slot horizon() const { return horizon_; }
  void set_horizon(Slot horizon) { horizon_ = horizon; }

  /// max(start) + 1 over scheduled jobs, 0 if none.
  Slot makespan() const;

  const std::map<JobId, Slot>& starts() const { return starts_; }

  bool operator==(const Schedule&) const = default;

 private:
  std::map<JobId, Slot> starts_;
  Slot horizon_ = 0;
};

enum class ViolationKind { capacity, precedence, horizon, unknown_job };

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind = ViolationKind::capacity;
  JobId first = -1;
  JobId second = -1;
  Slot slot = -1;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  bool feasible = true;
  std::vector<Violation> violations;
  Slot makespan = 0;
};

/// Checks capacity, precedence and horizon. With `require_all`, every job
/// of the instance must be present.
ValidationReport validate_schedule(const Instance& inst, const Schedule& sched,
                                   bool require_all);

/// Length of the longest chain inside `subset` (0 for an empty subset).
int longest_chain(const Instance& inst, std::span<const JobId> subset);
int longest_chain(const Instance& inst);

std::vector<JobId> predecessors(const Instance& inst, JobId j);
std::vector<JobId> successors(const Instance& inst, JobId j);

/// max(ceil(n/m), longest chain): no feasible schedule is shorter.
int makespan_lower_bound(const Instance& inst);

}  // namespace usched
