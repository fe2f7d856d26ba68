#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "usched/model.hpp"
#include "usched/parameters.hpp"
#include "usched/qptas.hpp"

namespace usched {

struct QptasOptions {
  PartitionMode mode = PartitionMode::laminar;
  Rational eps{1, 1};
  std::uint64_t k_max = 1;
  /// Unset: ceil((eps/m) log2 n) + 1 with n the solved job count.
  std::optional<int> depth_max;
  /// Unset: the oracle optimum when n fits the oracle, else a binary search.
  std::optional<Slot> horizon;
  bool exhaustive_job_guessing = false;
  int samples = 4;
  std::uint64_t seed = 0;
  std::uint64_t node_budget = 200000;
  int oracle_max_jobs = 18;
};

struct QptasRun {
  /// Horizon for the original instance.
  Slot horizon = 0;
  /// Instance handed to solve (padded to a power-of-two horizon in laminar
  /// mode) and the horizon it was solved at.
  Instance solved;
  Slot solved_horizon = 0;
  SolveResult result;
  /// Solve output after insert_discarded, over `solved`.
  Schedule repaired;
  /// `repaired` restricted to the original jobs.
  Schedule schedule;
};

/// Pads if needed, solves, reinserts discards and strips the padding.
QptasRun run_qptas(const Instance& inst, const QptasOptions& options);

/// The horizon `--horizon auto` picks.
Slot auto_horizon(const Instance& inst, const QptasOptions& options);

struct BenchRow {
  std::string instance;
  std::string algorithm;
  int n = 0;
  int m = 0;
  std::optional<Slot> makespan;
  std::optional<Slot> opt;
  std::optional<std::size_t> discards;
  std::optional<double> wall_ms;
  std::string error;

  std::optional<double> ratio() const;
};

struct BenchOptions {
  /// Any of: exact, ls, ls-random, cg, qptas.
  std::vector<std::string> algorithms{"exact", "ls", "ls-random", "cg", "qptas"};
  std::uint64_t seed = 0;
  Rational eps{1, 1};
  std::uint64_t k_max = 1;
  int oracle_max_jobs = 18;
  /// Wall time makes rows differ between runs, so it is opt-in.
  bool timing = false;
};

std::vector<BenchRow> bench(const std::vector<std::pair<std::string, Instance>>& corpus,
                            const BenchOptions& options);

/// instance,algorithm,n,m,makespan,opt,ratio,discards,wall_ms,error
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Every *.inst file in `dir`, sorted by file name, keyed by the stem.
std::vector<std::pair<std::string, Instance>> load_corpus(const std::string& dir);

}  // namespace usched
