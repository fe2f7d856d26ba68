#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "usched/laminar.hpp"
#include "usched/model.hpp"
#include "usched/qptas.hpp"

namespace usched {

class PreconditionUnmet : public Error {
 public:
  using Error::Error;
};

/// Outcome of one empirical check. `observed` and `bound` are on the same
/// scale; a report is clean when `violations` is 0.
struct AuditReport {
  std::string name;
  std::string instance;
  std::uint64_t population = 0;
  std::uint64_t violations = 0;
  double observed = 0;
  double bound = 0;
  bool contractual = true;
};

/// Every job lies in exactly one guess or top set over all levels.
AuditReport check_unique_level(const LevelAssignment& assign, int n);

/// Top sets of distinct levels are disjoint and the best offset bucket holds
/// at most eps·T jobs.
AuditReport check_shift_bound(const LevelAssignment& assign, int m, Rational eps, Slot T);

/// The opt slot of each windowed job lies in [r − λ, d + λ). With `pins`,
/// throws PreconditionUnmet if any pinned slot differs from opt.
AuditReport check_window_slack(const Schedule& opt, const std::vector<TopWindow>& windows,
                               Slot lambda,
                               const std::vector<std::pair<JobId, Slot>>* pins = nullptr);

/// check_window_slack over every call of a traced run; λ is the cell length
/// of each call.
AuditReport check_window_slack(const Schedule& opt, const std::vector<CallTrace>& traces);

/// Degenerate windows among `top1` against 2·m·eps·|interval| / log2 n.
AuditReport count_degenerate(const std::vector<TopWindow>& windows,
                             const std::vector<JobId>& top1, int m, Rational eps, int n,
                             Slot interval_len);

/// Maximal runs of cell boundaries at which some non-degenerate top job is
/// pending. Each run [b_i, b_k) ends at the first boundary with none.
std::vector<Interval> meta_intervals(const CallTrace& trace);

/// Within each meta-interval where a top job is pending at every slot,
/// counts slots with an idle machine against |meta| · eps / (m log2 n).
/// `observed` and `bound` hold the worst idle count and its bound.
AuditReport audit_idle_slots(const CallTrace& trace, int m, Rational eps, int n);

/// Levels of the family against log2 n / log2(log2 n / eps) + 1.
AuditReport check_level_count(const LaminarFamily& fam, int n, Rational eps);

struct AuditOptions {
  /// Oracle job cap; larger instances are skipped.
  int max_jobs = 14;
  /// Guess cap of the traced run; unset means the guess_cap formula.
  std::optional<std::uint64_t> k_max;
  ChainDivisor divisor = ChainDivisor::with_machines;
};

/// Runs every audit on one instance: oracle optimum, padding, level
/// assignment, then a run guided by that assignment at the best offset.
/// Returns an empty list when the instance exceeds the oracle cap.
std::vector<AuditReport> audit_instance(const Instance& inst, const std::string& name,
                                        Rational eps, const AuditOptions& options = {});

/// claim,instance,population,violations,observed,bound
std::string audit_csv(const std::vector<AuditReport>& reports);

}  // namespace usched
