#include "usched/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "usched/oracle.hpp"
#include "usched/parameters.hpp"

namespace usched {

namespace {

constexpr double kSlack = 1e-9;

double log2n(int n) { return std::log2(static_cast<double>(std::max(n, 2))); }

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

AuditReport check_unique_level(const LevelAssignment& assign, int n) {
  std::vector<int> seen(n, 0);
  for (const auto& level : assign.levels) {
    for (const auto& sets : level) {
      for (JobId j : sets.guess) ++seen[j];
      for (JobId j : sets.top) ++seen[j];
    }
  }
  AuditReport r{"unique_level", "", static_cast<std::uint64_t>(n), 0, 0, 1, true};
  for (int c : seen) {
    if (c != 1) ++r.violations;
    r.observed = std::max(r.observed, static_cast<double>(c));
  }
  return r;
}

AuditReport check_shift_bound(const LevelAssignment& assign, int m, Rational eps, Slot T) {
  AuditReport r{"shift_bound", "", 0, 0, 0, eps.value() * T, true};
  std::set<JobId> seen;
  for (std::size_t l = 0; l < assign.levels.size(); ++l) {
    for (JobId j : assign.top_at(static_cast<int>(l))) {
      ++r.population;
      if (!seen.insert(j).second) ++r.violations;
    }
  }
  OffsetChoice best = best_offset(assign, m, eps, T);
  r.observed = static_cast<double>(best.count);
  if (r.observed > r.bound + kSlack) ++r.violations;
  return r;
}

AuditReport check_window_slack(const Schedule& opt, const std::vector<TopWindow>& windows,
                               Slot lambda,
                               const std::vector<std::pair<JobId, Slot>>* pins) {
  if (pins != nullptr) {
    for (const auto& [j, t] : *pins) {
      if (opt.start(j) != t) {
        throw PreconditionUnmet("job " + std::to_string(j) + " is pinned off its optimal slot");
      }
    }
  }
  AuditReport r{"window_slack", "", 0, 0, 0, 0, true};
  for (const TopWindow& w : windows) {
    auto t = opt.start(w.job);
    if (!t) continue;
    ++r.population;
    Slot over = std::max<Slot>({0, (w.r - lambda) - *t, *t - (w.d + lambda - 1)});
    if (over > 0) ++r.violations;
    r.observed = std::max(r.observed, static_cast<double>(over));
  }
  return r;
}

AuditReport check_window_slack(const Schedule& opt, const std::vector<CallTrace>& traces) {
  AuditReport total{"window_slack", "", 0, 0, 0, 0, true};
  for (const CallTrace& call : traces) {
    Slot lambda = 0;
    for (const Interval& c : call.cells) lambda = std::max(lambda, c.length());
    AuditReport r = check_window_slack(opt, call.tops, lambda, &call.guessed);
    total.population += r.population;
    total.violations += r.violations;
    total.observed = std::max(total.observed, r.observed);
  }
  return total;
}

AuditReport count_degenerate(const std::vector<TopWindow>& windows,
                             const std::vector<JobId>& top1, int m, Rational eps, int n,
                             Slot interval_len) {
  AuditReport r{"degenerate", "", 0, 0, 0, 0, false};
  r.bound = 2.0 * m * eps.value() * interval_len / log2n(n);
  for (const TopWindow& w : windows) {
    if (!std::binary_search(top1.begin(), top1.end(), w.job)) continue;
    ++r.population;
    if (w.degenerate()) r.observed += 1;
  }
  if (r.observed > r.bound + kSlack) r.violations = 1;
  return r;
}

std::vector<Interval> meta_intervals(const CallTrace& trace) {
  std::vector<Slot> bounds;
  for (const Interval& c : trace.cells) bounds.push_back(c.start);
  bounds.push_back(trace.interval.end);

  auto active = [&](Slot b) {
    for (const SlotTrace& row : trace.slots) {
      if (row.t == b) return !row.pending.empty();
    }
    return false;
  };

  std::vector<Interval> out;
  std::size_t i = 0;
  while (i < bounds.size()) {
    if (!active(bounds[i])) {
      ++i;
      continue;
    }
    std::size_t k = i + 1;
    while (k < bounds.size() && active(bounds[k])) ++k;
    Slot end = k < bounds.size() ? bounds[k] : trace.interval.end;
    out.push_back({bounds[i], end});
    i = k;
  }
  return out;
}

AuditReport audit_idle_slots(const CallTrace& trace, int m, Rational eps, int n) {
  AuditReport r{"idle_slots", "", 0, 0, 0, 0, false};
  double worst_ratio = -1;
  for (const Interval& meta : meta_intervals(trace)) {
    bool always_pending = true;
    int idle = 0;
    for (const SlotTrace& row : trace.slots) {
      if (!meta.contains(row.t)) continue;
      if (row.pending.empty()) always_pending = false;
      if (row.load_after < m) ++idle;
    }
    if (!always_pending) continue;
    ++r.population;
    const double bound = meta.length() * eps.value() / (m * log2n(n));
    if (idle > bound + kSlack) ++r.violations;
    const double ratio = bound > 0 ? idle / bound : (idle > 0 ? INFINITY : 0);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      r.observed = idle;
      r.bound = bound;
    }
  }
  return r;
}

AuditReport check_level_count(const LaminarFamily& fam, int n, Rational eps) {
  AuditReport r{"level_count", "", 1, 0, static_cast<double>(fam.level_count()),
                level_count_bound(n, eps), true};
  if (r.observed > r.bound + kSlack) r.violations = 1;
  return r;
}

std::vector<AuditReport> audit_instance(const Instance& inst, const std::string& name,
                                        Rational eps, const AuditOptions& options) {
  if (inst.n() > options.max_jobs || inst.n() == 0) return {};
  const int m = inst.m();
  OracleOptions oracle;
  oracle.max_jobs = options.max_jobs;
  const Schedule opt = optimal_schedule(inst, oracle);
  const Slot T = std::max<Slot>(1, opt.makespan());

  const PaddedInstance padded = pad_to_power_of_two(inst, T);
  const Schedule padded_opt = pad_schedule(padded, opt, T);
  const int n = padded.instance.n();
  const Slot horizon = padded.horizon;

  const LaminarFamily fam = build_laminar(horizon, n, eps);
  const LevelAssignment assign =
      assign_levels(padded.instance, padded_opt, fam, m, eps, LevelOptions{options.divisor});

  std::vector<AuditReport> out;
  out.push_back(check_unique_level(assign, n));
  out.push_back(check_shift_bound(assign, m, eps, horizon));
  out.push_back(check_level_count(fam, n, eps));

  GuessConfig cfg;
  cfg.partition_mode = PartitionMode::laminar;
  cfg.eps = eps;
  cfg.k_max = options.k_max.value_or(guess_cap(n, m, eps));
  cfg.depth_max = default_depth_max(n, m, eps);
  cfg.offset = best_offset(assign, m, eps, horizon).offset;
  cfg.guide = &assign;
  cfg.record_trace = true;
  const SolveResult run = solve(padded.instance, horizon, cfg);

  out.push_back(check_window_slack(padded_opt, run.traces));

  AuditReport degenerate{"degenerate", "", 0, 0, 0, 0, false};
  AuditReport idle{"idle_slots", "", 0, 0, 0, 0, false};
  double worst_deg = -1;
  double worst_idle = -1;
  for (const CallTrace& call : run.traces) {
    std::vector<JobId> top1;
    for (int l = std::max(call.level, 0); l < call.child_level; ++l) {
      auto tops = assign.top_at(l);
      top1.insert(top1.end(), tops.begin(), tops.end());
    }
    std::sort(top1.begin(), top1.end());
    AuditReport d = count_degenerate(call.tops, top1, m, eps, n, call.interval.length());
    degenerate.population += d.population;
    degenerate.violations += d.violations;
    double ratio = d.bound > 0 ? d.observed / d.bound : d.observed;
    if (ratio > worst_deg) {
      worst_deg = ratio;
      degenerate.observed = d.observed;
      degenerate.bound = d.bound;
    }

    AuditReport w = audit_idle_slots(call, m, eps, n);
    idle.population += w.population;
    idle.violations += w.violations;
    if (w.population > 0) {
      double r = w.bound > 0 ? w.observed / w.bound : w.observed;
      if (r > worst_idle) {
        worst_idle = r;
        idle.observed = w.observed;
        idle.bound = w.bound;
      }
    }
  }
  out.push_back(degenerate);
  out.push_back(idle);

  out.push_back(AuditReport{"depth_cap", "", 0, 0, static_cast<double>(cfg.depth_max),
                            recursion_levels_rmax(n, m, eps), false});
  for (auto& r : out) r.instance = name;
  return out;
}

std::string audit_csv(const std::vector<AuditReport>& reports) {
  std::string out = "claim,instance,population,violations,observed,bound\n";
  for (const AuditReport& r : reports) {
    out += r.name + "," + r.instance + "," + std::to_string(r.population) + "," +
           std::to_string(r.violations) + "," + fmt(r.observed) + "," + fmt(r.bound) + "\n";
  }
  return out;
}

}  // namespace usched
