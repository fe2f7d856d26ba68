#include "usched/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "usched/rng.hpp"

namespace usched {

PriorityOrder::PriorityOrder(std::vector<JobId> perm, int n) : perm_(std::move(perm)) {
  if (static_cast<int>(perm_.size()) != n) {
    throw IndexError("priority order has " + std::to_string(perm_.size()) +
                     " entries for " + std::to_string(n) + " jobs");
  }
  std::vector<bool> seen(n, false);
  for (JobId j : perm_) {
    if (j < 0 || j >= n || seen[j]) throw IndexError("priority order is not a permutation");
    seen[j] = true;
  }
}

PriorityOrder PriorityOrder::identity(int n) {
  std::vector<JobId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  return PriorityOrder(std::move(perm), n);
}

PriorityOrder PriorityOrder::random(int n, std::uint64_t seed) {
  std::vector<JobId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<JobId>(perm));
  return PriorityOrder(std::move(perm), n);
}

Schedule list_schedule(const Instance& inst, const PriorityOrder& order) {
  const int n = inst.n();
  std::vector<int> remaining_preds(n);
  std::vector<Slot> start(n, -1);
  for (JobId j = 0; j < n; ++j) {
    remaining_preds[j] = static_cast<int>(inst.predecessors(j).size());
  }

  std::vector<JobId> pending = order.perm();
  Slot t = 0;
  while (!pending.empty()) {
    std::vector<JobId> started;
    std::vector<JobId> rest;
    rest.reserve(pending.size());
    for (JobId j : pending) {
      if (static_cast<int>(started.size()) < inst.m() && remaining_preds[j] == 0) {
        started.push_back(j);
      } else {
        rest.push_back(j);
      }
    }
    // Closure keeps every predecessor in the list, so some job is always
    // available while jobs remain.
    for (JobId j : started) {
      start[j] = t;
      for (JobId s : inst.successors(j)) --remaining_preds[s];
    }
    pending = std::move(rest);
    ++t;
  }

  Schedule sched(t);
  for (JobId j = 0; j < n; ++j) sched.assign(j, start[j]);
  return sched;
}

std::vector<int> coffman_graham_labels(const Instance& inst) {
  const int n = inst.n();
  // The rule compares labels of immediate successors (covering pairs of the
  // order); with the full closure it is no longer optimal on two machines.
  std::vector<std::vector<JobId>> immediate(n);
  for (const Edge& e : inst.reduction_edges()) immediate[e.pred].push_back(e.succ);

  std::vector<int> label(n, 0);
  for (int next = 1; next <= n; ++next) {
    JobId best = -1;
    std::vector<int> best_key;
    for (JobId j = 0; j < n; ++j) {
      if (label[j] != 0) continue;
      bool ready = std::all_of(inst.successors(j).begin(), inst.successors(j).end(),
                               [&](JobId s) { return label[s] != 0; });
      if (!ready) continue;
      std::vector<int> key;
      for (JobId s : immediate[j]) key.push_back(label[s]);
      std::sort(key.begin(), key.end(), std::greater<>());
      if (best < 0 || key < best_key) {
        best = j;
        best_key = std::move(key);
      }
    }
    label[best] = next;
  }
  return label;
}

PriorityOrder coffman_graham_order(const Instance& inst) {
  std::vector<int> label = coffman_graham_labels(inst);
  std::vector<JobId> perm(inst.n());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](JobId a, JobId b) { return label[a] > label[b]; });
  return PriorityOrder(std::move(perm), inst.n());
}

Schedule coffman_graham_schedule(const Instance& inst) {
  return list_schedule(inst, coffman_graham_order(inst));
}

}  // namespace usched
