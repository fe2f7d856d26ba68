#include "usched/laminar.hpp"

#include <algorithm>
#include <string>

namespace usched {

std::size_t PinMap::count() const {
  return static_cast<std::size_t>(
      std::count_if(slot_.begin(), slot_.end(), [](Slot t) { return t != kUnpinned; }));
}

std::vector<std::pair<JobId, Slot>> PinMap::entries() const {
  std::vector<std::pair<JobId, Slot>> out;
  for (JobId j = 0; j < size(); ++j) {
    if (slot_[j] != kUnpinned) out.emplace_back(j, slot_[j]);
  }
  return out;
}

PinMap PinMap::from(int n, std::span<const std::pair<JobId, Slot>> pins) {
  PinMap map(n);
  for (const auto& [j, t] : pins) map.pin(j, t);
  return map;
}

PinMap PinMap::from(int n, const Schedule& sched) {
  PinMap map(n);
  for (const auto& [j, t] : sched.starts()) {
    if (j >= 0 && j < n) map.pin(j, t);
  }
  return map;
}

bool is_power_of_two(Slot T) { return T >= 1 && (T & (T - 1)) == 0; }

Slot next_power_of_two(Slot T) {
  Slot p = 1;
  while (p < T) p *= 2;
  return p;
}

std::span<const IntervalNode> LaminarFamily::children(int l, int index) const {
  const IntervalNode& parent = node(l, index);
  if (parent.child_count == 0) return {};
  return std::span<const IntervalNode>(levels_.at(l + 1)).subspan(parent.first_child,
                                                                  parent.child_count);
}

std::vector<Interval> LaminarFamily::intervals_within(int l, Interval outer) const {
  std::vector<Interval> out;
  for (const IntervalNode& node : levels_.at(l)) {
    if (outer.contains(node.span)) out.push_back(node.span);
  }
  return out;
}

LaminarFamily build_laminar(Slot T, int n, Rational eps) {
  if (!is_power_of_two(T)) {
    throw BadHorizon("horizon " + std::to_string(T) + " is not a power of two");
  }
  LaminarFamily fam;
  fam.horizon_ = T;
  fam.rho_ = laminar_rho(n, eps);
  const Slot branching = Slot{1} << fam.rho_;

  fam.levels_.push_back({IntervalNode{{0, T}, 0, -1, -1, 0}});
  while (fam.levels_.back().front().span.length() > 1) {
    auto& parents = fam.levels_.back();
    const int level = static_cast<int>(fam.levels_.size());
    const Slot len = parents.front().span.length();
    const Slot child_len = len >= branching ? len / branching : 1;
    std::vector<IntervalNode> next;
    for (int p = 0; p < static_cast<int>(parents.size()); ++p) {
      parents[p].first_child = static_cast<int>(next.size());
      parents[p].child_count = static_cast<int>(len / child_len);
      for (Slot s = parents[p].span.start; s < parents[p].span.end; s += child_len) {
        next.push_back(IntervalNode{{s, s + child_len}, level, p, -1, 0});
      }
    }
    fam.levels_.push_back(std::move(next));
  }
  return fam;
}

PaddedInstance pad_to_power_of_two(const Instance& inst, Slot T) {
  if (T < 1) throw BadHorizon("horizon must be at least 1");
  PaddedInstance out;
  out.horizon = next_power_of_two(T);
  out.original_jobs = inst.n();
  const int chain_len = out.horizon - T;
  const int m = inst.m();
  const int n = inst.n() + m * chain_len;

  std::vector<Edge> edges = inst.reduction_edges();
  for (int c = 0; c < m && chain_len > 0; ++c) {
    JobId head = inst.n() + c * chain_len;
    for (JobId j = 0; j < inst.n(); ++j) {
      if (inst.successors(j).empty()) edges.push_back({j, head});
    }
    for (int k = 0; k + 1 < chain_len; ++k) edges.push_back({head + k, head + k + 1});
  }
  out.instance = Instance::build(n, m, edges);
  return out;
}

Schedule pad_schedule(const PaddedInstance& padded, const Schedule& original, Slot T) {
  Schedule sched(padded.horizon);
  for (const auto& [j, t] : original.starts()) sched.assign(j, t);
  const int chain_len = padded.horizon - T;
  for (int c = 0; c < padded.instance.m(); ++c) {
    for (int k = 0; k < chain_len; ++k) {
      sched.assign(padded.original_jobs + c * chain_len + k, T + k);
    }
  }
  return sched;
}

Interval window_of(const Instance& inst, JobId j, const PinMap& pins, Slot T) {
  Interval w{0, T};
  for (JobId p : inst.predecessors(j)) {
    if (pins.pinned(p)) w.start = std::max(w.start, pins.raw(p) + 1);
  }
  for (JobId s : inst.successors(j)) {
    if (pins.pinned(s)) w.end = std::min(w.end, pins.raw(s));
  }
  return w;
}

Interval feasible_window(const Instance& inst, JobId j, const PinMap& pins, Slot T) {
  Interval w = window_of(inst, j, pins, T);
  if (w.empty()) {
    throw EmptyWindow("job " + std::to_string(j) + " has no slot left in [" +
                      std::to_string(w.start) + ", " + std::to_string(w.end) + ")");
  }
  return w;
}

namespace {

void collect(const std::vector<IntervalSets>& level, bool top, std::vector<JobId>& out) {
  for (const auto& sets : level) {
    const auto& src = top ? sets.top : sets.guess;
    out.insert(out.end(), src.begin(), src.end());
  }
}

// Longest chain inside `jobs`, ordered by opt slot. Deterministic: ties go
// to the earliest (slot, id).
std::vector<JobId> longest_chain_by_slot(const Instance& inst, std::vector<JobId> jobs,
                                         const PinMap& opt) {
  std::sort(jobs.begin(), jobs.end(), [&](JobId a, JobId b) {
    return std::pair(opt.raw(a), a) < std::pair(opt.raw(b), b);
  });
  const std::size_t k = jobs.size();
  std::vector<int> best(k, 1);
  std::vector<int> prev(k, -1);
  int end = -1;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t p = 0; p < i; ++p) {
      if (inst.precedes(jobs[p], jobs[i]) && best[p] + 1 > best[i]) {
        best[i] = best[p] + 1;
        prev[i] = static_cast<int>(p);
      }
    }
    if (end < 0 || best[i] > best[end]) end = static_cast<int>(i);
  }
  std::vector<JobId> chain;
  for (int i = end; i >= 0; i = prev[i]) chain.push_back(jobs[i]);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

}  // namespace

std::vector<JobId> LevelAssignment::guess_at(int level) const {
  std::vector<JobId> out;
  collect(levels.at(level), false, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<JobId> LevelAssignment::top_at(int level) const {
  std::vector<JobId> out;
  collect(levels.at(level), true, out);
  std::sort(out.begin(), out.end());
  return out;
}

int LevelAssignment::guess_level(JobId j) const {
  for (int l = 0; l < static_cast<int>(levels.size()); ++l) {
    for (const auto& sets : levels[l]) {
      if (std::find(sets.guess.begin(), sets.guess.end(), j) != sets.guess.end()) return l;
    }
  }
  return -1;
}

int LevelAssignment::top_level(JobId j) const {
  for (int l = 0; l < static_cast<int>(levels.size()); ++l) {
    for (const auto& sets : levels[l]) {
      if (std::find(sets.top.begin(), sets.top.end(), j) != sets.top.end()) return l;
    }
  }
  return -1;
}

LevelAssignment assign_levels(const Instance& inst, const Schedule& opt,
                              const LaminarFamily& fam, int m, Rational eps,
                              const LevelOptions& options) {
  const int n = inst.n();
  const Slot T = fam.horizon();
  const PinMap opt_slots = PinMap::from(n, opt);
  const int divisor = options.divisor == ChainDivisor::with_machines ? m : 1;

  LevelAssignment out;
  out.opt = opt;
  out.horizon = T;
  out.levels.resize(fam.level_count());

  PinMap pins(n);
  std::vector<char> assigned(n, 0);

  for (int l = 0; l < fam.level_count(); ++l) {
    const auto& nodes = fam.level(l);
    auto& sets = out.levels[l];
    sets.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) sets[i].span = nodes[i].span;

    // J_I under the guesses of earlier levels.
    std::vector<std::vector<JobId>> members(nodes.size());
    for (JobId j = 0; j < n; ++j) {
      if (assigned[j]) continue;
      Interval w = window_of(inst, j, pins, T);
      if (w.empty()) continue;
      int idx = fam.index_at(l, w.start);
      if (nodes[idx].span.contains(w)) members[idx].push_back(j);
    }

    if (l == fam.leaf_level()) {
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (JobId j : members[i]) {
          sets[i].guess.push_back(j);
          pins.pin(j, opt_slots.raw(j));
          assigned[j] = 1;
        }
      }
      continue;
    }

    auto flexible = [&](std::size_t i) {
      std::vector<JobId> out_jobs;
      for (JobId j : members[i]) {
        if (assigned[j]) continue;
        Interval w = window_of(inst, j, pins, T);
        if (fam.index_at(l + 1, w.start) != fam.index_at(l + 1, w.end - 1)) {
          out_jobs.push_back(j);
        }
      }
      return out_jobs;
    };

    // Guesses in one interval can narrow windows in another, so sweep the
    // level until no interval holds a long flexible chain.
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double threshold = chain_threshold(nodes[i].span.length(), n, eps, divisor);
        while (true) {
          std::vector<JobId> flex = flexible(i);
          if (flex.empty()) break;
          std::vector<JobId> chain = longest_chain_by_slot(inst, flex, opt_slots);
          if (static_cast<double>(chain.size()) < threshold) break;
          for (const IntervalNode& child : fam.children(l, static_cast<int>(i))) {
            JobId first = -1;
            JobId last = -1;
            for (JobId j : chain) {
              if (!child.span.contains(opt_slots.raw(j))) continue;
              if (first < 0) first = j;
              last = j;
            }
            for (JobId j : {first, last}) {
              if (j < 0 || assigned[j]) continue;
              sets[i].guess.push_back(j);
              pins.pin(j, opt_slots.raw(j));
              assigned[j] = 1;
            }
          }
          changed = true;
        }
      }
    }

    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (JobId j : flexible(i)) {
        sets[i].top.push_back(j);
        assigned[j] = 1;
      }
      std::sort(sets[i].guess.begin(), sets[i].guess.end());
    }
  }
  return out;
}

std::size_t offset_bucket_size(const LevelAssignment& assign, int m, Rational eps, int a) {
  const int period = offset_period(m, eps);
  std::vector<JobId> bucket;
  for (int l = a + 1; l < static_cast<int>(assign.levels.size()); l += period) {
    collect(assign.levels[l], true, bucket);
  }
  std::sort(bucket.begin(), bucket.end());
  bucket.erase(std::unique(bucket.begin(), bucket.end()), bucket.end());
  return bucket.size();
}

OffsetChoice best_offset(const LevelAssignment& assign, int m, Rational eps,
                         [[maybe_unused]] Slot T) {
  const int period = offset_period(m, eps);
  OffsetChoice best{0, offset_bucket_size(assign, m, eps, 0)};
  for (int a = 1; a < period; ++a) {
    std::size_t count = offset_bucket_size(assign, m, eps, a);
    if (count < best.count) best = {a, count};
  }
  return best;
}

}  // namespace usched
