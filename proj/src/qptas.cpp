#include "usched/qptas.hpp"

#include <algorithm>
#include <string>

#include "usched/rng.hpp"

namespace usched {

namespace {

int cell_of(const std::vector<Interval>& cells, Slot t) {
  auto it = std::upper_bound(cells.begin(), cells.end(), t,
                             [](Slot v, const Interval& c) { return v < c.end; });
  if (it == cells.end() || !it->contains(t)) return -1;
  return static_cast<int>(it - cells.begin());
}

Interval span_of(const std::vector<Interval>& cells) {
  return {cells.front().start, cells.back().end};
}

}  // namespace

Classification classify(const Instance& inst, const std::vector<JobId>& jobs,
                        const std::vector<std::pair<JobId, Slot>>& pinned_new,
                        const std::vector<Interval>& cells, const PinMap& pinned_old,
                        Slot T) {
  PinMap pins = pinned_old;
  for (const auto& [j, t] : pinned_new) pins.pin(j, t);

  Classification out;
  out.bottom.resize(cells.size());
  for (JobId j : jobs) {
    if (pins.pinned(j)) {
      int c = cell_of(cells, pins.raw(j));
      if (c < 0) throw EmptyWindow("job " + std::to_string(j) + " pinned outside the interval");
      out.bottom[c].push_back(j);
      continue;
    }
    Interval w = feasible_window(inst, j, pins, T);
    int c = cell_of(cells, w.start);
    if (c >= 0 && cells[c].contains(w)) {
      out.bottom[c].push_back(j);
    } else {
      out.top.push_back(j);
    }
  }
  return out;
}

std::vector<TopWindow> windows_for_top(const Instance& inst, const std::vector<JobId>& top,
                                       const std::vector<Interval>& cells,
                                       const PinMap& placed) {
  const Interval whole = span_of(cells);
  std::vector<Slot> bounds;
  for (const Interval& c : cells) bounds.push_back(c.start);
  bounds.push_back(whole.end);

  std::vector<TopWindow> out;
  for (JobId j : top) {
    Slot lo = whole.start;
    Slot hi = whole.end;
    for (JobId p : inst.predecessors(j)) {
      if (placed.pinned(p)) lo = std::max(lo, placed.raw(p) + 1);
    }
    for (JobId s : inst.successors(j)) {
      if (placed.pinned(s)) hi = std::min(hi, placed.raw(s));
    }
    auto r = std::lower_bound(bounds.begin(), bounds.end(), lo);
    auto d = std::upper_bound(bounds.begin(), bounds.end(), hi);
    TopWindow w{j, r == bounds.end() ? whole.end : *r,
                d == bounds.begin() ? whole.start : *std::prev(d)};
    out.push_back(w);
  }
  return out;
}

EdfResult edf_insert(const Instance& inst, const std::vector<TopWindow>& tops,
                     const std::vector<int>& occupancy, Interval interval,
                     const PinMap& placed, bool record_trace) {
  EdfResult out;
  const int n = inst.n();
  enum : char { waiting, done, dropped, idle };
  std::vector<char> state(n, idle);
  std::vector<Slot> at(n, -1);
  std::vector<const TopWindow*> live;
  for (const TopWindow& w : tops) {
    if (w.degenerate()) {
      out.discarded.push_back(w.job);
      ++out.degenerate;
      state[w.job] = dropped;
    } else {
      state[w.job] = waiting;
      live.push_back(&w);
    }
  }
  std::sort(live.begin(), live.end(), [](const TopWindow* a, const TopWindow* b) {
    return std::pair(a->d, a->job) < std::pair(b->d, b->job);
  });

  for (Slot t = interval.start; t < interval.end; ++t) {
    for (const TopWindow* w : live) {
      if (state[w->job] == waiting && w->d <= t) {
        state[w->job] = dropped;
        out.discarded.push_back(w->job);
      }
    }
    const int before = occupancy[t - interval.start];
    int load = before;
    SlotTrace row{t, before, before, {}};
    if (record_trace) {
      for (const TopWindow* w : live) {
        if (state[w->job] == waiting && w->r <= t) row.pending.push_back(w->job);
      }
      std::sort(row.pending.begin(), row.pending.end());
    }
    std::vector<JobId> started;
    for (const TopWindow* w : live) {
      if (load >= inst.m()) break;
      const JobId j = w->job;
      if (state[j] != waiting || w->r > t) continue;
      bool ready = true;
      for (JobId p : inst.predecessors(j)) {
        if (placed.pinned(p) && placed.raw(p) >= t) ready = false;
        if (state[p] == waiting) ready = false;
        if (state[p] == done && at[p] >= t) ready = false;
        if (!ready) break;
      }
      if (!ready) continue;
      started.push_back(j);
      ++load;
    }
    for (JobId j : started) {
      state[j] = done;
      at[j] = t;
      out.placements.emplace_back(j, t);
    }
    if (record_trace) {
      row.load_after = load;
      out.trace.push_back(std::move(row));
    }
  }
  for (const TopWindow* w : live) {
    if (state[w->job] == waiting) {
      state[w->job] = dropped;
      out.discarded.push_back(w->job);
    }
  }
  return out;
}

namespace {

struct Enumerator {
  const Instance& inst;
  const RecursionInput& input;
  const GuessConfig& cfg;
  const LaminarFamily* fam;
  Slot T;
  const std::function<bool(const Guess&)>& visit;

  PinMap pins;
  std::vector<int> load;
  bool stopped = false;

  Interval interval() const { return input.interval; }

  int child_level() const {
    const int period = offset_period(inst.m(), cfg.eps);
    int level = input.depth == 0 ? cfg.offset.value_or(0) + 1 : input.level + period;
    return std::min(level, fam->leaf_level());
  }

  std::vector<std::vector<Interval>> partitions() const {
    const Interval I = interval();
    if (cfg.partition_mode == PartitionMode::laminar) {
      return {fam->intervals_within(child_level(), I)};
    }
    std::vector<std::vector<Interval>> out;
    const std::uint64_t cap = std::max<std::uint64_t>(1, cfg.k_max);
    const int max_cuts =
        static_cast<int>(std::min<std::uint64_t>(cap - 1, static_cast<std::uint64_t>(I.length() - 1)));
    for (int cuts = 0; cuts <= max_cuts; ++cuts) {
      std::vector<Slot> pos(cuts);
      for (int i = 0; i < cuts; ++i) pos[i] = I.start + 1 + i;
      while (true) {
        std::vector<Interval> cells;
        Slot s = I.start;
        for (Slot p : pos) {
          cells.push_back({s, p});
          s = p;
        }
        cells.push_back({s, I.end});
        out.push_back(std::move(cells));
        int i = cuts - 1;
        while (i >= 0 && pos[i] == I.end - cuts + i) --i;
        if (i < 0) break;
        ++pos[i];
        for (int k = i + 1; k < cuts; ++k) pos[k] = pos[k - 1] + 1;
      }
    }
    return out;
  }

  void emit(const std::vector<std::pair<JobId, Slot>>& jobs,
            const std::vector<std::vector<Interval>>& parts) {
    for (const auto& cells : parts) {
      if (stopped) return;
      if (!visit(Guess{jobs, cells})) stopped = true;
    }
  }

  std::vector<Slot> open_slots(JobId j) const {
    Interval w = window_of(inst, j, pins, T);
    w.start = std::max(w.start, interval().start);
    w.end = std::min(w.end, interval().end);
    std::vector<Slot> out;
    for (Slot t = w.start; t < w.end; ++t) {
      if (load[t - interval().start] < inst.m()) out.push_back(t);
    }
    return out;
  }

  void assign_slots(const std::vector<JobId>& subset, std::size_t i,
                    std::vector<std::pair<JobId, Slot>>& chosen,
                    const std::vector<std::vector<Interval>>& parts) {
    if (stopped) return;
    if (i == subset.size()) {
      auto sorted = chosen;
      std::sort(sorted.begin(), sorted.end());
      emit(sorted, parts);
      return;
    }
    const JobId j = subset[i];
    for (Slot t : open_slots(j)) {
      pins.pin(j, t);
      ++load[t - interval().start];
      chosen.emplace_back(j, t);
      assign_slots(subset, i + 1, chosen, parts);
      chosen.pop_back();
      --load[t - interval().start];
      pins.unpin(j);
      if (stopped) return;
    }
  }

  void exhaustive_jobs(const std::vector<std::vector<Interval>>& parts) {
    const std::vector<JobId>& jobs = input.jobs;
    const int total = static_cast<int>(jobs.size());
    const int top = static_cast<int>(std::min<std::uint64_t>(cfg.k_max, jobs.size()));
    const auto& rank = inst.topological_rank();
    for (int size = top; size >= 0 && !stopped; --size) {
      std::vector<int> idx(size);
      for (int i = 0; i < size; ++i) idx[i] = i;
      while (!stopped) {
        std::vector<JobId> subset;
        for (int i : idx) subset.push_back(jobs[i]);
        std::sort(subset.begin(), subset.end(),
                  [&](JobId a, JobId b) { return rank[a] < rank[b]; });
        std::vector<std::pair<JobId, Slot>> chosen;
        assign_slots(subset, 0, chosen, parts);
        int i = size - 1;
        while (i >= 0 && idx[i] == total - size + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int k = i + 1; k < size; ++k) idx[k] = idx[k - 1] + 1;
      }
    }
  }

  std::vector<std::pair<JobId, Slot>> guided_jobs() const {
    const LevelAssignment& guide = *cfg.guide;
    const PinMap opt = PinMap::from(inst.n(), guide.opt);
    std::vector<char> in_call(inst.n(), 0);
    for (JobId j : input.jobs) in_call[j] = 1;
    std::vector<std::pair<Slot, JobId>> cand;
    const int last = fam != nullptr ? child_level() : static_cast<int>(guide.levels.size());
    for (int l = input.level; l < last && l < static_cast<int>(guide.levels.size()); ++l) {
      for (JobId j : guide.guess_at(l)) {
        if (in_call[j] && opt.pinned(j) && interval().contains(opt.raw(j))) {
          cand.emplace_back(opt.raw(j), j);
        }
      }
    }
    std::sort(cand.begin(), cand.end());
    if (cand.size() > cfg.k_max) cand.resize(cfg.k_max);
    std::vector<std::pair<JobId, Slot>> out;
    for (const auto& [t, j] : cand) out.emplace_back(j, t);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::pair<JobId, Slot>> sampled_jobs(int index) {
    std::uint64_t seed = Rng::mix(cfg.seed, static_cast<std::uint64_t>(input.depth));
    seed = Rng::mix(seed, static_cast<std::uint64_t>(interval().start));
    seed = Rng::mix(seed, static_cast<std::uint64_t>(interval().end));
    seed = Rng::mix(seed, static_cast<std::uint64_t>(index));
    Rng rng(seed);
    const std::uint64_t cap = std::min<std::uint64_t>(cfg.k_max, input.jobs.size());
    const std::size_t size = 1 + rng.below(cap);
    std::vector<JobId> pool = input.jobs;
    rng.shuffle(std::span<JobId>(pool));
    pool.resize(size);
    const auto& rank = inst.topological_rank();
    std::sort(pool.begin(), pool.end(), [&](JobId a, JobId b) { return rank[a] < rank[b]; });

    std::vector<std::pair<JobId, Slot>> out;
    for (JobId j : pool) {
      std::vector<Slot> slots = open_slots(j);
      if (slots.empty()) continue;
      Slot t = slots[rng.below(slots.size())];
      pins.pin(j, t);
      ++load[t - interval().start];
      out.emplace_back(j, t);
    }
    for (const auto& [j, t] : out) {
      pins.unpin(j);
      --load[t - interval().start];
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  void run() {
    pins = input.pinned;
    load.assign(interval().length(), 0);
    for (const auto& [j, t] : pins.entries()) {
      if (interval().contains(t)) ++load[t - interval().start];
    }
    const auto parts = partitions();
    if (cfg.exhaustive_job_guessing) {
      exhaustive_jobs(parts);
      return;
    }
    if (cfg.guide != nullptr) {
      emit(guided_jobs(), parts);
      return;
    }
    emit({}, parts);
    if (cfg.k_max == 0 || input.jobs.empty()) return;
    for (int i = 0; i < cfg.samples && !stopped; ++i) {
      auto jobs = sampled_jobs(i);
      if (!jobs.empty()) emit(jobs, parts);
    }
  }
};

}  // namespace

void for_each_guess(const Instance& inst, const RecursionInput& input, const GuessConfig& cfg,
                    const LaminarFamily* fam, Slot T,
                    const std::function<bool(const Guess&)>& visit) {
  if (cfg.partition_mode == PartitionMode::laminar && fam == nullptr) {
    throw Error("laminar partitioning needs a laminar family");
  }
  Enumerator e{inst, input, cfg, fam, T, visit, {}, {}, false};
  e.run();
}

std::vector<Guess> enumerate_guesses(const Instance& inst, const RecursionInput& input,
                                     const GuessConfig& cfg, const LaminarFamily* fam, Slot T,
                                     std::size_t limit) {
  std::vector<Guess> out;
  if (limit == 0) return out;
  for_each_guess(inst, input, cfg, fam, T, [&](const Guess& g) {
    out.push_back(g);
    return out.size() < limit;
  });
  return out;
}

namespace {

struct Outcome {
  std::vector<std::pair<JobId, Slot>> placed;
  std::vector<JobId> discarded;
  SolveStats stats;
  std::vector<CallTrace> traces;
};

void add_counts(SolveStats& into, const SolveStats& from) {
  into.edf_discards += from.edf_discards;
  into.degenerate_discards += from.degenerate_discards;
  into.depth_discards += from.depth_discards;
  into.unit_discards += from.unit_discards;
}

class Solver {
 public:
  Solver(const Instance& inst, Slot T, const GuessConfig& cfg, const LaminarFamily* fam)
      : inst_(inst), T_(T), cfg_(cfg), fam_(fam), pins_(inst.n()) {}

  std::uint64_t explored() const { return explored_; }
  bool budget_hit() const { return budget_hit_; }

  Outcome call(Interval I, int level, int depth, const std::vector<JobId>& pinned_here,
               const std::vector<JobId>& free) {
    Outcome out;
    for (JobId j : pinned_here) out.placed.emplace_back(j, pins_.raw(j));
    if (free.empty()) return out;
    if (depth >= cfg_.depth_max) {
      out.discarded = free;
      out.stats.depth_discards = free.size();
      return out;
    }
    if (I.length() == 1) return unit_call(I, std::move(out), free);

    RecursionInput input{I, pins_, free, depth, level};
    std::optional<Outcome> best;
    std::optional<Guess> first;
    for_each_guess(inst_, input, cfg_, fam_, T_, [&](const Guess& g) {
      if (!first) first = g;
      if (cfg_.node_budget != 0 && explored_ >= cfg_.node_budget) {
        budget_hit_ = true;
        return false;
      }
      auto result = evaluate(I, level, depth, pinned_here, free, g);
      if (result && (!best || result->discarded.size() < best->discarded.size())) {
        best = std::move(result);
      }
      return !(best && best->discarded.empty());
    });
    if (!best) {
      // Budget ran out first, or every guess was inconsistent: fall back to
      // guessing nothing, which never empties a window.
      Guess fallback{{}, first ? first->cells : std::vector<Interval>{I}};
      best = evaluate(I, level, depth, pinned_here, free, fallback);
    }
    if (!best) {
      out.discarded = free;
      out.stats.depth_discards = free.size();
      return out;
    }
    return std::move(*best);
  }

 private:
  Outcome unit_call(Interval I, Outcome out, const std::vector<JobId>& free) {
    int load = static_cast<int>(out.placed.size());
    std::vector<JobId> order = free;
    const auto& rank = inst_.topological_rank();
    std::sort(order.begin(), order.end(), [&](JobId a, JobId b) { return rank[a] < rank[b]; });
    std::vector<char> here(inst_.n(), 0);
    for (const auto& [j, t] : out.placed) here[j] = 1;
    for (JobId j : order) {
      bool blocked = load >= inst_.m();
      for (JobId p : inst_.predecessors(j)) blocked = blocked || here[p];
      if (blocked) {
        out.discarded.push_back(j);
        ++out.stats.unit_discards;
      } else {
        out.placed.emplace_back(j, I.start);
        here[j] = 1;
        ++load;
      }
    }
    return out;
  }

  int child_level_for(int level, int depth) const {
    if (fam_ == nullptr) return -1;
    const int period = offset_period(inst_.m(), cfg_.eps);
    int l = depth == 0 ? cfg_.offset.value_or(0) + 1 : level + period;
    return std::min(l, fam_->leaf_level());
  }

  std::optional<Outcome> evaluate(Interval I, int level, int depth,
                                  const std::vector<JobId>& pinned_here,
                                  const std::vector<JobId>& free, const Guess& g) {
    ++explored_;
    std::vector<char> guessed(inst_.n(), 0);
    for (const auto& [j, t] : g.jobs) guessed[j] = 1;
    std::vector<JobId> rest;
    for (JobId j : free) {
      if (!guessed[j]) rest.push_back(j);
    }

    Classification cls;
    try {
      cls = classify(inst_, rest, g.jobs, g.cells, pins_, T_);
    } catch (const EmptyWindow&) {
      return std::nullopt;
    }

    for (const auto& [j, t] : g.jobs) pins_.pin(j, t);
    const int child_level = child_level_for(level, depth);

    Outcome out;
    PinMap placed = pins_;
    std::vector<int> occupancy(I.length(), 0);
    for (std::size_t c = 0; c < g.cells.size(); ++c) {
      std::vector<JobId> child_pins;
      for (JobId j : pinned_here) {
        if (g.cells[c].contains(pins_.raw(j))) child_pins.push_back(j);
      }
      for (const auto& [j, t] : g.jobs) {
        if (g.cells[c].contains(t)) child_pins.push_back(j);
      }
      std::vector<JobId> child_free;
      for (JobId j : cls.bottom[c]) {
        if (!guessed[j]) child_free.push_back(j);
      }
      Outcome child = call(g.cells[c], child_level, depth + 1, child_pins, child_free);
      for (const auto& [j, t] : child.placed) {
        placed.pin(j, t);
        ++occupancy[t - I.start];
        out.placed.emplace_back(j, t);
      }
      out.discarded.insert(out.discarded.end(), child.discarded.begin(), child.discarded.end());
      add_counts(out.stats, child.stats);
      if (cfg_.record_trace) {
        std::move(child.traces.begin(), child.traces.end(), std::back_inserter(out.traces));
      }
    }

    std::vector<TopWindow> windows = windows_for_top(inst_, cls.top, g.cells, placed);
    EdfResult edf = edf_insert(inst_, windows, occupancy, I, placed, cfg_.record_trace);
    for (const auto& [j, t] : g.jobs) pins_.unpin(j);

    out.placed.insert(out.placed.end(), edf.placements.begin(), edf.placements.end());
    out.discarded.insert(out.discarded.end(), edf.discarded.begin(), edf.discarded.end());
    out.stats.degenerate_discards += edf.degenerate;
    out.stats.edf_discards += edf.discarded.size() - edf.degenerate;
    if (cfg_.record_trace) {
      CallTrace trace{I, depth, fam_ ? level : -1, child_level, g.cells, g.jobs,
                      std::move(windows), std::move(edf.trace)};
      out.traces.insert(out.traces.begin(), std::move(trace));
    }
    return out;
  }

  const Instance& inst_;
  Slot T_;
  const GuessConfig& cfg_;
  const LaminarFamily* fam_;
  PinMap pins_;
  std::uint64_t explored_ = 0;
  bool budget_hit_ = false;
};

SolveResult finish(Outcome outcome, Slot T, const Solver& solver, int offset) {
  SolveResult result;
  result.schedule = Schedule(T);
  for (const auto& [j, t] : outcome.placed) result.schedule.assign(j, t);
  result.discarded = std::move(outcome.discarded);
  std::sort(result.discarded.begin(), result.discarded.end());
  result.stats = outcome.stats;
  result.stats.explored = solver.explored();
  result.stats.budget_hit = solver.budget_hit();
  result.stats.offset = offset;
  result.traces = std::move(outcome.traces);
  return result;
}

}  // namespace

SolveResult solve(const Instance& inst, Slot T, const GuessConfig& cfg) {
  if (cfg.depth_max < 1) throw Error("depth_max must be at least 1");
  const int chain = longest_chain(inst);
  if (T < chain || (T < 1 && inst.n() > 0)) {
    throw InfeasibleHorizon("horizon " + std::to_string(T) + " is below the longest chain (" +
                            std::to_string(chain) + ")");
  }
  std::vector<JobId> all(inst.n());
  for (JobId j = 0; j < inst.n(); ++j) all[j] = j;

  if (cfg.partition_mode == PartitionMode::exhaustive) {
    Solver solver(inst, T, cfg, nullptr);
    Outcome outcome = inst.n() == 0 ? Outcome{} : solver.call({0, T}, -1, 0, {}, all);
    return finish(std::move(outcome), T, solver, -1);
  }

  const LaminarFamily fam = build_laminar(T, inst.n(), cfg.eps);
  const int period = offset_period(inst.m(), cfg.eps);
  std::vector<int> offsets;
  if (cfg.offset) {
    offsets.push_back(*cfg.offset);
  } else {
    for (int a = 0; a < period; ++a) offsets.push_back(a);
  }

  std::optional<SolveResult> best;
  std::uint64_t explored = 0;
  bool budget_hit = false;
  for (int a : offsets) {
    GuessConfig local = cfg;
    local.offset = a;
    Solver solver(inst, T, local, &fam);
    Outcome outcome = inst.n() == 0 ? Outcome{} : solver.call({0, T}, 0, 0, {}, all);
    SolveResult result = finish(std::move(outcome), T, solver, a);
    explored += result.stats.explored;
    budget_hit = budget_hit || result.stats.budget_hit;
    if (!best || result.discarded.size() < best->discarded.size()) best = std::move(result);
    if (best->discarded.empty()) break;
  }
  best->stats.explored = explored;
  best->stats.budget_hit = budget_hit;
  return std::move(*best);
}

Schedule insert_discarded(const Schedule& sched, const std::vector<JobId>& discards,
                          const Instance& inst) {
  Schedule out = sched;
  std::vector<JobId> order = discards;
  std::sort(order.begin(), order.end());
  for (JobId j : order) {
    Slot t = 0;
    for (JobId p : inst.predecessors(j)) {
      if (auto s = out.start(p)) t = std::max(t, *s + 1);
    }
    for (JobId s : inst.successors(j)) {
      if (auto u = out.start(s); u && *u < t) {
        throw NoSlot("no slot for job " + std::to_string(j) + ": successor " +
                     std::to_string(s) + " starts at " + std::to_string(*u));
      }
    }
    Schedule shifted(out.horizon() + 1);
    for (const auto& [k, u] : out.starts()) shifted.assign(k, u >= t ? u + 1 : u);
    shifted.assign(j, t);
    out = std::move(shifted);
  }
  return out;
}

}  // namespace usched
