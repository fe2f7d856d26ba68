#include "usched/oracle.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>
#include <vector>

namespace usched {

namespace {

using Mask = std::uint64_t;

class IdealSearch {
 public:
  IdealSearch(const Instance& inst, const OracleOptions& options,
              std::optional<std::uint64_t> limit)
      : inst_(inst), limit_(limit) {
    if (inst.n() > options.max_jobs || inst.n() > 63) {
      throw TooLarge("exact search is limited to " +
                     std::to_string(std::min(options.max_jobs, 63)) + " jobs, got " +
                     std::to_string(inst.n()));
    }
    n_ = inst.n();
    m_ = inst.m();
    full_ = n_ == 0 ? 0 : (Mask{1} << n_) - 1;
    pred_mask_.assign(n_, 0);
    tail_.assign(n_, 1);
    for (JobId j = 0; j < n_; ++j) {
      for (JobId p : inst.predecessors(j)) pred_mask_[j] |= Mask{1} << p;
    }
    const auto& topo = inst.topological_order();
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
      for (JobId s : inst.successors(*it)) tail_[*it] = std::max(tail_[*it], tail_[s] + 1);
    }
    upper_ = list_upper_bound();
  }

  int lower_bound_rest(Mask done) const {
    Mask rest = full_ & ~done;
    int count = std::popcount(rest);
    int chain = 0;
    for (Mask bits = rest; bits != 0; bits &= bits - 1) {
      chain = std::max(chain, tail_[std::countr_zero(bits)]);
    }
    return std::max((count + m_ - 1) / m_, chain);
  }

  int upper_bound() const { return upper_; }

  Mask available(Mask done) const {
    Mask avail = 0;
    for (Mask bits = full_ & ~done; bits != 0; bits &= bits - 1) {
      int j = std::countr_zero(bits);
      if ((pred_mask_[j] & ~done) == 0) avail |= Mask{1} << j;
    }
    return avail;
  }

  // Calls visit(step) for every maximal step out of `done`, in lexicographic
  // order of the ascending job lists.
  template <typename Visit>
  void for_each_step(Mask done, Visit&& visit) const {
    Mask avail = available(done);
    int k = std::popcount(avail);
    if (k == 0) return;
    if (k <= m_) {
      visit(avail);
      return;
    }
    int pos[64];
    int count = 0;
    for (Mask bits = avail; bits != 0; bits &= bits - 1) pos[count++] = std::countr_zero(bits);
    std::vector<int> idx(m_);
    for (int i = 0; i < m_; ++i) idx[i] = i;
    while (true) {
      Mask step = 0;
      for (int i = 0; i < m_; ++i) step |= Mask{1} << pos[idx[i]];
      visit(step);
      int i = m_ - 1;
      while (i >= 0 && idx[i] == k - m_ + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int r = i + 1; r < m_; ++r) idx[r] = idx[r - 1] + 1;
    }
  }

  // Breadth-first layers until the full set appears. Returns its depth.
  int run() {
    layers_.assign(1, {Mask{0}});
    if (full_ == 0) return 0;
    std::unordered_set<Mask> seen;
    seen.insert(0);
    for (int depth = 0;; ++depth) {
      std::vector<Mask> next;
      for (Mask state : layers_[depth]) {
        if (limit_ && ++expanded_ > *limit_) {
          throw BudgetExhausted("exact search exceeded " + std::to_string(*limit_) +
                                " states");
        }
        for_each_step(state, [&](Mask step) {
          Mask succ = state | step;
          if (depth + 1 + lower_bound_rest(succ) > upper_) return;
          if (seen.insert(succ).second) next.push_back(succ);
        });
      }
      std::sort(next.begin(), next.end());
      bool done = std::binary_search(next.begin(), next.end(), full_);
      layers_.push_back(std::move(next));
      if (done) return depth + 1;
      if (layers_.back().empty()) {
        // Unreachable for valid instances: the list schedule proves a bound.
        throw Error("exact search found no schedule");
      }
    }
  }

  Schedule reconstruct(int opt) const {
    std::vector<std::vector<Mask>> good(opt + 1);
    good[opt] = {full_};
    for (int d = opt - 1; d >= 0; --d) {
      for (Mask state : layers_[d]) {
        bool leads = false;
        for_each_step(state, [&](Mask step) {
          if (!leads && std::binary_search(good[d + 1].begin(), good[d + 1].end(),
                                           state | step)) {
            leads = true;
          }
        });
        if (leads) good[d].push_back(state);
      }
    }

    Schedule sched(opt);
    Mask state = 0;
    for (int d = 0; d < opt; ++d) {
      Mask chosen = 0;
      bool found = false;
      // Steps arrive in lexicographic order, so the first hit is the smallest.
      for_each_step(state, [&](Mask step) {
        if (!found && std::binary_search(good[d + 1].begin(), good[d + 1].end(),
                                         state | step)) {
          chosen = step;
          found = true;
        }
      });
      for (Mask bits = chosen; bits != 0; bits &= bits - 1) {
        sched.assign(std::countr_zero(bits), d);
      }
      state |= chosen;
    }
    return sched;
  }

 private:
  // Critical-path list scheduling: a valid schedule, hence an upper bound.
  int list_upper_bound() const {
    if (n_ == 0) return 0;
    std::vector<JobId> order(n_);
    for (JobId j = 0; j < n_; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](JobId a, JobId b) { return tail_[a] > tail_[b]; });
    Mask done = 0;
    int t = 0;
    while (done != full_) {
      Mask avail = available(done);
      Mask step = 0;
      int placed = 0;
      for (JobId j : order) {
        if (placed == m_) break;
        if ((avail >> j) & 1U) {
          step |= Mask{1} << j;
          ++placed;
        }
      }
      done |= step;
      ++t;
    }
    return t;
  }

  const Instance& inst_;
  std::optional<std::uint64_t> limit_;
  std::uint64_t expanded_ = 0;
  int n_ = 0;
  int m_ = 1;
  Mask full_ = 0;
  int upper_ = 0;
  std::vector<Mask> pred_mask_;
  std::vector<int> tail_;
  std::vector<std::vector<Mask>> layers_;
};

}  // namespace

int optimal_makespan(const Instance& inst, std::optional<std::uint64_t> limit,
                     const OracleOptions& options) {
  IdealSearch search(inst, options, limit ? limit : options.state_limit);
  if (options.use_bounds && search.lower_bound_rest(0) == search.upper_bound()) {
    return search.upper_bound();
  }
  return search.run();
}

Schedule optimal_schedule(const Instance& inst, const OracleOptions& options) {
  IdealSearch search(inst, options, options.state_limit);
  int opt = search.run();
  return search.reconstruct(opt);
}

}  // namespace usched
