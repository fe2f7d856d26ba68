#include "usched/model.hpp"

#include <algorithm>
#include <bit>
#include <queue>
#include <string>

namespace usched {

namespace {

bool test_bit(const std::uint64_t* row, std::size_t i) {
  return (row[i / 64] >> (i % 64)) & 1U;
}

void set_bit(std::uint64_t* row, std::size_t i) {
  row[i / 64] |= std::uint64_t{1} << (i % 64);
}

}  // namespace

Instance Instance::build(int n, int m, std::span<const Edge> edges) {
  if (n < 0) throw IndexError("job count must be non-negative");
  if (m < 1) throw BadMachineCount("machine count must be at least 1");

  Instance inst;
  inst.n_ = n;
  inst.m_ = m;
  inst.words_ = (static_cast<std::size_t>(n) + 63) / 64;

  std::vector<std::vector<JobId>> direct(n);
  std::vector<int> indegree(n, 0);
  for (const Edge& e : edges) {
    if (e.pred < 0 || e.pred >= n || e.succ < 0 || e.succ >= n) {
      throw IndexError("edge " + std::to_string(e.pred) + " -> " +
                       std::to_string(e.succ) + " references a job outside [0, " +
                       std::to_string(n) + ")");
    }
    if (e.pred == e.succ) {
      throw CycleError("self-loop on job " + std::to_string(e.pred));
    }
    direct[e.pred].push_back(e.succ);
  }
  for (auto& out : direct) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (JobId v : out) ++indegree[v];
  }

  std::priority_queue<JobId, std::vector<JobId>, std::greater<>> ready;
  for (JobId j = 0; j < n; ++j) {
    if (indegree[j] == 0) ready.push(j);
  }
  inst.topo_.reserve(n);
  while (!ready.empty()) {
    JobId u = ready.top();
    ready.pop();
    inst.topo_.push_back(u);
    for (JobId v : direct[u]) {
      if (--indegree[v] == 0) ready.push(v);
    }
  }
  if (static_cast<int>(inst.topo_.size()) != n) {
    throw CycleError("precedence edges contain a directed cycle");
  }
  inst.rank_.assign(n, 0);
  for (int i = 0; i < n; ++i) inst.rank_[inst.topo_[i]] = i;

  inst.reach_.assign(static_cast<std::size_t>(n) * inst.words_, 0);
  for (auto it = inst.topo_.rbegin(); it != inst.topo_.rend(); ++it) {
    std::uint64_t* row = &inst.reach_[*it * inst.words_];
    for (JobId v : direct[*it]) {
      const std::uint64_t* sub = &inst.reach_[v * inst.words_];
      for (std::size_t w = 0; w < inst.words_; ++w) row[w] |= sub[w];
      set_bit(row, v);
    }
  }

  inst.preds_.assign(n, {});
  inst.succs_.assign(n, {});
  for (JobId a = 0; a < n; ++a) {
    const std::uint64_t* row = &inst.reach_[a * inst.words_];
    for (std::size_t w = 0; w < inst.words_; ++w) {
      std::uint64_t bits = row[w];
      while (bits != 0) {
        auto b = static_cast<JobId>(w * 64 + std::countr_zero(bits));
        bits &= bits - 1;
        inst.succs_[a].push_back(b);
        inst.preds_[b].push_back(a);
      }
    }
  }
  return inst;
}

Instance build_instance(int n, int m, std::span<const Edge> edges) {
  return Instance::build(n, m, edges);
}

void Instance::check_job(JobId j) const {
  if (j < 0 || j >= n_) {
    throw IndexError("job " + std::to_string(j) + " outside [0, " +
                     std::to_string(n_) + ")");
  }
}

bool Instance::precedes(JobId a, JobId b) const {
  if (a < 0 || a >= n_ || b < 0 || b >= n_) return false;
  return test_bit(&reach_[a * words_], static_cast<std::size_t>(b));
}

const std::vector<JobId>& Instance::predecessors(JobId j) const {
  check_job(j);
  return preds_[j];
}

const std::vector<JobId>& Instance::successors(JobId j) const {
  check_job(j);
  return succs_[j];
}

std::vector<Edge> Instance::closure_edges() const {
  std::vector<Edge> out;
  out.reserve(relation_size());
  for (JobId a = 0; a < n_; ++a) {
    for (JobId b : succs_[a]) out.push_back({a, b});
  }
  return out;
}

std::vector<Edge> Instance::reduction_edges() const {
  std::vector<Edge> out;
  for (JobId a = 0; a < n_; ++a) {
    for (JobId b : succs_[a]) {
      // (a, b) covers iff no c with a ≺ c ≺ b.
      bool covered = std::none_of(succs_[a].begin(), succs_[a].end(),
                                  [&](JobId c) { return precedes(c, b); });
      if (covered) out.push_back({a, b});
    }
  }
  return out;
}

std::size_t Instance::relation_size() const {
  std::size_t total = 0;
  for (const auto& s : succs_) total += s.size();
  return total;
}

bool Instance::operator==(const Instance& other) const {
  return n_ == other.n_ && m_ == other.m_ && succs_ == other.succs_;
}

bool Schedule::try_assign(JobId j, Slot t) {
  return starts_.emplace(j, t).second;
}

std::optional<Slot> Schedule::start(JobId j) const {
  auto it = starts_.find(j);
  if (it == starts_.end()) return std::nullopt;
  return it->second;
}

Slot Schedule::makespan() const {
  Slot last = 0;
  for (const auto& [j, t] : starts_) last = std::max(last, t + 1);
  return last;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::capacity: return "capacity";
    case ViolationKind::precedence: return "precedence";
    case ViolationKind::horizon: return "horizon";
    case ViolationKind::unknown_job: return "unknown-job";
  }
  return "?";
}

ValidationReport validate_schedule(const Instance& inst, const Schedule& sched,
                                   bool require_all) {
  ValidationReport report;
  std::map<Slot, int> load;
  for (const auto& [j, t] : sched.starts()) {
    if (j < 0 || j >= inst.n()) {
      report.violations.push_back({ViolationKind::unknown_job, j, -1, t});
      continue;
    }
    if (t < 0 || t >= sched.horizon()) {
      report.violations.push_back({ViolationKind::horizon, j, -1, t});
    }
    ++load[t];
  }
  for (const auto& [t, count] : load) {
    if (count > inst.m()) {
      report.violations.push_back({ViolationKind::capacity, -1, -1, t});
    }
  }
  for (const auto& [a, ta] : sched.starts()) {
    if (a < 0 || a >= inst.n()) continue;
    for (JobId b : inst.successors(a)) {
      auto tb = sched.start(b);
      if (tb && ta + 1 > *tb) {
        report.violations.push_back({ViolationKind::precedence, a, b, *tb});
      }
    }
  }
  if (require_all) {
    for (JobId j = 0; j < inst.n(); ++j) {
      if (!sched.contains(j)) {
        report.violations.push_back({ViolationKind::unknown_job, j, -1, -1});
      }
    }
  }
  report.feasible = report.violations.empty();
  report.makespan = sched.makespan();
  return report;
}

int longest_chain(const Instance& inst, std::span<const JobId> subset) {
  if (subset.empty()) return 0;
  std::vector<JobId> order(subset.begin(), subset.end());
  for (JobId j : order) {
    if (j < 0 || j >= inst.n()) throw IndexError("job outside instance");
  }
  const auto& rank = inst.topological_rank();
  std::sort(order.begin(), order.end(),
            [&](JobId a, JobId b) { return rank[a] < rank[b]; });
  order.erase(std::unique(order.begin(), order.end()), order.end());

  std::vector<int> best(order.size(), 1);
  int longest = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t p = 0; p < i; ++p) {
      if (inst.precedes(order[p], order[i])) {
        best[i] = std::max(best[i], best[p] + 1);
      }
    }
    longest = std::max(longest, best[i]);
  }
  return longest;
}

int longest_chain(const Instance& inst) {
  return longest_chain(inst, inst.topological_order());
}

std::vector<JobId> predecessors(const Instance& inst, JobId j) {
  return inst.predecessors(j);
}

std::vector<JobId> successors(const Instance& inst, JobId j) {
  return inst.successors(j);
}

int makespan_lower_bound(const Instance& inst) {
  int by_load = (inst.n() + inst.m() - 1) / inst.m();
  return std::max(by_load, longest_chain(inst));
}

}  // namespace usched
