#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "usched/audit.hpp"
#include "usched/baselines.hpp"
#include "usched/bench.hpp"
#include "usched/generate.hpp"
#include "usched/io.hpp"
#include "usched/oracle.hpp"
#include "usched/qptas.hpp"
#include "usched/rng.hpp"

using namespace usched;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string out_dir = ".";

std::vector<std::pair<std::string, Instance>> corpus() {
  std::vector<std::pair<std::string, Instance>> out;
  for (const auto& [name, spec] : standard_corpus()) out.emplace_back(name, generate(spec));
  return out;
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// Every DAG on n <= 6 jobs, one edge set per distinct order.
Outcome oracle_soundness() {
  std::uint64_t checked = 0;
  std::uint64_t mismatches = 0;
  for (int n = 0; n <= 6; ++n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    std::set<std::vector<std::vector<bool>>> seen;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
      testing::RawEdges edges;
      for (std::size_t b = 0; b < pairs.size(); ++b) {
        if (mask >> b & 1) edges.push_back(pairs[b]);
      }
      if (!seen.insert(testing::brute_force_closure(n, edges)).second) continue;
      for (int m = 1; m <= 3; ++m) {
        std::vector<Edge> typed;
        for (auto [a, b] : edges) typed.push_back({a, b});
        const Instance inst = Instance::build(n, m, typed);
        ++checked;
        if (optimal_makespan(inst) != testing::brute_force_makespan(n, m, edges)) ++mismatches;
      }
    }
  }
  return {mismatches == 0, fmt("%llu (order, m) pairs, %llu mismatches",
                               static_cast<unsigned long long>(checked),
                               static_cast<unsigned long long>(mismatches))};
}

GeneratorSpec mixed_spec(std::uint64_t i, int m_lo, int m_count, int n_max) {
  Rng rng(Rng::mix(0x5eed, i));
  GeneratorSpec spec;
  spec.seed = i;
  spec.m = m_lo + static_cast<int>(i % m_count);
  switch (i % 5) {
    case 0:
    case 1:
      spec.kind = GeneratorKind::random_order;
      spec.n = 4 + static_cast<int>(rng.below(n_max - 3));
      spec.edge_prob = 0.05 + 0.35 * rng.unit();
      break;
    case 2:
      spec.kind = GeneratorKind::layered;
      spec.layers = 2 + static_cast<int>(rng.below(3));
      spec.width = 1 + static_cast<int>(rng.below(n_max / spec.layers));
      spec.edge_prob = 0.2 + 0.6 * rng.unit();
      break;
    case 3:
      spec.kind = GeneratorKind::diamond_mesh;
      spec.depth = 2 + static_cast<int>(rng.below(3));
      if (spec.depth * spec.depth > n_max) spec.depth = 3;
      break;
    default:
      spec.kind = rng.bernoulli(0.5) ? GeneratorKind::chain : GeneratorKind::antichain;
      spec.n = 1 + static_cast<int>(rng.below(n_max));
  }
  return spec;
}

Outcome graham_bound() {
  double worst_slack = 1e9;
  std::uint64_t violations = 0;
  double worst_ratio = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const Instance inst = generate(mixed_spec(i, 2, 3, 18));
    const int m = inst.m();
    const Slot opt = optimal_makespan(inst);
    for (std::uint64_t k = 0; k < 100; ++k) {
      const Slot ls =
          list_schedule(inst, PriorityOrder::random(inst.n(), Rng::mix(i, k))).makespan();
      // ls / opt <= 2 - 1/m  <=>  m * ls <= (2m - 1) * opt
      if (static_cast<std::int64_t>(m) * ls > static_cast<std::int64_t>(2 * m - 1) * opt) {
        ++violations;
      }
      if (opt > 0) {
        const double ratio = static_cast<double>(ls) / opt;
        worst_ratio = std::max(worst_ratio, ratio);
        worst_slack = std::min(worst_slack, 2.0 - 1.0 / m - ratio);
      }
    }
  }
  return {violations == 0, fmt("500 instances x 100 orders, max ratio %.4f, min slack %.4f, "
                               "%llu violations",
                               worst_ratio, worst_slack,
                               static_cast<unsigned long long>(violations))};
}

Outcome coffman_graham_two_machines() {
  std::vector<Instance> cases;
  for (const auto& [name, inst] : corpus()) {
    if (inst.m() == 2 && inst.n() <= 16) cases.push_back(inst);
  }
  const std::size_t from_corpus = cases.size();
  for (std::uint64_t i = 0; i < 300; ++i) cases.push_back(generate(mixed_spec(1000 + i, 2, 1, 16)));
  std::uint64_t misses = 0;
  for (const Instance& inst : cases) {
    if (coffman_graham_schedule(inst).makespan() != optimal_makespan(inst)) ++misses;
  }
  return {misses == 0, fmt("%zu corpus + %zu extra instances, %llu not optimal", from_corpus,
                           cases.size() - from_corpus, static_cast<unsigned long long>(misses))};
}

Outcome exhaustive_exactness() {
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  for (const auto& [name, inst] : corpus()) {
    if (inst.n() > 9) continue;
    const Slot T = optimal_makespan(inst);
    GuessConfig cfg;
    cfg.partition_mode = PartitionMode::exhaustive;
    cfg.exhaustive_job_guessing = true;
    cfg.k_max = static_cast<std::uint64_t>(inst.n());
    cfg.depth_max = 2;
    SolveResult r = solve(inst, T, cfg);
    Schedule fixed = insert_discarded(r.schedule, r.discarded, inst);
    ++checked;
    if (!r.discarded.empty() || fixed.makespan() != T) {
      ++failures;
      std::printf("  exactness miss on %s: %zu discarded\n", name.c_str(), r.discarded.size());
    }
  }
  return {checked > 0 && failures == 0,
          fmt("%llu instances, %llu failures", static_cast<unsigned long long>(checked),
              static_cast<unsigned long long>(failures))};
}

Outcome feasibility_accounting() {
  std::uint64_t runs = 0;
  std::uint64_t failures = 0;
  std::uint64_t literal = 0;
  std::uint64_t with_discards = 0;

  auto check = [&](const std::string& label, const Instance& solved, Slot T,
                   const SolveResult& r) {
    ++runs;
    const Slot d = static_cast<Slot>(r.discarded.size());
    if (d > 0) ++with_discards;
    Schedule fixed = insert_discarded(r.schedule, r.discarded, solved);
    const bool ok = validate_schedule(solved, fixed, true).feasible &&
                    fixed.horizon() == T + d && fixed.makespan() == r.schedule.makespan() + d &&
                    fixed.makespan() <= T + d;
    if (fixed.makespan() == T + d) ++literal;
    if (!ok) {
      ++failures;
      std::printf("  accounting failure: %s\n", label.c_str());
    }
  };

  for (const auto& [name, inst] : corpus()) {
    const Slot opt = optimal_makespan(inst);
    // Laminar mode over the padded instance, sampled and guided.
    for (std::uint64_t k : {0ULL, 1ULL, 3ULL}) {
      QptasOptions o;
      o.k_max = k;
      o.horizon = opt;
      o.seed = k;
      QptasRun run = run_qptas(inst, o);
      check(name + " laminar k=" + std::to_string(k), run.solved, run.solved_horizon,
            run.result);
      if (!validate_schedule(inst, run.schedule, true).feasible) ++failures;
    }
    // Exhaustive mode at OPT and below OPT.
    for (Slot T : {opt, std::max(longest_chain(inst), opt - 1)}) {
      for (std::uint64_t k : {0ULL, 1ULL, 2ULL}) {
        GuessConfig cfg;
        cfg.partition_mode = PartitionMode::exhaustive;
        cfg.k_max = k;
        cfg.depth_max = 2;
        cfg.exhaustive_job_guessing = inst.n() <= 8;
        cfg.node_budget = 20000;
        check(name + " exhaustive T=" + std::to_string(T) + " k=" + std::to_string(k), inst, T,
              solve(inst, T, cfg));
      }
    }
  }
  return {failures == 0,
          fmt("%llu solve runs (%llu with discards), %llu failures; makespan hit T + |disc| "
              "exactly in %llu runs",
              static_cast<unsigned long long>(runs), static_cast<unsigned long long>(with_discards),
              static_cast<unsigned long long>(failures), static_cast<unsigned long long>(literal))};
}

std::vector<AuditReport> corpus_audits() {
  std::vector<AuditReport> all;
  for (const auto& [name, inst] : corpus()) {
    auto reports = audit_instance(inst, name, Rational{1, 1}, {14});
    all.insert(all.end(), reports.begin(), reports.end());
  }
  return all;
}

Outcome contractual_audits(const std::vector<AuditReport>& reports) {
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> tally;  // instances, violations
  for (const AuditReport& r : reports) {
    if (!r.contractual) continue;
    auto& [count, bad] = tally[r.name];
    ++count;
    if (r.violations > 0) ++bad;
  }
  std::string detail;
  bool pass = !tally.empty();
  for (const char* claim : {"unique_level", "shift_bound", "window_slack", "level_count"}) {
    auto [count, bad] = tally[claim];
    if (count == 0 || bad > 0) pass = false;
    detail += fmt("%s%s %llu/%llu violating", detail.empty() ? "" : ", ", claim,
                  static_cast<unsigned long long>(bad), static_cast<unsigned long long>(count));
  }
  for (const AuditReport& r : reports) {
    if (r.contractual && r.violations > 0) {
      std::printf("  %s on %s: observed %g, bound %g\n", r.name.c_str(), r.instance.c_str(),
                  r.observed, r.bound);
    }
  }
  return {pass, detail};
}

Outcome advisory_audits(const std::vector<AuditReport>& reports) {
  std::vector<AuditReport> advisory;
  std::uint64_t exceed = 0;
  for (const AuditReport& r : reports) {
    if (r.contractual) continue;
    advisory.push_back(r);
    if (r.violations > 0) {
      ++exceed;
      std::printf("  %s on %s: observed %g, bound %g\n", r.name.c_str(), r.instance.c_str(),
                  r.observed, r.bound);
    }
  }
  const std::string path = (std::filesystem::path(out_dir) / "advisory_audit.csv").string();
  write_file(path, audit_csv(advisory));
  return {!advisory.empty() && exceed == 0,
          fmt("%zu rows written to %s, %llu exceedances", advisory.size(), path.c_str(),
              static_cast<unsigned long long>(exceed))};
}

Outcome bench_determinism() {
  const auto c = corpus();
  const std::string first = bench_csv(bench(c, {}));
  const std::string second = bench_csv(bench(c, {}));
  write_file((std::filesystem::path(out_dir) / "bench.csv").string(), first);
  return {first == second, fmt("%zu bytes, %s", first.size(), first == second ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) out_dir = argv[1];
  int failed = 0;
  auto run = [&](int id, const char* name, const std::function<Outcome()>& body) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::chrono::duration<double> secs = std::chrono::steady_clock::now() - start;
    if (!o.pass) ++failed;
    std::printf("%s criterion %d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), secs.count());
    std::fflush(stdout);
  };

  run(1, "oracle soundness", oracle_soundness);
  run(2, "list scheduling bound", graham_bound);
  run(3, "coffman-graham optimal at m=2", coffman_graham_two_machines);
  run(4, "exactness under full guessing", exhaustive_exactness);
  run(5, "feasibility and makespan accounting", feasibility_accounting);
  std::vector<AuditReport> reports;
  run(6, "contractual audits", [&] {
    reports = corpus_audits();
    return contractual_audits(reports);
  });
  run(7, "advisory audits", [&] { return advisory_audits(reports); });
  run(8, "bench determinism", bench_determinism);
  std::printf("%d of 8 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
