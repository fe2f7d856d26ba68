#include "usched/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>

#include "usched/baselines.hpp"
#include "usched/io.hpp"
#include "usched/laminar.hpp"
#include "usched/oracle.hpp"
#include "usched/rng.hpp"

namespace usched {

namespace {

GuessConfig make_config(const QptasOptions& o, int n, int m) {
  GuessConfig cfg;
  cfg.k_max = o.k_max;
  cfg.partition_mode = o.mode;
  cfg.depth_max = o.depth_max.value_or(default_depth_max(n, m, o.eps));
  cfg.eps = o.eps;
  cfg.exhaustive_job_guessing = o.exhaustive_job_guessing;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.node_budget = o.node_budget;
  return cfg;
}

QptasRun run_at(const Instance& inst, Slot T, const QptasOptions& options) {
  QptasRun run;
  run.horizon = T;
  if (options.mode == PartitionMode::laminar) {
    PaddedInstance padded = pad_to_power_of_two(inst, std::max<Slot>(T, 1));
    run.solved = std::move(padded.instance);
    run.solved_horizon = padded.horizon;
  } else {
    run.solved = inst;
    run.solved_horizon = T;
  }
  GuessConfig cfg = make_config(options, run.solved.n(), run.solved.m());
  run.result = solve(run.solved, run.solved_horizon, cfg);
  run.repaired = insert_discarded(run.result.schedule, run.result.discarded, run.solved);
  run.schedule = Schedule(run.repaired.horizon());
  for (const auto& [j, t] : run.repaired.starts()) {
    if (j < inst.n()) run.schedule.assign(j, t);
  }
  return run;
}

std::uint64_t name_hash(const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string csv_field(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return text;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

Slot auto_horizon(const Instance& inst, const QptasOptions& options) {
  if (inst.n() == 0) return 0;
  if (inst.n() <= options.oracle_max_jobs) {
    try {
      OracleOptions oracle;
      oracle.max_jobs = options.oracle_max_jobs;
      return optimal_makespan(inst, std::nullopt, oracle);
    } catch (const BudgetExhausted&) {
    }
  }
  Slot lo = makespan_lower_bound(inst);
  Slot hi = list_schedule(inst, PriorityOrder::identity(inst.n())).makespan();
  while (lo < hi) {
    Slot mid = lo + (hi - lo) / 2;
    if (run_at(inst, mid, options).result.discarded.empty()) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return hi;
}

QptasRun run_qptas(const Instance& inst, const QptasOptions& options) {
  Slot T = options.horizon ? *options.horizon : auto_horizon(inst, options);
  return run_at(inst, T, options);
}

std::optional<double> BenchRow::ratio() const {
  if (!makespan || !opt) return std::nullopt;
  if (*opt == 0) return *makespan == 0 ? 1.0 : std::optional<double>{};
  return static_cast<double>(*makespan) / *opt;
}

std::vector<BenchRow> bench(const std::vector<std::pair<std::string, Instance>>& corpus,
                            const BenchOptions& options) {
  std::vector<BenchRow> rows;
  for (const auto& [name, inst] : corpus) {
    std::optional<Slot> opt;
    std::string opt_error;
    if (inst.n() <= options.oracle_max_jobs) {
      try {
        OracleOptions oracle;
        oracle.max_jobs = options.oracle_max_jobs;
        opt = optimal_makespan(inst, std::nullopt, oracle);
      } catch (const Error& e) {
        opt_error = e.what();
      }
    }

    for (const std::string& alg : options.algorithms) {
      BenchRow row{name, alg, inst.n(), inst.m(), {}, opt, {}, {}, {}};
      auto start = std::chrono::steady_clock::now();
      try {
        if (alg == "exact") {
          if (!opt) throw Error(opt_error.empty() ? "instance exceeds the oracle cap" : opt_error);
          row.makespan = *opt;
        } else if (alg == "ls") {
          row.makespan = list_schedule(inst, PriorityOrder::identity(inst.n())).makespan();
        } else if (alg == "ls-random") {
          auto order = PriorityOrder::random(inst.n(), Rng::mix(options.seed, name_hash(name)));
          row.makespan = list_schedule(inst, order).makespan();
        } else if (alg == "cg") {
          row.makespan = coffman_graham_schedule(inst).makespan();
        } else if (alg == "qptas") {
          QptasOptions q;
          q.eps = options.eps;
          q.k_max = options.k_max;
          q.seed = options.seed;
          q.oracle_max_jobs = options.oracle_max_jobs;
          if (opt) q.horizon = *opt;
          QptasRun run = run_qptas(inst, q);
          row.makespan = run.schedule.makespan();
          row.discards = run.result.discarded.size();
        } else {
          throw Error("unknown algorithm '" + alg + "'");
        }
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      if (options.timing) {
        std::chrono::duration<double, std::milli> elapsed =
            std::chrono::steady_clock::now() - start;
        row.wall_ms = elapsed.count();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "instance,algorithm,n,m,makespan,opt,ratio,discards,wall_ms,error\n";
  for (const BenchRow& r : rows) {
    out += csv_field(r.instance) + "," + r.algorithm + "," + std::to_string(r.n) + "," +
           std::to_string(r.m) + ",";
    out += (r.makespan ? std::to_string(*r.makespan) : "") + ",";
    out += (r.opt ? std::to_string(*r.opt) : "") + ",";
    auto ratio = r.ratio();
    out += (ratio ? num(*ratio) : "") + ",";
    out += (r.discards ? std::to_string(*r.discards) : "") + ",";
    out += (r.wall_ms ? num(*r.wall_ms) : "") + ",";
    out += csv_field(r.error) + "\n";
  }
  return out;
}

std::vector<std::pair<std::string, Instance>> load_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".inst") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  std::vector<std::pair<std::string, Instance>> out;
  for (const auto& path : files) {
    out.emplace_back(path.stem().string(), parse_instance(read_file(path.string())));
  }
  return out;
}

}  // namespace usched
