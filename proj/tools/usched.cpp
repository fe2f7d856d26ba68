// Command-line front end: gen, solve, verify, bench, analyze levels, audit.
//
// Exit codes: 0 success, 1 infeasible schedule or audit violation, 2 usage
// or parse error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "usched/audit.hpp"
#include "usched/baselines.hpp"
#include "usched/bench.hpp"
#include "usched/generate.hpp"
#include "usched/io.hpp"
#include "usched/laminar.hpp"
#include "usched/oracle.hpp"
#include "usched/qptas.hpp"

namespace {

using namespace usched;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct UsageError : Error {
  using Error::Error;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

Instance load_instance(const std::string& path, int m_override) {
  Instance inst = parse_instance(read_file(path));
  if (m_override > 0) {
    auto edges = inst.reduction_edges();
    inst = Instance::build(inst.n(), m_override, edges);
  }
  return inst;
}

struct GenArgs {
  std::string kind = "random_order";
  /// Unset: 10, or derived from the shape for layered and diamond_mesh.
  std::optional<int> n;
  int m = 2;
  std::uint64_t seed = 0;
  int layers = 0;
  int width = 0;
  double prob = 0.3;
  int depth = 0;
  std::string output;
  std::string corpus;
};

int run_gen(const GenArgs& a) {
  if (!a.corpus.empty()) {
    std::filesystem::create_directories(a.corpus);
    for (const auto& [name, spec] : standard_corpus()) {
      write_file(a.corpus + "/" + name + ".inst", emit_instance(generate(spec)));
    }
    return kOk;
  }
  GeneratorSpec spec;
  spec.kind = parse_generator_kind(a.kind);
  const bool shaped =
      spec.kind == GeneratorKind::layered || spec.kind == GeneratorKind::diamond_mesh;
  spec.n = a.n.value_or(shaped ? 0 : 10);
  spec.m = a.m;
  spec.seed = a.seed;
  spec.layers = a.layers;
  spec.width = a.width;
  spec.edge_prob = a.prob;
  spec.depth = a.depth;
  emit(a.output, emit_instance(generate(spec)));
  return kOk;
}

struct SolveArgs {
  std::string input;
  std::string output;
  std::string alg = "qptas";
  std::string order = "id";
  std::uint64_t seed = 0;
  std::string eps = "1";
  std::uint64_t kmax = 1;
  int depth_max = 0;
  std::string mode = "laminar";
  std::string horizon = "auto";
  bool exhaustive_jobs = false;
  int samples = 4;
  std::uint64_t budget = 200000;
  int m = 0;
};

int run_solve(const SolveArgs& a) {
  const Instance inst = load_instance(a.input, a.m);
  Schedule sched;
  std::string stats;
  if (a.alg == "exact") {
    sched = optimal_schedule(inst);
  } else if (a.alg == "ls") {
    if (a.order == "id") {
      sched = list_schedule(inst, PriorityOrder::identity(inst.n()));
    } else if (a.order == "random") {
      sched = list_schedule(inst, PriorityOrder::random(inst.n(), a.seed));
    } else if (a.order == "cg") {
      sched = list_schedule(inst, coffman_graham_order(inst));
    } else {
      throw UsageError("unknown --order '" + a.order + "'");
    }
  } else if (a.alg == "cg") {
    sched = coffman_graham_schedule(inst);
  } else if (a.alg == "qptas") {
    QptasOptions q;
    q.eps = Rational::parse(a.eps);
    q.k_max = a.kmax;
    if (a.depth_max > 0) q.depth_max = a.depth_max;
    if (a.mode == "laminar") {
      q.mode = PartitionMode::laminar;
    } else if (a.mode == "exhaustive") {
      q.mode = PartitionMode::exhaustive;
    } else {
      throw UsageError("unknown --mode '" + a.mode + "'");
    }
    if (a.horizon != "auto") {
      try {
        q.horizon = std::stoi(a.horizon);
      } catch (const std::exception&) {
        throw UsageError("--horizon expects 'auto' or an integer");
      }
    }
    q.exhaustive_job_guessing = a.exhaustive_jobs;
    q.samples = a.samples;
    q.seed = a.seed;
    q.node_budget = a.budget;
    QptasRun run = run_qptas(inst, q);
    sched = run.schedule;
    stats = "discarded=" + std::to_string(run.result.discarded.size()) +
            " explored=" + std::to_string(run.result.stats.explored) + "\n";
  } else {
    throw UsageError("unknown --alg '" + a.alg + "'");
  }
  emit(a.output, emit_schedule(sched));
  if (!stats.empty()) {
    (a.output.empty() || a.output == "-" ? std::cerr : std::cout) << stats;
  }
  return kOk;
}

int run_verify(const std::string& input, const std::string& schedule_path, bool partial,
               int m) {
  const Instance inst = load_instance(input, m);
  const Schedule sched = parse_schedule(read_file(schedule_path));
  ValidationReport report = validate_schedule(inst, sched, !partial);
  if (report.feasible) {
    std::cout << "feasible makespan=" << report.makespan << "\n";
    return kOk;
  }
  for (const Violation& v : report.violations) {
    std::cout << to_string(v.kind) << " first=" << v.first << " second=" << v.second
              << " slot=" << v.slot << "\n";
  }
  std::cout << "infeasible violations=" << report.violations.size() << "\n";
  return kViolation;
}

struct BenchArgs {
  std::string input;
  std::string output;
  std::vector<std::string> algs;
  std::uint64_t seed = 0;
  std::string eps = "1";
  std::uint64_t kmax = 1;
  bool timing = false;
};

std::vector<std::pair<std::string, Instance>> corpus_from(const std::string& dir) {
  if (!dir.empty()) return load_corpus(dir);
  std::vector<std::pair<std::string, Instance>> out;
  for (const auto& [name, spec] : standard_corpus()) out.emplace_back(name, generate(spec));
  return out;
}

int run_bench(const BenchArgs& a) {
  BenchOptions options;
  if (!a.algs.empty()) options.algorithms = a.algs;
  options.seed = a.seed;
  options.eps = Rational::parse(a.eps);
  options.k_max = a.kmax;
  options.timing = a.timing;
  emit(a.output, bench_csv(bench(corpus_from(a.input), options)));
  return kOk;
}

int run_analyze_levels(const std::string& input, const std::string& output,
                       const std::string& eps_text, int m) {
  const Rational eps = Rational::parse(eps_text);
  const Instance inst = load_instance(input, m);
  const Schedule opt = optimal_schedule(inst);
  const Slot T = std::max<Slot>(1, opt.makespan());
  const PaddedInstance padded = pad_to_power_of_two(inst, T);
  const Schedule padded_opt = pad_schedule(padded, opt, T);
  const LaminarFamily fam = build_laminar(padded.horizon, padded.instance.n(), eps);
  const LevelAssignment assign =
      assign_levels(padded.instance, padded_opt, fam, inst.m(), eps);

  std::ostringstream out;
  out << "level,interval,guess,top\n";
  for (int l = 0; l < static_cast<int>(assign.levels.size()); ++l) {
    for (const IntervalSets& sets : assign.levels[l]) {
      out << l << ",[" << sets.span.start << ";" << sets.span.end << ")," << sets.guess.size()
          << "," << sets.top.size() << "\n";
    }
  }
  emit(output, out.str());
  return kOk;
}

int run_audit(const std::string& input, const std::string& report, const std::string& eps_text,
              std::int64_t kmax) {
  const Rational eps = Rational::parse(eps_text);
  AuditOptions options;
  if (kmax >= 0) options.k_max = static_cast<std::uint64_t>(kmax);
  std::vector<AuditReport> all;
  for (const auto& [name, inst] : corpus_from(input)) {
    auto reports = audit_instance(inst, name, eps, options);
    all.insert(all.end(), reports.begin(), reports.end());
  }
  emit(report, audit_csv(all));
  for (const AuditReport& r : all) {
    if (r.contractual && r.violations > 0) return kViolation;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unit-job precedence scheduling toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance");
  gen_cmd->add_option("--kind", gen.kind, "antichain|chain|layered|random_order|diamond_mesh");
  gen_cmd->add_option("--n", gen.n, "Job count");
  gen_cmd->add_option("--m", gen.m, "Machine count");
  gen_cmd->add_option("--seed", gen.seed, "PRNG seed");
  gen_cmd->add_option("--layers", gen.layers, "layered: number of layers");
  gen_cmd->add_option("--width", gen.width, "layered: jobs per layer");
  gen_cmd->add_option("--prob", gen.prob, "Edge probability");
  gen_cmd->add_option("--depth", gen.depth, "diamond_mesh: grid side");
  gen_cmd->add_option("--output", gen.output, "Output file (default stdout)");
  gen_cmd->add_option("--corpus", gen.corpus, "Write the standard corpus into this directory");

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Schedule an instance");
  solve_cmd->add_option("--input", solve_args.input, "Instance file")->required();
  solve_cmd->add_option("--output", solve_args.output, "Schedule file (default stdout)");
  solve_cmd->add_option("--alg", solve_args.alg, "exact|ls|cg|qptas");
  solve_cmd->add_option("--order", solve_args.order, "ls priority: id|random|cg");
  solve_cmd->add_option("--seed", solve_args.seed, "PRNG seed");
  solve_cmd->add_option("--eps", solve_args.eps, "Accuracy, e.g. 1, 1/2, 0.5");
  solve_cmd->add_option("--kmax", solve_args.kmax, "Guessed jobs per call");
  solve_cmd->add_option("--depth-max", solve_args.depth_max, "Recursion cap (0 = default)");
  solve_cmd->add_option("--mode", solve_args.mode, "laminar|exhaustive");
  solve_cmd->add_option("--horizon", solve_args.horizon, "auto or an integer");
  solve_cmd->add_flag("--exhaustive-jobs", solve_args.exhaustive_jobs,
                      "Guess every job subset and slot assignment");
  solve_cmd->add_option("--samples", solve_args.samples, "Random guesses per call");
  solve_cmd->add_option("--budget", solve_args.budget, "Guess budget (0 = unlimited)");
  solve_cmd->add_option("--m", solve_args.m, "Override the machine count");

  std::string verify_input, verify_schedule;
  bool verify_partial = false;
  int verify_m = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Check a schedule against an instance");
  verify_cmd->add_option("--input", verify_input, "Instance file")->required();
  verify_cmd->add_option("--schedule", verify_schedule, "Schedule file")->required();
  verify_cmd->add_flag("--partial", verify_partial, "Allow unscheduled jobs");
  verify_cmd->add_option("--m", verify_m, "Override the machine count");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Run algorithms over a corpus, emit CSV");
  bench_cmd->add_option("--input", bench_args.input,
                        "Directory of *.inst files (default: standard corpus)");
  bench_cmd->add_option("--output", bench_args.output, "CSV file (default stdout)");
  bench_cmd->add_option("--algs", bench_args.algs, "exact ls ls-random cg qptas");
  bench_cmd->add_option("--seed", bench_args.seed, "PRNG seed");
  bench_cmd->add_option("--eps", bench_args.eps, "Accuracy for qptas");
  bench_cmd->add_option("--kmax", bench_args.kmax, "Guessed jobs per call for qptas");
  bench_cmd->add_flag("--timing", bench_args.timing, "Fill the wall_ms column");

  std::string levels_input, levels_output, levels_eps = "1";
  int levels_m = 0;
  auto* analyze_cmd = app.add_subcommand("analyze", "Inspect the analysis structures");
  analyze_cmd->require_subcommand(1);
  auto* levels_cmd = analyze_cmd->add_subcommand("levels", "Per-level guess/top counts as CSV");
  levels_cmd->add_option("--input", levels_input, "Instance file")->required();
  levels_cmd->add_option("--output", levels_output, "CSV file (default stdout)");
  levels_cmd->add_option("--eps", levels_eps, "Accuracy");
  levels_cmd->add_option("--m", levels_m, "Override the machine count");

  std::string audit_input, audit_report, audit_eps = "1";
  std::int64_t audit_kmax = -1;
  auto* audit_cmd = app.add_subcommand("audit", "Empirical checks over a corpus");
  audit_cmd->add_option("--input", audit_input,
                        "Directory of *.inst files (default: standard corpus)");
  audit_cmd->add_option("--report", audit_report, "CSV file (default stdout)");
  audit_cmd->add_option("--eps", audit_eps, "Accuracy");
  audit_cmd->add_option("--kmax", audit_kmax, "Guess cap of the traced run (default: formula)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*solve_cmd) return run_solve(solve_args);
    if (*verify_cmd) return run_verify(verify_input, verify_schedule, verify_partial, verify_m);
    if (*bench_cmd) return run_bench(bench_args);
    if (*levels_cmd) return run_analyze_levels(levels_input, levels_output, levels_eps, levels_m);
    if (*audit_cmd) return run_audit(audit_input, audit_report, audit_eps, audit_kmax);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const BadSpec& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const BadEps& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  return kUsage;
}
