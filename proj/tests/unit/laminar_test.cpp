#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "usched/audit.hpp"
#include "usched/generate.hpp"
#include "usched/laminar.hpp"
#include "usched/oracle.hpp"

using namespace usched;
using namespace usched::testing;

namespace {

const Rational kOne{1, 1};

}  // namespace

TEST_CASE("laminar family for T=16, n=16, eps=1") {
  LaminarFamily fam = build_laminar(16, 16, kOne);
  CHECK(fam.rho() == 2);
  CHECK(fam.branching() == 4);
  REQUIRE(fam.level_count() == 3);
  CHECK(fam.level(0).size() == 1);
  CHECK(fam.level(1).size() == 4);
  CHECK(fam.level(2).size() == 16);
  CHECK(fam.node(1, 2).span == Interval{8, 12});
  CHECK(fam.children(0, 0).size() == 4);
  CHECK(fam.children(1, 3).front().span == Interval{12, 13});
  CHECK(fam.children(2, 5).empty());
  CHECK(fam.index_at(1, 9) == 2);
  CHECK(fam.intervals_within(2, {4, 8}).size() == 4);
  CHECK(check_level_count(fam, 16, kOne).violations == 0);
}

TEST_CASE("single-slot family and bad arguments") {
  LaminarFamily fam = build_laminar(1, 4, kOne);
  CHECK(fam.level_count() == 1);
  CHECK(fam.node(0, 0).span == Interval{0, 1});
  CHECK_THROWS_AS(build_laminar(6, 4, kOne), BadHorizon);
  CHECK_THROWS_AS(build_laminar(0, 4, kOne), BadHorizon);
  CHECK_THROWS_AS(build_laminar(8, 4, Rational{3, 2}), BadEps);
}

TEST_CASE("families tile and match the closed-form level count") {
  for (Slot T = 1; T <= 1024; T *= 2) {
    for (int n : {2, 5, 16, 100, 5000}) {
      for (Rational eps : {Rational{1, 1}, Rational{1, 2}, Rational{1, 4}}) {
        LaminarFamily fam = build_laminar(T, n, eps);
        const int lg = static_cast<int>(std::lround(std::log2(T)));
        const int rho = fam.rho();
        CHECK(fam.level_count() == 1 + (lg + rho - 1) / rho);
        for (int l = 0; l < fam.level_count(); ++l) {
          const auto& level = fam.level(l);
          Slot cursor = 0;
          for (std::size_t i = 0; i < level.size(); ++i) {
            CHECK(level[i].span.start == cursor);
            CHECK(level[i].span.length() == fam.length_at(l));
            cursor = level[i].span.end;
            Slot covered = level[i].span.start;
            for (const IntervalNode& child : fam.children(l, static_cast<int>(i))) {
              CHECK(child.span.start == covered);
              CHECK(child.parent == static_cast<int>(i));
              covered = child.span.end;
            }
            if (level[i].span.length() > 1) CHECK(covered == level[i].span.end);
          }
          CHECK(cursor == T);
        }
      }
    }
  }
}

TEST_CASE("level-count inequality fails when the last split is partial") {
  // T=8 with rho=2 splits 8 -> 2 -> 1: three levels, while
  // log2 8 / log2(log2 8) + 1 = 2.89.
  LaminarFamily fam = build_laminar(8, 8, kOne);
  CHECK(fam.level_count() == 3);
  AuditReport r = check_level_count(fam, 8, kOne);
  CHECK(r.bound == doctest::Approx(3.0 / std::log2(3.0) + 1.0));
  CHECK(r.violations == 1);

  std::vector<std::pair<Slot, int>> failing;
  for (int m = 1; m <= 3; ++m) {
    for (Slot T = 2; T <= 1024; T *= 2) {
      const int n = T * m;
      if (check_level_count(build_laminar(T, n, kOne), n, kOne).violations > 0) {
        failing.emplace_back(T, m);
      }
    }
  }
  CHECK(std::find(failing.begin(), failing.end(), std::pair<Slot, int>{8, 1}) != failing.end());
}

TEST_CASE("padding to a power of two") {
  PaddedInstance p = pad_to_power_of_two(chain(3, 2), 3);
  CHECK(p.horizon == 4);
  CHECK(p.instance.n() == 5);
  CHECK(p.original_jobs == 3);

  PaddedInstance same = pad_to_power_of_two(diamond(2), 4);
  CHECK(same.horizon == 4);
  CHECK(same.instance == diamond(2));

  Instance five = chain(5, 3);
  PaddedInstance q = pad_to_power_of_two(five, 5);
  CHECK(q.horizon == 8);
  REQUIRE(q.instance.n() == 14);
  for (JobId j = 0; j < 5; ++j) {
    for (JobId d = 5; d < 14; ++d) CHECK(q.instance.precedes(j, d));
  }
  CHECK(longest_chain(q.instance, std::vector<JobId>{5, 6, 7, 8, 9, 10, 11, 12, 13}) == 3);
  CHECK(optimal_makespan(q.instance) == 8);
  Schedule s = pad_schedule(q, optimal_schedule(five), 5);
  CHECK(validate_schedule(q.instance, s, true).feasible);
  CHECK(s.makespan() == 8);
}

TEST_CASE("feasible windows") {
  PinMap none(3);
  CHECK(feasible_window(chain(3, 1), 1, none, 8) == Interval{0, 8});

  PinMap ends = PinMap::from(3, std::vector<std::pair<JobId, Slot>>{{0, 0}, {2, 5}});
  CHECK(feasible_window(chain(3, 1), 1, ends, 8) == Interval{1, 5});

  PinMap d = PinMap::from(4, std::vector<std::pair<JobId, Slot>>{{0, 0}, {3, 2}});
  CHECK(feasible_window(diamond(2), 1, d, 4) == Interval{1, 2});

  PinMap tight = PinMap::from(3, std::vector<std::pair<JobId, Slot>>{{0, 3}, {2, 4}});
  CHECK_THROWS_AS(feasible_window(chain(3, 1), 1, tight, 8), EmptyWindow);
  CHECK(window_of(chain(3, 1), 1, tight, 8).empty());
}

TEST_CASE("windows shrink as pins are added") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Instance inst = generate({GeneratorKind::random_order, 10, 2, seed, 0, 0, 0.3});
    Schedule opt = optimal_schedule(inst);
    const Slot T = opt.makespan();
    PinMap pins(inst.n());
    std::vector<Interval> prev(inst.n(), Interval{0, T});
    for (JobId add : inst.topological_order()) {
      pins.pin(add, *opt.start(add));
      for (JobId j = 0; j < inst.n(); ++j) {
        Interval w = window_of(inst, j, pins, T);
        CHECK(prev[j].contains(w));
        CHECK(w.contains(*opt.start(j)));
        prev[j] = w;
      }
    }
  }
}

TEST_CASE("antichain on one machine: everything is top at level 0") {
  Instance inst = antichain(16, 1);
  Schedule opt = optimal_schedule(inst);
  LaminarFamily fam = build_laminar(16, 16, kOne);
  LevelAssignment a = assign_levels(inst, opt, fam, 1, kOne);
  CHECK(a.top_at(0).size() == 16);
  for (int l = 0; l < fam.level_count(); ++l) CHECK(a.guess_at(l).empty());
  CHECK(check_unique_level(a, 16).violations == 0);
}

TEST_CASE("sixteen-chain guesses the ends of every child") {
  Instance inst = chain(16, 1);
  Schedule opt = optimal_schedule(inst);
  LaminarFamily fam = build_laminar(16, 16, kOne);
  LevelAssignment a = assign_levels(inst, opt, fam, 1, kOne);
  CHECK(a.guess_at(0) == std::vector<JobId>{0, 3, 4, 7, 8, 11, 12, 15});
  CHECK(a.guess_at(1) == std::vector<JobId>{1, 2, 5, 6, 9, 10, 13, 14});
  CHECK(a.guess_at(2).empty());
  for (int l = 0; l < 3; ++l) CHECK(a.top_at(l).empty());
  CHECK(a.levels[1][2].guess == std::vector<JobId>{9, 10});
  CHECK(a.guess_level(5) == 1);
  CHECK(a.top_level(5) == -1);
}

TEST_CASE("chain divisor knob") {
  // Without the machine divisor the threshold doubles on m=2.
  Instance inst = chain(8, 2);
  Schedule opt = optimal_schedule(inst);
  LaminarFamily fam = build_laminar(8, 8, kOne);
  LevelAssignment with = assign_levels(inst, opt, fam, 2, kOne);
  LevelAssignment without =
      assign_levels(inst, opt, fam, 2, kOne, LevelOptions{ChainDivisor::without_machines});
  CHECK(check_unique_level(with, 8).violations == 0);
  CHECK(check_unique_level(without, 8).violations == 0);
  CHECK(with.guess_at(0).size() >= without.guess_at(0).size());
}

TEST_CASE("best offset") {
  LevelAssignment empty;
  empty.levels.resize(4, std::vector<IntervalSets>(1));
  OffsetChoice none = best_offset(empty, 2, kOne, 8);
  CHECK(none.offset == 0);
  CHECK(none.count == 0);

  // m=2, eps=1: offset 0 collects levels 1 and 3, offset 1 collects level 2.
  LevelAssignment a = empty;
  a.levels[1][0].top = {0, 1, 2};
  a.levels[3][0].top = {3, 4};
  a.levels[2][0].top = {5, 6, 7};
  CHECK(offset_bucket_size(a, 2, kOne, 0) == 5);
  CHECK(offset_bucket_size(a, 2, kOne, 1) == 3);
  OffsetChoice best = best_offset(a, 2, kOne, 8);
  CHECK(best.offset == 1);
  CHECK(best.count == 3);
}

TEST_CASE("level assignments over the corpus") {
  for (const auto& [name, spec] : standard_corpus()) {
    Instance inst = generate(spec);
    CAPTURE(name);
    Schedule opt = optimal_schedule(inst);
    const Slot T = std::max<Slot>(1, opt.makespan());
    PaddedInstance p = pad_to_power_of_two(inst, T);
    Schedule popt = pad_schedule(p, opt, T);
    for (Rational eps : {Rational{1, 1}, Rational{1, 2}}) {
      LaminarFamily fam = build_laminar(p.horizon, p.instance.n(), eps);
      LevelAssignment a = assign_levels(p.instance, popt, fam, inst.m(), eps);
      CHECK(check_unique_level(a, p.instance.n()).violations == 0);
      CHECK(best_offset(a, inst.m(), eps, p.horizon).count <= eps.value() * p.horizon);
      // Guess sets and top sets of one level never share a job.
      for (int l = 0; l < fam.level_count(); ++l) {
        auto g = a.guess_at(l);
        auto t = a.top_at(l);
        CHECK(std::adjacent_find(g.begin(), g.end()) == g.end());
        CHECK(std::adjacent_find(t.begin(), t.end()) == t.end());
      }
    }
  }
}
