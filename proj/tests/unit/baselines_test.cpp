#include <doctest.h>

#include "fixtures.hpp"
#include "usched/baselines.hpp"
#include "usched/generate.hpp"
#include "usched/oracle.hpp"

using namespace usched;
using namespace usched::testing;

namespace {

// Chain a=0 < b=1 < c=2 plus independent x=3, y=4, z=5.
Instance chain_plus_three() { return make(6, 2, {{0, 1}, {1, 2}}); }

// No slot leaves a machine idle while some later job was already available.
bool greedy_busy(const Instance& inst, const Schedule& s) {
  std::vector<int> load(s.makespan() + 1, 0);
  for (const auto& [j, t] : s.starts()) ++load[t];
  for (const auto& [j, tj] : s.starts()) {
    for (Slot t = 0; t < tj; ++t) {
      if (load[t] >= inst.m()) continue;
      bool available = true;
      for (JobId p : inst.predecessors(j)) available = available && *s.start(p) < t;
      if (available) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("list scheduling follows the priority order") {
  Instance inst = chain_plus_three();
  Schedule late = list_schedule(inst, PriorityOrder({3, 4, 5, 0, 1, 2}, 6));
  CHECK(late.makespan() == 4);
  CHECK(late.start(0) == 1);
  Schedule good = list_schedule(inst, PriorityOrder({0, 3, 1, 4, 2, 5}, 6));
  CHECK(good.makespan() == 3);
  CHECK(optimal_makespan(inst) == 3);

  for (int n = 1; n <= 9; ++n) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      Instance free_jobs = antichain(n, 3);
      CHECK(list_schedule(free_jobs, PriorityOrder::random(n, seed)).makespan() == (n + 2) / 3);
    }
  }
}

TEST_CASE("priority orders must be permutations") {
  CHECK_THROWS_AS(PriorityOrder({0, 0, 1}, 3), IndexError);
  CHECK_THROWS_AS(PriorityOrder({0, 1}, 3), IndexError);
  CHECK_THROWS_AS(PriorityOrder({0, 1, 3}, 3), IndexError);
  CHECK(PriorityOrder::random(10, 4).perm() == PriorityOrder::random(10, 4).perm());
}

TEST_CASE("Coffman-Graham labels") {
  CHECK(coffman_graham_labels(antichain(2, 2)) == std::vector<int>{1, 2});
  CHECK(coffman_graham_labels(chain(3, 2)) == std::vector<int>{3, 2, 1});
  CHECK(coffman_graham_labels(diamond(2)) == std::vector<int>{4, 2, 3, 1});
}

TEST_CASE("Coffman-Graham schedules") {
  CHECK(coffman_graham_schedule(chain(3, 2)).makespan() == 3);
  CHECK(coffman_graham_schedule(antichain(4, 2)).makespan() == 2);
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const int n = 4 + static_cast<int>(seed % 9);
    Instance inst = generate({GeneratorKind::random_order, n, 2, seed, 0, 0, 0.25});
    CAPTURE(seed);
    Schedule s = coffman_graham_schedule(inst);
    CHECK(validate_schedule(inst, s, true).feasible);
    CHECK(s.makespan() == optimal_makespan(inst));
  }
}

TEST_CASE("list schedules are feasible, busy and within the Graham factor") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int m = 2 + static_cast<int>(seed % 3);
    Instance inst = generate({GeneratorKind::random_order, 11, m, seed, 0, 0, 0.2});
    const int opt = optimal_makespan(inst);
    for (std::uint64_t k = 0; k < 10; ++k) {
      Schedule s = list_schedule(inst, PriorityOrder::random(inst.n(), seed * 100 + k));
      CHECK(validate_schedule(inst, s, true).feasible);
      CHECK(greedy_busy(inst, s));
      CHECK(s.makespan() >= opt);
      CHECK(s.makespan() * m <= (2 * m - 1) * opt);
    }
  }
}
