#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "satmin/oracle.hpp"
#include "satmin/split.hpp"

#include "helpers.hpp"

using namespace satmin;

namespace {

Cnf cnf_a() {
  Cnf cnf;
  cnf.num_vars = 2;
  cnf.clauses = {Clause::of({1, 2}), Clause::of({-1})};
  return cnf;
}

RelaxedPoint pt(std::initializer_list<double> vals) { return RelaxedPoint(std::vector<double>(vals)); }

}  // namespace

TEST_CASE("split: partition exactness and balance") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Cnf cnf = gen_uniform_3sat(20, 91, 300 + seed);
    const SplitPlan plan = split(cnf, seed);
    CHECK(plan.part1.num_vars == 20);
    CHECK(plan.part2.num_vars == 20);
    CHECK(std::min(plan.part1.num_clauses(), plan.part2.num_clauses()) == 45);
    CHECK(std::max(plan.part1.num_clauses(), plan.part2.num_clauses()) == 46);

    // Multiset equality with the original clause set via the map.
    std::multiset<std::string> original, recombined;
    for (const Clause& c : cnf.clauses) {
      std::string key;
      for (const Literal& l : c.literals()) key += std::to_string(l.to_dimacs()) + " ";
      original.insert(key);
    }
    for (const Cnf* part : {&plan.part1, &plan.part2})
      for (const Clause& c : part->clauses) {
        std::string key;
        for (const Literal& l : c.literals()) key += std::to_string(l.to_dimacs()) + " ";
        recombined.insert(key);
      }
    CHECK(original == recombined);
  }
}

TEST_CASE("split: separable variable groups end in different parts") {
  Cnf cnf;
  cnf.num_vars = 4;
  cnf.clauses = {Clause::of({1, 2}), Clause::of({-1, -2}), Clause::of({3, 4}),
                 Clause::of({-3, -4})};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SplitPlan plan = split(cnf, seed);
    // Each part must touch exactly one of the groups {1,2} and {3,4}.
    auto group_of = [](const Cnf& part) {
      bool low = false, high = false;
      for (const Clause& c : part.clauses)
        for (const Literal& l : c.literals()) (l.var <= 2 ? low : high) = true;
      REQUIRE(low != high);
      return low;
    };
    CHECK(group_of(plan.part1) != group_of(plan.part2));
  }
}

TEST_CASE("split: deterministic under seed, errors on tiny input") {
  const Cnf cnf = gen_uniform_3sat(10, 41, 8);
  const SplitPlan a = split(cnf, 5), b = split(cnf, 5);
  CHECK(a.clause_map == b.clause_map);
  Cnf one;
  one.num_vars = 1;
  one.clauses = {Clause::of({1})};
  CHECK_THROWS_AS(split(one, 0), std::invalid_argument);
}

TEST_CASE("merge_points: frozen interpolation values from the hand example") {
  const Cnf cnf = cnf_a();
  const OccurrenceIndex index(cnf);
  const RelaxedPoint x1 = pt({0.2, 1.0});
  const RelaxedPoint x2 = pt({1.0, 0.2});
  const MergeCandidateSet set = merge_points(x1, x2, 4, cnf, index);
  REQUIRE(set.points.size() == 7);  // l = 0..4 plus the two endpoints

  const double expected[] = {0.4496, 0.2896, 0.3856, 0.6416, 1.0};
  for (int l = 0; l <= 4; ++l)
    CHECK(evaluate(cnf, set.points[static_cast<std::size_t>(l)]) ==
          doctest::Approx(expected[l]).epsilon(1e-12));
  CHECK(evaluate(cnf, set.points[5]) == doctest::Approx(0.04));  // endpoint x1
  CHECK(evaluate(cnf, set.points[6]) == doctest::Approx(1.0));   // endpoint x2
  CHECK(set.chosen == 5);
  CHECK(set.chosen_f == doctest::Approx(0.04));
}

TEST_CASE("merge_points: degenerate cases") {
  const Cnf cnf = cnf_a();
  const OccurrenceIndex index(cnf);

  const RelaxedPoint x = pt({0.3, 0.7});
  const MergeCandidateSet same = merge_points(x, x, 4, cnf, index);
  for (const RelaxedPoint& p : same.points) CHECK(p == x);
  CHECK(same.chosen == 0);  // ties break to the lowest index

  const MergeCandidateSet k1 = merge_points(pt({0.2, 0.8}), pt({0.6, 0.4}), 1, cnf, index);
  REQUIRE(k1.points.size() == 4);
  CHECK(k1.points[0] == pt({0.2, 0.4}));  // componentwise min
  CHECK(k1.points[1] == pt({0.6, 0.8}));  // componentwise max
}

TEST_CASE("merge_points: chosen minimizes F over all candidates") {
  const Cnf cnf = gen_uniform_3sat(12, 50, 17);
  const OccurrenceIndex index(cnf);
  SplitMix64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(12), b(12);
    for (double& v : a) v = rng.next_double();
    for (double& v : b) v = rng.next_double();
    const MergeCandidateSet set = merge_points(RelaxedPoint(a), RelaxedPoint(b), 8, cnf, index);
    const double chosen_f = evaluate(cnf, set.points[static_cast<std::size_t>(set.chosen)]);
    for (const RelaxedPoint& p : set.points) CHECK(chosen_f <= evaluate(cnf, p) + 1e-12);
    CHECK(set.chosen_f == doctest::Approx(chosen_f));
  }
}

TEST_CASE("solve_parallel: verified outcome on planted instances") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto [cnf, plant] = gen_planted(60, 240, 9100 + seed);
    SolverConfig cfg;
    cfg.max_sweeps = 5000;
    cfg.seed = seed;
    cfg.record_trace = false;
    const ParallelOutcome out = solve_parallel(cnf, cfg, 8);
    REQUIRE(out.whole.status == SolveStatus::Satisfied);
    CHECK(count_unsatisfied(cnf, *out.whole.assignment) == 0);
    CHECK(out.part1.sweeps_used >= 0);
    CHECK(out.part2.sweeps_used >= 0);
  }
}

TEST_CASE("solve_parallel: deterministic despite concurrency") {
  const auto [cnf, plant] = gen_planted(40, 160, 4242);
  SolverConfig cfg;
  cfg.max_sweeps = 3000;
  cfg.seed = 99;
  cfg.record_trace = false;
  const ParallelOutcome a = solve_parallel(cnf, cfg, 8);
  const ParallelOutcome b = solve_parallel(cnf, cfg, 8);
  CHECK(a.whole.status == b.whole.status);
  CHECK(a.whole.sweeps_used == b.whole.sweeps_used);
  CHECK(a.merge_f == b.merge_f);
  CHECK(a.merge_point == b.merge_point);
  CHECK(a.part1.sweeps_used == b.part1.sweeps_used);
  CHECK(a.part2.sweeps_used == b.part2.sweeps_used);
}

TEST_CASE("solve_parallel: separable CNF needs at most one whole sweep") {
  // Two independent blocks; the parts solve them separately and the merged
  // point already satisfies the whole formula.
  Cnf cnf;
  cnf.num_vars = 6;
  cnf.clauses = {Clause::of({1, 2}), Clause::of({-1, 3}), Clause::of({4, 5}),
                 Clause::of({-4, 6})};
  SolverConfig cfg;
  cfg.max_sweeps = 2000;
  cfg.seed = 3;
  cfg.record_trace = false;
  const ParallelOutcome out = solve_parallel(cnf, cfg, 8);
  REQUIRE(out.whole.status == SolveStatus::Satisfied);
  CHECK(out.whole.sweeps_used <= 1);
}

TEST_CASE("undetermined_count: flip-invariance definition") {
  Cnf cnf;
  cnf.num_vars = 2;
  cnf.clauses = {Clause::of({1, 2})};
  // At (1,1) either variable can flip without unsatisfying the clause.
  CHECK(undetermined_count(cnf, Assignment(std::vector<bool>{true, true})) == 2);
  // At (1,0) flipping y1 breaks the clause; flipping y2 does not.
  CHECK(undetermined_count(cnf, Assignment(std::vector<bool>{true, false})) == 1);
}

TEST_CASE("solve_parallel reports final-point statistics") {
  const auto [cnf, plant] = gen_planted(40, 160, 15);
  SolverConfig cfg;
  cfg.max_sweeps = 3000;
  cfg.seed = 5;
  cfg.record_trace = false;
  const ParallelOutcome out = solve_parallel(cnf, cfg, 8);
  CHECK(out.unsat_fraction >= 0.0);
  CHECK(out.unsat_fraction <= 1.0);
  CHECK(out.undetermined_fraction >= 0.0);
  CHECK(out.undetermined_fraction <= 1.0);
  if (out.whole.status == SolveStatus::Satisfied) CHECK(out.unsat_fraction == 0.0);
}

TEST_CASE("warm start beats a fresh random initialization most of the time") {
  int merged_better = 0;
  const int trials = 50;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    const auto [cnf, plant] = gen_planted(60, 240, 77'000 + seed);
    SolverConfig cfg;
    cfg.max_sweeps = 1500;
    cfg.seed = 10 + seed;
    cfg.record_trace = false;
    const ParallelOutcome out = solve_parallel(cnf, cfg, 8);

    SplitMix64 rng(derive_seed(991, seed));
    std::vector<double> fresh(60);
    for (double& v : fresh) v = 0.25 + 0.5 * rng.next_double();
    const double f_fresh = evaluate(cnf, RelaxedPoint(std::move(fresh)));
    if (out.merge_f <= f_fresh) ++merged_better;
  }
  CHECK(merged_better >= 40);  // 80% of 50
}
