#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "satmin/functional.hpp"
#include "satmin/generators.hpp"

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

RelaxedPoint from_assignment(const Assignment& a) {
  std::vector<double> v(a.bits.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.bits[i] ? 1.0 : 0.0;
  return RelaxedPoint(std::move(v));
}

}  // namespace

TEST_CASE("clause_term: falsity products") {
  CHECK(clause_term(Clause::of({1, 2}), pt({0.5, 0.5})) == doctest::Approx(0.0625));
  CHECK(clause_term(Clause::of({-1}), pt({1.0})) == 1.0);
  CHECK(clause_term(Clause::of({-1}), pt({0.0})) == 0.0);
  // A clause satisfied by some literal at a Boolean point has a zero factor.
  CHECK(clause_term(Clause::of({1, -2}), pt({1.0, 1.0})) == 0.0);
}

TEST_CASE("evaluate: hand values and Boolean identity on cnf_a") {
  const Cnf cnf = cnf_a();
  CHECK(evaluate(cnf, pt({0.5, 0.5})) == doctest::Approx(0.3125));
  CHECK(evaluate(cnf, pt({0.0, 1.0})) == 0.0);
  CHECK(evaluate(cnf, pt({1.0, 0.0})) == 1.0);
  CHECK_THROWS_AS(evaluate(cnf, pt({0.5})), std::invalid_argument);
}

TEST_CASE("evaluate equals count_unsatisfied at Boolean points, exactly") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int n = 3 + static_cast<int>(seed % 15);
    const Cnf cnf = testutil::random_small_cnf(n, 3 * n, seed);
    const Assignment a = testutil::random_assignment(n, seed ^ 0xabcdef);
    const double f = evaluate(cnf, from_assignment(a));
    CHECK(f == static_cast<double>(count_unsatisfied(cnf, a)));
  }
}

TEST_CASE("coefficients: hand values on cnf_a") {
  const Cnf cnf = cnf_a();
  const OccurrenceIndex index(cnf);
  const auto c1 = coefficients(index, pt({0.5, 0.5}), 1);
  CHECK(c1.a == doctest::Approx(1.25));
  CHECK(c1.b == doctest::Approx(0.25));
  CHECK(c1.b / c1.a == doctest::Approx(0.2));

  const auto c2 = coefficients(index, pt({0.5, 0.5}), 2);
  CHECK(c2.a == doctest::Approx(0.25));
  CHECK(c2.b == doctest::Approx(0.25));

  Cnf wider = cnf;
  wider.num_vars = 3;  // variable 3 occurs nowhere
  const OccurrenceIndex wider_index(wider);
  const auto c3 = coefficients(wider_index, pt({0.5, 0.5, 0.5}), 3);
  CHECK(c3.a == 0.0);
  CHECK(c3.b == 0.0);
}

TEST_CASE("coefficient bounds: 0 <= B <= A everywhere") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 3 + static_cast<int>(seed % 10);
    const Cnf cnf = testutil::random_small_cnf(n, 3 * n, 77 + seed);
    const OccurrenceIndex index(cnf);
    SplitMix64 rng(seed);
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (double& v : vals) v = rng.next_double();
    const RelaxedPoint x{std::move(vals)};
    for (int v = 1; v <= n; ++v) {
      const auto cp = coefficients(index, x, v);
      CHECK(cp.b >= 0.0);
      CHECK(cp.b <= cp.a + 1e-15);
      if (cp.a > 0) CHECK(cp.b / cp.a <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("gradient: hand value and stationarity at a satisfying point") {
  const Cnf cnf = cnf_a();
  const OccurrenceIndex index(cnf);
  const auto g = gradient(cnf, index, pt({0.5, 0.5}));
  CHECK(g[0] == doctest::Approx(0.75));
  CHECK(g[1] == doctest::Approx(-0.25));

  const auto g_sat = gradient(cnf, index, pt({0.0, 1.0}));
  CHECK(g_sat[0] == 0.0);
  CHECK(g_sat[1] == 0.0);
}

TEST_CASE("gradient matches central finite differences") {
  const double h = 1e-5;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 4 + static_cast<int>(seed % 12);
    const Cnf cnf = testutil::random_small_cnf(n, 3 * n, 31000 + seed);
    const OccurrenceIndex index(cnf);
    for (int trial = 0; trial < 5; ++trial) {
      SplitMix64 rng(seed * 100 + static_cast<std::uint64_t>(trial));
      std::vector<double> vals(static_cast<std::size_t>(n));
      for (double& v : vals) v = 0.05 + 0.9 * rng.next_double();
      const RelaxedPoint x{vals};
      const auto g = gradient(cnf, index, x);
      for (int v = 1; v <= n; ++v) {
        RelaxedPoint hi = x, lo = x;
        hi.values[static_cast<std::size_t>(v) - 1] += h;
        lo.values[static_cast<std::size_t>(v) - 1] -= h;
        const double fd = (evaluate(cnf, hi) - evaluate(cnf, lo)) / (2 * h);
        const double gv = g[static_cast<std::size_t>(v) - 1];
        CHECK(std::abs(gv - fd) <= 1e-5 * (1.0 + std::abs(gv)));
      }
    }
  }
}

TEST_CASE("gradient identity holds for tautological clauses too") {
  Cnf cnf;
  cnf.num_vars = 2;
  cnf.clauses = {Clause::of({1, -1, 2})};
  REQUIRE(cnf.clauses[0].tautological());
  const OccurrenceIndex index(cnf);
  const double h = 1e-6;
  const RelaxedPoint x = pt({0.3, 0.7});
  const auto g = gradient(cnf, index, x);
  for (int v = 1; v <= 2; ++v) {
    RelaxedPoint hi = x, lo = x;
    hi.values[static_cast<std::size_t>(v) - 1] += h;
    lo.values[static_cast<std::size_t>(v) - 1] -= h;
    const double fd = (evaluate(cnf, hi) - evaluate(cnf, lo)) / (2 * h);
    CHECK(g[static_cast<std::size_t>(v) - 1] == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("indexed evaluate agrees with clause-list evaluate exactly") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 3 + static_cast<int>(seed % 10);
    const Cnf cnf = testutil::random_small_cnf(n, 4 * n, 5200 + seed);
    const OccurrenceIndex index(cnf);
    SplitMix64 rng(seed);
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (double& v : vals) v = rng.next_double();
    const RelaxedPoint x{std::move(vals)};
    CHECK(evaluate(cnf, x) == evaluate(index, x));
    CHECK(evaluate(cnf, x) >= 0.0);
  }
}

TEST_CASE("accumulate_coefficients agrees with per-variable coefficients") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 3 + static_cast<int>(seed % 8);
    const Cnf cnf = testutil::random_small_cnf(n, 4 * n, 660 + seed);
    const OccurrenceIndex index(cnf);
    SplitMix64 rng(seed);
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (double& v : vals) v = rng.next_double();
    const RelaxedPoint x{std::move(vals)};
    std::vector<double> a(static_cast<std::size_t>(n) + 1), b(static_cast<std::size_t>(n) + 1);
    accumulate_coefficients(index, x, a.data(), b.data());
    for (int v = 1; v <= n; ++v) {
      const auto cp = coefficients(index, x, v);
      CHECK(a[static_cast<std::size_t>(v)] == doctest::Approx(cp.a).epsilon(1e-12));
      CHECK(b[static_cast<std::size_t>(v)] == doctest::Approx(cp.b).epsilon(1e-12));
    }
  }
}
