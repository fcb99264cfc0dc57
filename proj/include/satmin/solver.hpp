#pragma once

#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>

#include "satmin/functional.hpp"
#include "satmin/rng.hpp"

namespace satmin {

enum class TrajectoryPolicy { None, PerturbUnsat };

// Iteration parameters. The defaults are the project's pinned reference
// configuration; every report embeds the configuration it ran with.
struct SolverConfig {
  int inertia_depth = 3;                         // K: how many lagged points blend into A
  std::vector<double> inertia_weights = {0.6, 0.3, 0.1};  // alpha_p, lag 0 first, sums to 1
  long max_sweeps = 10000;
  int reflection_period = 7;                     // 0 disables anti-gradient reflection
  int stagnation_window = 1;
  double stagnation_epsilon = 1e-6;
  TrajectoryPolicy trajectory_policy = TrajectoryPolicy::PerturbUnsat;
  double perturb_magnitude = 1.0;                // in (0,1]
  std::uint64_t seed = 1;
  double division_epsilon = 1e-12;               // A-guard: keep old value when A <= eps
  bool record_trace = true;

  void validate() const {
    if (inertia_depth < 1) throw std::invalid_argument("config: inertia_depth must be >= 1");
    if (static_cast<int>(inertia_weights.size()) != inertia_depth)
      throw std::invalid_argument("config: inertia_weights length must equal inertia_depth");
    double sum = 0.0;
    for (double w : inertia_weights) {
      if (w < 0.0 || w > 1.0) throw std::invalid_argument("config: inertia weights must lie in [0,1]");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("config: inertia weights must sum to 1");
    if (max_sweeps < 0) throw std::invalid_argument("config: negative sweep budget");
    if (reflection_period < 0) throw std::invalid_argument("config: negative reflection period");
    if (stagnation_window < 1) throw std::invalid_argument("config: stagnation_window must be >= 1");
    if (perturb_magnitude <= 0.0 || perturb_magnitude > 1.0)
      throw std::invalid_argument("config: perturb_magnitude must lie in (0,1]");
  }
};

// Rounding: component v is 1 iff x_v >= 0.5 (the tie at exactly 0.5 rounds
// to 1; arbitrary but fixed).
inline Assignment round_point(const RelaxedPoint& x) {
  std::vector<bool> bits(x.values.size());
  for (std::size_t i = 0; i < x.values.size(); ++i) bits[i] = x.values[i] >= 0.5;
  return Assignment(std::move(bits));
}

// Mutable iteration state. history.front() is the current point; entries
// behind it are the ends of the previous sweeps (up to inertia_depth total).
struct SolverState {
  std::deque<RelaxedPoint> history;
  long sweep_count = 0;
  double best_f = std::numeric_limits<double>::infinity();
  RelaxedPoint best_point;
  SplitMix64 rng{0};
  long sweeps_since_improvement = 0;

  SolverState(RelaxedPoint init, std::uint64_t seed) : rng(seed) {
    init.clamp();
    best_point = init;
    history.push_back(std::move(init));
  }

  const RelaxedPoint& current() const { return history.front(); }
  RelaxedPoint& current() { return history.front(); }
};

// One fixed-point sweep in Gauss-Seidel order: variables update in ascending
// index and each new value is visible to later variables within the sweep.
// The update is x_v <- B/Abar with B taken at the working point and Abar the
// inertia blend sum_p alpha_p * A(point at lag p); lag 0 is the working point
// itself, lag p >= 1 the point p sweeps back (the oldest available point pads
// missing lags). When Abar <= division_epsilon the old value is kept, which
// is what makes satisfying Boolean assignments exact fixed points.
inline void inertia_sweep(SolverState& state, const OccurrenceIndex& index,
                      const SolverConfig& config) {
  const int n = index.num_vars();
  const int depth = config.inertia_depth;

  RelaxedPoint working = state.history.front();
  state.history.push_front(std::move(working));  // working copy becomes lag 0
  while (static_cast<int>(state.history.size()) > depth) state.history.pop_back();

  // A at the frozen lagged points, one pass each; they do not change during
  // the sweep so this is computed up front.
  std::vector<std::vector<double>> lag_a;
  for (int p = 1; p < depth; ++p) {
    const std::size_t h = std::min(static_cast<std::size_t>(p), state.history.size() - 1);
    lag_a.emplace_back(static_cast<std::size_t>(n) + 1, 0.0);
    accumulate_coefficients(index, state.history[h], lag_a.back().data(), nullptr);
  }

  RelaxedPoint& x = state.history.front();
  for (int v = 1; v <= n; ++v) {
    double a0 = 0.0, b = 0.0;
    for (const auto& occ : index.occurrences(v)) {
      double rest = 1.0;
      for (const Literal& l : index.rest_literals(occ))
        rest *= falsity_factor(l, x.values[static_cast<std::size_t>(l.var) - 1]);
      a0 += rest;
      if (occ.positive) b += rest;
    }
    // Blend written as a correction around the working-point value so that a
    // uniform history yields Abar == A0 bitwise; satisfying Boolean points
    // then stay exact fixed points. Identical to sum_p alpha_p * A_p since
    // the weights sum to 1.
    double abar = a0;
    for (int p = 1; p < depth; ++p)
      abar += config.inertia_weights[static_cast<std::size_t>(p)] *
              (lag_a[static_cast<std::size_t>(p) - 1][static_cast<std::size_t>(v)] - a0);
    if (abar > config.division_epsilon)
      x.values[static_cast<std::size_t>(v) - 1] = clamp01(b / abar);
  }
  ++state.sweep_count;
}

// Anti-gradient reflection x <- clamp(2x - B/A, 0, 1), all components at once
// (Jacobi order) with coefficients taken at the pre-step point. Components
// under the A-guard stay unchanged. Modifies the current point in place.
inline void reflect(SolverState& state, const OccurrenceIndex& index,
                    const SolverConfig& config) {
  const int n = index.num_vars();
  std::vector<double> a(static_cast<std::size_t>(n) + 1), b(static_cast<std::size_t>(n) + 1);
  accumulate_coefficients(index, state.current(), a.data(), b.data());
  RelaxedPoint& x = state.current();
  for (int v = 1; v <= n; ++v) {
    const double av = a[static_cast<std::size_t>(v)];
    if (av <= config.division_epsilon) continue;
    double& xv = x.values[static_cast<std::size_t>(v) - 1];
    xv = clamp01(2.0 * xv - b[static_cast<std::size_t>(v)] / av);
  }
}

// Escape move for stagnation: every variable occurring in a clause that is
// unsatisfied at the rounded current point moves toward satisfying the first
// falsified literal of it encountered, by perturb_magnitude * u (u uniform in
// (0,1]). No unsatisfied clauses means no-op. History collapses to the new
// point afterwards.
inline void change_trajectory(SolverState& state, const Cnf& cnf, const SolverConfig& config) {
  if (config.trajectory_policy == TrajectoryPolicy::None) return;
  const Assignment rounded = round_point(state.current());
  RelaxedPoint x = state.current();
  std::vector<bool> touched(x.values.size(), false);
  bool any = false;
  for (const Clause& c : cnf.clauses) {
    if (clause_satisfied(c, rounded)) continue;
    any = true;
    for (const Literal& l : c.literals()) {
      std::size_t i = static_cast<std::size_t>(l.var) - 1;
      if (touched[i]) continue;
      touched[i] = true;
      const double target = l.positive ? 1.0 : 0.0;
      const double u = 1.0 - state.rng.next_double();  // (0, 1]
      x.values[i] += config.perturb_magnitude * u * (target - x.values[i]);
    }
  }
  if (!any) return;
  state.history.clear();
  state.history.push_back(std::move(x));
}

enum class SolveStatus { Satisfied, BudgetExceeded };

struct TraceRecord {
  long sweep = 0;
  double f = 0.0;
  int unsat = 0;
  double right_bit_fraction = std::numeric_limits<double>::quiet_NaN();  // NaN = no reference
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::BudgetExceeded;
  std::optional<Assignment> assignment;  // present iff Satisfied, verified
  long sweeps_used = 0;
  std::vector<TraceRecord> trace;
  RelaxedPoint final_point;
  double best_f = std::numeric_limits<double>::infinity();
  RelaxedPoint best_point;
};

// Optional per-sweep probe (e.g. right-bit fraction against a known plant);
// its value lands in the trace.
using TraceProbe = std::function<double(const RelaxedPoint&)>;

// Full iteration loop: sweep, reflect every reflection_period sweeps, round
// and test after every sweep, and change trajectory when best_f stalls for
// stagnation_window sweeps. Returns Satisfied the first time the rounded
// point satisfies the CNF; the assignment is re-verified on the return path.
// init defaults to components 0.5 perturbed by seeded noise (uniform in
// [0.25, 0.75)).
inline SolveOutcome solve(const Cnf& cnf, const SolverConfig& config,
                          std::optional<RelaxedPoint> init = std::nullopt,
                          const TraceProbe& probe = {}) {
  config.validate();
  const OccurrenceIndex index(cnf);

  SplitMix64 rng(config.seed);
  RelaxedPoint x0;
  if (init) {
    if (init->size() != cnf.num_vars)
      throw std::invalid_argument("solve: init point length does not match variable count");
    x0 = *init;
    x0.clamp();
  } else {
    x0.values.resize(static_cast<std::size_t>(cnf.num_vars));
    for (double& v : x0.values) v = 0.25 + 0.5 * rng.next_double();
  }

  SolverState state(std::move(x0), derive_seed(config.seed, 0x7261730d));
  SolveOutcome out;
  double window_ref = std::numeric_limits<double>::infinity();

  auto checkpoint = [&](long sweep) -> bool {
    const double f = evaluate(index, state.current());
    const Assignment rounded = round_point(state.current());
    const int unsat = count_unsatisfied(cnf, rounded);
    const double boolean_f = static_cast<double>(unsat);
    if (f < state.best_f) {
      state.best_f = f;
      state.best_point = state.current();
    }
    if (boolean_f < state.best_f) {
      state.best_f = boolean_f;
      state.best_point = RelaxedPoint([&] {
        std::vector<double> vals(rounded.bits.size());
        for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = rounded.bits[i] ? 1.0 : 0.0;
        return vals;
      }());
    }
    if (config.record_trace) {
      TraceRecord rec;
      rec.sweep = sweep;
      rec.f = f;
      rec.unsat = unsat;
      if (probe) rec.right_bit_fraction = probe(state.current());
      out.trace.push_back(rec);
    }
    if (unsat == 0) {
      // Soundness gate: Satisfied is only ever reported with an assignment
      // whose unsatisfied-clause count was just computed from scratch as 0.
      out.status = SolveStatus::Satisfied;
      out.assignment = rounded;
      out.sweeps_used = sweep;
      return true;
    }
    return false;
  };

  auto finish = [&] {
    // Hard soundness assertion on the return path: a Satisfied outcome must
    // carry an assignment that independently re-verifies.
    if (out.status == SolveStatus::Satisfied &&
        (!out.assignment || count_unsatisfied(cnf, *out.assignment) != 0))
      throw std::logic_error("solve: Satisfied outcome failed re-verification");
    out.final_point = state.current();
    out.best_f = state.best_f;
    out.best_point = state.best_point;
    return out;
  };

  if (checkpoint(0)) return finish();

  for (long t = 1; t <= config.max_sweeps; ++t) {
    inertia_sweep(state, index, config);
    if (config.reflection_period > 0 && t % config.reflection_period == 0)
      reflect(state, index, config);
    if (checkpoint(t)) return finish();

    if (state.best_f < window_ref - config.stagnation_epsilon) {
      window_ref = state.best_f;
      state.sweeps_since_improvement = 0;
    } else if (++state.sweeps_since_improvement >= config.stagnation_window) {
      change_trajectory(state, cnf, config);
      state.sweeps_since_improvement = 0;
      window_ref = state.best_f;
    }
  }

  out.status = SolveStatus::BudgetExceeded;
  out.sweeps_used = config.max_sweeps;
  return finish();
}

// Trace CSV: columns sweep, F, unsat_count, right_bit_fraction (blank when no
// reference bits were supplied).
inline void write_trace_csv(const std::vector<TraceRecord>& trace, std::ostream& os) {
  os << "sweep,f,unsat_count,right_bit_fraction\n";
  for (const TraceRecord& r : trace) {
    os << r.sweep << ',' << r.f << ',' << r.unsat << ',';
    if (!std::isnan(r.right_bit_fraction)) os << r.right_bit_fraction;
    os << '\n';
  }
}

}  // namespace satmin
