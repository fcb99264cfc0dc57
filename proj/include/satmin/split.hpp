#pragma once

#include <cmath>
#include <thread>

#include "satmin/solver.hpp"

namespace satmin {

// Balanced two-way clause partition. Both parts keep the original variable
// numbering (num_vars unchanged).
struct SplitPlan {
  Cnf part1, part2;
  std::vector<int> clause_map;  // per original clause: 0 -> part1, 1 -> part2
};

// Greedy partition: clauses are visited in seeded random order and each goes
// to the part already sharing more of its variables; ties go to the smaller
// part, then to part1. A hard cap of ceil(M/2) per part enforces the balance
// invariant |size1 - size2| <= 1.
inline SplitPlan split(const Cnf& cnf, std::uint64_t seed) {
  const int m = cnf.num_clauses();
  if (m < 2) throw std::invalid_argument("split: need at least 2 clauses");
  SplitMix64 rng(seed);
  std::vector<int> order(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
  for (int i = m - 1; i > 0; --i) {
    int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }

  const int cap = (m + 1) / 2;
  std::vector<std::uint8_t> in_part(static_cast<std::size_t>(cnf.num_vars) + 1, 0);  // bit0: part1, bit1: part2
  SplitPlan plan;
  plan.part1.num_vars = cnf.num_vars;
  plan.part2.num_vars = cnf.num_vars;
  plan.clause_map.assign(static_cast<std::size_t>(m), 0);
  int size1 = 0, size2 = 0;

  for (int idx : order) {
    const Clause& c = cnf.clauses[static_cast<std::size_t>(idx)];
    int shared1 = 0, shared2 = 0;
    for (const Literal& l : c.literals()) {
      if (in_part[static_cast<std::size_t>(l.var)] & 1) ++shared1;
      if (in_part[static_cast<std::size_t>(l.var)] & 2) ++shared2;
    }
    int target;
    if (size1 >= cap)
      target = 1;
    else if (size2 >= cap)
      target = 0;
    else if (shared1 != shared2)
      target = shared1 > shared2 ? 0 : 1;
    else
      target = size1 <= size2 ? 0 : 1;
    Cnf& part = target == 0 ? plan.part1 : plan.part2;
    (target == 0 ? size1 : size2) += 1;
    part.clauses.push_back(c);
    plan.clause_map[static_cast<std::size_t>(idx)] = target;
    for (const Literal& l : c.literals())
      in_part[static_cast<std::size_t>(l.var)] |= target == 0 ? 1 : 2;
  }
  return plan;
}

// Interpolation family between two part solutions plus both endpoints; the
// chosen member minimizes F (ties to the lowest index).
struct MergeCandidateSet {
  std::vector<RelaxedPoint> points;
  int chosen = 0;
  double chosen_f = 0.0;
};

// Candidates x^(l), l = 0..k, with components min(x1_i, x2_i) +
// (l/k)*|x1_i - x2_i| (l = 0 the componentwise min, l = k the max), then x1
// and x2 appended so the merge is never worse than either part solution.
inline MergeCandidateSet merge_points(const RelaxedPoint& x1, const RelaxedPoint& x2, int k,
                                      const Cnf& cnf, const OccurrenceIndex& index) {
  if (k < 1) throw std::invalid_argument("merge_points: k must be >= 1");
  if (x1.size() != cnf.num_vars || x2.size() != cnf.num_vars)
    throw std::invalid_argument("merge_points: point length does not match variable count");
  MergeCandidateSet set;
  set.points.reserve(static_cast<std::size_t>(k) + 3);
  for (int l = 0; l <= k; ++l) {
    RelaxedPoint p;
    p.values.resize(x1.values.size());
    const double t = static_cast<double>(l) / static_cast<double>(k);
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      const double lo = std::min(x1.values[i], x2.values[i]);
      p.values[i] = lo + t * std::abs(x1.values[i] - x2.values[i]);
    }
    set.points.push_back(std::move(p));
  }
  set.points.push_back(x1);
  set.points.push_back(x2);

  set.chosen = 0;
  set.chosen_f = evaluate(index, set.points[0]);
  for (std::size_t i = 1; i < set.points.size(); ++i) {
    const double f = evaluate(index, set.points[i]);
    if (f < set.chosen_f) {
      set.chosen_f = f;
      set.chosen = static_cast<int>(i);
    }
  }
  return set;
}

// A variable is undetermined at a rounded point when flipping it leaves the
// unsatisfied-clause count unchanged (every satisfied clause stays satisfied
// either way, every unsatisfied one stays unsatisfied).
inline int undetermined_count(const Cnf& cnf, const Assignment& a) {
  const int base = count_unsatisfied(cnf, a);
  int n = 0;
  Assignment flipped = a;
  for (int v = 1; v <= cnf.num_vars; ++v) {
    flipped.set(v, !a.value(v));
    if (count_unsatisfied(cnf, flipped) == base) ++n;
    flipped.set(v, a.value(v));
  }
  return n;
}

struct ParallelOutcome {
  SolveOutcome whole;
  SolveOutcome part1, part2;
  double merge_f = 0.0;
  RelaxedPoint merge_point;
  // Final-point statistics of the whole phase, at its rounded point.
  double unsat_fraction = 0.0;
  double undetermined_fraction = 0.0;
};

// Splits the formula, solves both parts concurrently with derived seeds,
// merges the final relaxed part solutions, and warm-starts a whole-CNF solve
// from the chosen merge point. Part sweeps and whole sweeps are reported
// separately. Deterministic for a fixed seed regardless of scheduling: the
// parts share only immutable data.
inline ParallelOutcome solve_parallel(const Cnf& cnf, const SolverConfig& config, int k = 8) {
  config.validate();
  SplitPlan plan = split(cnf, derive_seed(config.seed, 1));

  SolverConfig cfg1 = config;
  cfg1.seed = derive_seed(config.seed, 2);
  SolverConfig cfg2 = config;
  cfg2.seed = derive_seed(config.seed, 3);

  ParallelOutcome out;
  std::thread worker([&] { out.part1 = solve(plan.part1, cfg1); });
  out.part2 = solve(plan.part2, cfg2);
  worker.join();

  const OccurrenceIndex index(cnf);
  MergeCandidateSet merged =
      merge_points(out.part1.final_point, out.part2.final_point, k, cnf, index);
  out.merge_f = merged.chosen_f;
  out.merge_point = merged.points[static_cast<std::size_t>(merged.chosen)];

  SolverConfig whole_cfg = config;
  whole_cfg.seed = derive_seed(config.seed, 4);
  out.whole = solve(cnf, whole_cfg, out.merge_point);

  if (cnf.num_clauses() > 0 && cnf.num_vars > 0) {
    const Assignment rounded = round_point(out.whole.final_point);
    out.unsat_fraction = static_cast<double>(count_unsatisfied(cnf, rounded)) /
                         static_cast<double>(cnf.num_clauses());
    out.undetermined_fraction = static_cast<double>(undetermined_count(cnf, rounded)) /
                                static_cast<double>(cnf.num_vars);
  }
  return out;
}

}  // namespace satmin
