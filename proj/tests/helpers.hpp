#pragma once

#include <vector>

#include "satmin/cnf.hpp"
#include "satmin/generators.hpp"
#include "satmin/rng.hpp"

// Shared test utilities. Everything here is an independent oracle path:
// straight truth-table scans, no solver machinery.
namespace testutil {

using namespace satmin;

inline Assignment assignment_from_mask(int n_vars, unsigned long mask) {
  std::vector<bool> bits(static_cast<std::size_t>(n_vars));
  for (int v = 0; v < n_vars; ++v) bits[static_cast<std::size_t>(v)] = (mask >> v) & 1;
  return Assignment(std::move(bits));
}

// Brute-force satisfiability by scanning all 2^N assignments.
inline bool brute_force_sat(const Cnf& cnf) {
  const unsigned long limit = 1UL << cnf.num_vars;
  for (unsigned long mask = 0; mask < limit; ++mask)
    if (count_unsatisfied(cnf, assignment_from_mask(cnf.num_vars, mask)) == 0) return true;
  return false;
}

// All models in lexicographic order over (x1, ..., xN).
inline std::vector<Assignment> brute_force_models(const Cnf& cnf) {
  std::vector<Assignment> models;
  const unsigned long limit = 1UL << cnf.num_vars;
  for (unsigned long mask = 0; mask < limit; ++mask) {
    Assignment a = assignment_from_mask(cnf.num_vars, mask);
    if (count_unsatisfied(cnf, a) == 0) models.push_back(std::move(a));
  }
  std::sort(models.begin(), models.end());
  return models;
}

// Random CNF with clause widths 1..3, suitable for mixed SAT/UNSAT coverage.
inline Cnf random_small_cnf(int n_vars, int n_clauses, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Cnf cnf;
  cnf.num_vars = n_vars;
  for (int i = 0; i < n_clauses; ++i) {
    const int width = 1 + static_cast<int>(rng.next_below(3));
    std::vector<Literal> lits;
    for (int k = 0; k < width; ++k) {
      const int var = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_vars)));
      lits.emplace_back(var, rng.next_bool());
    }
    cnf.clauses.push_back(Clause(std::move(lits)));
  }
  return cnf;
}

inline Assignment random_assignment(int n_vars, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<bool> bits(static_cast<std::size_t>(n_vars));
  for (int v = 0; v < n_vars; ++v) bits[static_cast<std::size_t>(v)] = rng.next_bool();
  return Assignment(std::move(bits));
}

}  // namespace testutil
