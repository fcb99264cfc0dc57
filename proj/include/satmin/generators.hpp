#pragma once

#include <utility>

#include "satmin/cnf.hpp"
#include "satmin/rng.hpp"

namespace satmin {

namespace detail {

inline Clause random_3clause(int n_vars, SplitMix64& rng) {
  int v[3];
  v[0] = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_vars)));
  do {
    v[1] = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_vars)));
  } while (v[1] == v[0]);
  do {
    v[2] = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_vars)));
  } while (v[2] == v[0] || v[2] == v[1]);
  std::vector<Literal> lits;
  lits.reserve(3);
  for (int k = 0; k < 3; ++k) lits.emplace_back(v[k], rng.next_bool());
  return Clause(std::move(lits));
}

}  // namespace detail

// Uniform random 3-SAT: each clause has three distinct variables, each sign a
// fair coin. Deterministic for a fixed seed.
inline Cnf gen_uniform_3sat(int n_vars, int n_clauses, std::uint64_t seed) {
  if (n_vars < 3) throw std::invalid_argument("gen_uniform_3sat: n_vars must be >= 3");
  if (n_clauses < 0) throw std::invalid_argument("gen_uniform_3sat: negative clause count");
  SplitMix64 rng(seed);
  Cnf cnf;
  cnf.num_vars = n_vars;
  cnf.clauses.reserve(static_cast<std::size_t>(n_clauses));
  for (int i = 0; i < n_clauses; ++i) cnf.clauses.push_back(detail::random_3clause(n_vars, rng));
  return cnf;
}

// Random 3-SAT with a planted solution: draws a random assignment first, then
// rejection-samples clauses, discarding any clause the plant falsifies. The
// returned assignment satisfies every clause by construction.
inline std::pair<Cnf, Assignment> gen_planted(int n_vars, int n_clauses, std::uint64_t seed) {
  if (n_vars < 3) throw std::invalid_argument("gen_planted: n_vars must be >= 3");
  if (n_clauses < 0) throw std::invalid_argument("gen_planted: negative clause count");
  SplitMix64 rng(seed);
  std::vector<bool> bits(static_cast<std::size_t>(n_vars));
  for (int v = 0; v < n_vars; ++v) bits[static_cast<std::size_t>(v)] = rng.next_bool();
  Assignment plant(std::move(bits));

  Cnf cnf;
  cnf.num_vars = n_vars;
  cnf.clauses.reserve(static_cast<std::size_t>(n_clauses));
  while (cnf.num_clauses() < n_clauses) {
    Clause c = detail::random_3clause(n_vars, rng);
    if (clause_satisfied(c, plant)) cnf.clauses.push_back(std::move(c));
  }
  return {std::move(cnf), std::move(plant)};
}

}  // namespace satmin
