#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace satmin {

// A literal over 1-based variable indices, DIMACS style.
struct Literal {
  int var = 0;
  bool positive = true;

  Literal() = default;
  Literal(int v, bool pos) : var(v), positive(pos) {}

  Literal negated() const { return {var, !positive}; }
  int to_dimacs() const { return positive ? var : -var; }

  static Literal from_dimacs(int value) {
    if (value == 0) throw std::invalid_argument("literal value 0 is reserved");
    return {value > 0 ? value : -value, value > 0};
  }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend bool operator<(const Literal& a, const Literal& b) {
    return a.var != b.var ? a.var < b.var : a.positive < b.positive;
  }
};

// Disjunction of literals. Construction deduplicates repeated literals
// (keeping first-occurrence order) and flags clauses that contain both
// polarities of one variable as tautological.
class Clause {
public:
  Clause() = default;

  explicit Clause(std::vector<Literal> lits) {
    lits_.reserve(lits.size());
    for (const Literal& l : lits) {
      bool duplicate = false;
      for (const Literal& kept : lits_) {
        if (kept == l) {
          duplicate = true;
          break;
        }
        if (kept.var == l.var) tautological_ = true;
      }
      if (!duplicate) lits_.push_back(l);
    }
  }

  // Convenience for tests and hand-built formulas: Clause::of({1, -2}).
  static Clause of(std::initializer_list<int> dimacs_lits) {
    std::vector<Literal> lits;
    lits.reserve(dimacs_lits.size());
    for (int v : dimacs_lits) lits.push_back(Literal::from_dimacs(v));
    return Clause(std::move(lits));
  }

  std::span<const Literal> literals() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  bool tautological() const { return tautological_; }

  bool contains(const Literal& l) const {
    return std::find(lits_.begin(), lits_.end(), l) != lits_.end();
  }

  friend bool operator==(const Clause& a, const Clause& b) {
    return a.lits_ == b.lits_;
  }

private:
  std::vector<Literal> lits_;
  bool tautological_ = false;
};

// CNF formula: clause list over variables 1..num_vars.
struct Cnf {
  int num_vars = 0;
  std::vector<Clause> clauses;

  int num_clauses() const { return static_cast<int>(clauses.size()); }

  void check_well_formed() const {
    for (const Clause& c : clauses)
      for (const Literal& l : c.literals())
        if (l.var < 1 || l.var > num_vars)
          throw std::invalid_argument("literal variable " + std::to_string(l.var) +
                                      " out of range 1.." + std::to_string(num_vars));
  }
};

// Total Boolean assignment; bits[v-1] is the value of variable v.
struct Assignment {
  std::vector<bool> bits;

  Assignment() = default;
  explicit Assignment(std::vector<bool> b) : bits(std::move(b)) {}

  int size() const { return static_cast<int>(bits.size()); }
  bool value(int var) const { return bits[static_cast<std::size_t>(var) - 1]; }
  void set(int var, bool v) { bits[static_cast<std::size_t>(var) - 1] = v; }

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend bool operator<(const Assignment& a, const Assignment& b) {
    return a.bits < b.bits;
  }
};

inline bool literal_true(const Literal& l, const Assignment& a) {
  return a.value(l.var) == l.positive;
}

inline bool clause_satisfied(const Clause& c, const Assignment& a) {
  for (const Literal& l : c.literals())
    if (literal_true(l, a)) return true;
  return false;
}

// Number of clauses with no true literal under a; 0 iff a satisfies the CNF.
inline int count_unsatisfied(const Cnf& cnf, const Assignment& a) {
  if (a.size() != cnf.num_vars)
    throw std::invalid_argument("assignment length " + std::to_string(a.size()) +
                                " does not match variable count " +
                                std::to_string(cnf.num_vars));
  int unsat = 0;
  for (const Clause& c : cnf.clauses)
    if (!clause_satisfied(c, a)) ++unsat;
  return unsat;
}

// Conditions the CNF on `lit` being true: clauses containing lit are removed
// and the complementary literal is deleted from the rest. Variable numbering
// is preserved. Returns nullopt when some clause shrinks to empty (conflict).
inline std::optional<Cnf> condition(const Cnf& cnf, const Literal& lit) {
  if (lit.var < 1 || lit.var > cnf.num_vars)
    throw std::invalid_argument("condition: variable out of range");
  Cnf out;
  out.num_vars = cnf.num_vars;
  out.clauses.reserve(cnf.clauses.size());
  const Literal complement = lit.negated();
  for (const Clause& c : cnf.clauses) {
    if (c.contains(lit)) continue;
    if (!c.contains(complement)) {
      if (c.empty()) return std::nullopt;  // pre-existing empty clause
      out.clauses.push_back(c);
      continue;
    }
    std::vector<Literal> kept;
    kept.reserve(c.size() - 1);
    for (const Literal& l : c.literals())
      if (!(l == complement)) kept.push_back(l);
    if (kept.empty()) return std::nullopt;
    out.clauses.push_back(Clause(std::move(kept)));
  }
  return out;
}

}  // namespace satmin
