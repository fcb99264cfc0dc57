#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "satmin/cnf.hpp"

namespace satmin {

inline double clamp01(double t) { return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t); }

// Continuous iterate x in [0,1]^N; values[v-1] relaxes variable v.
struct RelaxedPoint {
  std::vector<double> values;

  RelaxedPoint() = default;
  explicit RelaxedPoint(std::vector<double> v) : values(std::move(v)) {}

  static RelaxedPoint constant(int n, double value) {
    return RelaxedPoint(std::vector<double>(static_cast<std::size_t>(n), value));
  }

  int size() const { return static_cast<int>(values.size()); }
  void clamp() {
    for (double& v : values) v = clamp01(v);
  }

  friend bool operator==(const RelaxedPoint&, const RelaxedPoint&) = default;
};

// Per-literal falsity factor: x^2 for a negative literal, (1-x)^2 for a
// positive one. Zero exactly when the literal is true at a Boolean point.
inline double falsity_factor(const Literal& l, double x) {
  const double t = l.positive ? 1.0 - x : x;
  return t * t;
}

// Per-variable coefficients of the stationarity condition A*x_v = B.
// A sums rest-products over all occurrences of v, B over positive ones only,
// so 0 <= B <= A and the fixed-point target B/A lies in [0,1] when A > 0.
struct CoefficientPair {
  double a = 0.0;
  double b = 0.0;
};

// Occurrence-indexed view of a CNF. For each variable it stores every
// (clause, polarity) occurrence together with the clause's remaining literals
// flattened into one pool, which is what the coefficient sums iterate over.
// Self-contained copy: safe to share across threads, outlives the source Cnf.
class OccurrenceIndex {
public:
  struct Occurrence {
    std::uint32_t clause = 0;
    bool positive = true;
    std::uint32_t rest_begin = 0;
    std::uint32_t rest_len = 0;
  };

  OccurrenceIndex() = default;

  explicit OccurrenceIndex(const Cnf& cnf) : num_vars_(cnf.num_vars) {
    clause_begin_.reserve(cnf.clauses.size() + 1);
    clause_begin_.push_back(0);
    for (const Clause& c : cnf.clauses) {
      for (const Literal& l : c.literals()) clause_pool_.push_back(l);
      clause_begin_.push_back(static_cast<std::uint32_t>(clause_pool_.size()));
    }
    occ_.resize(static_cast<std::size_t>(num_vars_) + 1);
    for (std::uint32_t ci = 0; ci < cnf.clauses.size(); ++ci) {
      const Clause& c = cnf.clauses[ci];
      for (const Literal& l : c.literals()) {
        Occurrence o;
        o.clause = ci;
        o.positive = l.positive;
        o.rest_begin = static_cast<std::uint32_t>(rest_pool_.size());
        for (const Literal& other : c.literals())
          if (!(other == l)) rest_pool_.push_back(other);
        o.rest_len = static_cast<std::uint32_t>(rest_pool_.size()) - o.rest_begin;
        occ_[static_cast<std::size_t>(l.var)].push_back(o);
      }
    }
  }

  int num_vars() const { return num_vars_; }
  int num_clauses() const { return static_cast<int>(clause_begin_.size()) - 1; }

  std::span<const Occurrence> occurrences(int var) const {
    return occ_[static_cast<std::size_t>(var)];
  }
  std::span<const Literal> clause_literals(int clause) const {
    const std::size_t b = clause_begin_[static_cast<std::size_t>(clause)];
    const std::size_t e = clause_begin_[static_cast<std::size_t>(clause) + 1];
    return {clause_pool_.data() + b, e - b};
  }
  std::span<const Literal> rest_literals(const Occurrence& o) const {
    return {rest_pool_.data() + o.rest_begin, o.rest_len};
  }

private:
  int num_vars_ = 0;
  std::vector<std::vector<Occurrence>> occ_;
  std::vector<Literal> clause_pool_;
  std::vector<std::uint32_t> clause_begin_;
  std::vector<Literal> rest_pool_;
};

// Clause term C_i(x): product of the falsity factors of its literals.
// An empty clause contributes 1 (it is unsatisfiable at every point).
inline double clause_term(const Clause& c, const RelaxedPoint& x) {
  double prod = 1.0;
  for (const Literal& l : c.literals())
    prod *= falsity_factor(l, x.values[static_cast<std::size_t>(l.var) - 1]);
  return prod;
}

// F(x): sum of clause terms. Nonnegative on [0,1]^N; at a Boolean point it
// equals the unsatisfied-clause count exactly (every factor is exactly 0 or 1).
inline double evaluate(const Cnf& cnf, const RelaxedPoint& x) {
  if (x.size() != cnf.num_vars)
    throw std::invalid_argument("evaluate: point length does not match variable count");
  double f = 0.0;
  for (const Clause& c : cnf.clauses) f += clause_term(c, x);
  return f;
}

inline double evaluate(const OccurrenceIndex& index, const RelaxedPoint& x) {
  double f = 0.0;
  for (int ci = 0; ci < index.num_clauses(); ++ci) {
    double prod = 1.0;
    for (const Literal& l : index.clause_literals(ci))
      prod *= falsity_factor(l, x.values[static_cast<std::size_t>(l.var) - 1]);
    f += prod;
  }
  return f;
}

// (A, B) for one variable at x. For each occurrence of v the rest-product is
// the product of falsity factors of the clause's other literals; A collects
// rest-products from all occurrences, B from positive ones.
inline CoefficientPair coefficients(const OccurrenceIndex& index, const RelaxedPoint& x, int v) {
  CoefficientPair cp;
  for (const auto& occ : index.occurrences(v)) {
    double rest = 1.0;
    for (const Literal& l : index.rest_literals(occ))
      rest *= falsity_factor(l, x.values[static_cast<std::size_t>(l.var) - 1]);
    cp.a += rest;
    if (occ.positive) cp.b += rest;
  }
  return cp;
}

// (A_v, B_v) for every variable in one pass over the clauses, via prefix and
// suffix products of the per-clause factors. b_out may be null when only A is
// needed (the lagged inertia terms). Arrays are indexed by variable (size
// num_vars+1, slot 0 unused).
inline void accumulate_coefficients(const OccurrenceIndex& index, const RelaxedPoint& x,
                                    double* a_out, double* b_out) {
  for (int v = 0; v <= index.num_vars(); ++v) {
    a_out[v] = 0.0;
    if (b_out) b_out[v] = 0.0;
  }
  std::vector<double> pre, suf;
  for (int ci = 0; ci < index.num_clauses(); ++ci) {
    const std::span<const Literal> lits = index.clause_literals(ci);
    const std::size_t k = lits.size();
    if (k == 0) continue;
    pre.assign(k + 1, 1.0);
    suf.assign(k + 1, 1.0);
    for (std::size_t i = 0; i < k; ++i)
      pre[i + 1] = pre[i] * falsity_factor(lits[i], x.values[static_cast<std::size_t>(lits[i].var) - 1]);
    for (std::size_t i = k; i-- > 0;)
      suf[i] = suf[i + 1] * falsity_factor(lits[i], x.values[static_cast<std::size_t>(lits[i].var) - 1]);
    for (std::size_t i = 0; i < k; ++i) {
      const double rest = pre[i] * suf[i + 1];
      a_out[lits[i].var] += rest;
      if (b_out && lits[i].positive) b_out[lits[i].var] += rest;
    }
  }
}

// Exact gradient of F: component v is 2*(A_v*x_v - B_v).
inline std::vector<double> gradient(const Cnf& cnf, const OccurrenceIndex& index,
                                    const RelaxedPoint& x) {
  if (x.size() != cnf.num_vars)
    throw std::invalid_argument("gradient: point length does not match variable count");
  std::vector<double> a(static_cast<std::size_t>(cnf.num_vars) + 1);
  std::vector<double> b(static_cast<std::size_t>(cnf.num_vars) + 1);
  accumulate_coefficients(index, x, a.data(), b.data());
  std::vector<double> g(static_cast<std::size_t>(cnf.num_vars));
  for (int v = 1; v <= cnf.num_vars; ++v)
    g[static_cast<std::size_t>(v) - 1] =
        2.0 * (a[static_cast<std::size_t>(v)] * x.values[static_cast<std::size_t>(v) - 1] -
               b[static_cast<std::size_t>(v)]);
  return g;
}

}  // namespace satmin
