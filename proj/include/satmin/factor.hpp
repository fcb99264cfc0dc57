#pragma once

#include <map>
#include <set>

#include "satmin/big_uint.hpp"
#include "satmin/parallel.hpp"
#include "satmin/solver.hpp"

namespace satmin {

// One ripple-carry adder cell; inputs and outputs are CNF variables.
struct AdderGate {
  enum class Kind { Half, Full };
  Kind kind = Kind::Half;
  int a = 0, b = 0, cin = 0;  // cin = 0 for half adders
  int sum = 0, carry = 0;
};

struct FactorVarMap {
  std::vector<int> p_bits;                // little-endian, p_bits[0] is the low bit
  std::vector<int> q_bits;
  std::vector<std::vector<int>> partial;  // partial[i][j] = var of m_ij = q_i AND p_j
  std::vector<AdderGate> gates;           // creation order is topological
  std::vector<int> product_bits;          // accumulator variable per weight (0 = constant false)
};

// CNF encoding of "p * q = n" through the long-multiplication circuit,
// together with the variable map the bit tests need.
struct FactorInstance {
  BigUint n;
  int n_bits = 0;
  Cnf cnf;
  FactorVarMap varmap;
  std::optional<std::pair<BigUint, BigUint>> ground_truth;

  int p_width() const { return static_cast<int>(varmap.p_bits.size()); }
  int q_width() const { return static_cast<int>(varmap.q_bits.size()); }

  void set_ground_truth(BigUint p, BigUint q) {
    if (!(p * q == n)) throw std::invalid_argument("ground truth does not multiply to n");
    ground_truth = {std::move(p), std::move(q)};
  }
};

namespace detail {

// Clause templates, kept in one place so emitted counts are reproducible:
//   AND  m <-> a&b        : 3 clauses  (-m a), (-m b), (m -a -b)
//   half adder s,c <- a+b : 7 clauses  (4 for s <-> a xor b, 3 for c <-> a&b)
//   full adder            : 14 clauses (8 sum-parity corners, 6 majority carry)
class CircuitBuilder {
public:
  int new_var() { return ++num_vars_; }

  void add_clause(std::vector<Literal> lits) { clauses_.push_back(Clause(std::move(lits))); }

  void add_clause(std::initializer_list<int> dimacs) {
    std::vector<Literal> lits;
    lits.reserve(dimacs.size());
    for (int v : dimacs) lits.push_back(Literal::from_dimacs(v));
    add_clause(std::move(lits));
  }

  int and_gate(int a, int b) {
    const int m = new_var();
    add_clause({-m, a});
    add_clause({-m, b});
    add_clause({m, -a, -b});
    return m;
  }

  AdderGate half_adder(int a, int b) {
    AdderGate g;
    g.kind = AdderGate::Kind::Half;
    g.a = a;
    g.b = b;
    g.sum = new_var();
    g.carry = new_var();
    const int s = g.sum, c = g.carry;
    add_clause({-s, a, b});
    add_clause({-s, -a, -b});
    add_clause({s, -a, b});
    add_clause({s, a, -b});
    add_clause({-c, a});
    add_clause({-c, b});
    add_clause({c, -a, -b});
    return g;
  }

  AdderGate full_adder(int a, int b, int cin) {
    AdderGate g;
    g.kind = AdderGate::Kind::Full;
    g.a = a;
    g.b = b;
    g.cin = cin;
    g.sum = new_var();
    g.carry = new_var();
    const int s = g.sum, c = g.carry;
    // Sum parity: one clause per input corner forbidding the wrong s value.
    for (int corner = 0; corner < 8; ++corner) {
      const bool va = corner & 1, vb = corner & 2, vc = corner & 4;
      const bool parity = va ^ vb ^ vc;
      add_clause({va ? -a : a, vb ? -b : b, vc ? -cin : cin, parity ? s : -s});
    }
    add_clause({-a, -b, c});
    add_clause({-a, -cin, c});
    add_clause({-b, -cin, c});
    add_clause({a, b, -c});
    add_clause({a, cin, -c});
    add_clause({b, cin, -c});
    return g;
  }

  Cnf take_cnf() {
    Cnf cnf;
    cnf.num_vars = num_vars_;
    cnf.clauses = std::move(clauses_);
    return cnf;
  }

private:
  int num_vars_ = 0;
  std::vector<Clause> clauses_;
};

}  // namespace detail

// Encodes factorization of an odd n >= 9 as CNF. p gets ceil(N/2) bits and q
// gets N-1 bits (N the bit width of n), which covers every factorization of
// an odd composite with the smaller factor in p, up to swap where both fit.
// The low bits p0 = q0 = 1 are fixed since n is odd, and a non-triviality
// clause over p's upper bits excludes p = 1. Partial products feed schoolbook
// ripple-carry rows (row i adds q_i * p at weight offset i); the accumulator
// bits are pinned to the binary digits of n, and to 0 above its width.
inline FactorInstance encode(const BigUint& n) {
  if (!n.is_odd()) throw std::invalid_argument("encode: n must be odd");
  if (n < BigUint(9)) throw std::invalid_argument("encode: n must be at least 9");

  FactorInstance inst;
  inst.n = n;
  inst.n_bits = n.bit_length();
  const int N = inst.n_bits;
  const int P = (N + 1) / 2;
  const int Q = N - 1;

  detail::CircuitBuilder cb;
  auto& vm = inst.varmap;
  for (int j = 0; j < P; ++j) vm.p_bits.push_back(cb.new_var());
  for (int i = 0; i < Q; ++i) vm.q_bits.push_back(cb.new_var());

  cb.add_clause({vm.p_bits[0]});
  cb.add_clause({vm.q_bits[0]});
  {
    std::vector<Literal> nontrivial;
    for (int j = 1; j < P; ++j)
      nontrivial.emplace_back(vm.p_bits[static_cast<std::size_t>(j)], true);
    cb.add_clause(std::move(nontrivial));
  }

  vm.partial.assign(static_cast<std::size_t>(Q), std::vector<int>(static_cast<std::size_t>(P), 0));
  for (int i = 0; i < Q; ++i)
    for (int j = 0; j < P; ++j)
      vm.partial[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          cb.and_gate(vm.q_bits[static_cast<std::size_t>(i)], vm.p_bits[static_cast<std::size_t>(j)]);

  // Running sum; acc[w] is the variable carrying weight-w of the sum so far,
  // 0 where no bit has reached that weight yet.
  std::vector<int> acc(vm.partial[0].begin(), vm.partial[0].end());
  auto slot = [&acc](int w) -> int& {
    while (static_cast<int>(acc.size()) <= w) acc.push_back(0);
    return acc[static_cast<std::size_t>(w)];
  };

  for (int i = 1; i < Q; ++i) {
    int carry = 0;
    for (int j = 0; j < P; ++j) {
      const int w = i + j;
      int inputs[3] = {slot(w), vm.partial[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], carry};
      int live[3];
      int count = 0;
      for (int in : inputs)
        if (in != 0) live[count++] = in;
      if (count == 1) {
        slot(w) = live[0];
        carry = 0;
      } else if (count == 2) {
        AdderGate g = cb.half_adder(live[0], live[1]);
        vm.gates.push_back(g);
        slot(w) = g.sum;
        carry = g.carry;
      } else {
        AdderGate g = cb.full_adder(live[0], live[1], live[2]);
        vm.gates.push_back(g);
        slot(w) = g.sum;
        carry = g.carry;
      }
    }
    for (int w = i + P; carry != 0; ++w) {
      if (slot(w) == 0) {
        slot(w) = carry;
        carry = 0;
      } else {
        AdderGate g = cb.half_adder(slot(w), carry);
        vm.gates.push_back(g);
        slot(w) = g.sum;
        carry = g.carry;
      }
    }
  }

  if (static_cast<int>(acc.size()) < N)
    throw std::logic_error("encode: accumulator narrower than n");
  for (int w = 0; w < static_cast<int>(acc.size()); ++w) {
    const bool bit = w < N && inst.n.bit(w);
    const int v = acc[static_cast<std::size_t>(w)];
    if (v == 0) {
      if (bit) throw std::logic_error("encode: constant-false product bit must be 1");
      continue;
    }
    cb.add_clause({bit ? v : -v});
  }
  vm.product_bits = std::move(acc);

  inst.cnf = cb.take_cnf();
  return inst;
}

// Reads the factor pair off a satisfying assignment (little-endian bit
// groups). The assignment is verified against the encoding first.
inline std::pair<BigUint, BigUint> decode(const Assignment& a, const FactorInstance& inst) {
  if (count_unsatisfied(inst.cnf, a) != 0)
    throw std::invalid_argument("decode: assignment does not satisfy the encoding");
  std::vector<bool> pb, qb;
  pb.reserve(inst.varmap.p_bits.size());
  qb.reserve(inst.varmap.q_bits.size());
  for (int v : inst.varmap.p_bits) pb.push_back(a.value(v));
  for (int v : inst.varmap.q_bits) qb.push_back(a.value(v));
  return {BigUint::from_bits(pb), BigUint::from_bits(qb)};
}

namespace detail {

// Ground-truth factors oriented so p fits the p-bit group and q the q-group;
// prefers the stored order, swaps when only the reverse fits.
inline std::pair<BigUint, BigUint> oriented_truth(const FactorInstance& inst) {
  if (!inst.ground_truth) throw std::invalid_argument("instance has no ground truth");
  const auto& [a, b] = *inst.ground_truth;
  if (a.bit_length() <= inst.p_width() && b.bit_length() <= inst.q_width()) return {a, b};
  if (b.bit_length() <= inst.p_width() && a.bit_length() <= inst.q_width()) return {b, a};
  throw std::invalid_argument("ground-truth factors do not fit the encoding widths");
}

}  // namespace detail

// Boolean point of the full circuit at the ground-truth factors: key bits
// set from (p, q), partial products and adder cells simulated gate by gate.
inline RelaxedPoint ground_truth_point(const FactorInstance& inst) {
  const auto [p, q] = detail::oriented_truth(inst);
  std::vector<bool> val(static_cast<std::size_t>(inst.cnf.num_vars) + 1, false);
  for (int j = 0; j < inst.p_width(); ++j)
    val[static_cast<std::size_t>(inst.varmap.p_bits[static_cast<std::size_t>(j)])] = p.bit(j);
  for (int i = 0; i < inst.q_width(); ++i)
    val[static_cast<std::size_t>(inst.varmap.q_bits[static_cast<std::size_t>(i)])] = q.bit(i);
  for (int i = 0; i < inst.q_width(); ++i)
    for (int j = 0; j < inst.p_width(); ++j) {
      const auto m = static_cast<std::size_t>(inst.varmap.partial[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      val[m] = val[static_cast<std::size_t>(inst.varmap.q_bits[static_cast<std::size_t>(i)])] &&
               val[static_cast<std::size_t>(inst.varmap.p_bits[static_cast<std::size_t>(j)])];
    }
  for (const AdderGate& g : inst.varmap.gates) {
    const bool a = val[static_cast<std::size_t>(g.a)];
    const bool b = val[static_cast<std::size_t>(g.b)];
    const bool cin = g.kind == AdderGate::Kind::Full && val[static_cast<std::size_t>(g.cin)];
    val[static_cast<std::size_t>(g.sum)] = a ^ b ^ cin;
    val[static_cast<std::size_t>(g.carry)] = (a && b) || (a && cin) || (b && cin);
  }
  std::vector<double> values(static_cast<std::size_t>(inst.cnf.num_vars));
  for (int v = 1; v <= inst.cnf.num_vars; ++v)
    values[static_cast<std::size_t>(v) - 1] = val[static_cast<std::size_t>(v)] ? 1.0 : 0.0;
  return RelaxedPoint(std::move(values));
}

enum class BitGroup { P, Q };

struct BitVote {
  BitGroup group = BitGroup::P;
  int position = 0;  // bit index within the group, 0 = least significant
  int predicted = 0;
  int votes_for = 0;
  int votes_total = 0;
  double confidence = 0.0;
};

// Test 1: clusterization of the long-multiplication matrix. Each relaxed row
// is compared by squared distance against the zero row and against the
// rounded p pattern; a row wins a vote for q_i only when the nearer prototype
// scores at most `margin` times the other one (default: half). Columns vote
// for p_j against the rounded q pattern symmetrically. Ambiguous rows and
// columns abstain.
inline std::vector<BitVote> matrix_cluster_test(const RelaxedPoint& x, const FactorInstance& inst,
                                                double margin = 0.5) {
  if (x.size() != inst.cnf.num_vars)
    throw std::invalid_argument("matrix_cluster_test: point length mismatch");
  const int P = inst.p_width(), Q = inst.q_width();
  auto value_of = [&x](int var) { return x.values[static_cast<std::size_t>(var) - 1]; };

  std::vector<double> p_pattern(static_cast<std::size_t>(P)), q_pattern(static_cast<std::size_t>(Q));
  for (int j = 0; j < P; ++j)
    p_pattern[static_cast<std::size_t>(j)] =
        value_of(inst.varmap.p_bits[static_cast<std::size_t>(j)]) >= 0.5 ? 1.0 : 0.0;
  for (int i = 0; i < Q; ++i)
    q_pattern[static_cast<std::size_t>(i)] =
        value_of(inst.varmap.q_bits[static_cast<std::size_t>(i)]) >= 0.5 ? 1.0 : 0.0;

  std::vector<BitVote> votes;
  auto classify = [&](double d_pattern, double d_zero, BitGroup group, int position) {
    BitVote v;
    v.group = group;
    v.position = position;
    v.votes_for = v.votes_total = 1;
    v.confidence = 1.0;
    if (d_pattern <= margin * d_zero) {
      v.predicted = 1;
      votes.push_back(v);
    } else if (d_zero <= margin * d_pattern) {
      v.predicted = 0;
      votes.push_back(v);
    }
  };

  for (int i = 0; i < Q; ++i) {
    double d_zero = 0.0, d_pat = 0.0;
    for (int j = 0; j < P; ++j) {
      const double m = value_of(inst.varmap.partial[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      d_zero += m * m;
      const double dp = m - p_pattern[static_cast<std::size_t>(j)];
      d_pat += dp * dp;
    }
    classify(d_pat, d_zero, BitGroup::Q, i);
  }
  for (int j = 0; j < P; ++j) {
    double d_zero = 0.0, d_pat = 0.0;
    for (int i = 0; i < Q; ++i) {
      const double m = value_of(inst.varmap.partial[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      d_zero += m * m;
      const double dq = m - q_pattern[static_cast<std::size_t>(i)];
      d_pat += dq * dq;
    }
    classify(d_pat, d_zero, BitGroup::P, j);
  }
  return votes;
}

struct FunctionalComparison {
  int predicted = 0;
  double f0 = 0.0, f1 = 0.0;  // F after conditioning on v=0 / v=1 and settling
};

// Test 2: condition the CNF on each value of a key-bit variable, settle with
// a few plain fixed-point sweeps from x, and predict the value whose settled
// functional is smaller. A conflicting branch scores +infinity.
inline FunctionalComparison functional_comparison_test(const FactorInstance& inst,
                                                       const RelaxedPoint& x, int var,
                                                       int settle_sweeps) {
  if (x.size() != inst.cnf.num_vars)
    throw std::invalid_argument("functional_comparison_test: point length mismatch");
  bool is_key = false;
  for (int v : inst.varmap.p_bits) is_key = is_key || v == var;
  for (int v : inst.varmap.q_bits) is_key = is_key || v == var;
  if (!is_key)
    throw std::invalid_argument("functional_comparison_test: variable is not a key bit");
  if (settle_sweeps < 0) throw std::invalid_argument("settle_sweeps must be >= 0");

  SolverConfig settle_cfg;
  settle_cfg.inertia_depth = 1;
  settle_cfg.inertia_weights = {1.0};
  settle_cfg.reflection_period = 0;
  settle_cfg.trajectory_policy = TrajectoryPolicy::None;

  FunctionalComparison out;
  double f[2];
  for (int b = 0; b < 2; ++b) {
    const std::optional<Cnf> conditioned = condition(inst.cnf, Literal{var, b == 1});
    if (!conditioned) {
      f[b] = std::numeric_limits<double>::infinity();
      continue;
    }
    if (settle_sweeps == 0) {
      f[b] = evaluate(*conditioned, x);
      continue;
    }
    const OccurrenceIndex index(*conditioned);
    SolverState state(x, /*seed=*/0);  // no randomness used during settling
    for (int s = 0; s < settle_sweeps; ++s) inertia_sweep(state, index, settle_cfg);
    f[b] = evaluate(index, state.current());
  }
  out.f0 = f[0];
  out.f1 = f[1];
  out.predicted = f[0] <= f[1] ? 0 : 1;
  return out;
}

enum class BitTestKind { MatrixCluster, FunctionalComparison };

struct BitTestReport {
  std::vector<BitVote> votes;  // sorted by confidence descending
  int runs = 0;
  std::optional<double> accuracy;  // vs ground truth, over voted positions
  // Right-bit fraction of the restarts' final points, when truth is known:
  // both the mean and the best run are reported.
  std::optional<double> mean_right_bits;
  std::optional<double> max_right_bits;
};

namespace detail {

inline bool truth_bit(const std::pair<BigUint, BigUint>& truth, BitGroup group, int position) {
  return group == BitGroup::P ? truth.first.bit(position) : truth.second.bit(position);
}

inline double vote_accuracy(const std::vector<BitVote>& votes,
                            const std::pair<BigUint, BigUint>& truth) {
  if (votes.empty()) return 0.0;
  int right = 0;
  for (const BitVote& v : votes)
    if (v.predicted == (truth_bit(truth, v.group, v.position) ? 1 : 0)) ++right;
  return static_cast<double>(right) / static_cast<double>(votes.size());
}

}  // namespace detail

inline double right_bit_fraction(const RelaxedPoint& x, const FactorInstance& inst);

// Voting attack: `runs` independent solver restarts with derived seeds; each
// final relaxed point feeds the enabled tests, and per-position predictions
// aggregate into majority votes (ties predict 1). votes_total counts the runs
// that voted on a position; abstentions lower it. When ground truth is known
// the report carries the accuracy over voted positions, taking the better of
// the two factor orientations.
inline BitTestReport vote(const FactorInstance& inst, int runs, const SolverConfig& config,
                          const std::set<BitTestKind>& tests, int settle_sweeps = 3) {
  if (runs < 1) throw std::invalid_argument("vote: runs must be >= 1");
  config.validate();

  // Restarts are independent solver instances over the shared immutable
  // encoding; they run concurrently and land in preassigned slots.
  std::vector<std::vector<BitVote>> per_run(static_cast<std::size_t>(runs));
  std::vector<double> run_fraction(static_cast<std::size_t>(runs), 0.0);
  parallel_for(runs, default_worker_count(), [&](int r) {
    SolverConfig cfg = config;
    cfg.seed = derive_seed(config.seed, 100 + static_cast<std::uint64_t>(r));
    cfg.record_trace = false;
    const SolveOutcome out = solve(inst.cnf, cfg);
    if (inst.ground_truth)
      run_fraction[static_cast<std::size_t>(r)] = right_bit_fraction(out.final_point, inst);
    std::vector<BitVote>& mine = per_run[static_cast<std::size_t>(r)];
    if (tests.count(BitTestKind::MatrixCluster))
      mine = matrix_cluster_test(out.final_point, inst);
    if (tests.count(BitTestKind::FunctionalComparison)) {
      auto add_fc = [&](BitGroup group, int position, int var) {
        const FunctionalComparison fc =
            functional_comparison_test(inst, out.final_point, var, settle_sweeps);
        if (std::isinf(fc.f0) && std::isinf(fc.f1)) return;  // both branches conflict
        mine.push_back({group, position, fc.predicted, 1, 1, 1.0});
      };
      for (int j = 0; j < inst.p_width(); ++j)
        add_fc(BitGroup::P, j, inst.varmap.p_bits[static_cast<std::size_t>(j)]);
      for (int i = 0; i < inst.q_width(); ++i)
        add_fc(BitGroup::Q, i, inst.varmap.q_bits[static_cast<std::size_t>(i)]);
    }
  });

  std::map<std::pair<int, int>, std::pair<int, int>> tally;  // (group, pos) -> (ones, total)
  for (const auto& run_votes : per_run)
    for (const BitVote& v : run_votes) {
      auto& [ones, total] = tally[{static_cast<int>(v.group), v.position}];
      ones += v.predicted;
      total += 1;
    }

  BitTestReport report;
  report.runs = runs;
  for (const auto& [key, counts] : tally) {
    const auto [ones, total] = counts;
    BitVote v;
    v.group = key.first == 0 ? BitGroup::P : BitGroup::Q;
    v.position = key.second;
    v.predicted = 2 * ones >= total ? 1 : 0;
    v.votes_for = v.predicted == 1 ? ones : total - ones;
    v.votes_total = total;
    v.confidence = static_cast<double>(v.votes_for) / static_cast<double>(total);
    report.votes.push_back(v);
  }
  std::sort(report.votes.begin(), report.votes.end(), [](const BitVote& a, const BitVote& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.group != b.group) return a.group < b.group;
    return a.position < b.position;
  });

  if (inst.ground_truth) {
    const auto [p, q] = detail::oriented_truth(inst);
    double acc = detail::vote_accuracy(report.votes, {p, q});
    if (q.bit_length() <= inst.p_width() && p.bit_length() <= inst.q_width())
      acc = std::max(acc, detail::vote_accuracy(report.votes, {q, p}));
    report.accuracy = acc;
    double sum = 0.0, best = 0.0;
    for (double f : run_fraction) {
      sum += f;
      best = std::max(best, f);
    }
    report.mean_right_bits = sum / runs;
    report.max_right_bits = best;
  }
  return report;
}

// Fraction of key bits (p group plus q group) whose rounded value matches the
// true factors, under the better of the two orientations (p,q) vs (q,p).
// Factors are zero-extended or truncated to the group widths bit by bit.
inline double right_bit_fraction(const RelaxedPoint& x, const FactorInstance& inst) {
  if (!inst.ground_truth)
    throw std::invalid_argument("right_bit_fraction: instance has no ground truth");
  if (x.size() != inst.cnf.num_vars)
    throw std::invalid_argument("right_bit_fraction: point length mismatch");
  const auto& [a, b] = *inst.ground_truth;
  auto matches = [&](const BigUint& p, const BigUint& q) {
    int m = 0;
    for (int j = 0; j < inst.p_width(); ++j) {
      const bool rounded =
          x.values[static_cast<std::size_t>(inst.varmap.p_bits[static_cast<std::size_t>(j)]) - 1] >= 0.5;
      if (rounded == p.bit(j)) ++m;
    }
    for (int i = 0; i < inst.q_width(); ++i) {
      const bool rounded =
          x.values[static_cast<std::size_t>(inst.varmap.q_bits[static_cast<std::size_t>(i)]) - 1] >= 0.5;
      if (rounded == q.bit(i)) ++m;
    }
    return m;
  };
  const int best = std::max(matches(a, b), matches(b, a));
  return static_cast<double>(best) / static_cast<double>(inst.p_width() + inst.q_width());
}

// Per-sweep probe for solver traces on a factorization instance.
inline TraceProbe right_bit_probe(const FactorInstance& inst) {
  return [&inst](const RelaxedPoint& x) { return right_bit_fraction(x, inst); };
}

}  // namespace satmin
