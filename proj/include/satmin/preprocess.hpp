#pragma once

#include <deque>
#include <map>
#include <queue>
#include <variant>

#include "satmin/cnf.hpp"

namespace satmin {

// Reconstruction records, replayed in reverse to lift a model of the reduced
// CNF back to the original variables.
struct UnitFixed {
  int var;
  bool value;
};
struct PureFixed {
  int var;
  bool value;
};
struct Eliminated {
  int var;
  std::vector<Clause> removed_clauses;  // as they were, v's literals included
};
// Clause removed because every resolvent on `blocking` is tautological.
// Reconstruction: if the lifted model falsifies the clause, make the blocking
// literal true (processed in reverse removal order, as usual for the stack).
struct BlockedRemoved {
  Literal blocking;
  Clause clause;
};
using ReconstructionStep = std::variant<UnitFixed, PureFixed, Eliminated, BlockedRemoved>;

struct ReconstructionStack {
  std::vector<ReconstructionStep> steps;
  bool empty() const { return steps.empty(); }
};

struct PreprocessReport {
  int vars_before = 0, vars_after = 0;
  int clauses_before = 0, clauses_after = 0;
  long units_fixed = 0, pures_fixed = 0, vars_eliminated = 0, blocked_removed = 0;
};

namespace detail {

// Mutable clause soup for preprocessing: literal lists with an active flag,
// exact live occurrence counts per polarity, and occurrence lists that may
// hold stale entries (filtered on use against the live clause content).
// In simplify mode (preprocess) tautological and duplicate clauses are
// dropped, and elimination counts only genuinely new resolvents; the strict
// mode (standalone unit propagation) keeps the formula structure as-is.
class PreprocessWorkspace {
public:
  PreprocessWorkspace(const Cnf& cnf, bool simplify) : num_vars_(cnf.num_vars), simplify_(simplify) {
    pos_count_.assign(static_cast<std::size_t>(num_vars_) + 1, 0);
    neg_count_.assign(static_cast<std::size_t>(num_vars_) + 1, 0);
    occ_pos_.resize(static_cast<std::size_t>(num_vars_) + 1);
    occ_neg_.resize(static_cast<std::size_t>(num_vars_) + 1);
    fixed_.assign(static_cast<std::size_t>(num_vars_) + 1, -1);
    eliminated_.assign(static_cast<std::size_t>(num_vars_) + 1, 0);
    failed_at_.assign(static_cast<std::size_t>(num_vars_) + 1, -1);
    for (const Clause& c : cnf.clauses) {
      if (simplify_ && c.tautological()) continue;  // always satisfied
      add_clause(std::vector<Literal>(c.literals().begin(), c.literals().end()));
    }
  }

  bool conflict() const { return conflict_; }
  int num_vars() const { return num_vars_; }
  int live_clause_count() const { return live_clauses_; }

  int occurring_var_count() const {
    int n = 0;
    for (int v = 1; v <= num_vars_; ++v)
      if (pos_count_[static_cast<std::size_t>(v)] + neg_count_[static_cast<std::size_t>(v)] > 0)
        ++n;
    return n;
  }

  // Drains the unit queue, recording each fix. Sets the conflict flag when a
  // clause empties or a variable is forced both ways.
  void propagate_units(ReconstructionStack& stack, PreprocessReport& report) {
    while (!conflict_ && !unit_queue_.empty()) {
      const Literal l = unit_queue_.front();
      unit_queue_.pop_front();
      const std::size_t v = static_cast<std::size_t>(l.var);
      if (fixed_[v] != -1) {
        if (fixed_[v] != (l.positive ? 1 : 0)) conflict_ = true;
        continue;
      }
      fixed_[v] = l.positive ? 1 : 0;
      stack.steps.push_back(UnitFixed{l.var, l.positive});
      ++report.units_fixed;
      apply_fix(l);
    }
  }

  // Fixes pure variables (one live polarity) until none remain. Deleting the
  // clauses of a pure literal cannot conflict or create units.
  void fix_pure_literals(ReconstructionStack& stack, PreprocessReport& report) {
    bool changed = true;
    while (changed && !conflict_) {
      changed = false;
      for (int var = 1; var <= num_vars_; ++var) {
        const std::size_t v = static_cast<std::size_t>(var);
        if (fixed_[v] != -1 || eliminated_[v]) continue;
        const int np = pos_count_[v], nn = neg_count_[v];
        if ((np > 0) == (nn > 0)) continue;  // absent or mixed
        const bool value = np > 0;
        fixed_[v] = value ? 1 : 0;
        stack.steps.push_back(PureFixed{var, value});
        ++report.pures_fixed;
        apply_fix(Literal{var, value});
        changed = true;
      }
    }
  }

  // Bounded variable elimination: replaces v's clauses by all non-tautological
  // resolvents if their count does not exceed removed + growth_bound. Returns
  // true when v was eliminated.
  bool try_eliminate(int var, int growth_bound, ReconstructionStack& stack,
                     PreprocessReport& report) {
    const std::size_t v = static_cast<std::size_t>(var);
    if (fixed_[v] != -1 || eliminated_[v]) return false;
    std::vector<int> pos = live_occurrences(Literal{var, true});
    std::vector<int> neg = live_occurrences(Literal{var, false});
    if (pos.empty() || neg.empty()) return false;  // pure rule's job

    const long limit = static_cast<long>(pos.size() + neg.size()) + growth_bound;
    std::vector<std::vector<Literal>> resolvents;
    std::map<std::vector<int>, int> seen;  // dedup within this elimination
    for (int pc : pos) {
      for (int nc : neg) {
        std::vector<Literal> merged;
        merged.reserve(lits_[static_cast<std::size_t>(pc)].size() +
                       lits_[static_cast<std::size_t>(nc)].size() - 2);
        for (const Literal& l : lits_[static_cast<std::size_t>(pc)])
          if (l.var != var) merged.push_back(l);
        for (const Literal& l : lits_[static_cast<std::size_t>(nc)])
          if (l.var != var) merged.push_back(l);
        Clause r(std::move(merged));
        if (r.tautological()) continue;
        std::vector<Literal> lits(r.literals().begin(), r.literals().end());
        if (simplify_) {
          // Count only clauses the formula does not already contain (the
          // removed clauses all mention var, so they can never collide).
          const std::vector<int> key = canonical_key(lits);
          if (seen.count(key) || live_count_.count(key)) continue;
          seen.emplace(key, 1);
        }
        resolvents.push_back(std::move(lits));
        if (static_cast<long>(resolvents.size()) > limit) return false;
      }
    }

    Eliminated record{var, {}};
    record.removed_clauses.reserve(pos.size() + neg.size());
    for (int ci : pos)
      record.removed_clauses.push_back(Clause(lits_[static_cast<std::size_t>(ci)]));
    for (int ci : neg)
      record.removed_clauses.push_back(Clause(lits_[static_cast<std::size_t>(ci)]));
    stack.steps.push_back(std::move(record));
    ++report.vars_eliminated;
    eliminated_[v] = 1;

    for (int ci : pos) delete_clause(ci);
    for (int ci : neg) delete_clause(ci);
    for (auto& r : resolvents) add_clause(std::move(r));
    return true;
  }

  // Eliminates cheap variables first: candidates ordered by live occurrence
  // count ascending (ties by index), recomputed lazily through the heap.
  // Returns true when at least one variable was eliminated.
  bool run_elimination_pass(int growth_bound, ReconstructionStack& stack,
                            PreprocessReport& report) {
    using Entry = std::pair<int, int>;  // (occurrence count, var)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
    for (int var = 1; var <= num_vars_; ++var) {
      const std::size_t v = static_cast<std::size_t>(var);
      if (fixed_[v] != -1 || eliminated_[v]) continue;
      if (pos_count_[v] > 0 && neg_count_[v] > 0)
        heap.push({pos_count_[v] + neg_count_[v], var});
    }
    bool any = false;
    while (!heap.empty() && !conflict_) {
      auto [key, var] = heap.top();
      heap.pop();
      const std::size_t v = static_cast<std::size_t>(var);
      if (fixed_[v] != -1 || eliminated_[v]) continue;
      const int cur = pos_count_[v] + neg_count_[v];
      if (cur != key) {
        if (pos_count_[v] > 0 && neg_count_[v] > 0) heap.push({cur, var});
        continue;
      }
      if (failed_at_[v] == cur) continue;  // nothing changed since the last rejection
      if (try_eliminate(var, growth_bound, stack, report))
        any = true;
      else
        failed_at_[v] = cur;
      if (units_pending()) break;  // let the outer loop propagate first
    }
    return any;
  }

  // Blocked-clause removal: a clause is blocked on literal l when resolving
  // it on l with every live clause containing the complement yields only
  // tautologies. Removal preserves equisatisfiability; the stack records the
  // blocking literal for model repair. One pass over the live clauses;
  // returns true when anything was removed.
  bool run_blocked_clause_pass(ReconstructionStack& stack, PreprocessReport& report) {
    bool any = false;
    for (std::size_t ci = 0; ci < lits_.size(); ++ci) {
      if (!active_[ci] || lits_[ci].size() <= 1) continue;
      for (const Literal& l : lits_[ci]) {
        bool blocked = true;
        for (int di : live_occurrences(l.negated())) {
          if (!resolvent_tautological(static_cast<int>(ci), l, di)) {
            blocked = false;
            break;
          }
        }
        if (!blocked) continue;
        stack.steps.push_back(BlockedRemoved{l, Clause(lits_[ci])});
        ++report.blocked_removed;
        delete_clause(static_cast<int>(ci));
        any = true;
        break;
      }
    }
    return any;
  }

  bool units_pending() const { return !unit_queue_.empty(); }

  Cnf extract() const {
    Cnf out;
    out.num_vars = num_vars_;
    out.clauses.reserve(static_cast<std::size_t>(live_clauses_));
    for (std::size_t ci = 0; ci < lits_.size(); ++ci)
      if (active_[ci]) out.clauses.push_back(Clause(lits_[ci]));
    return out;
  }

private:
  // Resolvent of clauses ci and di on literal l (l in ci, ~l in di) is a
  // tautology iff ci holds another literal whose complement is in di.
  bool resolvent_tautological(int ci, const Literal& l, int di) const {
    for (const Literal& w : lits_[static_cast<std::size_t>(ci)]) {
      if (w.var == l.var) continue;
      for (const Literal& d : lits_[static_cast<std::size_t>(di)])
        if (d == w.negated()) return true;
    }
    return false;
  }

  static std::vector<int> canonical_key(const std::vector<Literal>& lits) {
    std::vector<int> key;
    key.reserve(lits.size());
    for (const Literal& l : lits) key.push_back(l.to_dimacs());
    std::sort(key.begin(), key.end());
    return key;
  }

  void drop_key(const std::vector<Literal>& lits) {
    auto it = live_count_.find(canonical_key(lits));
    if (it != live_count_.end() && --(it->second) == 0) live_count_.erase(it);
  }

  void add_clause(std::vector<Literal> lits) {
    std::vector<int> key = canonical_key(lits);
    if (simplify_ && !lits.empty() && live_count_.count(key)) return;  // duplicate
    const int ci = static_cast<int>(lits_.size());
    if (lits.empty()) conflict_ = true;
    if (lits.size() == 1) unit_queue_.push_back(lits[0]);
    for (const Literal& l : lits) {
      const std::size_t v = static_cast<std::size_t>(l.var);
      if (l.positive) {
        ++pos_count_[v];
        occ_pos_[v].push_back(ci);
      } else {
        ++neg_count_[v];
        occ_neg_[v].push_back(ci);
      }
    }
    ++live_count_[std::move(key)];
    lits_.push_back(std::move(lits));
    active_.push_back(true);
    ++live_clauses_;
  }

  void delete_clause(int ci) {
    const std::size_t c = static_cast<std::size_t>(ci);
    if (!active_[c]) return;
    active_[c] = false;
    --live_clauses_;
    drop_key(lits_[c]);
    for (const Literal& l : lits_[c]) {
      const std::size_t v = static_cast<std::size_t>(l.var);
      if (l.positive)
        --pos_count_[v];
      else
        --neg_count_[v];
    }
  }

  void strip_literal(int ci, const Literal& l) {
    const std::size_t c = static_cast<std::size_t>(ci);
    auto& lits = lits_[c];
    drop_key(lits);
    for (std::size_t i = 0; i < lits.size(); ++i)
      if (lits[i] == l) {
        lits.erase(lits.begin() + static_cast<std::ptrdiff_t>(i));
        break;
      }
    if (l.positive)
      --pos_count_[static_cast<std::size_t>(l.var)];
    else
      --neg_count_[static_cast<std::size_t>(l.var)];
    ++live_count_[canonical_key(lits)];
    if (lits.empty()) {
      conflict_ = true;
      return;
    }
    if (simplify_ && live_count_[canonical_key(lits)] > 1) {
      delete_clause(ci);  // stripping produced a duplicate of a live clause
      return;
    }
    if (lits.size() == 1) unit_queue_.push_back(lits[0]);
  }

  std::vector<int> live_occurrences(const Literal& l) {
    auto& source = l.positive ? occ_pos_[static_cast<std::size_t>(l.var)]
                              : occ_neg_[static_cast<std::size_t>(l.var)];
    std::vector<int> live;
    std::vector<int> fresh;
    live.reserve(source.size());
    for (int ci : source) {
      if (!active_[static_cast<std::size_t>(ci)]) continue;
      bool present = false;
      for (const Literal& cl : lits_[static_cast<std::size_t>(ci)])
        if (cl == l) {
          present = true;
          break;
        }
      if (!present) continue;
      live.push_back(ci);
      fresh.push_back(ci);
    }
    source = std::move(fresh);  // compacts stale entries
    return live;
  }

  // Makes a fixed literal true: its clauses are satisfied, complementary
  // occurrences are stripped.
  void apply_fix(const Literal& l) {
    for (int ci : live_occurrences(l)) delete_clause(ci);
    for (int ci : live_occurrences(l.negated())) strip_literal(ci, l.negated());
    occ_pos_[static_cast<std::size_t>(l.var)].clear();
    occ_neg_[static_cast<std::size_t>(l.var)].clear();
  }

  int num_vars_;
  std::vector<std::vector<Literal>> lits_;
  std::vector<bool> active_;
  int live_clauses_ = 0;
  std::vector<std::vector<int>> occ_pos_, occ_neg_;
  std::vector<int> pos_count_, neg_count_;
  std::vector<std::int8_t> fixed_;
  std::vector<std::uint8_t> eliminated_;
  std::vector<int> failed_at_;
  std::deque<Literal> unit_queue_;
  std::map<std::vector<int>, int> live_count_;  // canonical content -> live copies
  bool simplify_ = false;
  bool conflict_ = false;
};

}  // namespace detail

// Number of variables occurring in at least one clause.
inline int occurring_variable_count(const Cnf& cnf) {
  std::vector<bool> seen(static_cast<std::size_t>(cnf.num_vars) + 1, false);
  int n = 0;
  for (const Clause& c : cnf.clauses)
    for (const Literal& l : c.literals())
      if (!seen[static_cast<std::size_t>(l.var)]) {
        seen[static_cast<std::size_t>(l.var)] = true;
        ++n;
      }
  return n;
}

struct UnitPropagationResult {
  bool conflict = false;  // true means the CNF is UNSAT
  Cnf cnf;
  ReconstructionStack stack;
};

// Unit propagation to closure. No unit clauses remain in the output; every
// fixed variable is recorded on the stack in fixing order.
inline UnitPropagationResult unit_propagate(const Cnf& cnf) {
  detail::PreprocessWorkspace ws(cnf, /*simplify=*/false);
  UnitPropagationResult result;
  PreprocessReport scratch;
  ws.propagate_units(result.stack, scratch);
  result.conflict = ws.conflict();
  if (!result.conflict) result.cnf = ws.extract();
  return result;
}

// Davis-Putnam elimination of one variable: clauses mentioning v are replaced
// by all non-tautological resolvents on v. Clauses tautological on v itself
// are simply dropped (any value of v satisfies them). One-sided occurrence
// produces no resolvents, so those clauses just disappear.
inline Cnf eliminate_variable(const Cnf& cnf, int var, std::vector<Clause>* removed = nullptr) {
  if (var < 1 || var > cnf.num_vars)
    throw std::invalid_argument("eliminate_variable: variable out of range");
  const Literal pos{var, true}, neg{var, false};
  std::vector<const Clause*> with_pos, with_neg;
  Cnf out;
  out.num_vars = cnf.num_vars;
  for (const Clause& c : cnf.clauses) {
    const bool has_pos = c.contains(pos), has_neg = c.contains(neg);
    if (!has_pos && !has_neg) {
      out.clauses.push_back(c);
      continue;
    }
    if (removed) removed->push_back(c);
    if (has_pos && has_neg) continue;  // tautological on v: drop
    (has_pos ? with_pos : with_neg).push_back(&c);
  }
  for (const Clause* pc : with_pos) {
    for (const Clause* nc : with_neg) {
      std::vector<Literal> merged;
      for (const Literal& l : pc->literals())
        if (l.var != var) merged.push_back(l);
      for (const Literal& l : nc->literals())
        if (l.var != var) merged.push_back(l);
      Clause r(std::move(merged));
      if (!r.tautological()) out.clauses.push_back(std::move(r));
    }
  }
  return out;
}

struct PreprocessResult {
  bool conflict = false;  // true means the CNF is UNSAT
  Cnf cnf;
  ReconstructionStack stack;
  PreprocessReport report;
};

// Repeats unit propagation, pure-literal elimination, and bounded variable
// elimination to fixpoint. With growth_bound = 0 the clause count never
// increases (each elimination must pay for itself). Tautological clauses are
// dropped up front. Output is equisatisfiable with the input and models lift
// back through the stack.
inline PreprocessResult preprocess(const Cnf& cnf, int growth_bound = 0) {
  if (growth_bound < 0) throw std::invalid_argument("preprocess: growth_bound must be >= 0");
  detail::PreprocessWorkspace ws(cnf, /*simplify=*/true);
  PreprocessResult result;
  result.report.clauses_before = cnf.num_clauses();
  result.report.vars_before = occurring_variable_count(cnf);

  bool changed = true;
  while (changed && !ws.conflict()) {
    ws.propagate_units(result.stack, result.report);
    if (ws.conflict()) break;
    ws.fix_pure_literals(result.stack, result.report);
    changed = ws.run_blocked_clause_pass(result.stack, result.report);
    changed = ws.run_elimination_pass(growth_bound, result.stack, result.report) || changed;
    changed = changed || ws.units_pending();
  }

  result.conflict = ws.conflict();
  if (!result.conflict) {
    result.cnf = ws.extract();
    result.report.vars_after = ws.occurring_var_count();
    result.report.clauses_after = result.cnf.num_clauses();
  }
  return result;
}

// Lifts a model of the reduced CNF to the original variables by replaying the
// stack in reverse. Eliminated variables take whichever value satisfies all
// of their removed clauses; if neither does, equisatisfiability was broken
// somewhere and this aborts loudly. The result is verified against the
// original CNF before being returned.
inline Assignment reconstruct(const Assignment& reduced_model, const ReconstructionStack& stack,
                              const Cnf& original) {
  if (reduced_model.size() != original.num_vars)
    throw std::invalid_argument("reconstruct: model length does not match variable count");
  Assignment out = reduced_model;
  for (auto it = stack.steps.rbegin(); it != stack.steps.rend(); ++it) {
    if (const auto* u = std::get_if<UnitFixed>(&*it)) {
      out.set(u->var, u->value);
    } else if (const auto* p = std::get_if<PureFixed>(&*it)) {
      out.set(p->var, p->value);
    } else if (const auto* bc = std::get_if<BlockedRemoved>(&*it)) {
      if (!clause_satisfied(bc->clause, out)) out.set(bc->blocking.var, bc->blocking.positive);
    } else {
      const auto& e = std::get<Eliminated>(*it);
      bool found = false;
      for (bool value : {false, true}) {
        out.set(e.var, value);
        bool all_sat = true;
        for (const Clause& c : e.removed_clauses)
          if (!clause_satisfied(c, out)) {
            all_sat = false;
            break;
          }
        if (all_sat) {
          found = true;
          break;
        }
      }
      if (!found)
        throw std::logic_error("reconstruct: no value of variable " + std::to_string(e.var) +
                               " satisfies its removed clauses (equisatisfiability bug)");
    }
  }
  if (count_unsatisfied(original, out) != 0)
    throw std::logic_error("reconstruct: lifted assignment fails the original CNF");
  return out;
}

}  // namespace satmin
