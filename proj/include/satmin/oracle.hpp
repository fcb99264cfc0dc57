#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "satmin/cnf.hpp"

namespace satmin {

enum class OracleStatus { Sat, Unsat, BudgetExceeded };

struct OracleResult {
  OracleStatus status = OracleStatus::BudgetExceeded;
  std::optional<Assignment> model;  // present iff status == Sat, verified
};

namespace detail {

// Shared search engine for the oracle. Counter-based clause bookkeeping with
// a trail for undo; no watched literals, no learning. Slow and auditable.
//
// Invariant: every variable on the trail has had its counter updates applied
// exactly once, even when a conflict is hit mid-propagation (the queue is
// always drained), so undo() is an exact inverse.
class DpllEngine {
public:
  explicit DpllEngine(const Cnf& cnf)
      : cnf_(cnf),
        num_vars_(cnf.num_vars),
        value_(static_cast<std::size_t>(cnf.num_vars) + 1, kUnset) {
    occ_.resize(static_cast<std::size_t>(num_vars_) + 1);
    true_count_.resize(cnf.clauses.size(), 0);
    unassigned_.resize(cnf.clauses.size(), 0);
    for (std::size_t ci = 0; ci < cnf.clauses.size(); ++ci) {
      const Clause& c = cnf.clauses[ci];
      unassigned_[ci] = static_cast<int>(c.size());
      for (const Literal& l : c.literals())
        occ_[static_cast<std::size_t>(l.var)].push_back({static_cast<int>(ci), l.positive});
      if (c.empty()) root_conflict_ = true;
    }
  }

  bool root_conflict() const { return root_conflict_; }
  int num_vars() const { return num_vars_; }
  bool assigned(int var) const { return value_[static_cast<std::size_t>(var)] != kUnset; }
  std::size_t trail_mark() const { return trail_.size(); }

  // Propagates the formula's original unit clauses to closure. Call once
  // before searching. Returns false on conflict (the CNF is UNSAT).
  bool propagate_root_units() {
    bool ok = !root_conflict_;
    for (std::size_t ci = 0; ci < cnf_.clauses.size(); ++ci)
      if (cnf_.clauses[ci].size() == 1) {
        const Literal l = cnf_.clauses[ci].literals()[0];
        ok = enqueue(l.var, l.positive) && ok;
      }
    return drain() && ok;
  }

  // Assigns var=val and runs unit propagation to closure. Returns false on
  // conflict. The trail keeps all updates either way, so undo stays uniform.
  bool assign_and_propagate(int var, bool val) {
    bool ok = enqueue(var, val);
    return drain() && ok;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      int v = trail_.back();
      trail_.pop_back();
      bool val = value_[static_cast<std::size_t>(v)] == 1;
      for (const auto& [ci, positive] : occ_[static_cast<std::size_t>(v)]) {
        if (positive == val)
          --true_count_[static_cast<std::size_t>(ci)];
        else
          ++unassigned_[static_cast<std::size_t>(ci)];
      }
      value_[static_cast<std::size_t>(v)] = kUnset;
    }
    queue_head_ = trail_.size();
  }

  // Lowest-index unassigned variable that occurs in a not-yet-satisfied
  // clause; 0 when every clause is satisfied.
  int pick_branch_var() const {
    int best = 0;
    for (std::size_t ci = 0; ci < cnf_.clauses.size(); ++ci) {
      if (true_count_[ci] > 0) continue;
      for (const Literal& l : cnf_.clauses[ci].literals()) {
        if (value_[static_cast<std::size_t>(l.var)] == kUnset &&
            (best == 0 || l.var < best))
          best = l.var;
      }
    }
    return best;
  }

  // Fixes pure literals (variables occurring with one polarity among
  // unsatisfied clauses) until none remain. Assigning a pure literal only
  // satisfies clauses, so this can neither conflict nor create units.
  void fix_pure_literals() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<std::uint8_t> seen(static_cast<std::size_t>(num_vars_) + 1, 0);
      for (std::size_t ci = 0; ci < cnf_.clauses.size(); ++ci) {
        if (true_count_[ci] > 0) continue;
        for (const Literal& l : cnf_.clauses[ci].literals())
          if (value_[static_cast<std::size_t>(l.var)] == kUnset)
            seen[static_cast<std::size_t>(l.var)] |= l.positive ? 1 : 2;
      }
      for (int v = 1; v <= num_vars_; ++v) {
        std::uint8_t s = seen[static_cast<std::size_t>(v)];
        if ((s == 1 || s == 2) && !assigned(v)) {
          assign_and_propagate(v, s == 1);
          changed = true;
        }
      }
    }
  }

  Assignment extract_model() const {
    std::vector<bool> bits(static_cast<std::size_t>(num_vars_));
    for (int v = 1; v <= num_vars_; ++v)
      bits[static_cast<std::size_t>(v) - 1] = value_[static_cast<std::size_t>(v)] == 1;
    return Assignment(std::move(bits));
  }

private:
  static constexpr std::int8_t kUnset = -1;

  bool enqueue(int var, bool val) {
    std::int8_t& slot = value_[static_cast<std::size_t>(var)];
    if (slot != kUnset) return slot == (val ? 1 : 0);
    slot = val ? 1 : 0;
    trail_.push_back(var);
    return true;
  }

  // Processes every queued assignment; counter updates are applied in full
  // for each trail entry regardless of conflicts.
  bool drain() {
    bool ok = true;
    while (queue_head_ < trail_.size()) {
      int v = trail_[queue_head_++];
      bool val = value_[static_cast<std::size_t>(v)] == 1;
      for (const auto& [ci, positive] : occ_[static_cast<std::size_t>(v)]) {
        std::size_t c = static_cast<std::size_t>(ci);
        if (positive == val) {
          ++true_count_[c];
          continue;
        }
        --unassigned_[c];
        if (true_count_[c] > 0) continue;
        if (unassigned_[c] == 0) {
          ok = false;
          continue;
        }
        if (unassigned_[c] == 1 && ok) {
          for (const Literal& l : cnf_.clauses[c].literals())
            if (value_[static_cast<std::size_t>(l.var)] == kUnset) {
              ok = enqueue(l.var, l.positive) && ok;
              break;
            }
        }
      }
    }
    return ok;
  }

  const Cnf& cnf_;
  int num_vars_;
  bool root_conflict_ = false;
  std::vector<std::int8_t> value_;
  std::vector<std::vector<std::pair<int, bool>>> occ_;
  std::vector<int> true_count_;
  std::vector<int> unassigned_;
  std::vector<int> trail_;
  std::size_t queue_head_ = 0;
};

}  // namespace detail

// Complete DPLL with unit propagation and pure-literal elimination.
// Deterministic branching: lowest-index unassigned variable occurring in an
// unsatisfied clause, true branch first. node_budget caps decision nodes;
// exceeding it yields BudgetExceeded (never a wrong verdict). SAT models are
// re-verified before being returned.
inline OracleResult dpll_solve(const Cnf& cnf, long node_budget) {
  if (node_budget <= 0) throw std::invalid_argument("dpll_solve: node_budget must be positive");
  detail::DpllEngine eng(cnf);
  if (!eng.propagate_root_units()) return {OracleStatus::Unsat, std::nullopt};

  long nodes = 0;
  auto search = [&](auto&& self) -> OracleStatus {
    eng.fix_pure_literals();
    int var = eng.pick_branch_var();
    if (var == 0) return OracleStatus::Sat;
    if (++nodes > node_budget) return OracleStatus::BudgetExceeded;
    for (bool val : {true, false}) {
      std::size_t mark = eng.trail_mark();
      if (eng.assign_and_propagate(var, val)) {
        OracleStatus st = self(self);
        if (st != OracleStatus::Unsat) return st;
      }
      eng.undo(mark);
    }
    return OracleStatus::Unsat;
  };

  OracleStatus st = search(search);
  if (st != OracleStatus::Sat) return {st, std::nullopt};
  Assignment model = eng.extract_model();
  if (count_unsatisfied(cnf, model) != 0)
    throw std::logic_error("dpll_solve: produced model fails verification");
  return {OracleStatus::Sat, std::move(model)};
}

// All models of the CNF, lexicographically ordered over (x1, ..., xN), up to
// `cap`. Branches every variable in index order (false first) with unit
// propagation only, so free variables expand to both values. Intended for
// small instances (~30 variables or fewer when the model count is modest).
inline std::vector<Assignment> enumerate_models(const Cnf& cnf, long cap) {
  if (cap <= 0) throw std::invalid_argument("enumerate_models: cap must be positive");
  detail::DpllEngine eng(cnf);
  std::vector<Assignment> models;
  if (!eng.propagate_root_units()) return models;

  auto walk = [&](auto&& self, int v) -> bool {
    while (v <= eng.num_vars() && eng.assigned(v)) ++v;
    if (v > eng.num_vars()) {
      Assignment model = eng.extract_model();
      if (count_unsatisfied(cnf, model) != 0)
        throw std::logic_error("enumerate_models: candidate fails verification");
      models.push_back(std::move(model));
      return static_cast<long>(models.size()) < cap;
    }
    for (bool val : {false, true}) {
      std::size_t mark = eng.trail_mark();
      if (eng.assign_and_propagate(v, val)) {
        if (!self(self, v + 1)) return false;
      }
      eng.undo(mark);
    }
    return true;
  };
  walk(walk, 1);
  return models;
}

}  // namespace satmin
