#pragma once

#include <chrono>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "satmin/dimacs.hpp"
#include "satmin/generators.hpp"
#include "satmin/oracle.hpp"
#include "satmin/parallel.hpp"
#include "satmin/split.hpp"

namespace satmin {

struct GeneratorSpec {
  enum class Kind { Uniform, Planted };
  Kind kind = Kind::Uniform;
  int n_vars = 20;
  int n_clauses = 91;
  int count = 100;
};

struct CampaignSpec {
  std::string name = "campaign";
  std::vector<std::string> files;  // DIMACS inputs; alternative to generator
  std::optional<GeneratorSpec> generator;
  SolverConfig config;
  int repetitions = 1;
  bool parallel_mode = false;  // run the split/merge pipeline per row
  int merge_k = 8;
  bool oracle_verify = false;  // keep only DPLL-verified-SAT generated instances
  long oracle_budget = 50'000'000;
  int workers = 0;  // 0 = hardware concurrency
  std::string csv_path;
  std::string json_path;

  void validate() const {
    config.validate();
    if (repetitions < 1) throw std::invalid_argument("campaign: repetitions must be >= 1");
    if (files.empty() == !generator.has_value())
      throw std::invalid_argument("campaign: exactly one of files or generator required");
    if (oracle_budget < 1) throw std::invalid_argument("campaign: oracle budget must be positive");
  }
};

struct CampaignRow {
  std::string instance;
  int n_vars = 0;
  int n_clauses = 0;
  std::string status;  // SATISFIED | BUDGET_EXCEEDED | ERROR: ...
  long sweeps = 0;
  long part1_sweeps = -1;  // -1 when not a parallel run
  long part2_sweeps = -1;
  double wall_ms = 0.0;  // the only nondeterministic column
  std::uint64_t seed = 0;
  bool known_sat = false;  // planted, oracle-verified, or proven by the run
  double unsat_fraction = -1.0;         // parallel rows only, else -1
  double undetermined_fraction = -1.0;  // parallel rows only, else -1
};

struct CampaignReport {
  CampaignSpec spec;
  std::vector<CampaignRow> rows;
  int solved = 0;
  int known_sat_total = 0;
  double solved_pct = 0.0;  // over known-SAT rows; NaN when there are none
  long max_sweeps = 0;      // over solved rows
  double median_sweeps = 0.0;
  double median_part_sweeps = 0.0;   // parallel mode only
  double median_whole_sweeps = 0.0;  // parallel mode only
};

namespace detail {

struct BenchInstance {
  std::string name;
  Cnf cnf;
  bool known_sat = false;
  std::string error;  // nonempty: the row is reported failed, campaign continues
};

inline std::vector<BenchInstance> materialize_instances(const CampaignSpec& spec) {
  std::vector<BenchInstance> instances;
  if (!spec.files.empty()) {
    for (const std::string& path : spec.files) {
      BenchInstance inst;
      inst.name = path;
      try {
        inst.cnf = read_dimacs_file(path);
        if (spec.oracle_verify)
          inst.known_sat = dpll_solve(inst.cnf, spec.oracle_budget).status == OracleStatus::Sat;
      } catch (const std::exception& e) {
        inst.error = e.what();
      }
      instances.push_back(std::move(inst));
    }
    return instances;
  }

  const GeneratorSpec& gen = *spec.generator;
  const bool planted = gen.kind == GeneratorSpec::Kind::Planted;
  std::uint64_t draw = 0;
  while (static_cast<int>(instances.size()) < gen.count) {
    const std::uint64_t seed = derive_seed(spec.config.seed, 0xBE0000 + draw);
    ++draw;
    BenchInstance inst;
    if (planted) {
      auto [cnf, plant] = gen_planted(gen.n_vars, gen.n_clauses, seed);
      inst.cnf = std::move(cnf);
      inst.known_sat = true;
    } else {
      inst.cnf = gen_uniform_3sat(gen.n_vars, gen.n_clauses, seed);
      if (spec.oracle_verify) {
        if (dpll_solve(inst.cnf, spec.oracle_budget).status != OracleStatus::Sat)
          continue;  // keep drawing until `count` verified-SAT instances
        inst.known_sat = true;
      }
    }
    inst.name = (planted ? "planted-" : "uniform-") + std::to_string(gen.n_vars) + "-" +
                std::to_string(gen.n_clauses) + "-" + std::to_string(instances.size());
    instances.push_back(std::move(inst));
  }
  return instances;
}

inline double median_of(std::vector<long> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return static_cast<double>(values[mid]);
  return (static_cast<double>(values[mid - 1]) + static_cast<double>(values[mid])) / 2.0;
}

}  // namespace detail

inline void write_campaign_csv(const CampaignReport& report, std::ostream& os);
inline nlohmann::json campaign_json(const CampaignReport& report);

// Runs the campaign: every (instance, repetition) pair is one isolated solver
// run in a bounded worker pool. Row failures are recorded and the campaign
// continues. All result columns are deterministic for a fixed spec; wall_ms
// is measured and is not.
inline CampaignReport run_campaign(const CampaignSpec& spec) {
  spec.validate();
  CampaignReport report;
  report.spec = spec;

  std::vector<detail::BenchInstance> instances = detail::materialize_instances(spec);
  const int total_rows = static_cast<int>(instances.size()) * spec.repetitions;
  report.rows.resize(static_cast<std::size_t>(total_rows));

  const int workers = spec.workers > 0 ? spec.workers : default_worker_count();
  parallel_for(total_rows, workers, [&](int row_idx) {
    const int inst_idx = row_idx / spec.repetitions;
    const int rep = row_idx % spec.repetitions;
    const detail::BenchInstance& inst = instances[static_cast<std::size_t>(inst_idx)];
    CampaignRow& row = report.rows[static_cast<std::size_t>(row_idx)];
    row.instance = inst.name + (spec.repetitions > 1 ? "#" + std::to_string(rep) : "");
    row.n_vars = inst.cnf.num_vars;
    row.n_clauses = inst.cnf.num_clauses();
    row.known_sat = inst.known_sat;
    if (!inst.error.empty()) {
      row.status = "ERROR: " + inst.error;
      return;
    }

    SolverConfig cfg = spec.config;
    cfg.seed = derive_seed(spec.config.seed, 0xCA0000 + static_cast<std::uint64_t>(row_idx));
    cfg.record_trace = false;
    row.seed = cfg.seed;

    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (spec.parallel_mode) {
        const ParallelOutcome out = solve_parallel(inst.cnf, cfg, spec.merge_k);
        row.status = out.whole.status == SolveStatus::Satisfied ? "SATISFIED" : "BUDGET_EXCEEDED";
        row.sweeps = out.whole.sweeps_used;
        row.part1_sweeps = out.part1.sweeps_used;
        row.part2_sweeps = out.part2.sweeps_used;
        row.unsat_fraction = out.unsat_fraction;
        row.undetermined_fraction = out.undetermined_fraction;
        if (out.whole.status == SolveStatus::Satisfied) row.known_sat = true;
      } else {
        const SolveOutcome out = solve(inst.cnf, cfg);
        row.status = out.status == SolveStatus::Satisfied ? "SATISFIED" : "BUDGET_EXCEEDED";
        row.sweeps = out.sweeps_used;
        if (out.status == SolveStatus::Satisfied) row.known_sat = true;
      }
    } catch (const std::exception& e) {
      row.status = std::string("ERROR: ") + e.what();
    }
    row.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  });

  std::vector<long> solved_sweeps, part_sweeps, whole_sweeps;
  for (const CampaignRow& row : report.rows) {
    if (row.known_sat) ++report.known_sat_total;
    if (row.status == "SATISFIED") {
      ++report.solved;
      solved_sweeps.push_back(row.sweeps);
      if (row.part1_sweeps >= 0) {
        part_sweeps.push_back(std::max(row.part1_sweeps, row.part2_sweeps));
        whole_sweeps.push_back(row.sweeps);
      }
      report.max_sweeps = std::max(report.max_sweeps, row.sweeps);
    }
  }
  report.solved_pct = report.known_sat_total > 0
                          ? 100.0 * report.solved / report.known_sat_total
                          : std::numeric_limits<double>::quiet_NaN();
  report.median_sweeps = detail::median_of(std::move(solved_sweeps));
  report.median_part_sweeps = detail::median_of(std::move(part_sweeps));
  report.median_whole_sweeps = detail::median_of(std::move(whole_sweeps));

  if (!spec.csv_path.empty()) {
    std::ofstream os(spec.csv_path);
    if (!os) throw std::runtime_error("cannot write campaign CSV: " + spec.csv_path);
    write_campaign_csv(report, os);
  }
  if (!spec.json_path.empty()) {
    std::ofstream os(spec.json_path);
    if (!os) throw std::runtime_error("cannot write campaign JSON: " + spec.json_path);
    os << campaign_json(report).dump(2) << '\n';
  }
  return report;
}

inline void write_campaign_csv(const CampaignReport& report, std::ostream& os) {
  os << "instance,n_vars,n_clauses,status,sweeps,part1_sweeps,part2_sweeps,wall_ms,seed,known_sat\n";
  for (const CampaignRow& r : report.rows) {
    os << r.instance << ',' << r.n_vars << ',' << r.n_clauses << ',' << r.status << ','
       << r.sweeps << ',';
    if (r.part1_sweeps >= 0) os << r.part1_sweeps;
    os << ',';
    if (r.part2_sweeps >= 0) os << r.part2_sweeps;
    os << ',' << r.wall_ms << ',' << r.seed << ',' << (r.known_sat ? 1 : 0) << '\n';
  }
}

// Table-1-shaped summary line for parallel campaigns: benchmark, N, M,
// solved %, part iterations, whole iterations (medians over solved rows).
inline void write_parallel_summary_csv(const CampaignReport& report, std::ostream& os) {
  os << "benchmark,n_vars,n_clauses,solved_pct,part_sweeps,whole_sweeps\n";
  const CampaignRow* first = report.rows.empty() ? nullptr : &report.rows.front();
  os << report.spec.name << ',' << (first ? first->n_vars : 0) << ','
     << (first ? first->n_clauses : 0) << ',' << report.solved_pct << ','
     << report.median_part_sweeps << ',' << report.median_whole_sweeps << '\n';
}

inline nlohmann::json config_json(const SolverConfig& c) {
  return {
      {"inertia_depth", c.inertia_depth},
      {"inertia_weights", c.inertia_weights},
      {"max_sweeps", c.max_sweeps},
      {"reflection_period", c.reflection_period},
      {"stagnation_window", c.stagnation_window},
      {"stagnation_epsilon", c.stagnation_epsilon},
      {"trajectory_policy", c.trajectory_policy == TrajectoryPolicy::None ? "none" : "perturb_unsat"},
      {"perturb_magnitude", c.perturb_magnitude},
      {"seed", c.seed},
      {"division_epsilon", c.division_epsilon},
  };
}

inline nlohmann::json campaign_json(const CampaignReport& report) {
  nlohmann::json j;
  j["name"] = report.spec.name;
  j["config"] = config_json(report.spec.config);
  j["repetitions"] = report.spec.repetitions;
  j["parallel_mode"] = report.spec.parallel_mode;
  j["merge_k"] = report.spec.merge_k;
  j["oracle_verify"] = report.spec.oracle_verify;
  if (report.spec.generator) {
    const GeneratorSpec& g = *report.spec.generator;
    j["generator"] = {
        {"kind", g.kind == GeneratorSpec::Kind::Uniform ? "uniform" : "planted"},
        {"n_vars", g.n_vars},
        {"n_clauses", g.n_clauses},
        {"count", g.count},
    };
  } else {
    j["files"] = report.spec.files;
  }
  j["aggregates"] = {
      {"solved", report.solved},
      {"known_sat_total", report.known_sat_total},
      {"solved_pct", report.solved_pct},
      {"max_sweeps", report.max_sweeps},
      {"median_sweeps", report.median_sweeps},
      {"median_part_sweeps", report.median_part_sweeps},
      {"median_whole_sweeps", report.median_whole_sweeps},
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const CampaignRow& r : report.rows) {
    nlohmann::json row = {
        {"instance", r.instance},
        {"n_vars", r.n_vars},
        {"n_clauses", r.n_clauses},
        {"status", r.status},
        {"sweeps", r.sweeps},
        {"part1_sweeps", r.part1_sweeps},
        {"part2_sweeps", r.part2_sweeps},
        {"wall_ms", r.wall_ms},
        {"seed", r.seed},
        {"known_sat", r.known_sat},
    };
    if (r.unsat_fraction >= 0.0) {
      row["unsat_fraction"] = r.unsat_fraction;
      row["undetermined_fraction"] = r.undetermined_fraction;
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace satmin
