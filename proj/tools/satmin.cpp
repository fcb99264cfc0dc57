// satmin command-line front end: solve, bench, preprocess, gen, factor.
//
// Exit codes (stable, scripts depend on them):
//   10  solve/factor found a verified satisfying assignment / factor pair
//   20  oracle proved the instance unsatisfiable (factor --oracle only)
//    0  completed without a satisfying outcome (budget exhausted) or
//       subcommand finished normally (gen, bench, preprocess, votes, traces)
//    2  bad input or bad arguments
//
// Relative output paths resolve under $SATMIN_OUT_DIR when that is set.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "satmin/bench.hpp"
#include "satmin/factor.hpp"
#include "satmin/preprocess.hpp"
#include "satmin/primes.hpp"

using namespace satmin;

namespace {

std::string out_path(const std::string& path) {
  if (path.empty()) return path;
  const char* dir = std::getenv("SATMIN_OUT_DIR");
  if (!dir || *dir == '\0') return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(dir) / p).string();
}

struct ConfigFlags {
  SolverConfig config;
  std::vector<double> weights;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-sweeps", config.max_sweeps, "Sweep budget");
    cmd->add_option("--seed", config.seed, "PRNG seed");
    cmd->add_option("--inertia-depth", config.inertia_depth, "Lagged points blended into A (K)");
    cmd->add_option("--weights", weights, "Inertia weights, lag 0 first (must sum to 1)");
    cmd->add_option("--reflection-period", config.reflection_period,
                    "Anti-gradient reflection every P sweeps (0 = off)");
    cmd->add_option("--stagnation-window", config.stagnation_window,
                    "Sweeps without best-F improvement before a trajectory change");
    cmd->add_option("--stagnation-eps", config.stagnation_epsilon, "Improvement threshold");
    cmd->add_option("--perturb", config.perturb_magnitude, "Trajectory kick magnitude in (0,1]");
    cmd->add_option("--division-eps", config.division_epsilon,
                    "Keep the old value when the blended A falls at or below this");
    cmd->add_flag_callback(
        "--no-trajectory", [this] { config.trajectory_policy = TrajectoryPolicy::None; },
        "Disable trajectory changes");
  }

  SolverConfig finalize() {
    if (!weights.empty()) {
      config.inertia_weights = weights;
      config.inertia_depth = static_cast<int>(weights.size());
    }
    config.validate();
    return config;
  }
};

void print_model(const Assignment& a) {
  std::cout << "s SATISFIABLE\nv ";
  for (int v = 1; v <= a.size(); ++v) std::cout << (a.value(v) ? v : -v) << ' ';
  std::cout << "0\n";
}

// Plant files hold one assignment as signed literals ending in 0, the format
// `gen --plant-out` writes.
Assignment read_plant_file(const std::string& path, int num_vars) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open plant file: " + path);
  std::vector<bool> bits(static_cast<std::size_t>(num_vars), false);
  int lit;
  while (in >> lit && lit != 0) {
    const int var = lit > 0 ? lit : -lit;
    if (var > num_vars) throw std::runtime_error("plant literal out of range");
    bits[static_cast<std::size_t>(var) - 1] = lit > 0;
  }
  return Assignment(std::move(bits));
}

int cmd_solve(const std::string& path, ConfigFlags& flags, const std::string& trace_path,
              const std::string& plant_path) {
  const Cnf cnf = read_dimacs_file(path);
  SolverConfig config = flags.finalize();
  config.record_trace = !trace_path.empty();
  TraceProbe probe;
  if (!plant_path.empty()) {
    const Assignment plant = read_plant_file(plant_path, cnf.num_vars);
    probe = [plant](const RelaxedPoint& x) {
      int match = 0;
      for (int v = 1; v <= plant.size(); ++v)
        if ((x.values[static_cast<std::size_t>(v) - 1] >= 0.5) == plant.value(v)) ++match;
      return plant.size() == 0 ? 0.0 : static_cast<double>(match) / plant.size();
    };
  }
  const SolveOutcome out = solve(cnf, config, std::nullopt, probe);
  if (!trace_path.empty()) {
    std::ofstream os(out_path(trace_path));
    if (!os) throw std::runtime_error("cannot write trace: " + trace_path);
    write_trace_csv(out.trace, os);
  }
  std::cout << "c sweeps " << out.sweeps_used << " best_f " << out.best_f << '\n';
  if (out.status == SolveStatus::Satisfied) {
    print_model(*out.assignment);
    return 10;
  }
  std::cout << "s UNKNOWN\n";
  return 0;
}

int cmd_gen(const std::string& mode, int n_vars, int n_clauses, std::uint64_t seed,
            const std::string& out, const std::string& plant_out) {
  Cnf cnf;
  if (mode == "uniform") {
    cnf = gen_uniform_3sat(n_vars, n_clauses, seed);
  } else if (mode == "planted") {
    auto [c, plant] = gen_planted(n_vars, n_clauses, seed);
    cnf = std::move(c);
    if (!plant_out.empty()) {
      std::ofstream os(out_path(plant_out));
      if (!os) throw std::runtime_error("cannot write plant file: " + plant_out);
      for (int v = 1; v <= plant.size(); ++v) os << (plant.value(v) ? v : -v) << ' ';
      os << "0\n";
    }
  } else {
    throw std::runtime_error("unknown generator mode: " + mode);
  }
  write_dimacs_file(cnf, out_path(out));
  std::cout << "c wrote " << cnf.num_vars << " vars, " << cnf.num_clauses() << " clauses\n";
  return 0;
}

int cmd_preprocess(const std::string& in, const std::string& out, int growth_bound,
                   const std::string& report_path) {
  const Cnf cnf = read_dimacs_file(in);
  const PreprocessResult r = preprocess(cnf, growth_bound);
  Cnf reduced;
  if (r.conflict) {
    // Canonical unsatisfiable output: one empty clause.
    reduced.num_vars = cnf.num_vars;
    reduced.clauses.push_back(Clause{});
    std::cout << "c conflict during preprocessing: input is unsatisfiable\n";
  } else {
    reduced = r.cnf;
  }
  write_dimacs_file(reduced, out_path(out));
  nlohmann::json j = {
      {"conflict", r.conflict},
      {"vars_before", r.report.vars_before},
      {"vars_after", r.report.vars_after},
      {"clauses_before", r.report.clauses_before},
      {"clauses_after", r.report.clauses_after},
      {"units_fixed", r.report.units_fixed},
      {"pures_fixed", r.report.pures_fixed},
      {"vars_eliminated", r.report.vars_eliminated},
      {"blocked_removed", r.report.blocked_removed},
  };
  if (!report_path.empty()) {
    std::ofstream os(out_path(report_path));
    if (!os) throw std::runtime_error("cannot write report: " + report_path);
    os << j.dump(2) << '\n';
  }
  std::cout << j.dump() << '\n';
  return 0;
}

int cmd_bench(CampaignSpec spec, const std::string& summary_path) {
  spec.csv_path = out_path(spec.csv_path);
  spec.json_path = out_path(spec.json_path);
  const CampaignReport report = run_campaign(spec);
  if (!summary_path.empty()) {
    std::ofstream os(out_path(summary_path));
    if (!os) throw std::runtime_error("cannot write summary: " + summary_path);
    write_parallel_summary_csv(report, os);
  }
  std::cout << "c solved " << report.solved << "/" << report.rows.size();
  if (report.known_sat_total > 0) std::cout << " (" << report.solved_pct << "% of known-SAT)";
  std::cout << ", max sweeps " << report.max_sweeps << ", median " << report.median_sweeps << '\n';
  return 0;
}

void write_votes_csv(const BitTestReport& report, const std::string& path) {
  std::ofstream os(out_path(path));
  if (!os) throw std::runtime_error("cannot write votes CSV: " + path);
  os << "group,position,predicted,votes_for,votes_total,confidence_pct\n";
  for (const BitVote& v : report.votes)
    os << (v.group == BitGroup::P ? 'p' : 'q') << ',' << v.position << ',' << v.predicted << ','
       << v.votes_for << ',' << v.votes_total << ',' << 100.0 * v.confidence << '\n';
}

void write_functional_csv(const FactorInstance& inst, const RelaxedPoint& x, int settle,
                          const std::string& path) {
  std::ofstream os(out_path(path));
  if (!os) throw std::runtime_error("cannot write comparison CSV: " + path);
  const bool with_truth = inst.ground_truth.has_value();
  os << (with_truth ? "group,position,f_right,f_wrong,difference,predicted,true_bit\n"
                    : "group,position,f0,f1,predicted\n");
  auto emit = [&](BitGroup group, int position, int var) {
    const FunctionalComparison fc = functional_comparison_test(inst, x, var, settle);
    if (!with_truth) {
      os << (group == BitGroup::P ? 'p' : 'q') << ',' << position << ',' << fc.f0 << ',' << fc.f1
         << ',' << fc.predicted << '\n';
      return;
    }
    const auto [p, q] = detail::oriented_truth(inst);
    const bool truth_bit = group == BitGroup::P ? p.bit(position) : q.bit(position);
    const double f_right = truth_bit ? fc.f1 : fc.f0;
    const double f_wrong = truth_bit ? fc.f0 : fc.f1;
    os << (group == BitGroup::P ? 'p' : 'q') << ',' << position << ',' << f_right << ',' << f_wrong
       << ',' << (f_right - f_wrong) << ',' << fc.predicted << ',' << (truth_bit ? 1 : 0) << '\n';
  };
  for (int j = 0; j < inst.p_width(); ++j) emit(BitGroup::P, j, inst.varmap.p_bits[static_cast<std::size_t>(j)]);
  for (int i = 0; i < inst.q_width(); ++i) emit(BitGroup::Q, i, inst.varmap.q_bits[static_cast<std::size_t>(i)]);
}

void write_matrix_csv(const FactorInstance& inst, const RelaxedPoint& x, const std::string& path) {
  std::ofstream os(out_path(path));
  if (!os) throw std::runtime_error("cannot write matrix CSV: " + path);
  for (int i = 0; i < inst.q_width(); ++i) {
    for (int j = 0; j < inst.p_width(); ++j) {
      if (j) os << ',';
      os << x.values[static_cast<std::size_t>(
                         inst.varmap.partial[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) -
                     1];
    }
    os << '\n';
  }
}

struct FactorArgs {
  std::string n_text;
  bool oracle = false, relax = false, votes = false;
  std::string trace_bits, matrix_out, votes_csv, test2_csv;
  int runs = 30;
  std::vector<int> tests = {1, 2};
  int settle = 3;
  long oracle_budget = 500'000'000;
  std::string truth_p, truth_q;
};

int cmd_factor(FactorArgs& args, ConfigFlags& flags) {
  const BigUint n = BigUint::from_decimal(args.n_text);
  FactorInstance inst = encode(n);
  std::cout << "c n " << n.to_decimal() << " bits " << inst.n_bits << " vars "
            << inst.cnf.num_vars << " clauses " << inst.cnf.num_clauses() << '\n';

  if (!args.truth_p.empty() != !args.truth_q.empty())
    throw std::runtime_error("provide both --truth-p and --truth-q or neither");
  if (!args.truth_p.empty()) {
    inst.set_ground_truth(BigUint::from_decimal(args.truth_p), BigUint::from_decimal(args.truth_q));
  } else if (n.bit_length() <= 44) {
    // Small enough for quick trial division.
    if (auto pq = factor_semiprime_u64(n.to_u64()))
      inst.set_ground_truth(BigUint(pq->first), BigUint(pq->second));
  }

  const SolverConfig config = flags.finalize();

  if (args.oracle) {
    const OracleResult r = dpll_solve(inst.cnf, args.oracle_budget);
    if (r.status == OracleStatus::Unsat) {
      std::cout << n.to_decimal() << " has no factorization in the encoded widths\n";
      return 20;
    }
    if (r.status == OracleStatus::BudgetExceeded) {
      std::cout << "c oracle budget exceeded\n";
      return 0;
    }
    const auto [p, q] = decode(*r.model, inst);
    std::cout << n.to_decimal() << " = " << p.to_decimal() << " x " << q.to_decimal() << '\n';
    return 10;
  }

  if (args.votes) {
    std::set<BitTestKind> kinds;
    for (int t : args.tests) {
      if (t == 1) kinds.insert(BitTestKind::MatrixCluster);
      else if (t == 2) kinds.insert(BitTestKind::FunctionalComparison);
      else throw std::runtime_error("unknown test id (use 1 and/or 2)");
    }
    const BitTestReport report = vote(inst, args.runs, config, kinds, args.settle);
    if (!args.votes_csv.empty()) write_votes_csv(report, args.votes_csv);
    std::cout << "c votes on " << report.votes.size() << " positions over " << report.runs
              << " runs";
    if (report.accuracy) std::cout << ", accuracy " << 100.0 * *report.accuracy << "%";
    if (report.mean_right_bits)
      std::cout << ", right bits mean " << 100.0 * *report.mean_right_bits << "% max "
                << 100.0 * *report.max_right_bits << "%";
    std::cout << '\n';
    for (std::size_t i = 0; i < report.votes.size() && i < 10; ++i) {
      const BitVote& v = report.votes[i];
      std::cout << (v.group == BitGroup::P ? 'p' : 'q') << v.position << " = " << v.predicted
                << "  (" << v.votes_for << '/' << v.votes_total << ")\n";
    }
    if (!args.test2_csv.empty()) {
      SolverConfig snap = config;
      snap.seed = derive_seed(config.seed, 100);  // same seed as the first voting restart
      snap.record_trace = false;
      const SolveOutcome out = solve(inst.cnf, snap);
      write_functional_csv(inst, out.final_point, args.settle, args.test2_csv);
    }
    return 0;
  }

  // Default mode: the relaxation attack itself (also --relax explicitly).
  SolverConfig run_cfg = config;
  run_cfg.record_trace = !args.trace_bits.empty();
  TraceProbe probe;
  if (!args.trace_bits.empty() && inst.ground_truth) probe = right_bit_probe(inst);
  const SolveOutcome out = solve(inst.cnf, run_cfg, std::nullopt, probe);
  if (!args.trace_bits.empty()) {
    std::ofstream os(out_path(args.trace_bits));
    if (!os) throw std::runtime_error("cannot write trace: " + args.trace_bits);
    write_trace_csv(out.trace, os);
  }
  if (!args.matrix_out.empty()) write_matrix_csv(inst, out.final_point, args.matrix_out);
  if (inst.ground_truth)
    std::cout << "c right-bit fraction " << right_bit_fraction(out.final_point, inst) << '\n';
  if (out.status == SolveStatus::Satisfied) {
    const auto [p, q] = decode(*out.assignment, inst);
    if (!(p * q == n)) throw std::logic_error("decoded factors do not multiply back to n");
    std::cout << n.to_decimal() << " = " << p.to_decimal() << " x " << q.to_decimal() << '\n';
    return 10;
  }
  std::cout << "c budget exceeded after " << out.sweeps_used << " sweeps, best F " << out.best_f
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-relaxation SAT solver and factorization harness"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve a DIMACS CNF file");
  std::string solve_path, solve_trace, solve_plant;
  solve_cmd->add_option("file", solve_path, "DIMACS CNF input")->required();
  solve_cmd->add_option("--trace", solve_trace, "Write per-sweep trace CSV");
  solve_cmd->add_option("--plant", solve_plant,
                        "Known satisfying assignment; fills the trace's right-bit column");
  ConfigFlags solve_flags;
  solve_flags.attach(solve_cmd);

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random 3-SAT instance");
  std::string gen_mode = "uniform", gen_out, gen_plant_out;
  int gen_vars = 20, gen_clauses = 91;
  std::uint64_t gen_seed = 1;
  gen_cmd->add_option("--mode", gen_mode, "uniform | planted");
  gen_cmd->add_option("--vars", gen_vars, "Variable count");
  gen_cmd->add_option("--clauses", gen_clauses, "Clause count");
  gen_cmd->add_option("--seed", gen_seed, "PRNG seed");
  gen_cmd->add_option("-o,--out", gen_out, "Output DIMACS path")->required();
  gen_cmd->add_option("--plant-out", gen_plant_out, "Write the planted assignment here");

  // preprocess
  auto* pre_cmd = app.add_subcommand("preprocess", "Simplify a CNF by resolution rules");
  std::string pre_in, pre_out, pre_report;
  int pre_growth = 0;
  pre_cmd->add_option("file", pre_in, "DIMACS CNF input")->required();
  pre_cmd->add_option("-o,--out", pre_out, "Output DIMACS path")->required();
  pre_cmd->add_option("--growth-bound", pre_growth, "Allowed resolvent surplus per elimination");
  pre_cmd->add_option("--report", pre_report, "Write the JSON report here");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run a solver campaign");
  CampaignSpec bench_spec;
  std::string bench_gen_mode, bench_summary;
  int bench_count = 100;
  ConfigFlags bench_flags;
  bench_cmd->add_option("--name", bench_spec.name, "Campaign name");
  bench_cmd->add_option("--files", bench_spec.files, "DIMACS input files");
  bench_cmd->add_option("--gen", bench_gen_mode, "Generator mode: uniform | planted");
  int bench_vars = 20, bench_clauses = 91;
  bench_cmd->add_option("--vars", bench_vars, "Generator variable count");
  bench_cmd->add_option("--clauses", bench_clauses, "Generator clause count");
  bench_cmd->add_option("--count", bench_count, "Generator instance count");
  bench_cmd->add_option("--reps", bench_spec.repetitions, "Repetitions per instance");
  bench_cmd->add_flag("--parallel", bench_spec.parallel_mode, "Use the split/merge pipeline");
  bench_cmd->add_option("--merge-k", bench_spec.merge_k, "Interpolation family size");
  bench_cmd->add_flag("--verify", bench_spec.oracle_verify,
                      "Keep only oracle-verified-SAT generated instances");
  bench_cmd->add_option("--workers", bench_spec.workers, "Worker threads (0 = hardware)");
  bench_cmd->add_option("--csv", bench_spec.csv_path, "Per-row CSV output");
  bench_cmd->add_option("--json", bench_spec.json_path, "JSON report output");
  bench_cmd->add_option("--summary", bench_summary, "Table-style parallel summary CSV");
  bench_flags.attach(bench_cmd);

  // factor
  auto* factor_cmd = app.add_subcommand("factor", "Attack an odd modulus");
  FactorArgs factor_args;
  ConfigFlags factor_flags;
  factor_cmd->add_option("n", factor_args.n_text, "Modulus (decimal)")->required();
  factor_cmd->add_flag("--oracle", factor_args.oracle, "Exact factorization via DPLL");
  factor_cmd->add_flag("--relax", factor_args.relax, "Relaxation attack (default mode)");
  factor_cmd->add_flag("--votes", factor_args.votes, "Bit-voting report (tests 1 and 2)");
  factor_cmd->add_option("--trace-bits", factor_args.trace_bits,
                         "Per-sweep right-bit-fraction trace CSV");
  factor_cmd->add_option("--matrix-out", factor_args.matrix_out,
                         "Partial-product matrix snapshot CSV");
  factor_cmd->add_option("--votes-csv", factor_args.votes_csv, "Voting report CSV");
  factor_cmd->add_option("--test2-csv", factor_args.test2_csv,
                         "Functional-comparison report CSV");
  factor_cmd->add_option("--runs", factor_args.runs, "Voting restarts");
  factor_cmd->add_option("--tests", factor_args.tests, "Enabled tests (1 and/or 2)");
  factor_cmd->add_option("--settle", factor_args.settle, "Settling sweeps for test 2");
  factor_cmd->add_option("--oracle-budget", factor_args.oracle_budget, "DPLL node budget");
  factor_cmd->add_option("--truth-p", factor_args.truth_p, "Known factor p (decimal)");
  factor_cmd->add_option("--truth-q", factor_args.truth_q, "Known factor q (decimal)");
  factor_flags.attach(factor_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_path, solve_flags, solve_trace, solve_plant);
    if (gen_cmd->parsed())
      return cmd_gen(gen_mode, gen_vars, gen_clauses, gen_seed, gen_out, gen_plant_out);
    if (pre_cmd->parsed()) return cmd_preprocess(pre_in, pre_out, pre_growth, pre_report);
    if (bench_cmd->parsed()) {
      if (!bench_gen_mode.empty()) {
        GeneratorSpec gen;
        gen.kind = bench_gen_mode == "planted" ? GeneratorSpec::Kind::Planted
                                               : GeneratorSpec::Kind::Uniform;
        gen.n_vars = bench_vars;
        gen.n_clauses = bench_clauses;
        gen.count = bench_count;
        bench_spec.generator = gen;
      }
      bench_spec.config = bench_flags.finalize();
      return cmd_bench(bench_spec, bench_summary);
    }
    if (factor_cmd->parsed()) return cmd_factor(factor_args, factor_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
