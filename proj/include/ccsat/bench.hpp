#pragma once

// Experiment runner: instances x solvers x noise values x repetitions, with
// per-run timeouts, verified models, CSV output and per-family summaries.

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccsat/compile.hpp"
#include "ccsat/solve.hpp"

namespace ccsat {

/// A solver column of the plan. Ids: vb, df, df-joint, wsat (= wsat-basic),
/// wsat-basic, wsat-uc, wsat-bc. The wsat variants compile the theory first.
struct SolverSpec {
  std::string id;
  SolverKind kind = SolverKind::vb;
  std::optional<CompileMethod> compile;
  bool df_joint = false;
};

SolverSpec parse_solver_spec(const std::string &id);

struct BenchPlan {
  std::vector<std::string> instances;
  std::vector<SolverSpec> solvers;
  std::vector<double> noises{0.4};
  std::uint64_t tries = 100;
  std::uint64_t flips = 100000;
  std::optional<double> timeout_s;
  std::uint32_t reps = 1;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::uint64_t compile_budget = kDefaultClauseBudget;

  /// Throws std::invalid_argument for empty lists or bad values.
  void check() const;
};

struct RunRecord {
  std::string instance;
  std::string family; // name of the directory holding the instance
  std::string solver;
  std::uint64_t seed = 0;
  double noise = 0;
  bool solved = false;
  std::uint64_t tries_used = 0;
  std::uint64_t flips_used = 0;
  double elapsed_ms = 0;
  bool timed_out = false;
  std::string note; // why an unsolved run failed, if not just the budget

  friend bool operator==(const RunRecord &, const RunRecord &) = default;
};

/// A loaded instance, with the compiled CNF for every method the plan needs.
struct BenchInstance {
  std::string id;
  std::string family;
  std::optional<Theory> theory;
  std::string load_error;
  std::map<CompileMethod, CompiledCnf> compiled;
  std::map<CompileMethod, std::string> compile_errors;
};

BenchInstance load_bench_instance(const std::string &path,
                                  const std::vector<CompileMethod> &methods,
                                  std::uint64_t compile_budget = kDefaultClauseBudget);

/// Solves one cell. For compiled pipelines the model is projected back to
/// the original atoms. run_plan re-verifies whatever model comes back.
using CellSolver =
    std::function<SolveResult(const BenchInstance &, const SolverSpec &, const SolverConfig &)>;

SolveResult default_cell_solver(const BenchInstance &inst, const SolverSpec &spec,
                                const SolverConfig &cfg);

/// Records are ordered by (instance, solver, noise, rep) in plan order no
/// matter how many workers run. Run seeds are plan.seed + rep.
std::vector<RunRecord> run_plan(const BenchPlan &plan,
                                const CellSolver &solver = default_cell_solver);

struct SummaryRow {
  std::string family;
  std::string solver;
  double noise = 0;
  std::size_t runs = 0;
  std::size_t solved = 0;
  std::size_t family_size = 0;  // distinct instances in the family
  std::size_t solvable = 0;     // instances solved by any run in the records
  std::size_t reps = 0;         // runs per instance for this solver and noise
  std::optional<double> mean_ms; // over solved runs only

  /// Solved runs over family_size * reps (every instance assumed satisfiable).
  double success_rate() const;
  /// Solved runs over solvable * reps; 0 when nothing was solved.
  double success_rate_solvable() const;
};

/// Rows sorted by (family, solver, noise).
std::vector<SummaryRow> summarize(const std::vector<RunRecord> &records);

/// "mean_seconds/rate%" as in a results table; "—/0%" when nothing was solved.
std::string format_cell(const SummaryRow &row);
void write_summary(const std::vector<SummaryRow> &rows, std::ostream &out);

/// Header `instance,solver,seed,noise,solved,tries_used,flips_used,time_ms`.
/// With include_time = false the time column is left empty, which makes the
/// output a pure function of the plan.
void emit_csv(const std::vector<RunRecord> &records, std::ostream &out, bool include_time = true);
std::string emit_csv(const std::vector<RunRecord> &records, bool include_time = true);

/// A directory (searched recursively for .ccnf and .cnf files), a glob
/// pattern, or a single file. Results are sorted.
std::vector<std::string> discover_instances(const std::string &spec);

} // namespace ccsat
