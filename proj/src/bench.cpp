#include "ccsat/bench.hpp"

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "ccsat/io.hpp"

namespace ccsat {
namespace fs = std::filesystem;

namespace {

std::string shortest(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

bool is_instance_file(const fs::path &p) {
  return p.extension() == ".ccnf" || p.extension() == ".cnf";
}

} // namespace

SolverSpec parse_solver_spec(const std::string &id) {
  SolverSpec s;
  s.id = id;
  if (id == "vb")
    s.kind = SolverKind::vb;
  else if (id == "df")
    s.kind = SolverKind::df;
  else if (id == "df-joint") {
    s.kind = SolverKind::df;
    s.df_joint = true;
  } else if (id == "wsat" || id.starts_with("wsat-")) {
    s.kind = SolverKind::wsat;
    s.compile = parse_compile_method(id == "wsat" ? "basic" : id.substr(5));
  } else {
    throw std::invalid_argument("unknown solver '" + id +
                                "' (expected vb, df, df-joint, wsat, wsat-basic, wsat-uc or wsat-bc)");
  }
  return s;
}

void BenchPlan::check() const {
  if (instances.empty())
    throw std::invalid_argument("bench plan has no instances");
  if (solvers.empty())
    throw std::invalid_argument("bench plan has no solvers");
  if (noises.empty())
    throw std::invalid_argument("bench plan has no noise values");
  if (reps == 0)
    throw std::invalid_argument("reps must be positive");
  if (timeout_s && !(*timeout_s > 0))
    throw std::invalid_argument("timeout must be positive");
  SolverConfig cfg;
  cfg.max_tries = tries;
  cfg.max_flips = flips;
  for (double p : noises) {
    cfg.noise = p;
    cfg.check();
  }
}

BenchInstance load_bench_instance(const std::string &path,
                                  const std::vector<CompileMethod> &methods,
                                  std::uint64_t compile_budget) {
  BenchInstance inst;
  inst.id = path;
  inst.family = fs::path(path).parent_path().filename().string();
  try {
    std::ifstream in(path);
    if (!in)
      throw std::runtime_error("cannot open " + path);
    if (fs::path(path).extension() == ".cnf")
      inst.theory = theory_from_cnf(parse_dimacs(in));
    else
      inst.theory = parse_ccnf(in);
    validate(*inst.theory);
  } catch (const std::exception &e) {
    inst.theory.reset();
    inst.load_error = e.what();
    return inst;
  }
  for (CompileMethod m : methods) {
    try {
      inst.compiled.emplace(m, compile(*inst.theory, m, compile_budget));
    } catch (const std::exception &e) {
      inst.compile_errors.emplace(m, e.what());
    }
  }
  return inst;
}

SolveResult default_cell_solver(const BenchInstance &inst, const SolverSpec &spec,
                                const SolverConfig &cfg) {
  if (!inst.theory)
    throw std::runtime_error("instance did not load: " + inst.load_error);
  if (!spec.compile)
    return solve(*inst.theory, cfg);
  if (auto err = inst.compile_errors.find(*spec.compile); err != inst.compile_errors.end())
    throw std::runtime_error("compile failed: " + err->second);
  const CompiledCnf &cc = inst.compiled.at(*spec.compile);
  SolveResult r = wsat_cnf(cc.cnf, cfg);
  if (r.model)
    r.model = project_model(cc, *r.model);
  return r;
}

std::vector<RunRecord> run_plan(const BenchPlan &plan, const CellSolver &solver) {
  plan.check();
  std::vector<CompileMethod> methods;
  for (const auto &s : plan.solvers)
    if (s.compile && std::find(methods.begin(), methods.end(), *s.compile) == methods.end())
      methods.push_back(*s.compile);

  const std::size_t ns = plan.solvers.size(), np = plan.noises.size(), nr = plan.reps;
  const std::size_t per_instance = ns * np * nr;
  const std::size_t total = plan.instances.size() * per_instance;
  std::vector<BenchInstance> instances(plan.instances.size());
  std::vector<RunRecord> records(total);

  auto load = [&](std::size_t i) {
    instances[i] = load_bench_instance(plan.instances[i], methods, plan.compile_budget);
  };
  auto run_cell = [&](std::size_t cell) {
    const std::size_t i = cell / per_instance;
    const std::size_t s = cell / (np * nr) % ns;
    const std::size_t p = cell / nr % np;
    const std::size_t rep = cell % nr;
    const BenchInstance &inst = instances[i];
    const SolverSpec &spec = plan.solvers[s];

    RunRecord &rec = records[cell];
    rec.instance = inst.id;
    rec.family = inst.family;
    rec.solver = spec.id;
    rec.seed = plan.seed + rep;
    rec.noise = plan.noises[p];

    SolverConfig cfg;
    cfg.max_tries = plan.tries;
    cfg.max_flips = plan.flips;
    cfg.noise = rec.noise;
    cfg.seed = rec.seed;
    cfg.solver = spec.kind;
    cfg.df_joint_breakcount = spec.df_joint;
    if (plan.timeout_s)
      cfg.deadline = std::chrono::steady_clock::now() +
                     std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                         std::chrono::duration<double>(*plan.timeout_s));
    try {
      const SolveResult r = solver(inst, spec, cfg);
      rec.tries_used = r.tries_used;
      rec.flips_used = r.flips_used;
      rec.elapsed_ms = std::chrono::duration<double, std::milli>(r.elapsed).count();
      rec.timed_out = r.timed_out;
      if (r.model) {
        if (inst.theory && r.model->num_atoms() == inst.theory->num_atoms &&
            eval_theory(*inst.theory, *r.model))
          rec.solved = true;
        else
          rec.note = "invalid: model failed verification";
      } else if (r.timed_out) {
        rec.note = "timeout";
      }
    } catch (const std::exception &e) {
      rec.note = std::string("error: ") + e.what();
    }
  };

  // Work items are claimed from a shared counter; each writes only its own
  // slot, so the output order is fixed.
  auto parallel = [&](std::size_t count, auto &&body) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(std::max(1u, plan.jobs), count));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;)
        body(i);
    };
    if (workers <= 1) {
      work();
      return;
    }
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(work);
  };
  parallel(instances.size(), load);
  parallel(total, run_cell);
  return records;
}

double SummaryRow::success_rate() const {
  const std::size_t denom = family_size * reps;
  return denom ? static_cast<double>(solved) / static_cast<double>(denom) : 0.0;
}

double SummaryRow::success_rate_solvable() const {
  const std::size_t denom = solvable * reps;
  return denom ? static_cast<double>(solved) / static_cast<double>(denom) : 0.0;
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord> &records) {
  std::map<std::string, std::set<std::string>> members, solvable;
  for (const auto &r : records) {
    members[r.family].insert(r.instance);
    if (r.solved)
      solvable[r.family].insert(r.instance);
  }
  struct Acc {
    std::size_t runs = 0, solved = 0;
    double total_ms = 0;
  };
  std::map<std::tuple<std::string, std::string, double>, Acc> acc;
  for (const auto &r : records) {
    Acc &a = acc[{r.family, r.solver, r.noise}];
    ++a.runs;
    if (r.solved) {
      ++a.solved;
      a.total_ms += r.elapsed_ms;
    }
  }
  std::vector<SummaryRow> rows;
  for (const auto &[key, a] : acc) {
    SummaryRow row;
    std::tie(row.family, row.solver, row.noise) = key;
    row.runs = a.runs;
    row.solved = a.solved;
    row.family_size = members[row.family].size();
    row.solvable = solvable[row.family].size();
    row.reps = row.family_size ? a.runs / row.family_size : 0;
    if (a.solved)
      row.mean_ms = a.total_ms / static_cast<double>(a.solved);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_cell(const SummaryRow &row) {
  const std::string time = row.mean_ms ? fixed(*row.mean_ms / 1000.0, 3) : "—";
  return time + "/" + fixed(100.0 * row.success_rate(), 0) + "%";
}

void write_summary(const std::vector<SummaryRow> &rows, std::ostream &out) {
  out << "family\tsolver\tnoise\ttime_s/success\tsolved\truns\tsolvable_any\tsuccess_of_solvable\n";
  for (const auto &r : rows)
    out << r.family << '\t' << r.solver << '\t' << shortest(r.noise) << '\t' << format_cell(r)
        << '\t' << r.solved << '\t' << r.runs << '\t' << r.solvable << '/' << r.family_size
        << '\t' << fixed(100.0 * r.success_rate_solvable(), 0) << "%\n";
}

void emit_csv(const std::vector<RunRecord> &records, std::ostream &out, bool include_time) {
  out << "instance,solver,seed,noise,solved,tries_used,flips_used,time_ms\n";
  for (const auto &r : records) {
    out << r.instance << ',' << r.solver << ',' << r.seed << ',' << shortest(r.noise) << ','
        << (r.solved ? 1 : 0) << ',' << r.tries_used << ',' << r.flips_used << ',';
    if (include_time)
      out << fixed(r.elapsed_ms, 3);
    out << '\n';
  }
}

std::string emit_csv(const std::vector<RunRecord> &records, bool include_time) {
  std::ostringstream os;
  emit_csv(records, os, include_time);
  return os.str();
}

std::vector<std::string> discover_instances(const std::string &spec) {
  std::vector<std::string> out;
  std::error_code ec;
  if (fs::is_directory(spec, ec)) {
    for (const auto &e : fs::recursive_directory_iterator(spec))
      if (e.is_regular_file() && is_instance_file(e.path()))
        out.push_back(e.path().string());
  } else if (spec.find_first_of("*?[") != std::string::npos) {
    glob_t g{};
    if (glob(spec.c_str(), 0, nullptr, &g) == 0)
      for (std::size_t i = 0; i < g.gl_pathc; ++i)
        out.emplace_back(g.gl_pathv[i]);
    globfree(&g);
  } else if (fs::exists(spec, ec)) {
    out.push_back(spec);
  } else {
    throw std::invalid_argument("no such instance file or directory: " + spec);
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace ccsat
