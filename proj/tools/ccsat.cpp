// ccsat: solve, compile, encode, generate, verify and benchmark theories
// with cardinality atoms.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ccsat/bench.hpp"
#include "ccsat/compile.hpp"
#include "ccsat/encode.hpp"
#include "ccsat/io.hpp"
#include "ccsat/solve.hpp"

namespace {

using namespace ccsat;

constexpr int kExitModel = 10;
constexpr int kExitUnknown = 20;
constexpr int kExitNotSimple = 2;

std::ifstream open_in(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  return in;
}

// Writes through a buffer so a failed command leaves no partial file.
void write_out(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    throw std::runtime_error("cannot write " + path);
}

bool is_dimacs(const std::string &path) { return std::filesystem::path(path).extension() == ".cnf"; }

Theory load_theory(const std::string &path) {
  auto in = open_in(path);
  Theory t = is_dimacs(path) ? theory_from_cnf(parse_dimacs(in)) : parse_ccnf(in);
  validate(t);
  return t;
}

struct SolveArgs {
  std::string solver = "vb";
  std::string input;
  std::string model_out;
  std::string compile_method;
  std::uint64_t seed = 0;
  std::uint64_t tries = 100;
  std::uint64_t flips = 100000;
  double noise = 0.4;
  double timeout_s = 0;
  bool joint = false;
};

int run_solve(const SolveArgs &a) {
  const Theory theory = load_theory(a.input);
  SolverConfig cfg;
  cfg.solver = parse_solver_kind(a.solver);
  cfg.seed = a.seed;
  cfg.max_tries = a.tries;
  cfg.max_flips = a.flips;
  cfg.noise = a.noise;
  cfg.df_joint_breakcount = a.joint;
  if (a.timeout_s > 0)
    cfg.deadline = std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(a.timeout_s));
  if (!a.compile_method.empty() && cfg.solver != SolverKind::wsat)
    throw CLI::ValidationError("--compile", "only applies to --solver wsat");

  SolveResult r;
  try {
    if (cfg.solver == SolverKind::wsat && (theory.has_catoms() || !a.compile_method.empty())) {
      const CompiledCnf cc = compile(
          theory, parse_compile_method(a.compile_method.empty() ? "basic" : a.compile_method));
      r = wsat_cnf(cc.cnf, cfg);
      if (r.model)
        r.model = project_model(cc, *r.model);
    } else {
      r = solve(theory, cfg);
    }
  } catch (const NotSimpleError &e) {
    std::cerr << "ccsat: " << e.what() << "\n";
    return kExitNotSimple;
  }
  if (r.model && !eval_theory(theory, *r.model))
    throw std::logic_error("model failed verification");

  write_out(a.model_out, write_model(r.model));
  std::cerr << "c solver " << a.solver << " tries " << r.tries_used << " flips " << r.flips_used
            << " time_ms " << std::chrono::duration<double, std::milli>(r.elapsed).count()
            << (r.timed_out ? " timeout" : "") << "\n";
  return r.model ? kExitModel : kExitUnknown;
}

int run_compile(const std::string &method, const std::string &input, const std::string &output,
                std::uint64_t budget) {
  const CompiledCnf cc = compile(load_theory(input), parse_compile_method(method), budget);
  write_out(output, write_dimacs(cc.cnf, cc.atom_map.comments()));
  std::cerr << "c " << method << " clauses " << cc.stats.clauses << " literals "
            << cc.stats.literals << " aux_atoms " << cc.stats.aux_atoms << "\n";
  return 0;
}

int run_verify(const std::string &theory_path, const std::string &model_path) {
  const Theory t = load_theory(theory_path);
  auto in = open_in(model_path);
  const auto model = parse_model(in, t.num_atoms);
  if (!model) {
    std::cout << "no model\n";
    return 1;
  }
  const bool ok = eval_theory(t, *model);
  std::cout << (ok ? "valid\n" : "invalid\n");
  return ok ? 0 : 1;
}

std::vector<std::string> split_csv(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty())
      out.push_back(item);
  return out;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Local search and compilation for theories with cardinality atoms"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---- solve
  SolveArgs sa;
  auto *solve_cmd = app.add_subcommand(
      "solve", "Search for a model. Exit code 10: model found, 20: unknown, 2: df on a "
               "theory that is not simple.");
  solve_cmd->add_option("--solver", sa.solver, "vb, df or wsat")
      ->check(CLI::IsMember({"vb", "df", "wsat"}))
      ->capture_default_str();
  solve_cmd->add_option("--input", sa.input, "CCNF theory, or DIMACS if it ends in .cnf")
      ->required()
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--seed", sa.seed)->capture_default_str();
  solve_cmd->add_option("--tries", sa.tries, "Max-Tries")->capture_default_str();
  solve_cmd->add_option("--flips", sa.flips, "Max-Flips per try")->capture_default_str();
  solve_cmd
      ->add_option("--noise", sa.noise,
                   "probability of the greedy (minimum break-count) move; the random move "
                   "is taken with probability 1 - noise")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  solve_cmd->add_option("--timeout-s", sa.timeout_s, "wall-clock limit, 0 for none");
  solve_cmd->add_option("--model-out", sa.model_out, "model file (default stdout)");
  solve_cmd->add_flag("--df-joint-breakcount", sa.joint,
                      "df: score a flip together with its companion");
  solve_cmd->add_option("--compile", sa.compile_method,
                        "wsat: compile c-atoms with basic, uc or bc first (default basic)")
      ->check(CLI::IsMember({"basic", "uc", "bc"}));
  solve_cmd->callback([&] { exit_code = run_solve(sa); });

  // ---- compile
  std::string c_method = "basic", c_input, c_output;
  std::uint64_t c_budget = kDefaultClauseBudget;
  auto *compile_cmd = app.add_subcommand("compile", "Eliminate c-atoms into DIMACS CNF");
  compile_cmd->add_option("--method", c_method)
      ->check(CLI::IsMember({"basic", "uc", "bc"}))
      ->capture_default_str();
  compile_cmd->add_option("--input", c_input)->required()->check(CLI::ExistingFile);
  compile_cmd->add_option("--output", c_output, "DIMACS file (default stdout)");
  compile_cmd->add_option("--budget", c_budget, "basic: maximum number of clauses")
      ->capture_default_str();
  compile_cmd->callback([&] { exit_code = run_compile(c_method, c_input, c_output, c_budget); });

  // ---- encode
  auto *encode_cmd = app.add_subcommand("encode", "Encode a problem instance as CCNF");
  encode_cmd->require_subcommand(1);
  std::string e_input, e_output;
  std::uint32_t e_k = 0;
  auto graph_encoder = [&](const char *name, const char *help, auto encode) {
    auto *cmd = encode_cmd->add_subcommand(name, help);
    cmd->add_option("--input", e_input, ".col graph")->required()->check(CLI::ExistingFile);
    cmd->add_option("-k", e_k)->required();
    cmd->add_option("--output", e_output, "CCNF file (default stdout)");
    cmd->callback([&, encode] {
      auto in = open_in(e_input);
      write_out(e_output, write_ccnf(encode(parse_col_graph(in), e_k)));
    });
  };
  graph_encoder("color", "k-coloring: one color per vertex, endpoints differ", encode_coloring);
  graph_encoder("vc", "vertex cover of size at most k", encode_vertex_cover);
  auto *enc_latin = encode_cmd->add_subcommand("latin", "latin square completion");
  enc_latin->add_option("--input", e_input, "latin instance")->required()->check(CLI::ExistingFile);
  enc_latin->add_option("--output", e_output, "CCNF file (default stdout)");
  enc_latin->callback([&] {
    auto in = open_in(e_input);
    write_out(e_output, write_ccnf(encode_latin(parse_latin(in))));
  });

  // ---- gen
  auto *gen_cmd = app.add_subcommand("gen", "Generate instances");
  gen_cmd->require_subcommand(1);
  std::uint32_t g_vertices = 0, g_edges = 0, g_colors = 0, g_cover = 0, g_order = 0, g_givens = 0;
  std::uint64_t g_seed = 0;
  std::string g_output;
  auto gen_common = [&](CLI::App *cmd) {
    cmd->add_option("--seed", g_seed)->capture_default_str();
    cmd->add_option("--output", g_output, "output file (default stdout)");
  };
  auto *gen_color = gen_cmd->add_subcommand("color", "graph with a planted k-coloring");
  gen_color->add_option("--vertices", g_vertices)->required();
  gen_color->add_option("--colors", g_colors)->required();
  gen_color->add_option("--edges", g_edges)->required();
  gen_common(gen_color);
  gen_color->callback([&] {
    write_out(g_output,
              write_col_graph(gen_planted_coloring_graph(g_vertices, g_colors, g_edges, g_seed)));
  });
  auto *gen_vc = gen_cmd->add_subcommand("vc", "graph with a planted vertex cover");
  gen_vc->add_option("--vertices", g_vertices)->required();
  gen_vc->add_option("--cover", g_cover)->required();
  gen_vc->add_option("--edges", g_edges)->required();
  gen_common(gen_vc);
  gen_vc->callback([&] {
    write_out(g_output,
              write_col_graph(gen_planted_cover_graph(g_vertices, g_cover, g_edges, g_seed)));
  });
  auto *gen_graph = gen_cmd->add_subcommand("graph", "uniform random graph (no planted solution)");
  gen_graph->add_option("--vertices", g_vertices)->required();
  gen_graph->add_option("--edges", g_edges)->required();
  gen_common(gen_graph);
  gen_graph->callback(
      [&] { write_out(g_output, write_col_graph(gen_random_graph(g_vertices, g_edges, g_seed))); });
  auto *gen_latin = gen_cmd->add_subcommand("latin", "completable latin square instance");
  gen_latin->add_option("--order", g_order)->required();
  gen_latin->add_option("--givens", g_givens)->required();
  gen_common(gen_latin);
  gen_latin->callback(
      [&] { write_out(g_output, write_latin(gen_latin_instance(g_order, g_givens, g_seed))); });

  // ---- verify
  std::string v_theory, v_model;
  auto *verify_cmd = app.add_subcommand("verify", "Check a model against a theory (exit 0 if valid)");
  verify_cmd->add_option("--theory", v_theory)->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--model", v_model)->required()->check(CLI::ExistingFile);
  verify_cmd->callback([&] { exit_code = run_verify(v_theory, v_model); });

  // ---- bench
  std::vector<std::string> b_instances;
  std::string b_solvers = "vb,df", b_noise = "0.4", b_out;
  double b_timeout = 0;
  bool b_no_time = false;
  BenchPlan plan;
  auto *bench_cmd = app.add_subcommand("bench", "Run instances x solvers x noise values");
  bench_cmd->add_option("--instances", b_instances, "directory, glob or file (repeatable)")
      ->required();
  bench_cmd->add_option("--solvers", b_solvers,
                        "comma list of vb, df, df-joint, wsat, wsat-basic, wsat-uc, wsat-bc")
      ->capture_default_str();
  bench_cmd->add_option("--noise", b_noise, "comma list of greedy-move probabilities")
      ->capture_default_str();
  bench_cmd->add_option("--tries", plan.tries)->capture_default_str();
  bench_cmd->add_option("--flips", plan.flips)->capture_default_str();
  bench_cmd->add_option("--timeout-s", b_timeout, "per-run limit, 0 for none");
  bench_cmd->add_option("--reps", plan.reps)->capture_default_str();
  bench_cmd->add_option("--seed", plan.seed)->capture_default_str();
  bench_cmd->add_option("--jobs", plan.jobs, "worker threads")->capture_default_str();
  bench_cmd->add_option("--out", b_out, "CSV file (default stdout)");
  bench_cmd->add_flag("--no-time", b_no_time,
                      "leave time_ms empty so the CSV depends only on the plan");
  bench_cmd->callback([&] {
    for (const auto &spec : b_instances)
      for (auto &p : discover_instances(spec))
        plan.instances.push_back(std::move(p));
    for (const auto &id : split_csv(b_solvers))
      plan.solvers.push_back(parse_solver_spec(id));
    plan.noises.clear();
    for (const auto &p : split_csv(b_noise))
      plan.noises.push_back(std::stod(p));
    if (b_timeout > 0)
      plan.timeout_s = b_timeout;
    const auto records = run_plan(plan);
    write_out(b_out, emit_csv(records, !b_no_time));
    write_summary(summarize(records), b_out.empty() || b_out == "-" ? std::cerr : std::cout);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  } catch (const ParseError &e) {
    std::cerr << "ccsat: parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "ccsat: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
