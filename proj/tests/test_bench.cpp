#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ccsat/bench.hpp"
#include "ccsat/encode.hpp"
#include "ccsat/io.hpp"

using namespace ccsat;
namespace fs = std::filesystem;

namespace {

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string &name)
      : path(fs::temp_directory_path() / ("ccsat_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string write_file(const fs::path &p, const std::string &text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
  return p.string();
}

std::vector<std::string> coloring_family(const fs::path &dir, int count) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i)
    out.push_back(write_file(dir / ("g" + std::to_string(i) + ".ccnf"),
                             write_ccnf(encode_coloring(
                                 gen_planted_coloring_graph(20, 3, 30, static_cast<std::uint64_t>(i)), 3))));
  return out;
}

RunRecord record(std::string family, std::string instance, bool solved, double ms) {
  RunRecord r;
  r.family = std::move(family);
  r.instance = std::move(instance);
  r.solver = "vb";
  r.noise = 0.4;
  r.solved = solved;
  r.elapsed_ms = ms;
  return r;
}

} // namespace

TEST_CASE("run_plan covers every cell") {
  TempDir tmp("cells");
  BenchPlan plan;
  plan.instances = coloring_family(tmp.path / "col", 3);
  plan.solvers = {parse_solver_spec("vb"), parse_solver_spec("df")};
  plan.noises = {0.3, 0.4};
  const auto records = run_plan(plan);
  REQUIRE(records.size() == 12);
  CHECK(records[0].instance == plan.instances[0]);
  CHECK(records[0].solver == "vb");
  CHECK(records[1].noise == 0.4);
  CHECK(records[2].solver == "df");
  CHECK(records[4].instance == plan.instances[1]);
  for (const auto &r : records) {
    CHECK(r.solved);
    CHECK(r.family == "col");
  }
}

TEST_CASE("run_plan never aborts on a bad cell") {
  TempDir tmp("bad");
  BenchPlan plan;
  plan.instances = coloring_family(tmp.path / "col", 1);
  plan.instances.push_back(write_file(tmp.path / "col" / "broken.ccnf", "p ccnf 2 1\n1 5 0\n"));
  plan.instances.push_back(
      write_file(tmp.path / "ls" / "l.ccnf", write_ccnf(encode_latin(LatinInstance{3, {}}))));
  plan.solvers = {parse_solver_spec("df")};
  const auto records = run_plan(plan);
  REQUIRE(records.size() == 3);
  CHECK(records[0].solved);
  CHECK_FALSE(records[1].solved);
  CHECK(records[1].note.starts_with("error:"));
  CHECK_FALSE(records[2].solved);
  CHECK(records[2].note.find("not simple") != std::string::npos);
}

TEST_CASE("a model that fails verification is recorded as invalid") {
  TempDir tmp("invalid");
  BenchPlan plan;
  plan.instances = coloring_family(tmp.path / "col", 2);
  plan.solvers = {parse_solver_spec("vb")};
  auto liar = [](const BenchInstance &inst, const SolverSpec &, const SolverConfig &) {
    SolveResult r;
    r.outcome = Outcome::model_found;
    r.model = Assignment(inst.theory->num_atoms); // all false: no vertex colored
    return r;
  };
  const auto records = run_plan(plan, liar);
  REQUIRE(records.size() == 2);
  for (const auto &r : records) {
    CHECK_FALSE(r.solved);
    CHECK(r.note.starts_with("invalid"));
  }
}

TEST_CASE("compiled pipelines and determinism across workers") {
  TempDir tmp("det");
  BenchPlan plan;
  plan.instances = coloring_family(tmp.path / "col", 3);
  plan.solvers = {parse_solver_spec("vb"), parse_solver_spec("wsat-uc"),
                  parse_solver_spec("wsat-bc"), parse_solver_spec("wsat")};
  plan.noises = {0.2, 0.5};
  plan.reps = 2;
  plan.seed = 17;
  const std::string a = emit_csv(run_plan(plan), false);
  plan.jobs = 4;
  const auto records = run_plan(plan);
  CHECK(emit_csv(records, false) == a);
  for (const auto &r : records)
    CHECK(r.solved);
  CHECK(records[1].seed == 18);
}

TEST_CASE("timeouts end a run as unsolved") {
  TempDir tmp("timeout");
  BenchPlan plan;
  // Dense random graph: not 3-colorable, so only the timeout stops the run.
  plan.instances = {write_file(tmp.path / "hard" / "g.ccnf",
                               write_ccnf(encode_coloring(gen_random_graph(60, 900, 1), 3)))};
  plan.solvers = {parse_solver_spec("vb")};
  plan.timeout_s = 0.2;
  const auto start = std::chrono::steady_clock::now();
  const auto records = run_plan(plan);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  REQUIRE(records.size() == 1);
  CHECK_FALSE(records[0].solved);
  CHECK(records[0].note == "timeout");
  CHECK(seconds < 2.0);
}

TEST_CASE("summarize") {
  std::vector<RunRecord> rs;
  for (int i = 0; i < 50; ++i)
    rs.push_back(record("C1", "i" + std::to_string(i), i < 48, 1000.0));
  auto rows = summarize(rs);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].success_rate() == doctest::Approx(0.96));
  CHECK(rows[0].success_rate_solvable() == doctest::Approx(1.0));
  CHECK(format_cell(rows[0]) == "1.000/96%");

  rows = summarize({record("F", "a", true, 1), record("F", "b", true, 2), record("F", "c", true, 3)});
  REQUIRE(rows[0].mean_ms);
  CHECK(*rows[0].mean_ms == doctest::Approx(2.0));

  rows = summarize({record("F", "a", false, 5), record("F", "b", false, 5)});
  CHECK_FALSE(rows[0].mean_ms);
  CHECK(rows[0].success_rate() == 0);
  CHECK(format_cell(rows[0]) == "—/0%");

  CHECK(summarize({}).empty());
  const auto again = summarize(rs);
  CHECK(again.size() == 1);
  CHECK(again[0].solved == 48);
}

TEST_CASE("emit_csv") {
  RunRecord r = record("F", "x.ccnf", true, 12.5);
  r.seed = 3;
  r.tries_used = 1;
  r.flips_used = 42;
  CHECK(emit_csv({r}) == "instance,solver,seed,noise,solved,tries_used,flips_used,time_ms\n"
                         "x.ccnf,vb,3,0.4,1,1,42,12.500\n");
  CHECK(emit_csv({r}, false) ==
        "instance,solver,seed,noise,solved,tries_used,flips_used,time_ms\n"
        "x.ccnf,vb,3,0.4,1,1,42,\n");
}

TEST_CASE("plan validation and solver ids") {
  BenchPlan plan;
  CHECK_THROWS_AS(plan.check(), std::invalid_argument);
  plan.instances = {"x"};
  CHECK_THROWS_AS(plan.check(), std::invalid_argument);
  plan.solvers = {parse_solver_spec("vb")};
  CHECK_NOTHROW(plan.check());
  plan.noises = {1.2};
  CHECK_THROWS_AS(plan.check(), std::invalid_argument);
  CHECK(parse_solver_spec("wsat").compile == CompileMethod::basic);
  CHECK(parse_solver_spec("df-joint").df_joint);
  CHECK_THROWS_AS(parse_solver_spec("wsat-xx"), std::invalid_argument);
  CHECK_THROWS_AS(parse_solver_spec("foo"), std::invalid_argument);
}

TEST_CASE("discover_instances") {
  TempDir tmp("discover");
  write_file(tmp.path / "a" / "2.ccnf", "p ccnf 1 0\n");
  write_file(tmp.path / "a" / "1.cnf", "p cnf 1 0\n");
  write_file(tmp.path / "a" / "notes.txt", "x");
  write_file(tmp.path / "b" / "3.ccnf", "p ccnf 1 0\n");
  const auto all = discover_instances(tmp.path.string());
  CHECK(all.size() == 3);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(discover_instances((tmp.path / "a" / "*.ccnf").string()).size() == 1);
  CHECK(discover_instances((tmp.path / "b" / "3.ccnf").string()).size() == 1);
  CHECK_THROWS_AS(discover_instances((tmp.path / "nope").string()), std::invalid_argument);
}
