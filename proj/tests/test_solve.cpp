#include <doctest.h>

#include <map>

#include "ccsat/compile.hpp"
#include "ccsat/encode.hpp"
#include "ccsat/solve.hpp"
#include "oracles.hpp"

using namespace ccsat;

namespace {

Theory theory(std::uint32_t n, std::vector<Clause> clauses) { return Theory{n, std::move(clauses), {}}; }
Literal cat(std::optional<std::uint32_t> lo, std::optional<std::uint32_t> hi, std::vector<AtomId> xs) {
  return Literal::catom(CAtom(lo, hi, std::move(xs)));
}

const GraphInstance kK3{3, {{1, 2}, {1, 3}, {2, 3}}};

} // namespace

TEST_CASE("falsecount") {
  CHECK(falsecount(CAtom(1, 1, {1, 2, 3}), 3) == 3);
  CHECK(falsecount(CAtom(1, 1, {1, 2, 3}), 1) == 0);
  CHECK(falsecount(CAtom(std::nullopt, 0, {1, 2}), 1) == 1);
  CHECK(falsecount(CAtom(9, std::nullopt, {1, 2}), 2) == 1);
}

TEST_CASE("falsecount counts fully false expansion clauses") {
  for (std::uint32_t n = 1; n <= 8; ++n) {
    std::vector<AtomId> xs;
    for (AtomId a = 1; a <= n; ++a)
      xs.push_back(a);
    for (int lo = -1; lo <= static_cast<int>(n) + 1; ++lo)
      for (int hi = -1; hi <= static_cast<int>(n) + 1; ++hi) {
        if (lo < 0 && hi < 0)
          continue;
        const CAtom c(lo < 0 ? std::nullopt : std::optional<std::uint32_t>(lo),
                      hi < 0 ? std::nullopt : std::optional<std::uint32_t>(hi), xs);
        const auto clauses = oracle::expand(c);
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
          const Assignment s = oracle::from_bits(n, b);
          std::uint64_t false_clauses = 0;
          for (const auto &cl : clauses)
            false_clauses += oracle::cnf_holds({cl}, s) ? 0 : 1;
          const auto t = static_cast<std::uint32_t>(std::popcount(b));
          CHECK(falsecount(c, t) == false_clauses);
          CHECK((falsecount(c, t) >= 1) == !oracle::catom_holds(c, s));
        }
      }
  }
}

TEST_CASE("virtual_unsat_count") {
  VirtualSearch all_true(theory(3, {Clause{{cat(1, 1, {1, 2, 3})}}}));
  all_true.reset(oracle::from_bits(3, 7));
  CHECK(all_true.virtual_unsat_count(0) == 3);
  all_true.reset(oracle::from_bits(3, 2));
  CHECK(all_true.virtual_unsat_count(0) == 0);

  VirtualSearch mixed(theory(3, {Clause{{cat(1, 1, {1, 2}), Literal::atom(3)}}}));
  mixed.reset(oracle::from_bits(3, 3));
  CHECK(mixed.virtual_unsat_count(0) == 1);
}

TEST_CASE("vb breakcount") {
  VirtualSearch s(theory(4, {Clause{{cat(1, 1, {1, 2, 3})}}}));
  s.reset(oracle::from_bits(4, 1));
  CHECK(s.breakcount(2) == 1);
  CHECK(s.breakcount(4) == 0);
  // Flipping a itself falsifies a|b|c only.
  CHECK(s.breakcount(1) == 1);
}

TEST_CASE("vb breakcount equals the explicit recount") {
  Rng rng(41);
  for (int i = 0; i < 80; ++i) {
    const Theory t = normalize_theory(oracle::random_theory(rng, 7, 4, 4, 3, 0.3));
    const auto expansion = oracle::materialize(t);
    VirtualSearch s(t);
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << t.num_atoms); ++b) {
      const Assignment sigma = oracle::from_bits(t.num_atoms, b);
      s.reset(sigma);
      for (AtomId x = 1; x <= t.num_atoms; ++x)
        CHECK(s.breakcount(x) == oracle::breakcount(expansion, sigma, x));
    }
  }
}

TEST_CASE("vb incremental state matches recomputation") {
  Rng rng(43);
  for (int i = 0; i < 60; ++i) {
    const Theory t = oracle::random_theory(rng, 10, 6, 6, 4, 0.3);
    VirtualSearch s(t);
    s.initialize(rng);
    for (int step = 0; step < 200; ++step) {
      s.flip(static_cast<AtomId>(1 + rng.below(t.num_atoms)));
      REQUIRE(s.consistent());
      std::size_t unsat = 0;
      for (const auto &cl : normalize_theory(t).clauses)
        unsat += oracle::holds(Theory{t.num_atoms, {cl}, {}}, s.assignment()) ? 0 : 1;
      CHECK(unsat == s.num_unsat());
    }
  }
}

TEST_CASE("cnf breakcounts equal the explicit recount") {
  Rng rng(47);
  for (int i = 0; i < 100; ++i) {
    Cnf cnf{6, {}};
    for (int c = 0; c < 10; ++c) {
      std::vector<int> cl;
      for (std::size_t j = 0, len = 1 + rng.below(4); j < len; ++j)
        cl.push_back(static_cast<int>(1 + rng.below(6)) * (rng.coin() ? 1 : -1));
      cnf.clauses.push_back(cl);
    }
    CnfSearch s(cnf);
    for (std::uint64_t b = 0; b < 64; ++b) {
      const Assignment sigma = oracle::from_bits(6, b);
      s.reset(sigma);
      CHECK(s.consistent());
      for (AtomId x = 1; x <= 6; ++x) {
        CHECK(s.breakcount(x) == oracle::breakcount(cnf.clauses, sigma, x));
        for (AtomId y = 1; y <= 6; ++y) {
          if (x == y)
            continue;
          Assignment both = sigma;
          both.flip(x);
          both.flip(y);
          std::uint64_t broken = 0;
          for (const auto &cl : cnf.clauses)
            broken += oracle::cnf_holds({cl}, sigma) && !oracle::cnf_holds({cl}, both) ? 1 : 0;
          CHECK(s.joint_breakcount(x, y) == broken);
        }
      }
    }
  }
}

TEST_CASE("generic_wsat returns at flip 0 when the start is a model") {
  const Theory t = theory(2, {Clause{{Literal::atom(1), Literal::atom(1, true)}}});
  SolverConfig cfg;
  const SolveResult r = solve_vb(t, cfg);
  CHECK(r.outcome == Outcome::model_found);
  CHECK(r.flips_used == 0);
  CHECK(r.tries_used == 1);
}

TEST_CASE("vb solves col(K3,3)") {
  const Theory t = encode_coloring(kK3, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SolverConfig cfg;
    cfg.seed = seed;
    const SolveResult r = solve_vb(t, cfg);
    REQUIRE(r.model);
    CHECK(eval_theory(t, *r.model));
    CHECK_NOTHROW(decode_coloring(kK3, 3, *r.model));
  }
}

TEST_CASE("same seed, same trace") {
  GraphInstance g = gen_planted_coloring_graph(30, 3, 60, 5);
  const Theory t = encode_coloring(g, 3);
  for (auto kind : {SolverKind::vb, SolverKind::df}) {
    SolverConfig cfg;
    cfg.seed = 99;
    cfg.max_flips = 500;
    cfg.solver = kind;
    auto run = [&] {
      std::vector<AtomId> trace;
      auto record = [&](const auto &, AtomId x) { trace.push_back(x); };
      if (kind == SolverKind::vb) {
        VirtualSearch s(t);
        generic_wsat(s, cfg, record);
      } else {
        DoubleFlipSearch s(t);
        generic_wsat(s, cfg, record);
      }
      return trace;
    };
    CHECK(run() == run());
    const SolveResult a = solve(t, cfg), b = solve(t, cfg);
    CHECK(a.model == b.model);
    CHECK(a.flips_used == b.flips_used);
    CHECK(a.tries_used == b.tries_used);
  }
}

TEST_CASE("df_initial distribution") {
  DoubleFlipSearch one(theory(3, {Clause{{cat(1, 1, {1, 2, 3})}}}));
  std::map<AtomId, int> which;
  Rng rng(1);
  for (int i = 0; i < 3000; ++i) {
    const Assignment s = one.random_initial(rng);
    REQUIRE(s[1] + s[2] + s[3] == 1);
    which[s[1] ? 1 : s[2] ? 2 : 3]++;
  }
  for (AtomId a = 1; a <= 3; ++a)
    CHECK(std::abs(which[a] - 1000) < 150);

  DoubleFlipSearch vc(theory(5, {Clause{{cat(std::nullopt, 2, {1, 2, 3, 4, 5})}}}));
  std::array<int, 6> card{};
  for (int i = 0; i < 10000; ++i) {
    const Assignment s = vc.random_initial(rng);
    card[s[1] + s[2] + s[3] + s[4] + s[5]]++;
  }
  CHECK(card[3] + card[4] + card[5] == 0);
  // Chi-square against uniform over {0,1,2}; 13.8 is the 0.1% critical value
  // for 2 degrees of freedom.
  double chi2 = 0;
  for (int c = 0; c < 3; ++c)
    chi2 += (card[c] - 10000.0 / 3) * (card[c] - 10000.0 / 3) / (10000.0 / 3);
  CHECK(chi2 < 13.8);
}

TEST_CASE("df flip keeps the cardinality") {
  Rng rng(2);
  DoubleFlipSearch s(theory(4, {Clause{{cat(2, 2, {1, 2, 3, 4})}}}));
  s.reset(oracle::from_bits(4, 0b0011));
  CHECK(s.needs_companion(1));
  const AtomId y = s.flip(1, rng);
  CHECK((y == 3 || y == 4));
  CHECK(count_true(s.group(0), s.assignment()) == 2);
  CHECK(s.true_count(0) == 2);

  DoubleFlipSearch t(theory(3, {Clause{{cat(1, 1, {1, 2, 3})}}}));
  t.reset(oracle::from_bits(3, 0b001));
  CHECK(t.flip(2, rng) == 1);
  CHECK(t.assignment() == oracle::from_bits(3, 0b010));

  // An atom outside every c-atom flips alone.
  DoubleFlipSearch u(theory(3, {Clause{{cat(1, 1, {1, 2})}}, Clause{{Literal::atom(3)}}}));
  u.reset(oracle::from_bits(3, 0b001));
  CHECK(u.flip(3, rng) == 0);
  CHECK(u.assignment() == oracle::from_bits(3, 0b101));
}

TEST_CASE("df breakcount") {
  DoubleFlipSearch s(theory(3, {Clause{{cat(1, 1, {1, 2})}}, Clause{{Literal::atom(2), Literal::atom(3)}}}));
  s.reset(oracle::from_bits(3, 0b010));
  CHECK(s.breakcount(1) == 0); // absent from T^cnf
  CHECK(s.breakcount(2) == 1); // 2|3 loses its only true literal
  s.reset(oracle::from_bits(3, 0b001));
  CHECK(s.breakcount(3) == 0);

  DoubleFlipSearch u(theory(2, {Clause{{Literal::atom(1), Literal::atom(2)}}}));
  u.reset(oracle::from_bits(2, 0b01));
  CHECK(u.breakcount(1) == 1);
}

TEST_CASE("df breakcount equals recount on T^cnf") {
  Rng rng(53);
  for (int i = 0; i < 100; ++i) {
    const Theory t = oracle::random_simple_theory(rng, 8, 8);
    const auto part = std::get<SimplePartition>(classify_simple(t));
    std::vector<std::vector<int>> tcnf;
    for (std::size_t ci : part.tcnf) {
      std::vector<int> cl;
      for (const auto &l : t.clauses[ci].literals)
        cl.push_back(l.negated ? -static_cast<int>(l.as_atom()) : static_cast<int>(l.as_atom()));
      tcnf.push_back(cl);
    }
    DoubleFlipSearch s(t);
    for (int j = 0; j < 20; ++j) {
      const Assignment sigma = s.random_initial(rng);
      s.reset(sigma);
      for (AtomId x = 1; x <= t.num_atoms; ++x)
        CHECK(s.breakcount(x) == oracle::breakcount(tcnf, sigma, x));
    }
  }
}

TEST_CASE("df joint mode keeps the cardinality and solves") {
  GraphInstance g = gen_planted_coloring_graph(40, 3, 80, 9);
  const Theory t = encode_coloring(g, 3);
  SolverConfig cfg;
  cfg.solver = SolverKind::df;
  cfg.df_joint_breakcount = true;
  cfg.seed = 4;
  const SolveResult r = solve(t, cfg);
  REQUIRE(r.model);
  CHECK_NOTHROW(decode_coloring(g, 3, *r.model));
}

TEST_CASE("df refuses theories that are not simple") {
  const Theory t = encode_latin(LatinInstance{3, {}});
  CHECK_THROWS_AS(solve_df(t, SolverConfig{}), NotSimpleError);
}

TEST_CASE("wsat on compiled coloring") {
  const Theory t = encode_coloring(kK3, 3);
  const CompiledCnf cc = compile_basic(t);
  SolverConfig cfg;
  cfg.solver = SolverKind::wsat;
  const SolveResult r = wsat_cnf(cc.cnf, cfg);
  REQUIRE(r.model);
  CHECK_NOTHROW(decode_coloring(kK3, 3, project_model(cc, *r.model)));
  CHECK(wsat_cnf(cc.cnf, cfg).model == r.model);
}

TEST_CASE("unsatisfiable input returns unknown after the whole budget") {
  SolverConfig cfg;
  cfg.max_tries = 3;
  cfg.max_flips = 50;
  const SolveResult r = wsat_cnf(Cnf{1, {{1}, {-1}}}, cfg);
  CHECK(r.outcome == Outcome::unknown);
  CHECK_FALSE(r.model);
  CHECK(r.flips_used == 150);
  CHECK(r.tries_used == 3);

  // A c-atom that can never hold still offers candidates; the budget is spent.
  const SolveResult v = solve_vb(theory(2, {Clause{{cat(3, std::nullopt, {1, 2})}}}), cfg);
  CHECK(v.outcome == Outcome::unknown);
  CHECK(v.flips_used == 150);

  // A literally empty clause stops before any try.
  const SolveResult e = wsat_cnf(Cnf{2, {{1}, {}}}, cfg);
  CHECK(e.outcome == Outcome::unknown);
  CHECK(e.flips_used == 0);
  CHECK(e.tries_used == 0);
}

TEST_CASE("deadline") {
  GraphInstance g = gen_random_graph(60, 600, 1); // not 3-colorable in practice
  SolverConfig cfg;
  cfg.deadline = std::chrono::steady_clock::now();
  const SolveResult r = solve_vb(encode_coloring(g, 3), cfg);
  CHECK(r.timed_out);
  CHECK(r.outcome == Outcome::unknown);
}

TEST_CASE("config validation and names") {
  SolverConfig cfg;
  cfg.noise = 1.5;
  CHECK_THROWS_AS(cfg.check(), std::invalid_argument);
  cfg.noise = 0.5;
  cfg.max_flips = 0;
  CHECK_THROWS_AS(cfg.check(), std::invalid_argument);
  CHECK(parse_solver_kind("df") == SolverKind::df);
  CHECK_THROWS_AS(parse_solver_kind("gsat"), std::invalid_argument);
  CHECK_THROWS_AS(solve(encode_coloring(kK3, 3), SolverConfig{.solver = SolverKind::wsat}),
                  std::invalid_argument);
}
