#include <doctest.h>

#include "ccsat/core.hpp"
#include "ccsat/encode.hpp"
#include "oracles.hpp"

using namespace ccsat;

namespace {

Literal pos(AtomId a) { return Literal::atom(a); }
Literal neg(AtomId a) { return Literal::atom(a, true); }
Literal cat(std::optional<std::uint32_t> lo, std::optional<std::uint32_t> hi,
            std::vector<AtomId> xs, bool negated = false) {
  return Literal::catom(CAtom(lo, hi, std::move(xs)), negated);
}

Assignment bits(std::uint32_t n, std::initializer_list<int> trues) {
  Assignment s(n);
  for (int a : trues)
    s.set(static_cast<AtomId>(a), true);
  return s;
}

} // namespace

TEST_CASE("catom construction rejects malformed input") {
  CHECK_THROWS_AS(CAtom(std::nullopt, std::nullopt, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(CAtom(1, 1, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(CAtom(1, 1, {0, 1}), std::invalid_argument);
  // lower > upper and bounds past |X| are legal.
  CHECK_NOTHROW(CAtom(3, 1, {1, 2}));
  CHECK_NOTHROW(CAtom(5, 9, {1, 2}));
}

TEST_CASE("effective bounds") {
  CAtom c(std::nullopt, 1, {1, 2, 3});
  CHECK(c.effective_lower() == 0);
  CHECK(c.effective_upper() == 1);
  CAtom d(2, std::nullopt, {1, 2, 3});
  CHECK(d.effective_upper() == 3);
  CAtom e(7, 9, {1, 2});
  CHECK(e.effective_lower() == 3);
  CHECK(e.effective_upper() == 2);
}

TEST_CASE("eval_catom") {
  CHECK(eval_catom(CAtom(1, 1, {1, 2, 3}), bits(3, {2})));
  CHECK_FALSE(eval_catom(CAtom(2, std::nullopt, {1, 2}), bits(2, {})));
  CHECK_FALSE(eval_catom(CAtom(std::nullopt, 1, {1, 2, 3}), bits(3, {1, 2})));
  CHECK_FALSE(eval_catom(CAtom(2, 1, {1, 2}), bits(2, {1})));
}

TEST_CASE("eval_clause") {
  const Clause cl{{neg(1), cat(1, 1, {2, 3})}};
  CHECK_FALSE(eval_clause(cl, bits(3, {1, 2, 3})));
  CHECK(eval_clause(cl, bits(3, {2, 3})));
  // not(1{a,b}1) or q with a, b true and q false: the c-atom fails, so its
  // negation holds.
  const Clause ncl{{cat(1, 1, {1, 2}, true), pos(3)}};
  CHECK(eval_clause(ncl, bits(3, {1, 2})));
  for (std::uint64_t b = 0; b < 8; ++b) {
    const auto s = assignment_from_bits(3, b);
    const bool exactly_one = s[1] != s[2];
    CHECK(eval_clause(ncl, s) == (!exactly_one || s[3]));
  }
}

TEST_CASE("eval_theory") {
  CHECK(eval_theory(Theory{}, Assignment(0)));

  GraphInstance k3{3, {{1, 2}, {1, 3}, {2, 3}}};
  const Theory col3 = encode_coloring(k3, 3);
  int proper = 0;
  for (std::uint64_t b = 0; b < (1u << 9); ++b)
    proper += eval_theory(col3, assignment_from_bits(9, b)) ? 1 : 0;
  CHECK(proper == 6);

  const Theory col2 = encode_coloring(k3, 2);
  for (std::uint64_t b = 0; b < (1u << 6); ++b)
    CHECK_FALSE(eval_theory(col2, assignment_from_bits(6, b)));
}

TEST_CASE("normalize_theory rewrites negated catoms") {
  Theory t{3, {Clause{{cat(1, 1, {1, 2}, true), pos(3)}}}, {}};
  const Theory n = normalize_theory(t);
  REQUIRE(n.clauses.size() == 1);
  const Clause expected{{cat(std::nullopt, 0, {1, 2}), cat(2, std::nullopt, {1, 2}), pos(3)}};
  CHECK(n.clauses[0] == expected);
  CHECK(oracle::models(n) == oracle::models(t));

  Theory u{4, {Clause{{cat(2, 2, {1, 2, 3}, true), pos(4)}}}, {}};
  const Theory nu = normalize_theory(u);
  const Clause expected_u{{cat(std::nullopt, 1, {1, 2, 3}), cat(3, std::nullopt, {1, 2, 3}), pos(4)}};
  CHECK(nu.clauses[0] == expected_u);
  CHECK(oracle::models(nu) == oracle::models(u));

  Theory plain{2, {Clause{{cat(1, 1, {1, 2}), neg(1)}}}, {}};
  CHECK(normalize_theory(plain) == plain);
}

TEST_CASE("normalize_theory drops vacuous disjuncts but never empties a clause") {
  // not({a,b}) with k = 0 and m = |X| is always false.
  Theory t{2, {Clause{{cat(0, 2, {1, 2}, true)}}}, {}};
  const Theory n = normalize_theory(t);
  CHECK(oracle::models(n).empty());
  CHECK(oracle::models(t).empty());
  for (const auto &l : n.clauses[0].literals)
    CHECK_FALSE(l.negated);
}

TEST_CASE("normalize_theory preserves models and is idempotent on random theories") {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const Theory t = oracle::random_theory(rng, 12, 4, 5, 3, 0.5);
    const Theory n = normalize_theory(t);
    CHECK_FALSE(n.has_negated_catoms());
    CHECK(n.num_atoms == t.num_atoms);
    CHECK(oracle::models(n) == oracle::models(t));
    CHECK(normalize_theory(n) == n);
  }
}

TEST_CASE("classify_simple") {
  GraphInstance g{5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}}};
  auto col = classify_simple(encode_coloring(g, 4));
  REQUIRE(std::holds_alternative<SimplePartition>(col));
  CHECK(std::get<SimplePartition>(col).tcc.size() == 5);
  CHECK(std::get<SimplePartition>(col).tcnf.size() == 16);

  auto vc = classify_simple(encode_vertex_cover(g, 2));
  CHECK(std::holds_alternative<SimplePartition>(vc));

  auto ls = classify_simple(encode_latin(LatinInstance{3, {}}));
  REQUIRE(std::holds_alternative<NotSimple>(ls));
  CHECK(std::get<NotSimple>(ls).reason == NotSimple::Reason::overlapping_catoms);

  Theory tight{2, {Clause{{cat(2, 2, {1, 2})}}}, {}};
  auto r = classify_simple(tight);
  REQUIRE(std::holds_alternative<NotSimple>(r));
  CHECK(std::get<NotSimple>(r).reason == NotSimple::Reason::lower_not_below_size);

  Theory zero{2, {Clause{{cat(std::nullopt, 0, {1, 2})}}}, {}};
  CHECK(std::get<NotSimple>(classify_simple(zero)).reason == NotSimple::Reason::upper_zero);

  Theory mixed{3, {Clause{{cat(1, 1, {1, 2}), pos(3)}}}, {}};
  CHECK(std::get<NotSimple>(classify_simple(mixed)).reason == NotSimple::Reason::mixed_clause);

  Theory negated{3, {Clause{{cat(1, 1, {1, 2}, true)}}}, {}};
  CHECK(std::get<NotSimple>(classify_simple(negated)).reason == NotSimple::Reason::negated_catom);
}

TEST_CASE("simple partition: flipping a T^cnf-only atom never changes T^cc") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Theory t = oracle::random_simple_theory(rng, 10, 6);
    auto cls = classify_simple(t);
    REQUIRE(std::holds_alternative<SimplePartition>(cls));
    const auto &part = std::get<SimplePartition>(cls);
    for (std::uint64_t b = 0; b < 64; ++b) {
      Assignment s = assignment_from_bits(10, rng.next());
      for (AtomId a : part.free_atoms) {
        std::vector<bool> before;
        for (const auto &c : part.tcc)
          before.push_back(eval_catom(c.catom, s));
        s.flip(a);
        for (std::size_t j = 0; j < part.tcc.size(); ++j)
          CHECK(eval_catom(part.tcc[j].catom, s) == before[j]);
      }
    }
  }
}

TEST_CASE("validate and lint") {
  Theory bad{2, {Clause{{pos(3)}}}, {}};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  Theory empty_clause{2, {Clause{}}, {}};
  CHECK_THROWS_AS(validate(empty_clause), std::invalid_argument);

  Theory t{3, {Clause{{pos(1), pos(1), cat(3, 1, {1, 2}), cat(0, 2, {2, 3})}}}, {}};
  const auto issues = lint_theory(t);
  REQUIRE(issues.size() == 3);
  CHECK(issues[0].kind == LintIssue::Kind::duplicate_literal);
  CHECK(issues[1].kind == LintIssue::Kind::trivially_false_catom);
  CHECK(issues[2].kind == LintIssue::Kind::trivially_true_catom);
}

TEST_CASE("eval_cnf and theory_from_cnf agree") {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    Cnf cnf{6, {}};
    for (int c = 0; c < 8; ++c) {
      std::vector<int> cl;
      for (int j = 0; j < 3; ++j)
        cl.push_back(static_cast<int>(1 + rng.below(6)) * (rng.coin() ? 1 : -1));
      cnf.clauses.push_back(cl);
    }
    const Theory t = theory_from_cnf(cnf);
    for (std::uint64_t b = 0; b < 64; ++b) {
      const auto s = assignment_from_bits(6, b);
      CHECK(eval_cnf(cnf, s) == eval_theory(t, s));
      CHECK(eval_cnf(cnf, s) == oracle::cnf_holds(cnf.clauses, s));
    }
  }
}
