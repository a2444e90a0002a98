#include "ccsat/core.hpp"

#include <algorithm>
#include <unordered_set>

namespace ccsat {

CAtom::CAtom(std::optional<std::uint32_t> lower, std::optional<std::uint32_t> upper,
             std::vector<AtomId> atoms)
    : lower_(lower), upper_(upper), atoms_(std::move(atoms)) {
  if (!lower_ && !upper_)
    throw std::invalid_argument("c-atom needs at least one bound");
  std::unordered_set<AtomId> seen;
  for (AtomId a : atoms_) {
    if (a == 0)
      throw std::invalid_argument("atom id 0 in c-atom");
    if (!seen.insert(a).second)
      throw std::invalid_argument("duplicate atom " + std::to_string(a) + " in c-atom");
  }
}

std::uint32_t CAtom::effective_lower() const {
  return std::min(lower_.value_or(0), size() + 1);
}

std::uint32_t CAtom::effective_upper() const {
  return std::min(upper_.value_or(size()), size());
}

bool Clause::is_propositional() const {
  return std::none_of(literals.begin(), literals.end(),
                      [](const Literal &l) { return l.is_catom(); });
}

bool Theory::has_catoms() const {
  return std::any_of(clauses.begin(), clauses.end(),
                     [](const Clause &c) { return !c.is_propositional(); });
}

bool Theory::has_negated_catoms() const {
  for (const auto &cl : clauses)
    for (const auto &l : cl.literals)
      if (l.negated && l.is_catom())
        return true;
  return false;
}

void validate(const Theory &theory) {
  auto check = [&](AtomId a, std::size_t ci) {
    if (a < 1 || a > theory.num_atoms)
      throw std::invalid_argument("clause " + std::to_string(ci) + ": atom " +
                                  std::to_string(a) + " out of range 1.." +
                                  std::to_string(theory.num_atoms));
  };
  for (std::size_t ci = 0; ci < theory.clauses.size(); ++ci) {
    const auto &cl = theory.clauses[ci];
    if (cl.literals.empty())
      throw std::invalid_argument("clause " + std::to_string(ci) + " is empty");
    for (const auto &l : cl.literals) {
      if (l.is_catom()) {
        for (AtomId a : l.as_catom().atoms())
          check(a, ci);
      } else {
        check(l.as_atom(), ci);
      }
    }
  }
  if (!theory.atom_names.empty() && theory.atom_names.size() != theory.num_atoms)
    throw std::invalid_argument("atom name table does not match atom count");
}

Assignment assignment_from_bits(std::uint32_t num_atoms, std::uint64_t bits) {
  Assignment sigma(num_atoms);
  for (AtomId a = 1; a <= num_atoms; ++a)
    sigma.set(a, (bits >> (a - 1)) & 1U);
  return sigma;
}

std::uint32_t count_true(const CAtom &c, const Assignment &sigma) {
  std::uint32_t t = 0;
  for (AtomId a : c.atoms())
    t += sigma[a] ? 1 : 0;
  return t;
}

bool eval_catom(const CAtom &c, const Assignment &sigma) {
  return c.holds_at(count_true(c, sigma));
}

bool eval_literal(const Literal &lit, const Assignment &sigma) {
  bool v = lit.is_catom() ? eval_catom(lit.as_catom(), sigma) : sigma[lit.as_atom()];
  return v != lit.negated;
}

bool eval_clause(const Clause &cl, const Assignment &sigma) {
  return std::any_of(cl.literals.begin(), cl.literals.end(),
                     [&](const Literal &l) { return eval_literal(l, sigma); });
}

bool eval_theory(const Theory &t, const Assignment &sigma) {
  return std::all_of(t.clauses.begin(), t.clauses.end(),
                     [&](const Clause &c) { return eval_clause(c, sigma); });
}

bool eval_cnf(const Cnf &cnf, const Assignment &sigma) {
  for (const auto &cl : cnf.clauses) {
    bool sat = false;
    for (int l : cl)
      if (sigma[static_cast<AtomId>(l > 0 ? l : -l)] == (l > 0)) {
        sat = true;
        break;
      }
    if (!sat)
      return false;
  }
  return true;
}

Theory theory_from_cnf(const Cnf &cnf) {
  Theory t;
  t.num_atoms = cnf.num_atoms;
  t.clauses.reserve(cnf.clauses.size());
  for (const auto &cl : cnf.clauses) {
    Clause c;
    for (int l : cl)
      c.literals.push_back(Literal::atom(static_cast<AtomId>(l > 0 ? l : -l), l < 0));
    t.clauses.push_back(std::move(c));
  }
  return t;
}

Theory normalize_theory(const Theory &t) {
  Theory out;
  out.num_atoms = t.num_atoms;
  out.atom_names = t.atom_names;
  out.clauses.reserve(t.clauses.size());
  for (const auto &cl : t.clauses) {
    Clause rewritten;
    for (const auto &lit : cl.literals) {
      if (!lit.negated || !lit.is_catom()) {
        rewritten.literals.push_back(lit);
        continue;
      }
      const CAtom &c = lit.as_catom();
      const std::uint32_t k = c.effective_lower();
      const std::uint32_t m = c.effective_upper();
      bool emitted = false;
      if (k > 0) {
        rewritten.literals.push_back(Literal::catom(CAtom(std::nullopt, k - 1, c.atoms())));
        emitted = true;
      }
      // (m+1) X is trivially false when m = |X|; it is kept only so the
      // clause never loses its last disjunct.
      if (m < c.size() || !emitted)
        rewritten.literals.push_back(Literal::catom(CAtom(m + 1, std::nullopt, c.atoms())));
    }
    out.clauses.push_back(std::move(rewritten));
  }
  return out;
}

std::string NotSimple::describe() const {
  const char *what = "";
  switch (reason) {
  case Reason::negated_catom: what = "negated c-atom"; break;
  case Reason::mixed_clause: what = "c-atom in a non-unit clause"; break;
  case Reason::overlapping_catoms: what = "c-atom shares atoms with an earlier c-atom"; break;
  case Reason::lower_not_below_size: what = "c-atom lower bound is not below |X|"; break;
  case Reason::upper_zero: what = "c-atom upper bound is 0"; break;
  }
  return std::string(what) + " in clause " + std::to_string(clause);
}

Classification classify_simple(const Theory &t) {
  SimplePartition part;
  std::vector<char> owned(t.num_atoms + 1, 0);
  for (std::size_t ci = 0; ci < t.clauses.size(); ++ci) {
    const auto &cl = t.clauses[ci];
    if (cl.is_propositional()) {
      part.tcnf.push_back(ci);
      continue;
    }
    for (const auto &l : cl.literals)
      if (l.is_catom() && l.negated)
        return NotSimple{NotSimple::Reason::negated_catom, ci};
    if (cl.literals.size() != 1)
      return NotSimple{NotSimple::Reason::mixed_clause, ci};
    const CAtom &c = cl.literals.front().as_catom();
    for (AtomId a : c.atoms())
      if (owned[a])
        return NotSimple{NotSimple::Reason::overlapping_catoms, ci};
    if (c.effective_lower() >= c.size())
      return NotSimple{NotSimple::Reason::lower_not_below_size, ci};
    if (c.effective_upper() == 0)
      return NotSimple{NotSimple::Reason::upper_zero, ci};
    for (AtomId a : c.atoms())
      owned[a] = 1;
    part.tcc.push_back({ci, c});
  }
  for (AtomId a = 1; a <= t.num_atoms; ++a)
    if (!owned[a])
      part.free_atoms.push_back(a);
  return part;
}

std::vector<LintIssue> lint_theory(const Theory &t) {
  std::vector<LintIssue> issues;
  for (std::size_t ci = 0; ci < t.clauses.size(); ++ci) {
    const auto &lits = t.clauses[ci].literals;
    for (std::size_t li = 0; li < lits.size(); ++li) {
      for (std::size_t prev = 0; prev < li; ++prev) {
        if (lits[prev] == lits[li]) {
          issues.push_back({LintIssue::Kind::duplicate_literal, ci, li});
          break;
        }
      }
      if (!lits[li].is_catom())
        continue;
      const CAtom &c = lits[li].as_catom();
      if (c.effective_lower() > c.effective_upper())
        issues.push_back({LintIssue::Kind::trivially_false_catom, ci, li});
      else if (c.effective_lower() == 0 && c.effective_upper() == c.size())
        issues.push_back({LintIssue::Kind::trivially_true_catom, ci, li});
    }
  }
  return issues;
}

} // namespace ccsat
