#include <cmath>

#include "ccsat/solve.hpp"

namespace ccsat {

SolverKind parse_solver_kind(const std::string &name) {
  if (name == "vb")
    return SolverKind::vb;
  if (name == "df")
    return SolverKind::df;
  if (name == "wsat")
    return SolverKind::wsat;
  throw std::invalid_argument("unknown solver '" + name + "' (expected vb, df or wsat)");
}

const char *to_string(SolverKind k) {
  switch (k) {
  case SolverKind::vb:
    return "vb";
  case SolverKind::df:
    return "df";
  case SolverKind::wsat:
    return "wsat";
  }
  return "?";
}

void SolverConfig::check() const {
  if (max_tries == 0)
    throw std::invalid_argument("max_tries must be positive");
  if (max_flips == 0)
    throw std::invalid_argument("max_flips must be positive");
  if (!std::isfinite(noise) || noise < 0.0 || noise > 1.0)
    throw std::invalid_argument("noise must lie in [0, 1]");
}

namespace {

// A reported model is always re-checked against the input; a failure here
// is a solver bug, not an input problem.
SolveResult verified(SolveResult r, const Theory &t) {
  if (r.model && !eval_theory(t, *r.model))
    throw std::logic_error("solver returned an assignment that is not a model");
  return r;
}

} // namespace

SolveResult solve_vb(const Theory &theory, const SolverConfig &cfg) {
  VirtualSearch search(theory);
  return verified(generic_wsat(search, cfg), theory);
}

SolveResult solve_df(const Theory &theory, const SolverConfig &cfg) {
  DoubleFlipSearch search(theory, cfg.df_joint_breakcount);
  return verified(generic_wsat(search, cfg), theory);
}

SolveResult wsat_cnf(const Cnf &cnf, const SolverConfig &cfg) {
  CnfSearch search(cnf);
  SolveResult r = generic_wsat(search, cfg);
  if (r.model && !eval_cnf(cnf, *r.model))
    throw std::logic_error("solver returned an assignment that is not a model");
  return r;
}

SolveResult solve(const Theory &theory, const SolverConfig &cfg) {
  switch (cfg.solver) {
  case SolverKind::vb:
    return solve_vb(theory, cfg);
  case SolverKind::df:
    return solve_df(theory, cfg);
  case SolverKind::wsat:
    break;
  }
  if (theory.has_catoms())
    throw std::invalid_argument("wsat needs a theory without c-atoms; compile it first");
  validate(theory);
  Cnf cnf;
  cnf.num_atoms = theory.num_atoms;
  for (const auto &cl : theory.clauses) {
    std::vector<int> lits;
    for (const auto &l : cl.literals)
      lits.push_back(l.negated ? -static_cast<int>(l.as_atom()) : static_cast<int>(l.as_atom()));
    cnf.clauses.push_back(std::move(lits));
  }
  return wsat_cnf(cnf, cfg);
}

} // namespace ccsat
