#pragma once

// Elimination of c-atoms into plain CNF.
//
//   basic  every c-atom becomes its subset-expansion clauses, distributed over
//          the rest of its clause; no auxiliary atoms.
//   uc     unary counters b(i,j) == "at least j of a1..ai are true".
//   bc     a balanced tree of saturating binary adders plus comparators.
//
// Original atoms keep their ids; auxiliary atoms are numbered contiguously
// after them and each one is described by an AtomMap entry.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccsat/core.hpp"
#include "ccsat/count.hpp"
#include "ccsat/io.hpp"

namespace ccsat {

enum class CompileMethod { basic, uc, bc };

CompileMethod parse_compile_method(const std::string &name);
const char *to_string(CompileMethod m);

struct AuxAtom {
  enum class Role { counter, adder, comparator, definition };
  Role role;
  std::size_t clause;   // source clause in the input theory
  std::size_t literal;  // position of the c-atom literal in that clause
  std::string description;
};

struct AtomMap {
  AtomId first_aux = 1;
  std::vector<AuxAtom> entries; // entries[i] describes atom first_aux + i

  const AuxAtom &at(AtomId a) const { return entries.at(a - first_aux); }
  MapComments comments() const;
};

struct CompileStats {
  std::uint64_t clauses = 0;
  std::uint64_t literals = 0;
  std::uint64_t aux_atoms = 0;
};

struct CompiledCnf {
  std::uint32_t num_original_atoms = 0;
  Cnf cnf;
  AtomMap atom_map;
  CompileStats stats;
};

class BudgetExceeded : public std::runtime_error {
public:
  BudgetExceeded(const UnboundedCount &needed, std::uint64_t budget)
      : std::runtime_error("expansion needs " + needed.str() + " clauses, budget is " +
                           std::to_string(budget)),
        needed_(needed), budget_(budget) {}
  const UnboundedCount &needed() const { return needed_; }
  std::uint64_t budget() const { return budget_; }

private:
  UnboundedCount needed_;
  std::uint64_t budget_;
};

inline constexpr std::uint64_t kDefaultClauseBudget = 10'000'000;

/// C(n, m+1) + C(n, k-1): the number of clauses catom_basic_clauses emits.
UnboundedCount basic_clause_count(const CAtom &c);

/// Negative clauses over every (m+1)-subset of X, then positive clauses over
/// every (n-k+1)-subset. Throws BudgetExceeded before allocating when the
/// count passes `budget`.
std::vector<std::vector<int>> catom_basic_clauses(const CAtom &c,
                                                  std::uint64_t budget = kDefaultClauseBudget);

CompiledCnf compile_basic(const Theory &t, std::uint64_t budget = kDefaultClauseBudget);
CompiledCnf compile_uc(const Theory &t);
CompiledCnf compile_bc(const Theory &t);
CompiledCnf compile(const Theory &t, CompileMethod method,
                    std::uint64_t budget = kDefaultClauseBudget);

/// Restriction of a model of the compiled CNF to the original atoms.
Assignment project_model(const CompiledCnf &c, const Assignment &model);
std::vector<Assignment> project_models(const CompiledCnf &c, const std::vector<Assignment> &models);

} // namespace ccsat
