#pragma once

// Clausal propositional theories extended with cardinality atoms.
//
// A cardinality atom (c-atom) `k X m` holds when at least k and at most m of
// the atoms in X are true. Either bound may be missing (but not both). A
// clause is a disjunction of possibly negated atoms and c-atoms.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ccsat {

/// Dense 1-based atom index. Zero is never a valid atom.
using AtomId = std::uint32_t;

class CAtom {
public:
  CAtom() = default;

  /// Throws std::invalid_argument when both bounds are absent, when an atom
  /// repeats, or when an atom id is zero.
  CAtom(std::optional<std::uint32_t> lower, std::optional<std::uint32_t> upper,
        std::vector<AtomId> atoms);

  const std::optional<std::uint32_t> &lower() const { return lower_; }
  const std::optional<std::uint32_t> &upper() const { return upper_; }
  const std::vector<AtomId> &atoms() const { return atoms_; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(atoms_.size()); }

  // Effective bounds. A missing lower bound acts as 0 and a missing upper
  // bound as |X|. Values are clamped to [0, |X|+1] and [0, |X|]; clamping
  // never changes which true counts satisfy the c-atom.
  std::uint32_t effective_lower() const;
  std::uint32_t effective_upper() const;

  bool holds_at(std::uint32_t true_count) const {
    return effective_lower() <= true_count && true_count <= effective_upper();
  }

  friend bool operator==(const CAtom &, const CAtom &) = default;

private:
  std::optional<std::uint32_t> lower_;
  std::optional<std::uint32_t> upper_;
  std::vector<AtomId> atoms_;
};

struct Literal {
  bool negated = false;
  std::variant<AtomId, CAtom> payload;

  static Literal atom(AtomId a, bool negated = false) { return {negated, a}; }
  static Literal catom(CAtom c, bool negated = false) { return {negated, std::move(c)}; }

  bool is_catom() const { return std::holds_alternative<CAtom>(payload); }
  AtomId as_atom() const { return std::get<AtomId>(payload); }
  const CAtom &as_catom() const { return std::get<CAtom>(payload); }

  friend bool operator==(const Literal &, const Literal &) = default;
};

struct Clause {
  std::vector<Literal> literals;

  bool is_propositional() const;
  friend bool operator==(const Clause &, const Clause &) = default;
};

struct Theory {
  std::uint32_t num_atoms = 0;
  std::vector<Clause> clauses;
  // Optional display names, indexed by AtomId - 1. Empty or num_atoms long.
  std::vector<std::string> atom_names;

  bool has_catoms() const;
  bool has_negated_catoms() const;
  friend bool operator==(const Theory &, const Theory &) = default;
};

/// Throws std::invalid_argument if any atom id is outside 1..num_atoms or a
/// clause is empty.
void validate(const Theory &theory);

/// Total truth assignment over atoms 1..n.
class Assignment {
public:
  Assignment() = default;
  explicit Assignment(std::uint32_t num_atoms) : values_(num_atoms + 1, 0) {}

  std::uint32_t num_atoms() const {
    return values_.empty() ? 0 : static_cast<std::uint32_t>(values_.size() - 1);
  }
  bool operator[](AtomId a) const { return values_[a] != 0; }
  void set(AtomId a, bool v) { values_[a] = v ? 1 : 0; }
  void flip(AtomId a) { values_[a] ^= 1; }

  friend bool operator==(const Assignment &, const Assignment &) = default;
  friend auto operator<=>(const Assignment &, const Assignment &) = default;

private:
  std::vector<std::uint8_t> values_;
};

/// Assignment whose bit (a-1) of `bits` gives the value of atom a.
Assignment assignment_from_bits(std::uint32_t num_atoms, std::uint64_t bits);

std::uint32_t count_true(const CAtom &c, const Assignment &sigma);
bool eval_catom(const CAtom &c, const Assignment &sigma);
bool eval_literal(const Literal &lit, const Assignment &sigma);
bool eval_clause(const Clause &cl, const Assignment &sigma);
bool eval_theory(const Theory &t, const Assignment &sigma);

/// Rewrites every negated c-atom `not (k X m)` into the positive disjuncts
/// `X (k-1)` and `(m+1) X`, dropping a disjunct whose bound is vacuous. The
/// atom set and the model set are unchanged.
Theory normalize_theory(const Theory &t);

struct SimplePartition {
  struct Constraint {
    std::size_t clause;
    CAtom catom;
  };
  std::vector<Constraint> tcc;
  std::vector<std::size_t> tcnf;
  std::vector<AtomId> free_atoms;
};

struct NotSimple {
  enum class Reason {
    negated_catom,       // c-atom inside a negative literal
    mixed_clause,        // c-atom in a clause with other literals
    overlapping_catoms,  // two unit c-atoms share an atom
    lower_not_below_size,// k >= |X|
    upper_zero,          // m == 0
  };
  Reason reason;
  std::size_t clause;

  std::string describe() const;
};

using Classification = std::variant<SimplePartition, NotSimple>;

/// Splits a normalized theory into unit c-atom clauses over pairwise
/// disjoint sets (each with k < |X| and m > 0) and propositional clauses.
Classification classify_simple(const Theory &t);

struct LintIssue {
  enum class Kind { duplicate_literal, trivially_false_catom, trivially_true_catom };
  Kind kind;
  std::size_t clause;
  std::size_t literal;
};

/// Plain CNF over signed DIMACS literals.
struct Cnf {
  std::uint32_t num_atoms = 0;
  std::vector<std::vector<int>> clauses;

  friend bool operator==(const Cnf &, const Cnf &) = default;
};

bool eval_cnf(const Cnf &cnf, const Assignment &sigma);
Theory theory_from_cnf(const Cnf &cnf);

/// Reports duplicate literals and c-atoms whose truth does not depend on the
/// assignment. Nothing is rewritten.
std::vector<LintIssue> lint_theory(const Theory &t);

} // namespace ccsat
