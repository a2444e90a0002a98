#pragma once

// Local search for theories with c-atoms.
//
// generic_wsat() is the shared WSAT skeleton: random restarts, a random
// unsatisfied clause per step, freebie moves first, then a greedy move with
// probability `noise` and a random-walk move otherwise. Three searches plug
// into it:
//
//   VirtualSearch     single flips; break-counts are measured against the
//                     subset expansion of every c-atom without building it
//   DoubleFlipSearch  simple theories only; flips that would break a unit
//                     c-atom drag an opposite-valued companion along
//   CnfSearch         plain WalkSAT over propositional clauses

#include <chrono>
#include <concepts>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccsat/core.hpp"
#include "ccsat/count.hpp"
#include "ccsat/rng.hpp"

namespace ccsat {

enum class SolverKind { vb, df, wsat };

SolverKind parse_solver_kind(const std::string &name);
const char *to_string(SolverKind k);

struct SolverConfig {
  std::uint64_t max_tries = 100;
  std::uint64_t max_flips = 100000;
  // Probability of the greedy (minimum break-count) move; 1 - noise is the
  // probability of a random move among the clause's atoms.
  double noise = 0.4;
  std::uint64_t seed = 0;
  SolverKind solver = SolverKind::vb;
  // df only: score a flip by the combined damage of the atom and its
  // companion instead of the atom alone.
  bool df_joint_breakcount = false;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  /// Throws std::invalid_argument for out-of-range fields.
  void check() const;
};

enum class Outcome { model_found, unknown };

struct SolveResult {
  Outcome outcome = Outcome::unknown;
  std::optional<Assignment> model;
  std::uint64_t tries_used = 0;
  std::uint64_t flips_used = 0;
  std::chrono::nanoseconds elapsed{0};
  bool timed_out = false;
};

class NotSimpleError : public std::runtime_error {
public:
  explicit NotSimpleError(const NotSimple &why)
      : std::runtime_error("theory is not simple: " + why.describe()), why_(why) {}
  const NotSimple &why() const { return why_; }

private:
  NotSimple why_;
};

/// Number of subset-expansion clauses of `c` that are false at true count t:
/// C(t, m+1) + C(n-t, n-k+1).
UnboundedCount falsecount(const CAtom &c, std::uint32_t true_count);

/// Per-c-atom lookup tables over true counts 0..n.
struct BinomialTable {
  std::vector<UnboundedCount> neg;  // C(t, m+1)
  std::vector<UnboundedCount> pos;  // C(n-t, n-k+1)
  std::vector<UnboundedCount> fc;   // neg + pos
  // Expansion clauses avoiding a distinguished atom x that are false at
  // true count t, when x is true (on) or false (off).
  std::vector<UnboundedCount> z_on;
  std::vector<UnboundedCount> z_off;
};

std::shared_ptr<const BinomialTable> binomial_table(std::uint32_t n, std::uint32_t k,
                                                    std::uint32_t m);

// ------------------------------------------------------------ VirtualSearch

/// Immutable indexing of a normalized theory, shareable across workers.
class VirtualIndex {
public:
  /// Normalizes internally; the clause numbering matches the input.
  explicit VirtualIndex(const Theory &theory);

  std::uint32_t num_atoms() const { return num_atoms_; }
  std::size_t num_clauses() const { return clause_begin_.size() - 1; }
  bool has_empty_clause() const { return has_empty_clause_; }

private:
  friend class VirtualSearch;

  enum class Kind : std::uint8_t { positive, negative, catom };
  struct Lit {
    Kind kind;
    std::uint32_t id; // atom id, or c-atom slot
  };
  struct Slot {
    std::uint32_t size, lower, upper;
    std::shared_ptr<const BinomialTable> table;
    std::vector<AtomId> atoms;
  };
  struct Occurrence {
    std::uint32_t clause;
    std::uint32_t first; // into positions_
    std::uint32_t count;
  };

  std::uint32_t num_atoms_ = 0;
  bool has_empty_clause_ = false;
  std::vector<std::uint32_t> clause_begin_; // into lits_
  std::vector<Lit> lits_;
  std::vector<Slot> slots_;
  std::vector<std::uint32_t> cand_begin_; // into cands_
  std::vector<AtomId> cands_;
  std::vector<std::uint32_t> occ_begin_; // per atom, into occs_
  std::vector<Occurrence> occs_;
  std::vector<std::uint32_t> positions_; // global literal indices
};

/// Search state for vb-WSAT: assignment, true count per c-atom occurrence,
/// satisfied-literal count per clause and the unsatisfied clause set, all
/// maintained incrementally.
class VirtualSearch {
public:
  using Count = UnboundedCount;

  explicit VirtualSearch(std::shared_ptr<const VirtualIndex> index);
  explicit VirtualSearch(const Theory &theory);

  void reset(const Assignment &sigma);
  void initialize(Rng &rng); // uniform random assignment
  void flip(AtomId x);
  void flip(AtomId x, Rng &) { flip(x); }

  const Assignment &assignment() const { return sigma_; }
  bool has_empty_clause() const { return index_->has_empty_clause(); }
  std::size_t num_unsat() const { return unsat_.size(); }
  std::size_t unsat_clause(std::size_t i) const { return unsat_[i]; }
  std::span<const AtomId> candidates(std::size_t clause) const;

  /// Expansion clauses of `clause` that are false under the current
  /// assignment (product of per-literal false counts).
  UnboundedCount virtual_unsat_count(std::size_t clause) const;

  /// Expansion clauses satisfied now and falsified by flipping x.
  UnboundedCount breakcount(AtomId x) const;

  std::uint32_t true_count(std::size_t slot) const { return true_count_[slot]; }

  /// Recomputes every counter from scratch and compares.
  bool consistent() const;

private:
  bool literal_sat(std::uint32_t lit) const;
  const UnboundedCount &literal_falsecount(std::uint32_t lit) const;
  void set_unsat(std::uint32_t clause, bool unsat);

  std::shared_ptr<const VirtualIndex> index_;
  Assignment sigma_;
  std::vector<std::uint32_t> true_count_;
  std::vector<std::uint32_t> sat_count_;
  std::vector<std::uint32_t> unsat_;
  std::vector<std::uint32_t> unsat_pos_;
};

// ---------------------------------------------------------------- CnfSearch

/// WalkSAT state over propositional clauses with standard break-counts.
class CnfSearch {
public:
  using Count = std::uint64_t;

  explicit CnfSearch(const Cnf &cnf);

  void reset(const Assignment &sigma);
  void initialize(Rng &rng);
  void flip(AtomId x);
  void flip(AtomId x, Rng &) { flip(x); }

  const Assignment &assignment() const { return sigma_; }
  bool has_empty_clause() const { return has_empty_clause_; }
  std::size_t num_clauses() const { return clause_begin_.size() - 1; }
  std::size_t num_unsat() const { return unsat_.size(); }
  std::size_t unsat_clause(std::size_t i) const { return unsat_[i]; }
  std::span<const AtomId> candidates(std::size_t clause) const;
  bool clause_sat(std::size_t clause) const { return sat_count_[clause] > 0; }

  /// Clauses whose only true literals are on x.
  Count breakcount(AtomId x) const;

  /// Clauses satisfied now and unsatisfied after flipping both x and y.
  Count joint_breakcount(AtomId x, AtomId y) const;

  bool consistent() const;

private:
  struct Occurrence {
    std::uint32_t clause;
    std::uint32_t positive, negative; // occurrences of x and -x
  };

  bool contains(AtomId x, std::uint32_t clause) const;
  void set_unsat(std::uint32_t clause, bool unsat);

  std::uint32_t num_atoms_ = 0;
  bool has_empty_clause_ = false;
  std::vector<std::uint32_t> clause_begin_;
  std::vector<int> lits_;
  std::vector<std::uint32_t> cand_begin_;
  std::vector<AtomId> cands_;
  std::vector<std::uint32_t> occ_begin_;
  std::vector<Occurrence> occs_;

  Assignment sigma_;
  std::vector<std::uint32_t> sat_count_;
  std::vector<std::uint32_t> unsat_;
  std::vector<std::uint32_t> unsat_pos_;
};

// --------------------------------------------------------- DoubleFlipSearch

/// df-WSAT on a simple theory: every assignment visited satisfies all unit
/// c-atom clauses, so only the propositional part is scored.
class DoubleFlipSearch {
public:
  using Count = std::uint64_t;

  /// Throws NotSimpleError when the (normalized) theory is not simple.
  explicit DoubleFlipSearch(const Theory &theory, bool joint_breakcount = false);

  /// Random start satisfying every unit c-atom: per c-atom a cardinality is
  /// drawn uniformly from [k, min(m,|X|)] and a random subset of that size is
  /// set true; free atoms are uniform.
  Assignment random_initial(Rng &rng) const;

  void reset(const Assignment &sigma);
  void initialize(Rng &rng) { reset(random_initial(rng)); }

  /// Flips x, plus a companion when x alone would break its c-atom.
  /// Returns the companion, or 0 when there was none.
  AtomId flip(AtomId x, Rng &rng);

  const Assignment &assignment() const { return cnf_.assignment(); }
  /// True also when some unit c-atom is unsatisfiable (k > m).
  bool has_empty_clause() const { return unsatisfiable_ || cnf_.has_empty_clause(); }
  std::size_t num_unsat() const { return cnf_.num_unsat(); }
  std::size_t unsat_clause(std::size_t i) const { return cnf_.unsat_clause(i); }
  std::span<const AtomId> candidates(std::size_t clause) const {
    return cnf_.candidates(clause);
  }

  /// Break-count over the propositional clauses. Single-atom by default;
  /// in joint mode, the best achievable count including the companion.
  Count breakcount(AtomId x) const;

  bool needs_companion(AtomId x) const;
  bool cc_satisfied() const;
  std::uint32_t true_count(std::size_t group) const { return true_count_[group]; }
  std::size_t num_groups() const { return groups_.size(); }
  const CAtom &group(std::size_t g) const { return groups_[g]; }
  const CnfSearch &cnf_search() const { return cnf_; }

private:
  static constexpr std::uint32_t kNoGroup = ~std::uint32_t{0};

  DoubleFlipSearch(const Theory &normalized, bool joint, int);
  DoubleFlipSearch(const Theory &normalized, bool joint, const SimplePartition &part);

  bool joint_;
  bool unsatisfiable_ = false;
  std::uint32_t num_atoms_;
  std::vector<CAtom> groups_;
  std::vector<std::uint32_t> group_of_;
  std::vector<AtomId> free_atoms_;
  CnfSearch cnf_;
  std::vector<std::uint32_t> true_count_;
  mutable std::vector<AtomId> scratch_;
};

// ------------------------------------------------------------- generic_wsat

template <typename S>
concept WsatSearch = requires(S s, const S cs, Rng &rng, AtomId x, std::size_t i) {
  s.initialize(rng);
  s.flip(x, rng);
  { cs.has_empty_clause() } -> std::convertible_to<bool>;
  { cs.num_unsat() } -> std::convertible_to<std::size_t>;
  { cs.unsat_clause(i) } -> std::convertible_to<std::size_t>;
  { cs.candidates(i) } -> std::convertible_to<std::span<const AtomId>>;
  { cs.breakcount(x) } -> std::totally_ordered;
  { cs.assignment() } -> std::convertible_to<const Assignment &>;
};

/// Observer hook for tests: called after every flip.
struct NoTrace {
  template <typename S> void operator()(const S &, AtomId) const {}
};

template <WsatSearch S, typename Trace = NoTrace>
SolveResult generic_wsat(S &search, const SolverConfig &cfg, Trace &&trace = {}) {
  using Clock = std::chrono::steady_clock;
  using Count = std::remove_cvref_t<decltype(search.breakcount(AtomId{}))>;
  cfg.check();
  const auto start = Clock::now();
  SolveResult result;
  auto finish = [&]() -> SolveResult & {
    result.elapsed = Clock::now() - start;
    return result;
  };
  auto out_of_time = [&] { return cfg.deadline && Clock::now() >= *cfg.deadline; };

  // An empty clause can never be satisfied and offers nothing to flip.
  if (search.has_empty_clause())
    return finish();

  std::vector<Count> counts;
  std::vector<AtomId> chosen;
  for (std::uint64_t attempt = 0; attempt < cfg.max_tries; ++attempt) {
    if (out_of_time()) {
      result.timed_out = true;
      return finish();
    }
    Rng rng = try_stream(cfg.seed, attempt);
    search.initialize(rng);
    ++result.tries_used;
    for (std::uint64_t step = 0; step < cfg.max_flips; ++step) {
      if (search.num_unsat() == 0) {
        result.outcome = Outcome::model_found;
        result.model = search.assignment();
        return finish();
      }
      if ((step & 1023) == 1023 && out_of_time()) {
        result.timed_out = true;
        return finish();
      }
      const std::size_t clause = search.unsat_clause(rng.below(search.num_unsat()));
      const std::span<const AtomId> cands = search.candidates(clause);

      counts.clear();
      chosen.clear();
      for (AtomId x : cands) {
        counts.push_back(search.breakcount(x));
        if (counts.back() == Count{0})
          chosen.push_back(x);
      }
      AtomId pick;
      if (!chosen.empty()) {
        pick = chosen[rng.below(chosen.size())];
      } else if (rng.chance(cfg.noise)) {
        const Count *best = &counts[0];
        for (std::size_t i = 0; i < cands.size(); ++i) {
          if (counts[i] < *best) {
            best = &counts[i];
            chosen.clear();
          }
          if (counts[i] == *best)
            chosen.push_back(cands[i]);
        }
        pick = chosen[rng.below(chosen.size())];
      } else {
        pick = cands[rng.below(cands.size())];
      }
      search.flip(pick, rng);
      ++result.flips_used;
      trace(search, pick);
    }
  }
  return finish();
}

/// vb-WSAT: VirtualSearch under generic_wsat.
SolveResult solve_vb(const Theory &theory, const SolverConfig &cfg);
/// df-WSAT. Throws NotSimpleError for theories that are not simple.
SolveResult solve_df(const Theory &theory, const SolverConfig &cfg);
/// WalkSAT over a plain CNF.
SolveResult wsat_cnf(const Cnf &cnf, const SolverConfig &cfg);
/// Dispatches on cfg.solver; wsat requires a theory without c-atoms.
SolveResult solve(const Theory &theory, const SolverConfig &cfg);

} // namespace ccsat
