#include <algorithm>

#include "ccsat/solve.hpp"

namespace ccsat {
namespace {

SimplePartition partition_or_throw(const Theory &normalized) {
  auto cls = classify_simple(normalized);
  if (auto *why = std::get_if<NotSimple>(&cls))
    throw NotSimpleError(*why);
  return std::get<SimplePartition>(std::move(cls));
}

Cnf propositional_part(const Theory &t, const SimplePartition &part) {
  Cnf cnf;
  cnf.num_atoms = t.num_atoms;
  for (std::size_t ci : part.tcnf) {
    std::vector<int> out;
    for (const auto &l : t.clauses[ci].literals) {
      const int v = static_cast<int>(l.as_atom());
      out.push_back(l.negated ? -v : v);
    }
    cnf.clauses.push_back(std::move(out));
  }
  return cnf;
}

} // namespace

DoubleFlipSearch::DoubleFlipSearch(const Theory &theory, bool joint_breakcount)
    : DoubleFlipSearch(normalize_theory(theory), joint_breakcount, 0) {}

DoubleFlipSearch::DoubleFlipSearch(const Theory &t, bool joint, int)
    : DoubleFlipSearch(t, joint, partition_or_throw(t)) {}

DoubleFlipSearch::DoubleFlipSearch(const Theory &t, bool joint, const SimplePartition &part)
    : joint_(joint), num_atoms_(t.num_atoms), group_of_(t.num_atoms + 1, kNoGroup),
      free_atoms_(part.free_atoms), cnf_(propositional_part(t, part)) {
  for (const auto &con : part.tcc) {
    const auto g = static_cast<std::uint32_t>(groups_.size());
    for (AtomId a : con.catom.atoms())
      group_of_[a] = g;
    // k > m: no start can satisfy this c-atom, so the theory has no model.
    if (con.catom.effective_lower() > con.catom.effective_upper())
      unsatisfiable_ = true;
    groups_.push_back(con.catom);
  }
  true_count_.assign(groups_.size(), 0);
}

Assignment DoubleFlipSearch::random_initial(Rng &rng) const {
  Assignment sigma(num_atoms_);
  for (const CAtom &c : groups_) {
    const std::uint32_t lo = c.effective_lower();
    const std::uint32_t hi = std::max(lo, c.effective_upper());
    const std::uint32_t want = lo + static_cast<std::uint32_t>(rng.below(hi - lo + 1));
    // Partial Fisher-Yates: the first `want` atoms of a random permutation.
    std::vector<AtomId> atoms = c.atoms();
    for (std::uint32_t i = 0; i < want; ++i) {
      std::swap(atoms[i], atoms[i + rng.below(atoms.size() - i)]);
      sigma.set(atoms[i], true);
    }
  }
  for (AtomId a : free_atoms_)
    sigma.set(a, rng.coin());
  return sigma;
}

void DoubleFlipSearch::reset(const Assignment &sigma) {
  cnf_.reset(sigma);
  for (std::size_t g = 0; g < groups_.size(); ++g)
    true_count_[g] = count_true(groups_[g], sigma);
}

bool DoubleFlipSearch::needs_companion(AtomId x) const {
  const std::uint32_t g = group_of_[x];
  if (g == kNoGroup)
    return false;
  const std::uint32_t t = true_count_[g];
  return assignment()[x] ? t == groups_[g].effective_lower()
                         : t == groups_[g].effective_upper();
}

bool DoubleFlipSearch::cc_satisfied() const {
  for (std::size_t g = 0; g < groups_.size(); ++g)
    if (!groups_[g].holds_at(true_count_[g]))
      return false;
  return true;
}

DoubleFlipSearch::Count DoubleFlipSearch::breakcount(AtomId x) const {
  if (!joint_ || !needs_companion(x))
    return cnf_.breakcount(x);
  const bool value = assignment()[x];
  Count best = ~Count{0};
  for (AtomId y : groups_[group_of_[x]].atoms())
    if (assignment()[y] != value)
      best = std::min(best, cnf_.joint_breakcount(x, y));
  return best;
}

AtomId DoubleFlipSearch::flip(AtomId x, Rng &rng) {
  const std::uint32_t g = group_of_[x];
  if (!needs_companion(x)) {
    if (g != kNoGroup)
      true_count_[g] += assignment()[x] ? -1 : 1;
    cnf_.flip(x);
    return 0;
  }
  const bool value = assignment()[x];
  // Companions are scored against the state after x alone has flipped, or
  // jointly with x in joint mode.
  if (!joint_)
    cnf_.flip(x);
  Count best = ~Count{0};
  scratch_.clear();
  for (AtomId y : groups_[g].atoms()) {
    if (y == x || assignment()[y] == value)
      continue;
    const Count c = joint_ ? cnf_.joint_breakcount(x, y) : cnf_.breakcount(y);
    if (c < best) {
      best = c;
      scratch_.clear();
    }
    if (c == best)
      scratch_.push_back(y);
  }
  const AtomId y = scratch_[rng.below(scratch_.size())];
  if (joint_)
    cnf_.flip(x);
  cnf_.flip(y);
  return y;
}

} // namespace ccsat
