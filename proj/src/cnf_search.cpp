#include <algorithm>

#include "ccsat/solve.hpp"

namespace ccsat {

CnfSearch::CnfSearch(const Cnf &cnf) : num_atoms_(cnf.num_atoms), sigma_(cnf.num_atoms) {
  std::vector<std::vector<std::pair<std::uint32_t, int>>> mentions(num_atoms_ + 1);
  std::vector<std::uint32_t> seen(num_atoms_ + 1, ~std::uint32_t{0});
  clause_begin_.push_back(0);
  cand_begin_.push_back(0);
  for (std::uint32_t ci = 0; ci < cnf.clauses.size(); ++ci) {
    const auto &cl = cnf.clauses[ci];
    if (cl.empty())
      has_empty_clause_ = true;
    for (int l : cl) {
      const auto a = static_cast<AtomId>(l > 0 ? l : -l);
      if (a < 1 || a > num_atoms_)
        throw std::invalid_argument("literal " + std::to_string(l) + " out of range");
      lits_.push_back(l);
      mentions[a].push_back({ci, l});
      if (seen[a] != ci) {
        seen[a] = ci;
        cands_.push_back(a);
      }
    }
    clause_begin_.push_back(static_cast<std::uint32_t>(lits_.size()));
    cand_begin_.push_back(static_cast<std::uint32_t>(cands_.size()));
  }
  occ_begin_ = {0, 0};
  for (AtomId a = 1; a <= num_atoms_; ++a) {
    for (const auto &[clause, lit] : mentions[a]) {
      if (occs_.size() == occ_begin_.back() || occs_.back().clause != clause)
        occs_.push_back({clause, 0, 0});
      (lit > 0 ? occs_.back().positive : occs_.back().negative) += 1;
    }
    occ_begin_.push_back(static_cast<std::uint32_t>(occs_.size()));
  }
  reset(sigma_);
}

std::span<const AtomId> CnfSearch::candidates(std::size_t clause) const {
  return std::span<const AtomId>(cands_).subspan(cand_begin_[clause],
                                                 cand_begin_[clause + 1] - cand_begin_[clause]);
}

void CnfSearch::set_unsat(std::uint32_t clause, bool unsat) {
  if (unsat) {
    unsat_pos_[clause] = static_cast<std::uint32_t>(unsat_.size());
    unsat_.push_back(clause);
  } else {
    const std::uint32_t at = unsat_pos_[clause];
    const std::uint32_t last = unsat_.back();
    unsat_[at] = last;
    unsat_pos_[last] = at;
    unsat_.pop_back();
    unsat_pos_[clause] = ~std::uint32_t{0};
  }
}

void CnfSearch::reset(const Assignment &sigma) {
  if (sigma.num_atoms() != num_atoms_)
    throw std::invalid_argument("assignment size does not match CNF");
  sigma_ = sigma;
  const std::size_t nc = num_clauses();
  sat_count_.assign(nc, 0);
  unsat_.clear();
  unsat_pos_.assign(nc, ~std::uint32_t{0});
  for (std::uint32_t c = 0; c < nc; ++c) {
    for (std::uint32_t i = clause_begin_[c]; i < clause_begin_[c + 1]; ++i) {
      const int l = lits_[i];
      sat_count_[c] += sigma_[static_cast<AtomId>(l > 0 ? l : -l)] == (l > 0) ? 1 : 0;
    }
    if (sat_count_[c] == 0)
      set_unsat(c, true);
  }
}

void CnfSearch::initialize(Rng &rng) {
  Assignment sigma(num_atoms_);
  for (AtomId a = 1; a <= num_atoms_; ++a)
    sigma.set(a, rng.coin());
  reset(sigma);
}

void CnfSearch::flip(AtomId x) {
  sigma_.flip(x);
  const bool now_true = sigma_[x];
  for (std::uint32_t o = occ_begin_[x]; o < occ_begin_[x + 1]; ++o) {
    const auto &occ = occs_[o];
    const int made = static_cast<int>(now_true ? occ.positive : occ.negative);
    const int lost = static_cast<int>(now_true ? occ.negative : occ.positive);
    if (made == lost)
      continue;
    const std::uint32_t before = sat_count_[occ.clause];
    const auto after = static_cast<std::uint32_t>(static_cast<int>(before) + made - lost);
    sat_count_[occ.clause] = after;
    if (before == 0 && after > 0)
      set_unsat(occ.clause, false);
    else if (before > 0 && after == 0)
      set_unsat(occ.clause, true);
  }
}

CnfSearch::Count CnfSearch::breakcount(AtomId x) const {
  const bool is_true = sigma_[x];
  Count n = 0;
  for (std::uint32_t o = occ_begin_[x]; o < occ_begin_[x + 1]; ++o) {
    const auto &occ = occs_[o];
    const std::uint32_t true_now = is_true ? occ.positive : occ.negative;
    const std::uint32_t true_after = is_true ? occ.negative : occ.positive;
    if (true_now > 0 && true_after == 0 && sat_count_[occ.clause] == true_now)
      ++n;
  }
  return n;
}

bool CnfSearch::contains(AtomId x, std::uint32_t clause) const {
  auto first = occs_.begin() + occ_begin_[x];
  auto last = occs_.begin() + occ_begin_[x + 1];
  auto it = std::lower_bound(first, last, clause,
                             [](const Occurrence &o, std::uint32_t c) { return o.clause < c; });
  return it != last && it->clause == clause;
}

CnfSearch::Count CnfSearch::joint_breakcount(AtomId x, AtomId y) const {
  if (x == y)
    return 0;
  auto lookup = [&](AtomId a, std::uint32_t clause) -> const Occurrence * {
    auto first = occs_.begin() + occ_begin_[a];
    auto last = occs_.begin() + occ_begin_[a + 1];
    auto it = std::lower_bound(first, last, clause,
                               [](const Occurrence &o, std::uint32_t c) { return o.clause < c; });
    return it != last && it->clause == clause ? &*it : nullptr;
  };
  auto change = [&](AtomId a, const Occurrence *occ) {
    if (!occ)
      return 0;
    const bool is_true = sigma_[a];
    return static_cast<int>(is_true ? occ->negative : occ->positive) -
           static_cast<int>(is_true ? occ->positive : occ->negative);
  };
  Count n = 0;
  auto visit = [&](AtomId a, AtomId other, bool skip_shared) {
    for (std::uint32_t o = occ_begin_[a]; o < occ_begin_[a + 1]; ++o) {
      const auto &occ = occs_[o];
      const Occurrence *theirs = lookup(other, occ.clause);
      if (skip_shared && theirs)
        continue;
      const int before = static_cast<int>(sat_count_[occ.clause]);
      if (before > 0 && before + change(a, &occ) + change(other, theirs) == 0)
        ++n;
    }
  };
  visit(x, y, false);
  visit(y, x, true);
  return n;
}

bool CnfSearch::consistent() const {
  std::size_t unsat = 0;
  for (std::uint32_t c = 0; c < num_clauses(); ++c) {
    std::uint32_t sat = 0;
    for (std::uint32_t i = clause_begin_[c]; i < clause_begin_[c + 1]; ++i) {
      const int l = lits_[i];
      sat += sigma_[static_cast<AtomId>(l > 0 ? l : -l)] == (l > 0) ? 1 : 0;
    }
    if (sat != sat_count_[c])
      return false;
    const bool listed = unsat_pos_[c] != ~std::uint32_t{0};
    if (listed != (sat == 0) || (listed && unsat_[unsat_pos_[c]] != c))
      return false;
    unsat += sat == 0 ? 1 : 0;
  }
  return unsat == unsat_.size();
}

} // namespace ccsat
