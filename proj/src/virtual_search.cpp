#include <algorithm>
#include <map>
#include <tuple>

#include "ccsat/solve.hpp"

namespace ccsat {

namespace {

// v[u] = C(u, r) for u = 0..upto.
std::vector<UnboundedCount> binomial_column(std::int64_t r, std::int64_t upto) {
  std::vector<UnboundedCount> v(static_cast<std::size_t>(upto + 1), 0);
  if (r < 0 || r > upto)
    return v;
  UnboundedCount c = 1;
  v[static_cast<std::size_t>(r)] = c;
  for (std::int64_t u = r; u < upto; ++u) {
    c *= u + 1;
    c /= u + 1 - r;
    v[static_cast<std::size_t>(u + 1)] = c;
  }
  return v;
}

const UnboundedCount kZero = 0;
const UnboundedCount kOne = 1;

} // namespace

UnboundedCount falsecount(const CAtom &c, std::uint32_t true_count) {
  const std::int64_t n = c.size();
  const std::int64_t k = c.effective_lower();
  const std::int64_t m = c.effective_upper();
  const std::int64_t t = true_count;
  return binomial(t, m + 1) + binomial(n - t, n - k + 1);
}

std::shared_ptr<const BinomialTable> binomial_table(std::uint32_t n, std::uint32_t k,
                                                    std::uint32_t m) {
  auto table = std::make_shared<BinomialTable>();
  const std::int64_t sn = n;
  const auto neg_col = binomial_column(static_cast<std::int64_t>(m) + 1, sn);
  const auto pos_col = binomial_column(sn - k + 1, sn);
  table->neg.resize(n + 1);
  table->pos.resize(n + 1);
  table->fc.resize(n + 1);
  for (std::uint32_t t = 0; t <= n; ++t) {
    table->neg[t] = neg_col[t];
    table->pos[t] = pos_col[n - t];
    table->fc[t] = table->neg[t] + table->pos[t];
  }
  table->z_on.assign(n + 1, 0);
  table->z_off.assign(n + 1, 0);
  for (std::uint32_t t = 0; t <= n; ++t) {
    if (t >= 1)
      table->z_on[t] = table->neg[t - 1] + table->pos[t];
    if (t + 1 <= n)
      table->z_off[t] = table->neg[t] + table->pos[t + 1];
  }
  return table;
}

// ------------------------------------------------------------- VirtualIndex

VirtualIndex::VirtualIndex(const Theory &input) {
  validate(input);
  const Theory t = normalize_theory(input);
  num_atoms_ = t.num_atoms;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>,
           std::shared_ptr<const BinomialTable>>
      tables;

  // (clause, global literal index) per atom, in increasing order.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> mentions(num_atoms_ + 1);
  clause_begin_.push_back(0);
  cand_begin_.push_back(0);
  std::vector<std::uint32_t> seen(num_atoms_ + 1, ~std::uint32_t{0});
  for (std::uint32_t ci = 0; ci < t.clauses.size(); ++ci) {
    const auto &cl = t.clauses[ci];
    if (cl.literals.empty())
      has_empty_clause_ = true;
    auto add_candidate = [&](AtomId a) {
      if (seen[a] != ci) {
        seen[a] = ci;
        cands_.push_back(a);
      }
    };
    for (const auto &lit : cl.literals) {
      const auto li = static_cast<std::uint32_t>(lits_.size());
      if (lit.is_catom()) {
        const CAtom &c = lit.as_catom();
        const auto key = std::make_tuple(c.size(), c.effective_lower(), c.effective_upper());
        auto &table = tables[key];
        if (!table)
          table = binomial_table(c.size(), c.effective_lower(), c.effective_upper());
        const auto slot = static_cast<std::uint32_t>(slots_.size());
        slots_.push_back({c.size(), c.effective_lower(), c.effective_upper(), table, c.atoms()});
        lits_.push_back({Kind::catom, slot});
        for (AtomId a : c.atoms()) {
          mentions[a].push_back({ci, li});
          add_candidate(a);
        }
      } else {
        const AtomId a = lit.as_atom();
        lits_.push_back({lit.negated ? Kind::negative : Kind::positive, a});
        mentions[a].push_back({ci, li});
        add_candidate(a);
      }
    }
    clause_begin_.push_back(static_cast<std::uint32_t>(lits_.size()));
    cand_begin_.push_back(static_cast<std::uint32_t>(cands_.size()));
  }

  occ_begin_ = {0, 0}; // indexed by AtomId; atom 0 is empty
  for (AtomId a = 1; a <= num_atoms_; ++a) {
    const auto &ms = mentions[a];
    for (std::size_t i = 0; i < ms.size();) {
      std::size_t j = i;
      const auto first = static_cast<std::uint32_t>(positions_.size());
      while (j < ms.size() && ms[j].first == ms[i].first)
        positions_.push_back(ms[j++].second);
      occs_.push_back({ms[i].first, first, static_cast<std::uint32_t>(j - i)});
      i = j;
    }
    occ_begin_.push_back(static_cast<std::uint32_t>(occs_.size()));
  }
}

// ------------------------------------------------------------ VirtualSearch

VirtualSearch::VirtualSearch(std::shared_ptr<const VirtualIndex> index)
    : index_(std::move(index)), sigma_(index_->num_atoms()) {
  reset(sigma_);
}

VirtualSearch::VirtualSearch(const Theory &theory)
    : VirtualSearch(std::make_shared<const VirtualIndex>(theory)) {}

std::span<const AtomId> VirtualSearch::candidates(std::size_t clause) const {
  const auto &ix = *index_;
  return std::span<const AtomId>(ix.cands_).subspan(ix.cand_begin_[clause],
                                                    ix.cand_begin_[clause + 1] -
                                                        ix.cand_begin_[clause]);
}

bool VirtualSearch::literal_sat(std::uint32_t lit) const {
  const auto &l = index_->lits_[lit];
  switch (l.kind) {
  case VirtualIndex::Kind::positive: return sigma_[l.id];
  case VirtualIndex::Kind::negative: return !sigma_[l.id];
  case VirtualIndex::Kind::catom: {
    const auto &s = index_->slots_[l.id];
    const std::uint32_t t = true_count_[l.id];
    return s.lower <= t && t <= s.upper;
  }
  }
  return false;
}

const UnboundedCount &VirtualSearch::literal_falsecount(std::uint32_t lit) const {
  const auto &l = index_->lits_[lit];
  if (l.kind == VirtualIndex::Kind::catom)
    return index_->slots_[l.id].table->fc[true_count_[l.id]];
  return literal_sat(lit) ? kZero : kOne;
}

void VirtualSearch::set_unsat(std::uint32_t clause, bool unsat) {
  constexpr std::uint32_t npos = ~std::uint32_t{0};
  if (unsat) {
    unsat_pos_[clause] = static_cast<std::uint32_t>(unsat_.size());
    unsat_.push_back(clause);
  } else {
    const std::uint32_t at = unsat_pos_[clause];
    const std::uint32_t last = unsat_.back();
    unsat_[at] = last;
    unsat_pos_[last] = at;
    unsat_.pop_back();
    unsat_pos_[clause] = npos;
  }
}

void VirtualSearch::reset(const Assignment &sigma) {
  const auto &ix = *index_;
  if (sigma.num_atoms() != ix.num_atoms())
    throw std::invalid_argument("assignment size does not match theory");
  sigma_ = sigma;
  true_count_.assign(ix.slots_.size(), 0);
  for (std::size_t s = 0; s < ix.slots_.size(); ++s)
    for (AtomId a : ix.slots_[s].atoms)
      true_count_[s] += sigma_[a] ? 1 : 0;
  const std::size_t nc = ix.num_clauses();
  sat_count_.assign(nc, 0);
  unsat_.clear();
  unsat_pos_.assign(nc, ~std::uint32_t{0});
  for (std::uint32_t c = 0; c < nc; ++c) {
    for (std::uint32_t l = ix.clause_begin_[c]; l < ix.clause_begin_[c + 1]; ++l)
      sat_count_[c] += literal_sat(l) ? 1 : 0;
    if (sat_count_[c] == 0)
      set_unsat(c, true);
  }
}

void VirtualSearch::initialize(Rng &rng) {
  Assignment sigma(index_->num_atoms());
  for (AtomId a = 1; a <= sigma.num_atoms(); ++a)
    sigma.set(a, rng.coin());
  reset(sigma);
}

void VirtualSearch::flip(AtomId x) {
  const auto &ix = *index_;
  sigma_.flip(x);
  const bool now_true = sigma_[x];
  for (std::uint32_t o = ix.occ_begin_[x]; o < ix.occ_begin_[x + 1]; ++o) {
    const auto &occ = ix.occs_[o];
    int delta = 0;
    for (std::uint32_t p = occ.first; p < occ.first + occ.count; ++p) {
      const auto &l = ix.lits_[ix.positions_[p]];
      if (l.kind == VirtualIndex::Kind::catom) {
        const auto &s = ix.slots_[l.id];
        std::uint32_t &t = true_count_[l.id];
        const bool before = s.lower <= t && t <= s.upper;
        t = now_true ? t + 1 : t - 1;
        const bool after = s.lower <= t && t <= s.upper;
        delta += static_cast<int>(after) - static_cast<int>(before);
      } else {
        const bool sat_after = (l.kind == VirtualIndex::Kind::positive) == now_true;
        delta += sat_after ? 1 : -1;
      }
    }
    if (delta == 0)
      continue;
    const std::uint32_t before = sat_count_[occ.clause];
    const std::uint32_t after = static_cast<std::uint32_t>(static_cast<int>(before) + delta);
    sat_count_[occ.clause] = after;
    if (before == 0 && after > 0)
      set_unsat(occ.clause, false);
    else if (before > 0 && after == 0)
      set_unsat(occ.clause, true);
  }
}

UnboundedCount VirtualSearch::virtual_unsat_count(std::size_t clause) const {
  const auto &ix = *index_;
  UnboundedCount product = 1;
  for (std::uint32_t l = ix.clause_begin_[clause]; l < ix.clause_begin_[clause + 1]; ++l) {
    const auto &fc = literal_falsecount(l);
    if (fc.is_zero())
      return 0;
    product *= fc;
  }
  return product;
}

UnboundedCount VirtualSearch::breakcount(AtomId x) const {
  const auto &ix = *index_;
  const bool was_true = sigma_[x];
  UnboundedCount total = 0;
  for (std::uint32_t o = ix.occ_begin_[x]; o < ix.occ_begin_[x + 1]; ++o) {
    const auto &occ = ix.occs_[o];
    const std::uint32_t *mine = ix.positions_.data() + occ.first;
    const std::uint32_t *mine_end = mine + occ.count;

    std::uint32_t sat_mine = 0;
    for (const std::uint32_t *p = mine; p != mine_end; ++p)
      sat_mine += literal_sat(*p) ? 1 : 0;
    // A satisfied literal without x keeps every expansion clause true.
    if (sat_count_[occ.clause] > sat_mine)
      continue;

    // Expansion clauses of D are products of one clause per literal. Those
    // false after the flip, minus those false after the flip that avoid x,
    // are exactly the newly falsified ones.
    UnboundedCount after = 1;
    UnboundedCount avoiding = 1;
    for (const std::uint32_t *p = mine; p != mine_end; ++p) {
      const auto &l = ix.lits_[*p];
      if (l.kind == VirtualIndex::Kind::catom) {
        const auto &table = *ix.slots_[l.id].table;
        const std::uint32_t t = true_count_[l.id];
        if (was_true) {
          after *= table.fc[t - 1];
          avoiding *= table.z_off[t - 1];
        } else {
          after *= table.fc[t + 1];
          avoiding *= table.z_on[t + 1];
        }
      } else {
        const bool sat_after = (l.kind == VirtualIndex::Kind::positive) != was_true;
        if (sat_after)
          after = 0;
        avoiding = 0;
      }
      if (after.is_zero())
        break;
    }
    if (after.is_zero())
      continue;
    UnboundedCount delta = after - avoiding;
    if (delta.is_zero())
      continue;

    const std::uint32_t *p = mine;
    for (std::uint32_t l = ix.clause_begin_[occ.clause]; l < ix.clause_begin_[occ.clause + 1];
         ++l) {
      if (p != mine_end && *p == l) {
        ++p;
        continue;
      }
      if (ix.lits_[l].kind == VirtualIndex::Kind::catom)
        delta *= literal_falsecount(l);
    }
    total += delta;
  }
  return total;
}

bool VirtualSearch::consistent() const {
  const auto &ix = *index_;
  for (std::size_t s = 0; s < ix.slots_.size(); ++s) {
    std::uint32_t t = 0;
    for (AtomId a : ix.slots_[s].atoms)
      t += sigma_[a] ? 1 : 0;
    if (t != true_count_[s])
      return false;
  }
  std::size_t unsat = 0;
  for (std::uint32_t c = 0; c < ix.num_clauses(); ++c) {
    std::uint32_t sat = 0;
    for (std::uint32_t l = ix.clause_begin_[c]; l < ix.clause_begin_[c + 1]; ++l)
      sat += literal_sat(l) ? 1 : 0;
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
