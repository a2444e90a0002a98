#include "ccsat/compile.hpp"

#include <bit>
#include <limits>

namespace ccsat {

CompileMethod parse_compile_method(const std::string &name) {
  if (name == "basic")
    return CompileMethod::basic;
  if (name == "uc")
    return CompileMethod::uc;
  if (name == "bc")
    return CompileMethod::bc;
  throw std::invalid_argument("unknown compile method '" + name + "' (basic, uc, bc)");
}

const char *to_string(CompileMethod m) {
  switch (m) {
  case CompileMethod::basic: return "basic";
  case CompileMethod::uc: return "uc";
  case CompileMethod::bc: return "bc";
  }
  return "?";
}

MapComments AtomMap::comments() const {
  static constexpr const char *kRole[] = {"counter", "adder", "comparator", "definition"};
  MapComments out;
  out.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto &e = entries[i];
    out.emplace_back(first_aux + static_cast<AtomId>(i),
                     std::string(kRole[static_cast<int>(e.role)]) + " " + e.description +
                         " (clause " + std::to_string(e.clause) + " literal " +
                         std::to_string(e.literal) + ")");
  }
  return out;
}

UnboundedCount basic_clause_count(const CAtom &c) {
  const std::int64_t n = c.size();
  const std::int64_t k = c.effective_lower();
  const std::int64_t m = c.effective_upper();
  return binomial(n, m + 1) + binomial(n, k - 1);
}

namespace {

// Calls f(subset) for every r-subset of `atoms`, in lexicographic index order.
template <typename F> void for_each_subset(const std::vector<AtomId> &atoms, std::size_t r, F &&f) {
  const std::size_t n = atoms.size();
  if (r > n)
    return;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i)
    idx[i] = i;
  std::vector<AtomId> subset(r);
  while (true) {
    for (std::size_t i = 0; i < r; ++i)
      subset[i] = atoms[idx[i]];
    f(subset);
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + (i - 1))
      --i;
    if (i == 0)
      return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j)
      idx[j] = idx[j - 1] + 1;
  }
}

void check_budget(const UnboundedCount &needed, std::uint64_t budget) {
  if (needed > budget)
    throw BudgetExceeded(needed, budget);
}

void finish_stats(CompiledCnf &out) {
  out.stats.clauses = out.cnf.clauses.size();
  out.stats.literals = 0;
  for (const auto &cl : out.cnf.clauses)
    out.stats.literals += cl.size();
  out.stats.aux_atoms = out.atom_map.entries.size();
}

// Tseitin-style gate builder with constant folding. Signals are DIMACS
// literals or the two constants kTrue / kFalse (kFalse == -kTrue).
class CnfBuilder {
public:
  static constexpr int kTrue = std::numeric_limits<int>::max();
  static constexpr int kFalse = -kTrue;

  explicit CnfBuilder(CompiledCnf &out) : out_(out) {
    out_.atom_map.first_aux = out_.cnf.num_atoms + 1;
  }

  void set_origin(std::size_t clause, std::size_t literal) {
    clause_ = clause;
    literal_ = literal;
  }

  int fresh(AuxAtom::Role role, std::string description) {
    out_.atom_map.entries.push_back({role, clause_, literal_, std::move(description)});
    return static_cast<int>(++out_.cnf.num_atoms);
  }

  // Constants are folded: a true literal drops the clause, false ones vanish.
  void add(std::vector<int> clause) {
    std::vector<int> kept;
    kept.reserve(clause.size());
    for (int l : clause) {
      if (l == kTrue)
        return;
      if (l != kFalse)
        kept.push_back(l);
    }
    out_.cnf.clauses.push_back(std::move(kept));
  }

  int and2(int a, int b, AuxAtom::Role role, const std::string &label) {
    if (a == kFalse || b == kFalse || a == -b)
      return kFalse;
    if (a == kTrue || a == b)
      return b;
    if (b == kTrue)
      return a;
    int g = fresh(role, label);
    add({-g, a});
    add({-g, b});
    add({g, -a, -b});
    return g;
  }

  // Defined positively so the fresh atom means what its label says.
  int or2(int a, int b, AuxAtom::Role role, const std::string &label) {
    if (a == kTrue || b == kTrue || a == -b)
      return kTrue;
    if (a == kFalse || a == b)
      return b;
    if (b == kFalse)
      return a;
    int g = fresh(role, label);
    add({-g, a, b});
    add({g, -a});
    add({g, -b});
    return g;
  }

  // g <-> p | (q & a)
  int or_and(int p, int q, int a, AuxAtom::Role role, const std::string &label) {
    if (p == kTrue)
      return kTrue;
    if (p == kFalse)
      return and2(q, a, role, label);
    if (q == kFalse || a == kFalse)
      return p;
    if (q == kTrue)
      return or2(p, a, role, label);
    if (a == kTrue)
      return or2(p, q, role, label);
    int g = fresh(role, label);
    add({-g, p, q});
    add({-g, p, a});
    add({g, -p});
    add({g, -q, -a});
    return g;
  }

  int xor2(int a, int b, AuxAtom::Role role, const std::string &label) {
    if (a == kFalse)
      return b;
    if (b == kFalse)
      return a;
    if (a == kTrue)
      return -b;
    if (b == kTrue)
      return -a;
    if (a == b)
      return kFalse;
    if (a == -b)
      return kTrue;
    int g = fresh(role, label);
    add({-g, a, b});
    add({-g, -a, -b});
    add({g, -a, b});
    add({g, a, -b});
    return g;
  }

  int xor3(int a, int b, int c, AuxAtom::Role role, const std::string &label) {
    if (a == kTrue || a == kFalse)
      return xor2(a == kTrue ? -b : b, c, role, label);
    if (b == kTrue || b == kFalse)
      return xor2(b == kTrue ? -a : a, c, role, label);
    if (c == kTrue || c == kFalse)
      return xor2(c == kTrue ? -a : a, b, role, label);
    int g = fresh(role, label);
    for (int mask = 0; mask < 8; ++mask) {
      bool va = mask & 1, vb = mask & 2, vc = mask & 4;
      bool parity = va ^ vb ^ vc;
      add({va ? -a : a, vb ? -b : b, vc ? -c : c, parity ? g : -g});
    }
    return g;
  }

  int maj3(int a, int b, int c, AuxAtom::Role role, const std::string &label) {
    if (a == kFalse)
      return and2(b, c, role, label);
    if (b == kFalse)
      return and2(a, c, role, label);
    if (c == kFalse)
      return and2(a, b, role, label);
    if (a == kTrue)
      return or2(b, c, role, label);
    if (b == kTrue)
      return or2(a, c, role, label);
    if (c == kTrue)
      return or2(a, b, role, label);
    int g = fresh(role, label);
    add({-g, a, b});
    add({-g, a, c});
    add({-g, b, c});
    add({g, -a, -b});
    add({g, -a, -c});
    add({g, -b, -c});
    return g;
  }

private:
  CompiledCnf &out_;
  std::size_t clause_ = 0;
  std::size_t literal_ = 0;
};

constexpr int kTrue = CnfBuilder::kTrue;
constexpr int kFalse = CnfBuilder::kFalse;

// The two conjuncts that replace a c-atom: "count >= k" and "count <= m".
struct Bounds {
  int at_least;
  int at_most;
};

Bounds unary_counter(CnfBuilder &b, const CAtom &c) {
  const std::uint32_t n = c.size();
  const std::uint32_t k = c.effective_lower();
  const std::uint32_t m = c.effective_upper();
  const bool need_lower = k > 0 && k <= n;
  const bool need_upper = m < n;
  Bounds out{k > n ? kFalse : kTrue, kTrue};
  if (!need_lower && !need_upper)
    return out;

  const std::uint32_t width = std::max(need_lower ? k : 0U, need_upper ? m + 1 : 0U);
  // row[j] is b(i,j) for the current prefix length i; b(0,0) = T, b(0,j) = F.
  std::vector<int> row(width + 1, kFalse);
  row[0] = kTrue;
  for (std::uint32_t i = 1; i <= n; ++i) {
    const int a = static_cast<int>(c.atoms()[i - 1]);
    for (std::uint32_t j = width; j >= 1; --j)
      row[j] = b.or_and(row[j], row[j - 1], a, AuxAtom::Role::counter,
                        "b(" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  if (need_lower)
    out.at_least = row[k];
  if (need_upper)
    out.at_most = -row[m + 1];
  return out;
}

struct Word {
  std::vector<int> bits; // least significant first
  std::uint64_t max = 0;

  int bit(std::size_t i) const { return i < bits.size() ? bits[i] : kFalse; }
};

// Signal for (value(w) >= c), compared from the least significant bit up:
// g_i = x_i & g_{i-1} where c has a 1, x_i | g_{i-1} where it has a 0.
int at_least_const(CnfBuilder &b, const Word &w, std::uint64_t c, const std::string &label) {
  if (c == 0)
    return kTrue;
  if (c > w.max)
    return kFalse;
  int g = kTrue;
  for (std::size_t i = 0; i < w.bits.size(); ++i) {
    if ((c >> i) & 1U)
      g = b.and2(w.bits[i], g, AuxAtom::Role::comparator, label);
    else
      g = b.or2(w.bits[i], g, AuxAtom::Role::comparator, label);
  }
  return g;
}

// x + y, clamped at `cap`.
Word add_saturating(CnfBuilder &b, const Word &x, const Word &y, std::uint64_t cap) {
  Word raw;
  raw.max = x.max + y.max;
  const auto width = static_cast<std::size_t>(std::bit_width(raw.max));
  int carry = kFalse;
  for (std::size_t i = 0; i < width; ++i) {
    const int p = x.bit(i), q = y.bit(i);
    raw.bits.push_back(b.xor3(p, q, carry, AuxAtom::Role::adder, "sum bit " + std::to_string(i)));
    if (i + 1 < width)
      carry = b.maj3(p, q, carry, AuxAtom::Role::adder, "carry bit " + std::to_string(i));
  }
  if (raw.max <= cap)
    return raw;

  const int over = at_least_const(b, raw, cap, "saturation >= " + std::to_string(cap));
  Word out;
  out.max = cap;
  const auto out_width = static_cast<std::size_t>(std::bit_width(cap));
  for (std::size_t i = 0; i < out_width; ++i) {
    const std::string label = "saturated bit " + std::to_string(i);
    out.bits.push_back(((cap >> i) & 1U)
                           ? b.or2(over, raw.bit(i), AuxAtom::Role::adder, label)
                           : b.and2(-over, raw.bit(i), AuxAtom::Role::adder, label));
  }
  return out;
}

Word sum_tree(CnfBuilder &b, const std::vector<AtomId> &atoms, std::size_t lo, std::size_t hi,
              std::uint64_t cap) {
  if (hi - lo == 1)
    return Word{{static_cast<int>(atoms[lo])}, 1};
  const std::size_t mid = lo + (hi - lo) / 2;
  return add_saturating(b, sum_tree(b, atoms, lo, mid, cap), sum_tree(b, atoms, mid, hi, cap),
                        cap);
}

Bounds binary_counter(CnfBuilder &b, const CAtom &c) {
  const std::uint32_t n = c.size();
  const std::uint32_t k = c.effective_lower();
  const std::uint32_t m = c.effective_upper();
  const bool need_lower = k > 0 && k <= n;
  const bool need_upper = m < n;
  Bounds out{k > n ? kFalse : kTrue, kTrue};
  if (!need_lower && !need_upper)
    return out;

  // Saturating at B+1 keeps "sum >= k" and "sum <= m" exact for k, m <= B.
  const std::uint64_t bound = std::max(need_lower ? k : 0U, need_upper ? m : 0U);
  const Word sum = sum_tree(b, c.atoms(), 0, n, bound + 1);
  if (need_lower)
    out.at_least = at_least_const(b, sum, k, "sum >= " + std::to_string(k));
  if (need_upper)
    out.at_most = -at_least_const(b, sum, m + 1, "sum >= " + std::to_string(m + 1));
  return out;
}

template <typename Counter> CompiledCnf compile_counting(const Theory &input, Counter &&counter) {
  const Theory t = normalize_theory(input);
  CompiledCnf out;
  out.num_original_atoms = t.num_atoms;
  out.cnf.num_atoms = t.num_atoms;
  CnfBuilder b(out);
  for (std::size_t ci = 0; ci < t.clauses.size(); ++ci) {
    const auto &lits = t.clauses[ci].literals;
    std::vector<int> clause;
    for (std::size_t li = 0; li < lits.size(); ++li) {
      const Literal &lit = lits[li];
      if (!lit.is_catom()) {
        const int a = static_cast<int>(lit.as_atom());
        clause.push_back(lit.negated ? -a : a);
        continue;
      }
      b.set_origin(ci, li);
      const Bounds bounds = counter(b, lit.as_catom());
      if (lits.size() == 1) {
        b.add({bounds.at_least});
        b.add({bounds.at_most});
        clause.push_back(kTrue);
      } else {
        clause.push_back(b.and2(bounds.at_least, bounds.at_most, AuxAtom::Role::definition,
                                "c-atom holds"));
      }
    }
    b.add(std::move(clause));
  }
  finish_stats(out);
  return out;
}

} // namespace

std::vector<std::vector<int>> catom_basic_clauses(const CAtom &c, std::uint64_t budget) {
  check_budget(basic_clause_count(c), budget);
  const std::size_t n = c.size();
  const std::size_t k = c.effective_lower();
  const std::size_t m = c.effective_upper();
  std::vector<std::vector<int>> out;
  if (m < n) {
    for_each_subset(c.atoms(), m + 1, [&](const std::vector<AtomId> &s) {
      std::vector<int> cl;
      for (AtomId a : s)
        cl.push_back(-static_cast<int>(a));
      out.push_back(std::move(cl));
    });
  }
  if (k > 0) {
    for_each_subset(c.atoms(), n - k + 1, [&](const std::vector<AtomId> &s) {
      out.emplace_back(s.begin(), s.end());
    });
  }
  return out;
}

CompiledCnf compile_basic(const Theory &input, std::uint64_t budget) {
  const Theory t = normalize_theory(input);

  UnboundedCount total = 0;
  for (const auto &cl : t.clauses) {
    UnboundedCount product = 1;
    for (const auto &lit : cl.literals)
      if (lit.is_catom())
        product *= basic_clause_count(lit.as_catom());
    total += product;
  }
  check_budget(total, budget);

  CompiledCnf out;
  out.num_original_atoms = t.num_atoms;
  out.cnf.num_atoms = t.num_atoms;
  out.atom_map.first_aux = t.num_atoms + 1;
  out.cnf.clauses.reserve(static_cast<std::size_t>(total));
  for (const auto &cl : t.clauses) {
    std::vector<std::vector<std::vector<int>>> parts;
    parts.reserve(cl.literals.size());
    for (const auto &lit : cl.literals) {
      if (lit.is_catom()) {
        parts.push_back(catom_basic_clauses(lit.as_catom(), budget));
      } else {
        const int a = static_cast<int>(lit.as_atom());
        parts.push_back({{lit.negated ? -a : a}});
      }
    }
    bool empty_factor = false;
    for (const auto &p : parts)
      empty_factor = empty_factor || p.empty();
    if (empty_factor)
      continue;
    // Odometer over one expansion clause per literal.
    std::vector<std::size_t> pick(parts.size(), 0);
    while (true) {
      std::vector<int> merged;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto &piece = parts[i][pick[i]];
        merged.insert(merged.end(), piece.begin(), piece.end());
      }
      out.cnf.clauses.push_back(std::move(merged));
      std::size_t i = parts.size();
      while (i > 0) {
        if (++pick[i - 1] < parts[i - 1].size())
          break;
        pick[i - 1] = 0;
        --i;
      }
      if (i == 0)
        break;
    }
  }
  finish_stats(out);
  return out;
}

CompiledCnf compile_uc(const Theory &t) { return compile_counting(t, unary_counter); }

CompiledCnf compile_bc(const Theory &t) { return compile_counting(t, binary_counter); }

CompiledCnf compile(const Theory &t, CompileMethod method, std::uint64_t budget) {
  switch (method) {
  case CompileMethod::basic: return compile_basic(t, budget);
  case CompileMethod::uc: return compile_uc(t);
  case CompileMethod::bc: return compile_bc(t);
  }
  throw std::invalid_argument("unknown compile method");
}

Assignment project_model(const CompiledCnf &c, const Assignment &model) {
  Assignment out(c.num_original_atoms);
  for (AtomId a = 1; a <= c.num_original_atoms; ++a)
    out.set(a, model[a]);
  return out;
}

std::vector<Assignment> project_models(const CompiledCnf &c,
                                       const std::vector<Assignment> &models) {
  std::vector<Assignment> out;
  out.reserve(models.size());
  for (const auto &m : models)
    out.push_back(project_model(c, m));
  return out;
}

} // namespace ccsat
