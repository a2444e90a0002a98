#include "ccsat/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace ccsat {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i)
      out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

// Strict decimal: optional '-', digits only, whole token consumed.
template <typename Int> Int to_int(std::string_view tok, std::size_t line) {
  Int v{};
  if (tok.empty() || tok.front() == '+')
    throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
  return v;
}

bool next_line(std::istream &in, std::string &line, std::size_t &lineno) {
  if (!std::getline(in, line))
    return false;
  ++lineno;
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  return true;
}

bool is_comment(std::string_view line) {
  return !line.empty() && line[0] == 'c' && (line.size() == 1 || line[1] == ' ' || line[1] == '\t');
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); });
}

// Header "p <kind> a b". Returns the two counts.
std::pair<std::uint64_t, std::uint64_t> parse_header(std::string_view line, std::string_view kind,
                                                     std::size_t lineno) {
  auto toks = split_ws(line);
  if (toks.size() != 4 || toks[0] != "p" || toks[1] != kind)
    throw ParseError(lineno, "malformed header, expected 'p " + std::string(kind) + " <a> <b>'");
  return {to_int<std::uint64_t>(toks[2], lineno), to_int<std::uint64_t>(toks[3], lineno)};
}

std::uint32_t to_count(std::uint64_t v, std::size_t lineno) {
  if (v > 0x7fffffffULL)
    throw ParseError(lineno, "count too large");
  return static_cast<std::uint32_t>(v);
}

template <typename Writer> std::string to_string_via(Writer &&w) {
  std::ostringstream os;
  w(os);
  return os.str();
}

} // namespace

// ---------------------------------------------------------------- CCNF

CcnfDocument parse_ccnf_document(std::istream &in) {
  CcnfDocument doc;
  Theory &t = doc.theory;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::uint32_t declared_clauses = 0;
  std::vector<std::pair<std::size_t, std::pair<AtomId, std::string>>> names;

  while (next_line(in, line, lineno)) {
    if (is_comment(line)) {
      std::string_view body = line.size() > 2 ? std::string_view(line).substr(2) : std::string_view();
      if (body.substr(0, 5) == "atom ") {
        std::string_view rest = body.substr(5);
        std::size_t sp = rest.find(' ');
        std::string_view id = rest.substr(0, sp);
        std::string name = sp == std::string_view::npos ? std::string() : std::string(rest.substr(sp + 1));
        names.push_back({lineno, {to_int<AtomId>(id, lineno), std::move(name)}});
      } else {
        doc.comments.emplace_back(body);
      }
      continue;
    }
    if (is_blank(line))
      continue;
    if (line[0] == 'p') {
      if (have_header)
        throw ParseError(lineno, "duplicate header");
      auto [atoms, clauses] = parse_header(line, "ccnf", lineno);
      t.num_atoms = to_count(atoms, lineno);
      declared_clauses = to_count(clauses, lineno);
      have_header = true;
      continue;
    }
    if (!have_header)
      throw ParseError(lineno, "clause before 'p ccnf' header");

    auto toks = split_ws(line);
    auto check_atom = [&](std::int64_t a) {
      if (a < 1 || a > t.num_atoms)
        throw ParseError(lineno, "atom " + std::to_string(a) + " out of range 1.." +
                                     std::to_string(t.num_atoms));
      return static_cast<AtomId>(a);
    };
    auto bound = [&](std::string_view tok) -> std::optional<std::uint32_t> {
      auto v = to_int<std::int64_t>(tok, lineno);
      if (v == -1)
        return std::nullopt;
      if (v < 0 || v > 0x7fffffff)
        throw ParseError(lineno, "bad c-atom bound '" + std::string(tok) + "'");
      return static_cast<std::uint32_t>(v);
    };

    Clause cl;
    bool terminated = false;
    std::size_t i = 0;
    while (i < toks.size()) {
      if (terminated)
        throw ParseError(lineno, "tokens after clause terminator 0");
      std::string_view tok = toks[i];
      if (tok == "d" || tok == "nd") {
        if (i + 3 >= toks.size())
          throw ParseError(lineno, "truncated c-atom");
        auto lo = bound(toks[i + 1]);
        auto hi = bound(toks[i + 2]);
        auto cnt = to_int<std::int64_t>(toks[i + 3], lineno);
        if (cnt < 0 || i + 4 + static_cast<std::size_t>(cnt) > toks.size())
          throw ParseError(lineno, "truncated c-atom atom list");
        std::vector<AtomId> atoms;
        atoms.reserve(static_cast<std::size_t>(cnt));
        for (std::int64_t j = 0; j < cnt; ++j)
          atoms.push_back(check_atom(to_int<std::int64_t>(toks[i + 4 + j], lineno)));
        try {
          cl.literals.push_back(Literal::catom(CAtom(lo, hi, std::move(atoms)), tok == "nd"));
        } catch (const std::invalid_argument &e) {
          throw ParseError(lineno, e.what());
        }
        i += 4 + static_cast<std::size_t>(cnt);
        continue;
      }
      auto lit = to_int<std::int64_t>(tok, lineno);
      if (lit == 0) {
        terminated = true;
      } else {
        AtomId a = check_atom(lit < 0 ? -lit : lit);
        cl.literals.push_back(Literal::atom(a, lit < 0));
      }
      ++i;
    }
    if (!terminated)
      throw ParseError(lineno, "clause not terminated by 0");
    t.clauses.push_back(std::move(cl));
  }
  if (!have_header)
    throw ParseError(lineno, "missing 'p ccnf' header");
  if (t.clauses.size() != declared_clauses)
    throw ParseError(lineno, "header declares " + std::to_string(declared_clauses) +
                                 " clauses, found " + std::to_string(t.clauses.size()));
  if (!names.empty()) {
    t.atom_names.assign(t.num_atoms, std::string());
    for (auto &[ln, entry] : names) {
      if (entry.first < 1 || entry.first > t.num_atoms)
        throw ParseError(ln, "atom name for out-of-range id " + std::to_string(entry.first));
      t.atom_names[entry.first - 1] = std::move(entry.second);
    }
  }
  return doc;
}

Theory parse_ccnf(std::istream &in) { return parse_ccnf_document(in).theory; }

Theory parse_ccnf(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_ccnf(in);
}

void write_ccnf(const CcnfDocument &doc, std::ostream &out) {
  const Theory &t = doc.theory;
  for (const auto &c : doc.comments)
    out << "c " << c << '\n';
  for (std::size_t i = 0; i < t.atom_names.size(); ++i)
    out << "c atom " << (i + 1) << ' ' << t.atom_names[i] << '\n';
  out << "p ccnf " << t.num_atoms << ' ' << t.clauses.size() << '\n';
  auto bound = [](const std::optional<std::uint32_t> &b) -> long long {
    return b ? static_cast<long long>(*b) : -1LL;
  };
  for (const auto &cl : t.clauses) {
    for (const auto &l : cl.literals) {
      if (l.is_catom()) {
        const CAtom &c = l.as_catom();
        out << (l.negated ? "nd " : "d ") << bound(c.lower()) << ' ' << bound(c.upper()) << ' '
            << c.size();
        for (AtomId a : c.atoms())
          out << ' ' << a;
        out << ' ';
      } else {
        out << (l.negated ? "-" : "") << l.as_atom() << ' ';
      }
    }
    out << "0\n";
  }
}

void write_ccnf(const Theory &theory, std::ostream &out) {
  write_ccnf(CcnfDocument{theory, {}}, out);
}

std::string write_ccnf(const Theory &theory) {
  return to_string_via([&](std::ostream &os) { write_ccnf(theory, os); });
}

// -------------------------------------------------------------- DIMACS

Cnf parse_dimacs(std::istream &in) {
  Cnf cnf;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::uint32_t declared = 0;
  std::vector<int> current;
  bool open = false;
  while (next_line(in, line, lineno)) {
    if (is_comment(line) || is_blank(line))
      continue;
    if (line[0] == '%')
      break;
    if (line[0] == 'p') {
      if (have_header)
        throw ParseError(lineno, "duplicate header");
      auto [v, c] = parse_header(line, "cnf", lineno);
      cnf.num_atoms = to_count(v, lineno);
      declared = to_count(c, lineno);
      have_header = true;
      continue;
    }
    if (!have_header)
      throw ParseError(lineno, "clause before 'p cnf' header");
    for (auto tok : split_ws(line)) {
      auto lit = to_int<std::int64_t>(tok, lineno);
      if (lit == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
        open = false;
        continue;
      }
      if ((lit < 0 ? -lit : lit) > cnf.num_atoms)
        throw ParseError(lineno, "literal " + std::to_string(lit) + " exceeds declared " +
                                     std::to_string(cnf.num_atoms) + " variables");
      current.push_back(static_cast<int>(lit));
      open = true;
    }
  }
  if (!have_header)
    throw ParseError(lineno, "missing 'p cnf' header");
  if (open)
    throw ParseError(lineno, "last clause not terminated by 0");
  if (cnf.clauses.size() != declared)
    throw ParseError(lineno, "header declares " + std::to_string(declared) + " clauses, found " +
                                 std::to_string(cnf.clauses.size()));
  return cnf;
}

Cnf parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

void write_dimacs(const Cnf &cnf, std::ostream &out, const MapComments &map) {
  for (const auto &[id, desc] : map)
    out << "c map " << id << ' ' << desc << '\n';
  out << "p cnf " << cnf.num_atoms << ' ' << cnf.clauses.size() << '\n';
  for (const auto &cl : cnf.clauses) {
    for (int l : cl)
      out << l << ' ';
    out << "0\n";
  }
}

std::string write_dimacs(const Cnf &cnf, const MapComments &map) {
  return to_string_via([&](std::ostream &os) { write_dimacs(cnf, os, map); });
}

// -------------------------------------------------------------- graphs

bool GraphInstance::add_edge(std::uint32_t u, std::uint32_t v) {
  if (u < 1 || v < 1 || u > num_vertices || v > num_vertices)
    throw std::invalid_argument("edge {" + std::to_string(u) + "," + std::to_string(v) +
                                "} out of range 1.." + std::to_string(num_vertices));
  if (u == v)
    throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
  std::pair e{std::min(u, v), std::max(u, v)};
  auto it = std::lower_bound(edges.begin(), edges.end(), e);
  if (it != edges.end() && *it == e)
    return false;
  edges.insert(it, e);
  return true;
}

GraphInstance parse_col_graph(std::istream &in) {
  GraphInstance g;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  while (next_line(in, line, lineno)) {
    if (is_comment(line) || is_blank(line))
      continue;
    auto toks = split_ws(line);
    if (toks[0] == "p") {
      if (have_header)
        throw ParseError(lineno, "duplicate header");
      if (toks.size() != 4 || (toks[1] != "edge" && toks[1] != "col"))
        throw ParseError(lineno, "malformed header, expected 'p edge <n> <m>'");
      g.num_vertices = to_count(to_int<std::uint64_t>(toks[2], lineno), lineno);
      to_int<std::uint64_t>(toks[3], lineno);
      have_header = true;
    } else if (toks[0] == "e") {
      if (!have_header)
        throw ParseError(lineno, "edge before 'p edge' header");
      if (toks.size() != 3)
        throw ParseError(lineno, "malformed edge line");
      auto u = to_int<std::uint32_t>(toks[1], lineno);
      auto v = to_int<std::uint32_t>(toks[2], lineno);
      if (u < 1 || v < 1 || u > g.num_vertices || v > g.num_vertices)
        throw ParseError(lineno, "vertex out of range 1.." + std::to_string(g.num_vertices));
      if (u == v)
        throw ParseError(lineno, "self-loop on vertex " + std::to_string(u));
      edges.insert({std::min(u, v), std::max(u, v)});
    } else {
      throw ParseError(lineno, "unexpected line '" + line + "'");
    }
  }
  if (!have_header)
    throw ParseError(lineno, "missing 'p edge' header");
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

GraphInstance parse_col_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_col_graph(in);
}

void write_col_graph(const GraphInstance &g, std::ostream &out) {
  out << "p edge " << g.num_vertices << ' ' << g.edges.size() << '\n';
  for (const auto &[u, v] : g.edges)
    out << "e " << u << ' ' << v << '\n';
}

std::string write_col_graph(const GraphInstance &g) {
  return to_string_via([&](std::ostream &os) { write_col_graph(g, os); });
}

// -------------------------------------------------------------- latin

void LatinInstance::check() const {
  std::set<std::pair<std::uint32_t, std::uint32_t>> cells;
  for (const auto &g : givens) {
    auto in_range = [&](std::uint32_t x) { return x >= 1 && x <= order; };
    if (!in_range(g.row) || !in_range(g.col) || !in_range(g.value))
      throw std::invalid_argument("given (" + std::to_string(g.row) + "," + std::to_string(g.col) +
                                  "," + std::to_string(g.value) + ") out of range 1.." +
                                  std::to_string(order));
    if (!cells.insert({g.row, g.col}).second)
      throw std::invalid_argument("cell (" + std::to_string(g.row) + "," + std::to_string(g.col) +
                                  ") given twice");
  }
}

LatinInstance parse_latin(std::istream &in) {
  LatinInstance inst;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::uint32_t declared = 0;
  std::set<std::pair<std::uint32_t, std::uint32_t>> cells;
  while (next_line(in, line, lineno)) {
    if (is_comment(line) || is_blank(line))
      continue;
    if (line[0] == 'p') {
      if (have_header)
        throw ParseError(lineno, "duplicate header");
      auto [n, d] = parse_header(line, "latin", lineno);
      inst.order = to_count(n, lineno);
      declared = to_count(d, lineno);
      have_header = true;
      continue;
    }
    if (!have_header)
      throw ParseError(lineno, "triple before 'p latin' header");
    auto toks = split_ws(line);
    if (toks.size() != 3)
      throw ParseError(lineno, "expected 'i j k'");
    LatinGiven g{to_int<std::uint32_t>(toks[0], lineno), to_int<std::uint32_t>(toks[1], lineno),
                 to_int<std::uint32_t>(toks[2], lineno)};
    for (std::uint32_t x : {g.row, g.col, g.value})
      if (x < 1 || x > inst.order)
        throw ParseError(lineno, "value " + std::to_string(x) + " out of range 1.." +
                                     std::to_string(inst.order));
    if (!cells.insert({g.row, g.col}).second)
      throw ParseError(lineno, "cell (" + std::to_string(g.row) + "," + std::to_string(g.col) +
                                   ") repeated");
    inst.givens.push_back(g);
  }
  if (!have_header)
    throw ParseError(lineno, "missing 'p latin' header");
  if (inst.givens.size() != declared)
    throw ParseError(lineno, "header declares " + std::to_string(declared) + " givens, found " +
                                 std::to_string(inst.givens.size()));
  return inst;
}

LatinInstance parse_latin(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_latin(in);
}

void write_latin(const LatinInstance &inst, std::ostream &out) {
  out << "p latin " << inst.order << ' ' << inst.givens.size() << '\n';
  for (const auto &g : inst.givens)
    out << g.row << ' ' << g.col << ' ' << g.value << '\n';
}

std::string write_latin(const LatinInstance &inst) {
  return to_string_via([&](std::ostream &os) { write_latin(inst, os); });
}

// -------------------------------------------------------------- models

void write_model(const std::optional<Assignment> &model, std::ostream &out) {
  if (!model) {
    out << "s UNKNOWN\n";
    return;
  }
  out << "s SATISFIABLE\nv";
  for (AtomId a = 1; a <= model->num_atoms(); ++a)
    out << ' ' << ((*model)[a] ? "" : "-") << a;
  out << " 0\n";
}

std::string write_model(const std::optional<Assignment> &model) {
  return to_string_via([&](std::ostream &os) { write_model(model, os); });
}

std::optional<Assignment> parse_model(std::istream &in, std::uint32_t num_atoms) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<bool> satisfiable;
  Assignment sigma(num_atoms);
  while (next_line(in, line, lineno)) {
    if (is_comment(line) || is_blank(line))
      continue;
    auto toks = split_ws(line);
    if (toks[0] == "s") {
      if (toks.size() < 2)
        throw ParseError(lineno, "malformed status line");
      satisfiable = toks[1] == "SATISFIABLE";
    } else if (toks[0] == "v") {
      if (satisfiable != true)
        throw ParseError(lineno, "'v' line without 's SATISFIABLE'");
      for (std::size_t i = 1; i < toks.size(); ++i) {
        auto lit = to_int<std::int64_t>(toks[i], lineno);
        if (lit == 0)
          continue;
        std::int64_t a = lit < 0 ? -lit : lit;
        if (a > num_atoms)
          throw ParseError(lineno, "model literal " + std::to_string(lit) + " out of range");
        sigma.set(static_cast<AtomId>(a), lit > 0);
      }
    } else {
      throw ParseError(lineno, "unexpected line '" + line + "'");
    }
  }
  if (!satisfiable)
    throw ParseError(lineno, "missing status line");
  if (!*satisfiable)
    return std::nullopt;
  return sigma;
}

std::optional<Assignment> parse_model(std::string_view text, std::uint32_t num_atoms) {
  std::istringstream in{std::string(text)};
  return parse_model(in, num_atoms);
}

} // namespace ccsat
