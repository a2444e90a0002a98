#pragma once

// Readers and writers for the on-disk formats:
//
//   CCNF     theories with c-atoms   (`p ccnf <atoms> <clauses>`)
//   DIMACS   plain CNF               (`p cnf <atoms> <clauses>`)
//   .col     DIMACS graphs           (`p edge <n> <m>`, `e u v`)
//   latin    latin-square instances  (`p latin <n> <d>`, `i j k`)
//   model    solver output           (`s ...`, `v ... 0`)
//
// CCNF clause tokens: a nonzero signed integer is a propositional literal;
// `d lo hi cnt a1 .. acnt` is a c-atom and `nd ...` its negation, with -1
// standing for an absent bound. Each clause sits on one line and ends in 0.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ccsat/core.hpp"

namespace ccsat {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string &what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

struct CcnfDocument {
  Theory theory;
  // Free-form comment lines, without the leading "c ". Atom names travel as
  // `c atom <id> <name>` lines and are not repeated here.
  std::vector<std::string> comments;

  friend bool operator==(const CcnfDocument &, const CcnfDocument &) = default;
};

CcnfDocument parse_ccnf_document(std::istream &in);
Theory parse_ccnf(std::istream &in);
Theory parse_ccnf(std::string_view text);
void write_ccnf(const CcnfDocument &doc, std::ostream &out);
void write_ccnf(const Theory &theory, std::ostream &out);
std::string write_ccnf(const Theory &theory);

/// Description lines emitted as `c map <id> <text>` ahead of the header.
using MapComments = std::vector<std::pair<AtomId, std::string>>;

Cnf parse_dimacs(std::istream &in);
Cnf parse_dimacs(std::string_view text);
void write_dimacs(const Cnf &cnf, std::ostream &out, const MapComments &map = {});
std::string write_dimacs(const Cnf &cnf, const MapComments &map = {});

struct GraphInstance {
  std::uint32_t num_vertices = 0;
  // Normalized edges: u < v, sorted, no duplicates.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  /// Adds {u,v} keeping the normalized form. Rejects loops and out-of-range
  /// vertices with std::invalid_argument. Returns false for a duplicate.
  bool add_edge(std::uint32_t u, std::uint32_t v);

  friend bool operator==(const GraphInstance &, const GraphInstance &) = default;
};

GraphInstance parse_col_graph(std::istream &in);
GraphInstance parse_col_graph(std::string_view text);
void write_col_graph(const GraphInstance &g, std::ostream &out);
std::string write_col_graph(const GraphInstance &g);

struct LatinGiven {
  std::uint32_t row, col, value;
  friend bool operator==(const LatinGiven &, const LatinGiven &) = default;
};

struct LatinInstance {
  std::uint32_t order = 0;
  std::vector<LatinGiven> givens;

  /// Throws std::invalid_argument on an out-of-range triple or a repeated cell.
  void check() const;
  friend bool operator==(const LatinInstance &, const LatinInstance &) = default;
};

LatinInstance parse_latin(std::istream &in);
LatinInstance parse_latin(std::string_view text);
void write_latin(const LatinInstance &inst, std::ostream &out);
std::string write_latin(const LatinInstance &inst);

/// `s SATISFIABLE` plus one `v` line, or `s UNKNOWN` when there is no model.
void write_model(const std::optional<Assignment> &model, std::ostream &out);
std::string write_model(const std::optional<Assignment> &model);

/// Reads `v` lines back into an assignment over `num_atoms` atoms (atoms that
/// are not mentioned stay false). Returns nullopt for `s UNKNOWN`.
std::optional<Assignment> parse_model(std::istream &in, std::uint32_t num_atoms);
std::optional<Assignment> parse_model(std::string_view text, std::uint32_t num_atoms);

} // namespace ccsat
