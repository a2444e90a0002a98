#pragma once

// Encodings of three combinatorial problems as theories with c-atoms, their
// decoders, and generators of instances that are satisfiable by construction.
//
// Atom numbering (1-based vertices, colors, rows, columns and values):
//   coloring      c(i,j) "vertex i has color j"     -> (i-1)*k + j
//   vertex cover  in(i)  "vertex i is in the cover" -> i
//   latin square  a(i,j,v) "cell (i,j) holds v"     -> ((i-1)*n + (j-1))*n + v

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccsat/core.hpp"
#include "ccsat/io.hpp"

namespace ccsat {

/// A model that does not decode into a valid solution. Always a bug in the
/// encoder or the solver, never bad user input.
class ValidationFailed : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ColoringSolution {
  std::vector<std::uint32_t> color; // color[v-1] in 1..k
  friend bool operator==(const ColoringSolution &, const ColoringSolution &) = default;
};

struct CoverSolution {
  std::vector<std::uint32_t> vertices; // ascending
  friend bool operator==(const CoverSolution &, const CoverSolution &) = default;
};

struct LatinSolution {
  std::uint32_t order = 0;
  std::vector<std::uint32_t> cells; // row-major, values in 1..order

  std::uint32_t at(std::uint32_t row, std::uint32_t col) const {
    return cells[(row - 1) * order + (col - 1)];
  }
  friend bool operator==(const LatinSolution &, const LatinSolution &) = default;
};

AtomId coloring_atom(std::uint32_t vertex, std::uint32_t color, std::uint32_t k);
AtomId latin_atom(std::uint32_t row, std::uint32_t col, std::uint32_t value, std::uint32_t n);

/// One `1{c(i,1..k)}1` per vertex, then `-c(p,j) | -c(r,j)` per edge and color.
Theory encode_coloring(const GraphInstance &g, std::uint32_t k);
/// `{in(1..n)}k`, then `in(p) | in(r)` per edge.
Theory encode_vertex_cover(const GraphInstance &g, std::uint32_t k);
/// Given cells as unit clauses, then per cell `1{..}1`, per row and value
/// `{..}1`, per column and value `{..}1`.
Theory encode_latin(const LatinInstance &inst);

// Decoders read the model and then check the solution against the raw
// instance. They throw ValidationFailed on any violation.
ColoringSolution decode_coloring(const GraphInstance &g, std::uint32_t k, const Assignment &sigma);
CoverSolution decode_cover(const GraphInstance &g, std::uint32_t k, const Assignment &sigma);
LatinSolution decode_latin(const LatinInstance &inst, const Assignment &sigma);

void check_coloring(const GraphInstance &g, std::uint32_t k, const ColoringSolution &s);
void check_cover(const GraphInstance &g, std::uint32_t k, const CoverSolution &s);
void check_latin(const LatinInstance &inst, const LatinSolution &s);

/// Vertices split into k contiguous near-equal classes; `edges` distinct
/// cross-class edges drawn uniformly. Throws std::invalid_argument when there
/// are not enough cross-class pairs.
GraphInstance gen_planted_coloring_graph(std::uint32_t n, std::uint32_t k, std::uint32_t edges,
                                         std::uint64_t seed,
                                         ColoringSolution *witness = nullptr);

/// A hidden random cover U with |U| = cover_size; every edge touches U.
GraphInstance gen_planted_cover_graph(std::uint32_t n, std::uint32_t cover_size,
                                      std::uint32_t edges, std::uint64_t seed,
                                      CoverSolution *witness = nullptr);

/// Uniform over graphs with n vertices and exactly `edges` distinct edges.
/// Not guaranteed colorable or coverable.
GraphInstance gen_random_graph(std::uint32_t n, std::uint32_t edges, std::uint64_t seed);

/// A random full square (permuted cyclic square) with `givens` revealed cells.
LatinInstance gen_latin_instance(std::uint32_t n, std::uint32_t givens, std::uint64_t seed,
                                 LatinSolution *witness = nullptr);

} // namespace ccsat
