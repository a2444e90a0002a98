#include "ccsat/encode.hpp"

#include <algorithm>
#include <numeric>

#include "ccsat/rng.hpp"

namespace ccsat {
namespace {

std::string join_name(const char *stem, std::initializer_list<std::uint32_t> idx) {
  std::string s = stem;
  for (auto i : idx)
    s += "_" + std::to_string(i);
  return s;
}

// std::shuffle's draws differ between standard libraries; this one does not.
template <typename T> void shuffle_prefix(std::vector<T> &v, std::size_t prefix, Rng &rng) {
  for (std::size_t i = 0; i < prefix && i + 1 < v.size(); ++i)
    std::swap(v[i], v[i + rng.below(v.size() - i)]);
}

std::uint64_t pairs(std::uint64_t n) { return n * (n - (n > 0 ? 1 : 0)) / 2; }

// `count` distinct edges drawn uniformly among the `available` pairs u < v
// with accept(u, v).
template <typename Accept>
GraphInstance sample_edges(std::uint32_t n, std::uint64_t available, std::uint32_t count,
                           Rng &rng, Accept accept) {
  if (count > available)
    throw std::invalid_argument("requested " + std::to_string(count) + " edges but only " +
                                std::to_string(available) + " pairs are allowed");
  GraphInstance g;
  g.num_vertices = n;
  if (std::uint64_t{count} * 4 >= available) {
    // Dense: enumerate and take a random prefix.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> all;
    for (std::uint32_t u = 1; u <= n; ++u)
      for (std::uint32_t v = u + 1; v <= n; ++v)
        if (accept(u, v))
          all.emplace_back(u, v);
    shuffle_prefix(all, count, rng);
    all.resize(count);
    std::sort(all.begin(), all.end());
    g.edges = std::move(all);
    return g;
  }
  while (g.edges.size() < count) {
    const auto u = static_cast<std::uint32_t>(rng.below(n) + 1);
    const auto v = static_cast<std::uint32_t>(rng.below(n) + 1);
    if (u != v && accept(std::min(u, v), std::max(u, v)))
      g.add_edge(u, v);
  }
  return g;
}

} // namespace

AtomId coloring_atom(std::uint32_t vertex, std::uint32_t color, std::uint32_t k) {
  return (vertex - 1) * k + color;
}

AtomId latin_atom(std::uint32_t row, std::uint32_t col, std::uint32_t value, std::uint32_t n) {
  return ((row - 1) * n + (col - 1)) * n + value;
}

Theory encode_coloring(const GraphInstance &g, std::uint32_t k) {
  if (k == 0)
    throw std::invalid_argument("coloring needs at least one color");
  Theory t;
  t.num_atoms = g.num_vertices * k;
  for (std::uint32_t i = 1; i <= g.num_vertices; ++i)
    for (std::uint32_t j = 1; j <= k; ++j)
      t.atom_names.push_back(join_name("c", {i, j}));
  for (std::uint32_t i = 1; i <= g.num_vertices; ++i) {
    std::vector<AtomId> xs;
    for (std::uint32_t j = 1; j <= k; ++j)
      xs.push_back(coloring_atom(i, j, k));
    t.clauses.push_back({{Literal::catom(CAtom(1, 1, std::move(xs)))}});
  }
  for (const auto &[p, r] : g.edges)
    for (std::uint32_t j = 1; j <= k; ++j)
      t.clauses.push_back({{Literal::atom(coloring_atom(p, j, k), true),
                            Literal::atom(coloring_atom(r, j, k), true)}});
  return t;
}

Theory encode_vertex_cover(const GraphInstance &g, std::uint32_t k) {
  Theory t;
  t.num_atoms = g.num_vertices;
  std::vector<AtomId> xs;
  for (std::uint32_t i = 1; i <= g.num_vertices; ++i) {
    t.atom_names.push_back(join_name("in", {i}));
    xs.push_back(i);
  }
  if (!xs.empty())
    t.clauses.push_back({{Literal::catom(CAtom(std::nullopt, k, std::move(xs)))}});
  for (const auto &[p, r] : g.edges)
    t.clauses.push_back({{Literal::atom(p), Literal::atom(r)}});
  return t;
}

Theory encode_latin(const LatinInstance &inst) {
  inst.check();
  const std::uint32_t n = inst.order;
  Theory t;
  t.num_atoms = n * n * n;
  for (std::uint32_t i = 1; i <= n; ++i)
    for (std::uint32_t j = 1; j <= n; ++j)
      for (std::uint32_t v = 1; v <= n; ++v)
        t.atom_names.push_back(join_name("a", {i, j, v}));
  for (const auto &d : inst.givens)
    t.clauses.push_back({{Literal::atom(latin_atom(d.row, d.col, d.value, n))}});
  auto add = [&](std::optional<std::uint32_t> lo, auto atom_of) {
    for (std::uint32_t p = 1; p <= n; ++p)
      for (std::uint32_t q = 1; q <= n; ++q) {
        std::vector<AtomId> xs;
        for (std::uint32_t r = 1; r <= n; ++r)
          xs.push_back(atom_of(p, q, r));
        t.clauses.push_back({{Literal::catom(CAtom(lo, 1, std::move(xs)))}});
      }
  };
  add(1, [n](auto i, auto j, auto v) { return latin_atom(i, j, v, n); });            // cells
  add(std::nullopt, [n](auto i, auto v, auto j) { return latin_atom(i, j, v, n); }); // rows
  add(std::nullopt, [n](auto j, auto v, auto i) { return latin_atom(i, j, v, n); }); // columns
  return t;
}

void check_coloring(const GraphInstance &g, std::uint32_t k, const ColoringSolution &s) {
  if (s.color.size() != g.num_vertices)
    throw ValidationFailed("coloring has the wrong number of vertices");
  for (std::uint32_t c : s.color)
    if (c < 1 || c > k)
      throw ValidationFailed("color " + std::to_string(c) + " out of range");
  for (const auto &[u, v] : g.edges)
    if (s.color[u - 1] == s.color[v - 1])
      throw ValidationFailed("edge " + std::to_string(u) + "-" + std::to_string(v) +
                             " is monochromatic");
}

void check_cover(const GraphInstance &g, std::uint32_t k, const CoverSolution &s) {
  if (s.vertices.size() > k)
    throw ValidationFailed("cover has " + std::to_string(s.vertices.size()) +
                           " vertices, more than " + std::to_string(k));
  if (!std::is_sorted(s.vertices.begin(), s.vertices.end()) ||
      std::adjacent_find(s.vertices.begin(), s.vertices.end()) != s.vertices.end())
    throw ValidationFailed("cover vertices are not strictly ascending");
  auto in = [&](std::uint32_t v) {
    return std::binary_search(s.vertices.begin(), s.vertices.end(), v);
  };
  for (const auto &[u, v] : g.edges)
    if (!in(u) && !in(v))
      throw ValidationFailed("edge " + std::to_string(u) + "-" + std::to_string(v) +
                             " is not covered");
}

void check_latin(const LatinInstance &inst, const LatinSolution &s) {
  const std::uint32_t n = inst.order;
  if (s.order != n || s.cells.size() != std::size_t{n} * n)
    throw ValidationFailed("square has the wrong order");
  for (std::uint32_t a = 1; a <= n; ++a) {
    std::vector<char> in_row(n + 1, 0), in_col(n + 1, 0);
    for (std::uint32_t b = 1; b <= n; ++b) {
      const std::uint32_t r = s.at(a, b), c = s.at(b, a);
      if (r < 1 || r > n || c < 1 || c > n)
        throw ValidationFailed("cell value out of range");
      if (in_row[r]++)
        throw ValidationFailed("row " + std::to_string(a) + " repeats " + std::to_string(r));
      if (in_col[c]++)
        throw ValidationFailed("column " + std::to_string(a) + " repeats " + std::to_string(c));
    }
  }
  for (const auto &d : inst.givens)
    if (s.at(d.row, d.col) != d.value)
      throw ValidationFailed("given cell (" + std::to_string(d.row) + "," +
                             std::to_string(d.col) + ") changed");
}

ColoringSolution decode_coloring(const GraphInstance &g, std::uint32_t k, const Assignment &sigma) {
  if (sigma.num_atoms() != g.num_vertices * k)
    throw ValidationFailed("assignment size does not match the coloring encoding");
  ColoringSolution s;
  for (std::uint32_t i = 1; i <= g.num_vertices; ++i) {
    std::uint32_t found = 0;
    for (std::uint32_t j = 1; j <= k; ++j) {
      if (!sigma[coloring_atom(i, j, k)])
        continue;
      if (found)
        throw ValidationFailed("vertex " + std::to_string(i) + " has two colors");
      found = j;
    }
    if (!found)
      throw ValidationFailed("vertex " + std::to_string(i) + " has no color");
    s.color.push_back(found);
  }
  check_coloring(g, k, s);
  return s;
}

CoverSolution decode_cover(const GraphInstance &g, std::uint32_t k, const Assignment &sigma) {
  if (sigma.num_atoms() != g.num_vertices)
    throw ValidationFailed("assignment size does not match the cover encoding");
  CoverSolution s;
  for (std::uint32_t i = 1; i <= g.num_vertices; ++i)
    if (sigma[i])
      s.vertices.push_back(i);
  check_cover(g, k, s);
  return s;
}

LatinSolution decode_latin(const LatinInstance &inst, const Assignment &sigma) {
  const std::uint32_t n = inst.order;
  if (sigma.num_atoms() != n * n * n)
    throw ValidationFailed("assignment size does not match the latin encoding");
  LatinSolution s{n, {}};
  for (std::uint32_t i = 1; i <= n; ++i)
    for (std::uint32_t j = 1; j <= n; ++j) {
      std::uint32_t found = 0;
      for (std::uint32_t v = 1; v <= n; ++v) {
        if (!sigma[latin_atom(i, j, v, n)])
          continue;
        if (found)
          throw ValidationFailed("cell (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") holds two values");
        found = v;
      }
      if (!found)
        throw ValidationFailed("cell (" + std::to_string(i) + "," + std::to_string(j) +
                               ") is empty");
      s.cells.push_back(found);
    }
  check_latin(inst, s);
  return s;
}

GraphInstance gen_planted_coloring_graph(std::uint32_t n, std::uint32_t k, std::uint32_t edges,
                                         std::uint64_t seed, ColoringSolution *witness) {
  if (k == 0)
    throw std::invalid_argument("coloring needs at least one color");
  std::vector<std::uint32_t> cls(n + 1, 0);
  std::vector<std::uint64_t> class_size(k, 0);
  for (std::uint32_t v = 1; v <= n; ++v) {
    cls[v] = static_cast<std::uint32_t>(std::uint64_t{v - 1} * k / n);
    ++class_size[cls[v]];
  }
  std::uint64_t same = 0;
  for (auto s : class_size)
    same += pairs(s);
  Rng rng(seed);
  GraphInstance g = sample_edges(n, pairs(n) - same, edges, rng,
                                 [&](std::uint32_t u, std::uint32_t v) { return cls[u] != cls[v]; });
  if (witness) {
    witness->color.clear();
    for (std::uint32_t v = 1; v <= n; ++v)
      witness->color.push_back(cls[v] + 1);
  }
  return g;
}

GraphInstance gen_planted_cover_graph(std::uint32_t n, std::uint32_t cover_size,
                                      std::uint32_t edges, std::uint64_t seed,
                                      CoverSolution *witness) {
  if (cover_size > n)
    throw std::invalid_argument("cover size exceeds the number of vertices");
  Rng rng(seed);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 1u);
  shuffle_prefix(order, cover_size, rng);
  std::vector<char> in(n + 1, 0);
  for (std::uint32_t i = 0; i < cover_size; ++i)
    in[order[i]] = 1;
  GraphInstance g = sample_edges(n, pairs(n) - pairs(n - cover_size), edges, rng,
                                 [&](std::uint32_t u, std::uint32_t v) { return in[u] || in[v]; });
  if (witness) {
    witness->vertices.assign(order.begin(), order.begin() + cover_size);
    std::sort(witness->vertices.begin(), witness->vertices.end());
  }
  return g;
}

GraphInstance gen_random_graph(std::uint32_t n, std::uint32_t edges, std::uint64_t seed) {
  Rng rng(seed);
  return sample_edges(n, pairs(n), edges, rng, [](std::uint32_t, std::uint32_t) { return true; });
}

LatinInstance gen_latin_instance(std::uint32_t n, std::uint32_t givens, std::uint64_t seed,
                                 LatinSolution *witness) {
  if (n == 0)
    throw std::invalid_argument("latin square order must be positive");
  if (std::uint64_t{givens} > std::uint64_t{n} * n)
    throw std::invalid_argument("more givens than cells");
  Rng rng(seed);
  auto perm = [&] {
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0u);
    shuffle_prefix(p, n, rng);
    return p;
  };
  const auto rows = perm(), cols = perm(), symbols = perm();
  LatinSolution full{n, std::vector<std::uint32_t>(std::size_t{n} * n)};
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      full.cells[i * n + j] = symbols[(rows[i] + cols[j]) % n] + 1;

  std::vector<std::uint32_t> cells(std::size_t{n} * n);
  std::iota(cells.begin(), cells.end(), 0u);
  shuffle_prefix(cells, givens, rng);
  cells.resize(givens);
  std::sort(cells.begin(), cells.end());
  LatinInstance inst{n, {}};
  for (std::uint32_t c : cells)
    inst.givens.push_back({c / n + 1, c % n + 1, full.cells[c]});
  if (witness)
    *witness = std::move(full);
  return inst;
}

} // namespace ccsat
