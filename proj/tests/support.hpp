#pragma once

// Independent oracles for the test suite. Nothing here calls the layer DPs
// of the library: paths are enumerated one by one, matrix powers use plain
// integer arithmetic.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "graphent/graphent.hpp"

namespace testing_support {

using graphent::BigInt;
using graphent::EdgeId;
using graphent::FiniteGraph;
using graphent::VertexId;

/// Every path of length n (as an edge sequence with its start vertex).
inline void for_each_path(const FiniteGraph& g, std::size_t n,
                          const std::function<void(VertexId, const std::vector<EdgeId>&)>& f) {
  std::vector<EdgeId> stack;
  std::function<void(VertexId, VertexId)> extend = [&](VertexId start, VertexId at) {
    if (stack.size() == n) {
      f(start, stack);
      return;
    }
    for (EdgeId e : g.out_edges(at)) {
      stack.push_back(e);
      extend(start, g.edge(e).dst);
      stack.pop_back();
    }
  };
  for (VertexId v = 0; v < g.vertex_count(); ++v) extend(v, v);
}

/// Vertex sequence v_0 .. v_n visited by a path.
inline std::vector<VertexId> visits(const FiniteGraph& g, VertexId start,
                                    const std::vector<EdgeId>& path) {
  std::vector<VertexId> out{start};
  for (EdgeId e : path) out.push_back(g.edge(e).dst);
  return out;
}

inline bool contains(const std::vector<VertexId>& seq, std::size_t from,
                     std::size_t to, VertexId v) {
  for (std::size_t i = from; i < to; ++i) {
    if (seq[i] == v) return true;
  }
  return false;
}

/// Brute-force count of one path class at v for length n.
inline BigInt brute_count(const FiniteGraph& g, VertexId v, graphent::PathClass cls,
                          std::size_t n) {
  using graphent::PathClass;
  BigInt count = 0;
  for_each_path(g, n, [&](VertexId start, const std::vector<EdgeId>& path) {
    const auto seq = visits(g, start, path);
    bool hit = false;
    switch (cls) {
      case PathClass::Through:
        hit = contains(seq, 0, seq.size(), v);
        break;
      case PathClass::Source:
        hit = start == v;
        break;
      case PathClass::SourceStar:
        hit = start == v && !contains(seq, 1, seq.size(), v);
        break;
      case PathClass::Range:
        hit = seq.back() == v;
        break;
      case PathClass::RangeStar:
        hit = seq.back() == v && !contains(seq, 0, seq.size() - 1, v);
        break;
      case PathClass::Loop:
        hit = start == v && seq.back() == v;
        break;
    }
    if (hit) ++count;
  });
  return count;
}

/// Loops at v of length n that meet v only at their ends. Paths are
/// enumerated from v; branches that cannot get back to v in the remaining
/// steps (BFS distance on reversed edges) are cut.
inline BigInt brute_first_returns(const FiniteGraph& g, VertexId v, std::size_t n) {
  std::vector<std::size_t> to_v(g.vertex_count(), SIZE_MAX);
  std::vector<VertexId> queue{v};
  to_v[v] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (EdgeId e : g.in_edges(queue[i])) {
      const VertexId u = g.edge(e).src;
      if (to_v[u] == SIZE_MAX) {
        to_v[u] = to_v[queue[i]] + 1;
        queue.push_back(u);
      }
    }
  }
  BigInt count = 0;
  std::function<void(VertexId, std::size_t)> walk = [&](VertexId at, std::size_t used) {
    if (used == n) {
      if (at == v) ++count;
      return;
    }
    if (used > 0 && at == v) return;
    if (to_v[at] == SIZE_MAX || to_v[at] > n - used) return;
    for (EdgeId e : g.out_edges(at)) walk(g.edge(e).dst, used + 1);
  };
  if (n > 0) walk(v, 0);
  return count;
}

/// Paths of length n meeting the vertex set.
inline BigInt brute_through_set(const FiniteGraph& g, const std::vector<VertexId>& vset,
                                std::size_t n) {
  BigInt count = 0;
  for_each_path(g, n, [&](VertexId start, const std::vector<EdgeId>& path) {
    const auto seq = visits(g, start, path);
    for (VertexId v : vset) {
      if (contains(seq, 0, seq.size(), v)) {
        ++count;
        return;
      }
    }
  });
  return count;
}

/// Sum of all entries of A^n, by repeated integer multiplication.
inline BigInt matrix_power_total(const FiniteGraph& g, std::size_t n) {
  const std::size_t d = g.vertex_count();
  std::vector<std::vector<BigInt>> a(d, std::vector<BigInt>(d, 0));
  for (const auto& e : g.edges()) a[e.src][e.dst] += 1;
  std::vector<std::vector<BigInt>> p(d, std::vector<BigInt>(d, 0));
  for (std::size_t i = 0; i < d; ++i) p[i][i] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::vector<BigInt>> q(d, std::vector<BigInt>(d, 0));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t m = 0; m < d; ++m) q[i][m] += p[i][j] * a[j][m];
    p = std::move(q);
  }
  BigInt total = 0;
  for (const auto& row : p)
    for (const auto& x : row) total += x;
  return total;
}

inline FiniteGraph fibonacci() {
  return graphent::build_finite({"a", "b"},
                                {{"e1", "a", "a"}, {"e2", "a", "b"}, {"e3", "b", "a"}});
}

inline FiniteGraph two_cycle() {
  return graphent::build_finite({"a", "b"}, {{"e1", "a", "b"}, {"e2", "b", "a"}});
}

inline FiniteGraph single_loop() {
  return graphent::build_finite({"x"}, {{"l", "x", "x"}});
}

inline FiniteGraph random_corpus_graph(std::uint64_t seed) {
  return graphent::random_strongly_connected(6, 0.4, seed);
}

/// Arbitrary (possibly reducible) small graph with parallel edges and loops.
inline FiniteGraph random_multigraph(std::mt19937_64& rng, std::size_t n_vertices,
                                     std::size_t n_edges) {
  std::vector<std::string> vertices;
  for (std::size_t i = 0; i < n_vertices; ++i) vertices.push_back("v" + std::to_string(i));
  std::vector<graphent::EdgeSpec> edges;
  std::uniform_int_distribution<std::size_t> pick(0, n_vertices - 1);
  for (std::size_t i = 0; i < n_edges; ++i) {
    edges.push_back({"x" + std::to_string(i), vertices[pick(rng)], vertices[pick(rng)]});
  }
  return graphent::build_finite(vertices, edges);
}

/// log of the largest real root of x^2 - x - 1.
inline double log_golden() { return std::log((1.0 + std::sqrt(5.0)) / 2.0); }

}  // namespace testing_support
