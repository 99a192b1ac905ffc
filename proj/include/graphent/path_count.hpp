#pragma once

// Exact path counting on graph windows. Every series is computed by a
// big-integer dynamic program over path length; no enumeration.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "graphent/error.hpp"
#include "graphent/graph.hpp"
#include "graphent/numeric.hpp"
#include "graphent/window.hpp"

namespace graphent {

// THROUGH      paths of length n visiting v anywhere
// SOURCE       paths starting at v
// SOURCE_STAR  paths starting at v with r(alpha_i) != v for every edge
// RANGE        paths ending at v
// RANGE_STAR   paths ending at v with s(alpha_i) != v for every edge
// LOOP         paths starting and ending at v
enum class PathClass { Through, Source, SourceStar, Range, RangeStar, Loop };

inline std::string_view to_string(PathClass c) {
  switch (c) {
    case PathClass::Through: return "through";
    case PathClass::Source: return "source";
    case PathClass::SourceStar: return "source-star";
    case PathClass::Range: return "range";
    case PathClass::RangeStar: return "range-star";
    case PathClass::Loop: return "loop";
  }
  return "?";
}

inline PathClass parse_path_class(std::string_view name) {
  for (auto c : {PathClass::Through, PathClass::Source, PathClass::SourceStar,
                 PathClass::Range, PathClass::RangeStar, PathClass::Loop}) {
    if (to_string(c) == name) return c;
  }
  raise(ErrorKind::ParseError, "unknown path class " + std::string(name));
}

/// a_0 .. a_N for one path class at one vertex.
struct CountSeries {
  std::string vertex;
  PathClass path_class = PathClass::Source;
  std::vector<BigInt> counts;
  std::size_t window_radius = 0;

  std::size_t n_max() const { return counts.empty() ? 0 : counts.size() - 1; }
  const BigInt& operator[](std::size_t n) const { return counts[n]; }
};

/// f_1 .. f_N: loops at v whose only visits to v are the endpoints.
/// counts[0] is 0 by convention.
struct FirstReturnSeries {
  std::string vertex;
  std::vector<BigInt> counts;
};

namespace detail {

using Layer = std::vector<BigInt>;

inline Layer unit_layer(const FiniteGraph& g, VertexId v) {
  Layer layer(g.vertex_count(), 0);
  layer[v] = 1;
  return layer;
}

inline Layer step_forward(const FiniteGraph& g, const Layer& cur) {
  Layer next(g.vertex_count(), 0);
  for (const auto& e : g.edges()) {
    if (sgn(cur[e.src]) != 0) next[e.dst] += cur[e.src];
  }
  return next;
}

inline Layer step_backward(const FiniteGraph& g, const Layer& cur) {
  Layer next(g.vertex_count(), 0);
  for (const auto& e : g.edges()) {
    if (sgn(cur[e.dst]) != 0) next[e.src] += cur[e.dst];
  }
  return next;
}

inline BigInt total(const Layer& layer) {
  BigInt sum = 0;
  for (const auto& x : layer) sum += x;
  return sum;
}

// Paths from v (forward) or into v (backward); `avoid` zeroes v after every
// step, which enforces the starred avoidance condition on all n edges.
inline std::vector<BigInt> anchored_counts(const FiniteGraph& g, VertexId v,
                                           std::size_t n_max, bool forward,
                                           bool avoid) {
  std::vector<BigInt> counts;
  Layer layer = unit_layer(g, v);
  for (std::size_t n = 0;; ++n) {
    counts.push_back(total(layer));
    if (n == n_max) break;
    layer = forward ? step_forward(g, layer) : step_backward(g, layer);
    if (avoid) layer[v] = 0;
  }
  return counts;
}

inline std::vector<BigInt> loop_counts(const FiniteGraph& g, VertexId v,
                                       std::size_t n_max) {
  std::vector<BigInt> counts;
  Layer layer = unit_layer(g, v);
  for (std::size_t n = 0;; ++n) {
    counts.push_back(layer[v]);
    if (n == n_max) break;
    layer = step_forward(g, layer);
  }
  return counts;
}

inline std::vector<BigInt> convolve(const std::vector<BigInt>& a,
                                    const std::vector<BigInt>& b,
                                    std::size_t n_max) {
  std::vector<BigInt> out(n_max + 1, 0);
  for (std::size_t n = 0; n <= n_max; ++n) {
    for (std::size_t k = 0; k <= n; ++k) out[n] += a[k] * b[n - k];
  }
  return out;
}

}  // namespace detail

/// THROUGH counts by a two-state DP that marks whether v has been visited.
inline std::vector<BigInt> through_counts_marked(const GraphWindow& window,
                                                 VertexId v,
                                                 std::size_t n_max) {
  window.require(n_max, v);
  const auto& g = window.graph;
  const std::size_t size = g.vertex_count();
  detail::Layer unseen(size, 1), seen(size, 0);
  unseen[v] = 0;
  seen[v] = 1;
  std::vector<BigInt> counts;
  for (std::size_t n = 0;; ++n) {
    counts.push_back(detail::total(seen));
    if (n == n_max) break;
    detail::Layer next_unseen(size, 0), next_seen(size, 0);
    for (const auto& e : g.edges()) {
      if (e.dst == v) {
        next_seen[e.dst] += unseen[e.src];
      } else {
        next_unseen[e.dst] += unseen[e.src];
      }
      next_seen[e.dst] += seen[e.src];
    }
    unseen = std::move(next_unseen);
    seen = std::move(next_seen);
  }
  return counts;
}

/// THROUGH counts by splitting each path at its first visit to v:
/// |E^n(v)| = sum_k |E_r^k(v*)| |E_s^(n-k)(v)|.
inline std::vector<BigInt> through_counts_convolved(const GraphWindow& window,
                                                    VertexId v,
                                                    std::size_t n_max) {
  window.require(n_max, v);
  const auto& g = window.graph;
  return detail::convolve(detail::anchored_counts(g, v, n_max, false, true),
                          detail::anchored_counts(g, v, n_max, true, false),
                          n_max);
}

inline CountSeries count_class(const GraphWindow& window, VertexId v,
                               PathClass path_class, std::size_t n_max) {
  window.require(n_max, v);
  const auto& g = window.graph;
  CountSeries series;
  series.vertex = g.label(v);
  series.path_class = path_class;
  series.window_radius = window.radius;
  switch (path_class) {
    case PathClass::Source:
      series.counts = detail::anchored_counts(g, v, n_max, true, false);
      break;
    case PathClass::SourceStar:
      series.counts = detail::anchored_counts(g, v, n_max, true, true);
      break;
    case PathClass::Range:
      series.counts = detail::anchored_counts(g, v, n_max, false, false);
      break;
    case PathClass::RangeStar:
      series.counts = detail::anchored_counts(g, v, n_max, false, true);
      break;
    case PathClass::Loop:
      series.counts = detail::loop_counts(g, v, n_max);
      break;
    case PathClass::Through:
      series.counts = through_counts_convolved(window, v, n_max);
#ifndef NDEBUG
      if (series.counts != through_counts_marked(window, v, n_max)) {
        throw std::logic_error("THROUGH counts disagree between DPs");
      }
#endif
      break;
  }
  return series;
}

inline CountSeries count_class(const GraphWindow& window,
                               const std::string& vertex, PathClass path_class,
                               std::size_t n_max) {
  return count_class(window, window.vertex(vertex), path_class, n_max);
}

inline FirstReturnSeries first_return_counts(const GraphWindow& window,
                                             VertexId v, std::size_t n_max) {
  window.require(n_max, v);
  const auto& g = window.graph;
  FirstReturnSeries series{g.label(v), {BigInt(0)}};
  detail::Layer layer = detail::unit_layer(g, v);
  for (std::size_t m = 1; m <= n_max; ++m) {
    layer = detail::step_forward(g, layer);
    series.counts.push_back(layer[v]);
    layer[v] = 0;
  }
  return series;
}

struct IdentityFailure {
  std::size_t n;
  BigInt lhs;
  BigInt rhs;
};

struct IdentityReport {
  std::string name;
  bool passed = true;
  std::size_t n_max = 0;
  std::vector<IdentityFailure> failures;
};

/// |E_l^n(v)| = sum_{m=1..n} f_m |E_l^(n-m)(v)| for n >= 1.
inline IdentityReport renewal_check(const CountSeries& loops,
                                    const FirstReturnSeries& first_returns) {
  IdentityReport report{"renewal", true, loops.n_max(), {}};
  const std::size_t n_max =
      std::min(loops.n_max(), first_returns.counts.size() - 1);
  report.n_max = n_max;
  for (std::size_t n = 1; n <= n_max; ++n) {
    BigInt rhs = 0;
    for (std::size_t m = 1; m <= n; ++m) {
      rhs += first_returns.counts[m] * loops.counts[n - m];
    }
    if (rhs != loops.counts[n]) {
      report.passed = false;
      report.failures.push_back({n, loops.counts[n], rhs});
    }
  }
  return report;
}

inline IdentityReport renewal_check(const GraphWindow& window, VertexId v,
                                    std::size_t n_max) {
  return renewal_check(count_class(window, v, PathClass::Loop, n_max),
                       first_return_counts(window, v, n_max));
}

/// Checks |E^n(v)| = sum_k |E_r^k(v*)| |E_s^(n-k)(v)| against the marked DP.
inline IdentityReport convolution_check(const GraphWindow& window, VertexId v,
                                        std::size_t n_max) {
  IdentityReport report{"convolution", true, n_max, {}};
  const auto lhs = through_counts_marked(window, v, n_max);
  const auto rhs = through_counts_convolved(window, v, n_max);
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (lhs[n] != rhs[n]) {
      report.passed = false;
      report.failures.push_back({n, lhs[n], rhs[n]});
    }
  }
  return report;
}

/// Number of length-n paths touching at least one vertex of `vset`, split at
/// the first touch: paths into v that avoid vset before their end, followed
/// by any path out of v.
inline BigInt count_through_set(const GraphWindow& window,
                                const std::vector<VertexId>& vset,
                                std::size_t n) {
  const auto& g = window.graph;
  std::vector<VertexId> members(vset);
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::vector<bool> blocked(g.vertex_count(), false);
  for (VertexId v : members) {
    window.require(n, v);
    blocked[v] = true;
  }
  BigInt total = 0;
  for (VertexId v : members) {
    detail::Layer layer = detail::unit_layer(g, v);
    std::vector<BigInt> first_touch;
    for (std::size_t k = 0;; ++k) {
      first_touch.push_back(detail::total(layer));
      if (k == n) break;
      layer = detail::step_backward(g, layer);
      for (VertexId w = 0; w < g.vertex_count(); ++w) {
        if (blocked[w]) layer[w] = 0;
      }
    }
    const auto out = detail::anchored_counts(g, v, n, true, false);
    for (std::size_t k = 0; k <= n; ++k) total += first_touch[k] * out[n - k];
  }
  return total;
}

inline void write_csv(std::ostream& out, const CountSeries& series) {
  out << "n,count\n";
  for (std::size_t n = 0; n < series.counts.size(); ++n) {
    out << n << ',' << to_decimal(series.counts[n]) << '\n';
  }
}

inline nlohmann::ordered_json to_json(const CountSeries& series) {
  nlohmann::ordered_json counts = nlohmann::ordered_json::array();
  for (const auto& c : series.counts) counts.push_back(to_decimal(c));
  return {{"vertex", series.vertex},
          {"class", std::string(to_string(series.path_class))},
          {"n_max", series.n_max()},
          {"window_radius", series.window_radius},
          {"counts", counts}};
}

inline nlohmann::ordered_json to_json(const IdentityReport& report) {
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const auto& f : report.failures) {
    failures.push_back(
        {{"n", f.n}, {"lhs", to_decimal(f.lhs)}, {"rhs", to_decimal(f.rhs)}});
  }
  return {{"check", report.name},
          {"passed", report.passed},
          {"n_max", report.n_max},
          {"failures", failures}};
}

}  // namespace graphent
