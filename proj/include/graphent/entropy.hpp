#pragma once

// Growth-rate estimation for count series, the entropy quantities built on
// them, exact entropy of finite graphs, and the checks relating them.
//
// All values are natural logarithms. A growth rate limsup n^-1 log a_n is
// estimated from a finite prefix by looking at the tail window
// [ceil((1 - tail_fraction) n_max), n_max], optionally restricted to one
// residue class modulo a stride. The default estimator fits the slope of
// log a_n against n over that window, which cancels the constant prefactor
// of a_n ~ C lambda^n; the tail maximum of n^-1 log a_n is kept as an
// explicit alternative.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "graphent/error.hpp"
#include "graphent/graph.hpp"
#include "graphent/numeric.hpp"
#include "graphent/path_count.hpp"
#include "graphent/window.hpp"

namespace graphent {

enum class EstimateMethod {
  TailSlope,
  TailMax,
  StrideSubsequence,
  ExactSpectral,
  ExactClosedForm,
};

inline std::string_view to_string(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::TailSlope: return "tail_slope";
    case EstimateMethod::TailMax: return "tail_max";
    case EstimateMethod::StrideSubsequence: return "stride_subsequence";
    case EstimateMethod::ExactSpectral: return "exact_spectral";
    case EstimateMethod::ExactClosedForm: return "exact_closed_form";
  }
  return "?";
}

enum class Estimator { Slope, Max };

struct GrowthOptions {
  std::optional<std::size_t> stride;  // nullopt: 1, or auto for loop series
  double tail_fraction = 0.25;
  Estimator estimator = Estimator::Slope;
};

struct EntropyEstimate {
  std::string quantity;
  double value = 0;
  EstimateMethod method = EstimateMethod::TailSlope;
  std::size_t stride = 1;
  std::size_t n_lo = 0;
  std::size_t n_hi = 0;
  std::vector<std::pair<std::size_t, double>> raw;  // (n, n^-1 log a_n)
  std::size_t skipped = 0;
  std::string provenance;
  std::string note;
};

/// gcd of the gaps between consecutive nonzero entries (1 if fewer than two).
inline std::size_t support_period(const std::vector<BigInt>& counts) {
  std::size_t period = 0;
  std::optional<std::size_t> last;
  for (std::size_t n = 0; n < counts.size(); ++n) {
    if (sgn(counts[n]) == 0) continue;
    if (last) period = std::gcd(period, n - *last);
    last = n;
  }
  return period == 0 ? 1 : period;
}

inline EntropyEstimate growth_rate(const std::vector<BigInt>& counts,
                                   const GrowthOptions& options = {}) {
  if (counts.size() < 5) {
    raise(ErrorKind::InvalidParams, "growth_rate needs n_max >= 4");
  }
  if (!(options.tail_fraction > 0 && options.tail_fraction <= 1)) {
    raise(ErrorKind::InvalidParams, "tail_fraction must lie in (0, 1]");
  }
  const std::size_t n_max = counts.size() - 1;
  const std::size_t stride = options.stride.value_or(1);
  if (stride == 0) raise(ErrorKind::InvalidParams, "stride must be positive");

  EntropyEstimate est;
  est.stride = stride;
  est.n_hi = n_max;
  est.n_lo = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil((1.0 - options.tail_fraction) * n_max - 1e-9)));
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (sgn(counts[n]) != 0) {
      est.raw.emplace_back(n, log_big(counts[n]) / static_cast<double>(n));
    }
  }

  // Residue class anchored at the last nonzero index (n_max when a_{n_max} > 0).
  std::size_t anchor = n_max;
  while (anchor > 0 && sgn(counts[anchor]) == 0) --anchor;
  std::vector<std::pair<double, double>> points;  // (n, log a_n)
  for (std::size_t n = est.n_lo; n <= n_max; ++n) {
    if (n % stride != anchor % stride) continue;
    if (sgn(counts[n]) == 0) {
      ++est.skipped;
      continue;
    }
    points.emplace_back(static_cast<double>(n), log_big(counts[n]));
  }
  if (points.empty()) {
    raise(ErrorKind::AllZeroTail,
          "no nonzero count in [" + std::to_string(est.n_lo) + ", " +
              std::to_string(n_max) + "]");
  }

  if (options.estimator == Estimator::Max || points.size() == 1) {
    double best = 0;
    for (const auto& [n, y] : points) best = std::max(best, y / n);
    est.value = best;
    est.method = options.estimator == Estimator::Max
                     ? EstimateMethod::TailMax
                     : (stride > 1 ? EstimateMethod::StrideSubsequence
                                   : EstimateMethod::TailSlope);
  } else {
    double mean_x = 0, mean_y = 0;
    for (const auto& [x, y] : points) {
      mean_x += x;
      mean_y += y;
    }
    mean_x /= static_cast<double>(points.size());
    mean_y /= static_cast<double>(points.size());
    double sxy = 0, sxx = 0;
    for (const auto& [x, y] : points) {
      sxy += (x - mean_x) * (y - mean_y);
      sxx += (x - mean_x) * (x - mean_x);
    }
    // Entropies of integer counts >= 1 are nonnegative.
    est.value = std::max(0.0, sxy / sxx);
    est.method = stride > 1 ? EstimateMethod::StrideSubsequence
                            : EstimateMethod::TailSlope;
  }
  return est;
}

inline EntropyEstimate growth_rate(const CountSeries& series,
                                   const GrowthOptions& options = {}) {
  EntropyEstimate est = growth_rate(series.counts, options);
  est.quantity = "growth(" + std::string(to_string(series.path_class)) + ")";
  est.provenance = std::string(to_string(series.path_class)) +
                   " counts at vertex " + series.vertex + ", window radius " +
                   std::to_string(series.window_radius);
  return est;
}

namespace detail {

inline EntropyEstimate named_growth(const GraphWindow& window, VertexId v,
                                    PathClass path_class, std::size_t n_max,
                                    GrowthOptions options,
                                    const std::string& quantity,
                                    bool auto_stride) {
  const CountSeries series = count_class(window, v, path_class, n_max);
  if (auto_stride && !options.stride) {
    options.stride = support_period(series.counts);
  }
  EntropyEstimate est = growth_rate(series, options);
  est.quantity = quantity;
  return est;
}

}  // namespace detail

/// h_l: growth of loops at v; stride defaults to the period of the support.
inline EntropyEstimate loop_entropy(const GraphWindow& window, VertexId v,
                                    std::size_t n_max,
                                    const GrowthOptions& options = {}) {
  return detail::named_growth(window, v, PathClass::Loop, n_max, options,
                              "h_l", true);
}

/// h_b: growth of paths leaving v.
inline EntropyEstimate block_entropy(const GraphWindow& window, VertexId v,
                                     std::size_t n_max,
                                     const GrowthOptions& options = {}) {
  return detail::named_growth(window, v, PathClass::Source, n_max, options,
                              "h_b", false);
}

/// h_b of the transposed graph: growth of paths entering v.
inline EntropyEstimate coblock_entropy(const GraphWindow& window, VertexId v,
                                       std::size_t n_max,
                                       const GrowthOptions& options = {}) {
  return detail::named_growth(window, v, PathClass::Range, n_max, options,
                              "h_b_t", false);
}

inline EntropyEstimate through_growth(const GraphWindow& window, VertexId v,
                                      std::size_t n_max,
                                      const GrowthOptions& options = {}) {
  return detail::named_growth(window, v, PathClass::Through, n_max, options,
                              "through", false);
}

/// log R^-1 for the series sum a_n z^n. A series that vanishes on the whole
/// tail is a polynomial (R infinite); its value is reported as 0.
inline EntropyEstimate radius_inverse(const CountSeries& series,
                                      const GrowthOptions& options = {}) {
  std::string quantity = "log_inv_radius(" +
                         std::string(to_string(series.path_class)) + ")";
  if (series.path_class == PathClass::SourceStar) quantity = "log_inv_R_s_star";
  if (series.path_class == PathClass::RangeStar) quantity = "log_inv_R_r_star";
  try {
    EntropyEstimate est = growth_rate(series, options);
    est.quantity = quantity;
    return est;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::AllZeroTail) throw;
    EntropyEstimate est;
    est.quantity = quantity;
    est.n_hi = series.n_max();
    for (std::size_t n = 1; n < series.counts.size(); ++n) {
      if (sgn(series.counts[n]) != 0) {
        est.raw.emplace_back(n, log_big(series.counts[n]) / static_cast<double>(n));
      }
    }
    est.value = 0;
    est.method = EstimateMethod::ExactClosedForm;
    est.note = "finite support: series is a polynomial";
    return est;
  }
}

// ---------------------------------------------------------------------------
// Exact entropy of finite graphs

namespace detail {

// Perron root of the edge matrix restricted to one irreducible component,
// by power iteration on (A + I), which is primitive. nullopt if the
// iteration cap is reached.
inline std::optional<double> perron_root_power(const FiniteGraph& g,
                                               const std::vector<EdgeId>& edges,
                                               double tolerance,
                                               std::size_t max_iterations) {
  const std::size_t m = edges.size();
  std::vector<double> x(m, 1.0 / static_cast<double>(m)), y(m);
  std::vector<double> out_sum(g.vertex_count(), 0.0);
  double previous = -1;
  std::size_t stable = 0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::fill(out_sum.begin(), out_sum.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) out_sum[g.edge(edges[i]).src] += x[i];
    double norm = 0;
    for (std::size_t i = 0; i < m; ++i) {
      y[i] = x[i] + out_sum[g.edge(edges[i]).dst];
      norm += y[i];
    }
    const double lambda = norm;  // x is normalized to sum 1
    for (std::size_t i = 0; i < m; ++i) x[i] = y[i] / norm;
    if (std::abs(lambda - previous) <= tolerance * lambda) {
      if (++stable >= 3) return lambda - 1.0;
    } else {
      stable = 0;
    }
    previous = lambda;
  }
  return std::nullopt;
}

// log r(A) from the growth of the entry sum of A^(2^k), squaring a
// normalized copy of the matrix and carrying the log scale separately.
inline double log_radius_by_squaring(const FiniteGraph& g,
                                     const std::vector<EdgeId>& edges) {
  const std::size_t m = edges.size();
  std::vector<double> a(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (g.edge(edges[i]).dst == g.edge(edges[j]).src) a[i * m + j] = 1.0;
    }
  }
  auto sum = [](const std::vector<double>& mat) {
    return std::accumulate(mat.begin(), mat.end(), 0.0);
  };
  double scale = std::log(sum(a));
  for (double& v : a) v /= std::exp(scale);
  double estimate = scale;
  std::vector<double> b(m * m);
  for (int k = 1; k <= 60; ++k) {
    std::fill(b.begin(), b.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t l = 0; l < m; ++l) {
        const double ail = a[i * m + l];
        if (ail == 0) continue;
        for (std::size_t j = 0; j < m; ++j) b[i * m + j] += ail * a[l * m + j];
      }
    }
    const double s = sum(b);
    if (s <= 0) return -std::numeric_limits<double>::infinity();  // nilpotent
    scale = 2 * scale + std::log(s);
    for (std::size_t i = 0; i < m * m; ++i) a[i] = b[i] / s;
    estimate = scale / std::ldexp(1.0, k);
  }
  return estimate;
}

}  // namespace detail

inline constexpr double kPowerTolerance = 1e-12;
inline constexpr std::size_t kPowerIterationCap = 100'000;

/// log r(A_E) for a finite graph: the maximum over strongly connected
/// components that carry a cycle. A graph without cycles has entropy 0.
inline EntropyEstimate finite_entropy(const FiniteGraph& g) {
  EntropyEstimate est;
  est.quantity = "h_finite";
  est.method = EstimateMethod::ExactSpectral;
  est.provenance = "spectral radius of the edge matrix (" +
                   std::to_string(g.edge_count()) + " edges)";
  const auto comps = strongly_connected_components(g);
  std::vector<std::vector<EdgeId>> internal(comps.count);
  for (const auto& e : g.edges()) {
    if (comps.component_of[e.src] == comps.component_of[e.dst]) {
      internal[comps.component_of[e.src]].push_back(e.id);
    }
  }
  bool any_cycle = false;
  double best = 0;
  for (const auto& edges : internal) {
    if (edges.empty()) continue;
    any_cycle = true;
    auto root = detail::perron_root_power(g, edges, kPowerTolerance,
                                          kPowerIterationCap);
    const double log_root =
        root ? std::log(*root) : detail::log_radius_by_squaring(g, edges);
    if (!root) est.note = "power iteration cap reached; squaring fallback";
    best = std::max(best, log_root);
  }
  if (!any_cycle) est.note = "NoCycle: no infinite path, entropy 0";
  est.value = best;
  return est;
}

// ---------------------------------------------------------------------------
// Identity checks

struct CheckReport {
  std::string name;
  bool passed = true;
  double tolerance = 0;
  std::vector<EntropyEstimate> estimates;
  std::vector<std::pair<std::string, double>> comparisons;  // (label, gap)
  std::string note;
};

inline bool within(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

/// h_b = max(log R_s*^-1, h_l) and its transpose h_b^t = max(log R_r*^-1, h_l).
inline CheckReport block_vs_radius_check(const GraphWindow& window, VertexId v,
                                std::size_t n_max, double tol) {
  CheckReport report{"block_vs_radius", true, tol, {}, {}, ""};
  const auto h_l = loop_entropy(window, v, n_max);
  const auto h_b = block_entropy(window, v, n_max);
  const auto h_b_t = coblock_entropy(window, v, n_max);
  const auto r_s =
      radius_inverse(count_class(window, v, PathClass::SourceStar, n_max));
  const auto r_r =
      radius_inverse(count_class(window, v, PathClass::RangeStar, n_max));
  const double forward_gap = h_b.value - std::max(r_s.value, h_l.value);
  const double backward_gap = h_b_t.value - std::max(r_r.value, h_l.value);
  report.comparisons = {{"h_b - max(log R_s*^-1, h_l)", forward_gap},
                        {"h_b_t - max(log R_r*^-1, h_l)", backward_gap}};
  report.passed = std::abs(forward_gap) <= tol && std::abs(backward_gap) <= tol;
  report.estimates = {h_l, h_b, h_b_t, r_s, r_r};
  return report;
}

/// Finite irreducible graphs: h_l = h_b = h_b^t = log r(A_E).
inline CheckReport finite_coincidence_check(const FiniteGraph& g, VertexId v,
                                 std::size_t n_max, double tol) {
  if (!is_irreducible(g)) {
    raise(ErrorKind::NotIrreducible, "finite entropy coincidence needs an "
                                     "irreducible graph");
  }
  const GraphWindow window = whole_graph_window(g);
  CheckReport report{"finite_coincidence", true, tol, {}, {}, ""};
  report.estimates = {loop_entropy(window, v, n_max),
                      block_entropy(window, v, n_max),
                      coblock_entropy(window, v, n_max), finite_entropy(g)};
  for (std::size_t i = 0; i < report.estimates.size(); ++i) {
    for (std::size_t j = i + 1; j < report.estimates.size(); ++j) {
      const double gap = report.estimates[i].value - report.estimates[j].value;
      report.comparisons.emplace_back(report.estimates[i].quantity + " - " +
                                          report.estimates[j].quantity,
                                      gap);
      if (std::abs(gap) > tol) report.passed = false;
    }
  }
  return report;
}

/// Growth of paths through v equals max(h_b, h_b^t).
inline CheckReport through_vs_blocks_check(const GraphWindow& window, VertexId v,
                                 std::size_t n_max, double tol) {
  CheckReport report{"through_vs_blocks", true, tol, {}, {}, ""};
  const auto through = through_growth(window, v, n_max);
  const auto h_b = block_entropy(window, v, n_max);
  const auto h_b_t = coblock_entropy(window, v, n_max);
  const double gap = through.value - std::max(h_b.value, h_b_t.value);
  report.comparisons = {{"through - max(h_b, h_b_t)", gap}};
  report.passed = std::abs(gap) <= tol;
  report.estimates = {through, h_b, h_b_t};
  return report;
}

/// Entropy of the strongly connected component of v inside windows of
/// increasing radius; approaches the supremum over finite subgraphs.
inline std::vector<double> subgraph_supremum(const GraphOracle& oracle,
                                             const std::string& v,
                                             const std::vector<std::size_t>& radii) {
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (radii[i] <= radii[i - 1]) {
      raise(ErrorKind::InvalidParams, "radii must be increasing");
    }
  }
  std::vector<double> values;
  for (std::size_t radius : radii) {
    const GraphWindow window = materialize(oracle, {v}, radius);
    const FiniteGraph component = component_of(window.graph, window.vertex(v));
    values.push_back(component.edge_count() == 0
                         ? 0.0
                         : finite_entropy(component).value);
  }
  return values;
}

struct SandwichReport {
  EntropyEstimate h_l;
  EntropyEstimate h_b;
  EntropyEstimate h_b_t;
  double lower = 0;
  double upper = 0;
  bool exact = false;
  double tolerance = 0;
  std::string vertex;
  std::size_t n_max = 0;
  std::size_t window_radius = 0;
};

/// h_l <= entropy of the shift map on the AF core <= max(h_b, h_b^t).
inline SandwichReport sandwich(const GraphWindow& window, VertexId v,
                               std::size_t n_max, double tol) {
  SandwichReport report;
  report.h_l = loop_entropy(window, v, n_max);
  report.h_b = block_entropy(window, v, n_max);
  report.h_b_t = coblock_entropy(window, v, n_max);
  report.lower = report.h_l.value;
  report.upper = std::max(report.h_b.value, report.h_b_t.value);
  report.tolerance = tol;
  report.exact = report.upper - report.lower <= tol;
  report.vertex = window.graph.label(v);
  report.n_max = n_max;
  report.window_radius = window.radius;
  return report;
}

inline SandwichReport sandwich(const GraphOracle& oracle, const std::string& v,
                               std::size_t n_max, double tol) {
  const GraphWindow window = materialize(oracle, {v}, n_max);
  return sandwich(window, window.vertex(v), n_max, tol);
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::ordered_json to_json(const EntropyEstimate& est,
                                      bool include_raw = true) {
  nlohmann::ordered_json raw = nlohmann::ordered_json::array();
  if (include_raw) {
    for (const auto& [n, v] : est.raw) raw.push_back({n, round12(v)});
  }
  nlohmann::ordered_json out = {
      {"quantity", est.quantity},
      {"value_nats", round12(est.value)},
      {"value_bits", round12(est.value / std::log(2.0))},
      {"method", std::string(to_string(est.method))},
      {"stride", est.stride},
      {"n_range", {est.n_lo, est.n_hi}},
      {"raw", raw},
      {"provenance", est.provenance}};
  if (!est.note.empty()) out["note"] = est.note;
  return out;
}

inline nlohmann::ordered_json to_json(const CheckReport& report) {
  nlohmann::ordered_json comparisons = nlohmann::ordered_json::array();
  for (const auto& [label, gap] : report.comparisons) {
    comparisons.push_back({{"comparison", label}, {"gap", round12(gap)}});
  }
  nlohmann::ordered_json estimates = nlohmann::ordered_json::array();
  for (const auto& est : report.estimates) estimates.push_back(to_json(est, false));
  return {{"check", report.name},
          {"passed", report.passed},
          {"tolerance", report.tolerance},
          {"comparisons", comparisons},
          {"estimates", estimates}};
}

inline nlohmann::ordered_json to_json(const SandwichReport& report) {
  return {{"vertex", report.vertex},
          {"n_max", report.n_max},
          {"window_radius", report.window_radius},
          {"h_l", to_json(report.h_l)},
          {"h_b", to_json(report.h_b)},
          {"h_b_t", to_json(report.h_b_t)},
          {"lower", round12(report.lower)},
          {"upper", round12(report.upper)},
          {"tolerance", report.tolerance},
          {"exact", report.exact},
          {"value", report.exact ? nlohmann::ordered_json(round12(report.lower))
                                 : nlohmann::ordered_json(nullptr)}};
}

inline void write_raw_csv(std::ostream& out, const EntropyEstimate& est) {
  out << "n,rate\n";
  char buffer[64];
  for (const auto& [n, v] : est.raw) {
    std::snprintf(buffer, sizeof(buffer), "%.12g", v);
    out << n << ',' << buffer << '\n';
  }
}

}  // namespace graphent
