#pragma once

// Symbolic calculus of the generators s_a s_b^* (|a| = |b|, r(a) = r(b)) of
// the AF core of a graph algebra: products, adjoints, the truncated
// generator sets omega(n, v), their matrix-unit representation phi, the
// shift map x -> sum_e s_e x s_e^*, and exact rank checks over Q(i).

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
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

/// A finite path; length 0 is the vertex path at `start`.
struct Path {
  VertexId start = 0;
  std::vector<EdgeId> edges;

  std::size_t length() const { return edges.size(); }

  VertexId source() const { return start; }

  VertexId range(const FiniteGraph& g) const {
    return edges.empty() ? start : g.edge(edges.back()).dst;
  }

  // Canonical order: length, then start vertex, then edge ids.
  friend std::strong_ordering operator<=>(const Path& a, const Path& b) {
    if (auto c = a.edges.size() <=> b.edges.size(); c != 0) return c;
    if (auto c = a.start <=> b.start; c != 0) return c;
    return a.edges <=> b.edges;
  }
  friend bool operator==(const Path&, const Path&) = default;
};

inline Path vertex_path(VertexId v) { return {v, {}}; }

inline Path edge_path(const FiniteGraph& g, std::vector<EdgeId> edges) {
  if (edges.empty()) raise(ErrorKind::InvalidParams, "use vertex_path");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (g.edge(edges[i - 1]).dst != g.edge(edges[i]).src) {
      raise(ErrorKind::InvalidParams, "edges do not form a path");
    }
  }
  const VertexId start = g.edge(edges.front()).src;
  return {start, std::move(edges)};
}

/// Concatenation; requires r(a) == s(b).
inline Path concat(const FiniteGraph& g, const Path& a, const Path& b) {
  if (a.range(g) != b.start) {
    raise(ErrorKind::InvalidParams, "paths do not concatenate");
  }
  Path out = a;
  out.edges.insert(out.edges.end(), b.edges.begin(), b.edges.end());
  return out;
}

/// If `prefix` is an initial segment of `path`, the remainder.
inline std::optional<Path> strip_prefix(const FiniteGraph& g,
                                        const Path& prefix, const Path& path) {
  if (prefix.start != path.start || prefix.length() > path.length()) {
    return std::nullopt;
  }
  if (!std::equal(prefix.edges.begin(), prefix.edges.end(), path.edges.begin())) {
    return std::nullopt;
  }
  Path rest{prefix.range(g), {}};
  rest.edges.assign(path.edges.begin() + static_cast<std::ptrdiff_t>(prefix.length()),
                    path.edges.end());
  return rest;
}

inline std::string path_string(const FiniteGraph& g, const Path& p) {
  if (p.edges.empty()) return "(" + g.label(p.start) + ")";
  std::string out;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (i) out += ".";
    out += g.edge_label(p.edges[i]);
  }
  return out;
}

/// The generator s_alpha s_beta^*.
struct PathPair {
  Path alpha;
  Path beta;

  friend std::strong_ordering operator<=>(const PathPair&,
                                          const PathPair&) = default;
  friend bool operator==(const PathPair&, const PathPair&) = default;
};

inline PathPair make_pair_checked(const FiniteGraph& g, Path alpha, Path beta) {
  if (alpha.length() != beta.length() || alpha.range(g) != beta.range(g)) {
    raise(ErrorKind::InvalidParams,
          "generator needs equal lengths and a common range");
  }
  return {std::move(alpha), std::move(beta)};
}

inline PathPair projection(VertexId v) { return {vertex_path(v), vertex_path(v)}; }

inline PathPair adjoint(const PathPair& x) { return {x.beta, x.alpha}; }

/// (s_a s_b^*)(s_m s_n^*): s_{a m'} s_n^* if m = b m', s_a s_{n b'}^* if
/// b = m b', zero otherwise.
inline std::optional<PathPair> multiply(const FiniteGraph& g, const PathPair& x,
                                        const PathPair& y) {
  if (auto rest = strip_prefix(g, x.beta, y.alpha)) {
    return PathPair{concat(g, x.alpha, *rest), y.beta};
  }
  if (auto rest = strip_prefix(g, y.alpha, x.beta)) {
    return PathPair{x.alpha, concat(g, y.beta, *rest)};
  }
  return std::nullopt;
}

/// Finite linear combination of generators with complex rational coefficients.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(const PathPair& x, ComplexRational c = 1) { add(x, c); }

  void add(const PathPair& x, const ComplexRational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(x, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  void add(const AlgebraElement& other, const ComplexRational& scale = 1) {
    for (const auto& [x, c] : other.terms_) add(x, c * scale);
  }

  const std::map<PathPair, ComplexRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;

 private:
  std::map<PathPair, ComplexRational> terms_;
};

inline AlgebraElement multiply(const FiniteGraph& g, const AlgebraElement& x,
                               const AlgebraElement& y) {
  AlgebraElement out;
  for (const auto& [a, ca] : x.terms()) {
    for (const auto& [b, cb] : y.terms()) {
      if (auto p = multiply(g, a, b)) out.add(*p, ca * cb);
    }
  }
  return out;
}

inline AlgebraElement adjoint(const AlgebraElement& x) {
  AlgebraElement out;
  for (const auto& [a, c] : x.terms()) out.add(adjoint(a), c.conj());
  return out;
}

// ---------------------------------------------------------------------------
// Path enumeration

/// All paths of length <= n ending at v, grouped by length, each group in
/// canonical order.
inline std::vector<std::vector<Path>> paths_into(const GraphWindow& window,
                                                 VertexId v, std::size_t n) {
  window.require(n, v);
  const auto& g = window.graph;
  std::vector<std::vector<Path>> by_length(n + 1);
  // Build backwards: reversed edge lists, then flip.
  std::vector<std::vector<EdgeId>> frontier{{}};
  std::vector<VertexId> heads{v};
  by_length[0].push_back(vertex_path(v));
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::vector<EdgeId>> next;
    std::vector<VertexId> next_heads;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      for (EdgeId e : g.in_edges(heads[i])) {
        auto reversed = frontier[i];
        reversed.push_back(e);
        next_heads.push_back(g.edge(e).src);
        next.push_back(std::move(reversed));
      }
    }
    for (std::size_t i = 0; i < next.size(); ++i) {
      Path p{next_heads[i], {next[i].rbegin(), next[i].rend()}};
      by_length[k].push_back(std::move(p));
    }
    std::sort(by_length[k].begin(), by_length[k].end());
    frontier = std::move(next);
    heads = std::move(next_heads);
  }
  return by_length;
}

/// omega(n, v): pairs (alpha, beta) with common range v, |alpha| = |beta| <= n.
inline std::vector<PathPair> omega(const GraphWindow& window, VertexId v,
                                   std::size_t n) {
  std::vector<PathPair> out;
  for (const auto& group : paths_into(window, v, n)) {
    for (const auto& a : group) {
      for (const auto& b : group) out.push_back({a, b});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matrix units

/// Sparse square matrix with exact entries; indices refer to `labels`.
struct SparseMatrix {
  std::size_t dim = 0;
  std::map<std::pair<std::size_t, std::size_t>, ComplexRational> entries;

  void add(std::size_t row, std::size_t col, const ComplexRational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = entries.try_emplace({row, col}, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) entries.erase(it);
    }
  }

  bool is_zero() const { return entries.empty(); }

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;
};

inline SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out;
  out.dim = a.dim;
  std::map<std::size_t, std::vector<std::pair<std::size_t, ComplexRational>>> rows_b;
  for (const auto& [rc, v] : b.entries) rows_b[rc.first].emplace_back(rc.second, v);
  for (const auto& [rc, v] : a.entries) {
    auto it = rows_b.find(rc.second);
    if (it == rows_b.end()) continue;
    for (const auto& [col, w] : it->second) out.add(rc.first, col, v * w);
  }
  return out;
}

/// Conjugate transpose.
inline SparseMatrix conjugate_transpose(const SparseMatrix& a) {
  SparseMatrix out;
  out.dim = a.dim;
  for (const auto& [rc, v] : a.entries) out.add(rc.second, rc.first, v.conj());
  return out;
}

/// Representation of span omega(n, v) on the paths of length <= n into v.
class MatrixUnitRepresentation {
 public:
  MatrixUnitRepresentation(const GraphWindow& window, VertexId v, std::size_t n)
      : window_(window), vertex_(v), n_(n) {
    window.require(2 * n, v);
    for (const auto& group : paths_into(window, v, n)) {
      for (const auto& p : group) {
        index_.emplace(p, basis_.size());
        basis_.push_back(p);
        if (p.source() == v) loops_.push_back(p);
      }
    }
  }

  /// r(n): number of paths of length <= n ending at v.
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Path>& basis() const { return basis_; }
  const std::vector<Path>& loops() const { return loops_; }

  bool in_omega(const PathPair& x) const {
    return x.alpha.length() == x.beta.length() && x.alpha.length() <= n_ &&
           index_.contains(x.alpha) && index_.contains(x.beta);
  }

  /// sum over loops g at v with |alpha g| <= n of e_{(alpha g),(beta g)}.
  SparseMatrix phi(const PathPair& x) const {
    if (!in_omega(x)) {
      raise(ErrorKind::NotInOmega, "generator outside omega(" +
                                       std::to_string(n_) + ", " +
                                       window_.graph.label(vertex_) + ")");
    }
    const auto& g = window_.graph;
    SparseMatrix m;
    m.dim = dim();
    for (const auto& gamma : loops_) {
      if (x.alpha.length() + gamma.length() > n_) continue;
      m.add(index_.at(concat(g, x.alpha, gamma)),
            index_.at(concat(g, x.beta, gamma)), 1);
    }
    return m;
  }

  SparseMatrix phi(const AlgebraElement& x) const {
    SparseMatrix m;
    m.dim = dim();
    for (const auto& [pair, c] : x.terms()) {
      for (const auto& [rc, v] : phi(pair).entries) m.add(rc.first, rc.second, v * c);
    }
    return m;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& p : basis_) out.push_back(path_string(window_.graph, p));
    return out;
  }

 private:
  const GraphWindow& window_;
  VertexId vertex_;
  std::size_t n_;
  std::vector<Path> basis_;
  std::vector<Path> loops_;
  std::map<Path, std::size_t> index_;
};

/// Rank of a set of sparse vectors over Q(i) by Gaussian elimination.
template <class Key>
std::size_t exact_rank(std::vector<std::map<Key, ComplexRational>> rows) {
  std::size_t rank = 0;
  std::vector<std::map<Key, ComplexRational>> pivots;  // leading key = first
  for (auto& row : rows) {
    for (const auto& pivot : pivots) {
      const auto& [key, lead] = *pivot.begin();
      auto it = row.find(key);
      if (it == row.end()) continue;
      const ComplexRational factor = it->second / lead;
      for (const auto& [k, v] : pivot) {
        auto [slot, inserted] = row.try_emplace(k, -(factor * v));
        if (!inserted) {
          slot->second = slot->second - factor * v;
          if (slot->second.is_zero()) row.erase(slot);
        }
      }
    }
    if (row.empty()) continue;
    ++rank;
    // Keep pivots sorted by leading key so elimination order is consistent.
    auto pos = std::lower_bound(
        pivots.begin(), pivots.end(), row.begin()->first,
        [](const auto& p, const Key& k) { return p.begin()->first < k; });
    pivots.insert(pos, std::move(row));
  }
  return rank;
}

struct AfReport {
  std::string name;
  bool passed = true;
  bool applicable = true;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t rank = 0;
  std::size_t expected_rank = 0;
  std::vector<std::string> details;  // first few violations
};

/// phi(xy) = phi(x) phi(y) and phi(x^*) = phi(x)^* over omega(n, v).
inline AfReport verify_homomorphism(const GraphWindow& window, VertexId v,
                                    std::size_t n) {
  const MatrixUnitRepresentation rep(window, v, n);
  const auto& g = window.graph;
  const auto gens = omega(window, v, n);
  std::vector<SparseMatrix> images;
  images.reserve(gens.size());
  for (const auto& x : gens) images.push_back(rep.phi(x));
  AfReport report{"homomorphism", true, true, 0, 0, 0, 0, {}};
  auto violation = [&](std::string what) {
    ++report.violations;
    report.passed = false;
    if (report.details.size() < 10) report.details.push_back(std::move(what));
  };
  for (std::size_t i = 0; i < gens.size(); ++i) {
    ++report.checked;
    if (rep.phi(adjoint(gens[i])) != conjugate_transpose(images[i])) {
      violation("adjoint of " + path_string(g, gens[i].alpha) + "|" +
                path_string(g, gens[i].beta));
    }
    for (std::size_t j = 0; j < gens.size(); ++j) {
      ++report.checked;
      const auto product = multiply(g, gens[i], gens[j]);
      SparseMatrix lhs;
      lhs.dim = rep.dim();
      if (product) lhs = rep.phi(*product);
      if (lhs != images[i] * images[j]) {
        violation("product " + std::to_string(i) + " x " + std::to_string(j));
      }
    }
  }
  return report;
}

struct IndependenceHypotheses {
  // nullopt: decide irreducibility on the window graph itself.
  std::optional<bool> asserted_irreducible;
  std::optional<bool> asserted_multiple_vertices;
};

/// The phi-images of omega(n, v) are linearly independent (exact rank).
/// Reported as not applicable for single-vertex or reducible graphs, where
/// the abstract generators satisfy extra relations.
inline AfReport verify_independence(const GraphWindow& window, VertexId v,
                                    std::size_t n,
                                    const IndependenceHypotheses& hyp = {}) {
  AfReport report{"independence", true, true, 0, 0, 0, 0, {}};
  const bool irreducible =
      hyp.asserted_irreducible.value_or(is_irreducible(window.graph));
  const bool several =
      hyp.asserted_multiple_vertices.value_or(window.graph.vertex_count() >= 2);
  if (!irreducible || !several) {
    report.applicable = false;
    report.details.push_back(
        "HypothesisViolated: needs an irreducible graph with at least two "
        "vertices");
    return report;
  }
  const MatrixUnitRepresentation rep(window, v, n);
  const auto gens = omega(window, v, n);
  using Key = std::pair<std::size_t, std::size_t>;
  std::vector<std::map<Key, ComplexRational>> rows;
  for (const auto& x : gens) {
    const SparseMatrix m = rep.phi(x);
    rows.emplace_back(m.entries.begin(), m.entries.end());
  }
  report.checked = gens.size();
  report.expected_rank = gens.size();
  report.rank = exact_rank(std::move(rows));
  report.passed = report.rank == report.expected_rank;
  if (!report.passed) report.violations = report.expected_rank - report.rank;
  return report;
}

struct DimensionReport {
  BigInt omega_cardinality;  // sum_k |E_r^k(v)|^2
  BigInt r_n;                // sum_k |E_r^k(v)|
  BigInt r_n_squared;
  bool coincide = false;
};

inline DimensionReport dimension_report(const GraphWindow& window, VertexId v,
                                        std::size_t n) {
  const auto range = count_class(window, v, PathClass::Range, n);
  DimensionReport d{0, 0, 0, false};
  for (const auto& c : range.counts) {
    d.omega_cardinality += c * c;
    d.r_n += c;
  }
  d.r_n_squared = d.r_n * d.r_n;
  d.coincide = d.omega_cardinality == d.r_n_squared;
  return d;
}

// ---------------------------------------------------------------------------
// The shift map

namespace detail {

inline void require_backward(const GraphWindow& window, const Path& p,
                             std::size_t l) {
  if (window.saturated) return;
  const std::size_t d = window.backward_distance[p.source()];
  if (d == kUnreached || d + l > window.radius) {
    raise(ErrorKind::WindowTooSmall,
          "window does not cover paths of length " + std::to_string(l) +
              " into " + window.graph.label(p.source()));
  }
}

}  // namespace detail

/// Phi^l on a generator: sum over |mu| = l, r(mu) = s(alpha) = s(beta) of
/// s_{mu alpha} s_{mu beta}^*.
inline AlgebraElement phi_E_power(const PathPair& x, std::size_t l,
                                  const GraphWindow& window) {
  const auto& g = window.graph;
  AlgebraElement out;
  if (x.alpha.source() != x.beta.source()) return out;
  detail::require_backward(window, x.alpha, l);
  std::vector<Path> prefixes{vertex_path(x.alpha.source())};
  for (std::size_t k = 0; k < l; ++k) {
    std::vector<Path> next;
    for (const auto& mu : prefixes) {
      for (EdgeId e : g.in_edges(mu.source())) {
        Path longer{g.edge(e).src, {e}};
        longer.edges.insert(longer.edges.end(), mu.edges.begin(), mu.edges.end());
        next.push_back(std::move(longer));
      }
    }
    prefixes = std::move(next);
  }
  for (const auto& mu : prefixes) {
    out.add(PathPair{concat(g, mu, x.alpha), concat(g, mu, x.beta)}, 1);
  }
  return out;
}

inline AlgebraElement phi_E_power(const AlgebraElement& x, std::size_t l,
                                  const GraphWindow& window) {
  AlgebraElement out;
  for (const auto& [pair, c] : x.terms()) out.add(phi_E_power(pair, l, window), c);
  return out;
}

inline AlgebraElement phi_E(const AlgebraElement& x, const GraphWindow& window) {
  return phi_E_power(x, 1, window);
}

/// n -> r(n) = sum_{k<=n} |E_r^k(v)| and n -> k_n = number of paths of length
/// offset + n touching vset.
struct RankBoundSequences {
  CountSeries r_n;
  CountSeries k_n;
};

inline RankBoundSequences rank_bound_sequences(const GraphWindow& window,
                                               const std::vector<VertexId>& vset,
                                               std::size_t n_max,
                                               std::size_t offset = 0) {
  if (vset.empty()) raise(ErrorKind::InvalidParams, "empty vertex set");
  const VertexId v = vset.front();
  RankBoundSequences out;
  const auto range = count_class(window, v, PathClass::Range, n_max);
  out.r_n = range;
  BigInt running = 0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    running += range.counts[n];
    out.r_n.counts[n] = running;
  }
  out.k_n.vertex = window.graph.label(v);
  out.k_n.path_class = PathClass::Through;
  out.k_n.window_radius = window.radius;
  for (std::size_t n = 0; n <= n_max; ++n) {
    out.k_n.counts.push_back(count_through_set(window, vset, offset + n));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::ordered_json to_json(const FiniteGraph& g,
                                      const AlgebraElement& x) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  auto ids = [&](const Path& p) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (EdgeId e : p.edges) list.push_back(g.edge_label(e));
    return list;
  };
  for (const auto& [pair, c] : x.terms()) {
    nlohmann::ordered_json term = {{"alpha", ids(pair.alpha)},
                                   {"beta", ids(pair.beta)}};
    if (pair.alpha.length() == 0) term["vertex"] = g.label(pair.alpha.start);
    term["re"] = to_fraction(c.re);
    term["im"] = to_fraction(c.im);
    out.push_back(std::move(term));
  }
  return out;
}

inline AlgebraElement algebra_element_from_json(const FiniteGraph& g,
                                                const nlohmann::json& terms) {
  AlgebraElement x;
  auto path = [&](const nlohmann::json& term, const char* key) {
    std::vector<EdgeId> edges;
    for (const auto& id : term.at(key)) edges.push_back(g.edge_id(id.get<std::string>()));
    if (edges.empty()) return vertex_path(g.vertex(term.at("vertex").get<std::string>()));
    return edge_path(g, std::move(edges));
  };
  for (const auto& term : terms) {
    const PathPair pair = make_pair_checked(g, path(term, "alpha"), path(term, "beta"));
    x.add(pair, ComplexRational(parse_fraction(term.at("re").get<std::string>()),
                                parse_fraction(term.at("im").get<std::string>())));
  }
  return x;
}

/// Coordinate list: header row of path labels, then row,col,re,im lines.
inline void write_csv(std::ostream& out, const SparseMatrix& m,
                      const std::vector<std::string>& labels) {
  out << "# paths:";
  for (const auto& l : labels) out << ' ' << l;
  out << "\nrow,col,re,im\n";
  for (const auto& [rc, v] : m.entries) {
    out << labels[rc.first] << ',' << labels[rc.second] << ','
        << to_fraction(v.re) << ',' << to_fraction(v.im) << '\n';
  }
}

inline nlohmann::ordered_json to_json(const AfReport& report) {
  nlohmann::ordered_json out = {{"check", report.name},
                                {"passed", report.passed},
                                {"applicable", report.applicable},
                                {"checked", report.checked},
                                {"violations", report.violations}};
  if (report.name == "independence") {
    out["rank"] = report.rank;
    out["expected_rank"] = report.expected_rank;
  }
  out["details"] = report.details;
  return out;
}

inline nlohmann::ordered_json to_json(const DimensionReport& d) {
  return {{"omega_cardinality", to_decimal(d.omega_cardinality)},
          {"r_n", to_decimal(d.r_n)},
          {"r_n_squared", to_decimal(d.r_n_squared)},
          {"coincide", d.coincide}};
}

}  // namespace graphent
