#pragma once

// Built-in graph families: the ray-with-return-trunk graphs of Salama type,
// one- and two-sided rays, and seeded random strongly connected graphs,
// plus JSON family descriptions.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphent/error.hpp"
#include "graphent/graph.hpp"
#include "graphent/numeric.hpp"
#include "graphent/window.hpp"

namespace graphent {

/// Positive-integer sequence k -> x_k (k >= 1): an explicit prefix followed
/// by a closed-form tail rule evaluated at the global index k.
class Sequence {
 public:
  enum class Rule { Constant, Affine, RepeatLast };

  static Sequence constant(long c) {
    Sequence s;
    s.rule_ = Rule::Constant;
    s.b_ = c;
    return s;
  }

  /// x_k = a*k + b.
  static Sequence affine(long a, long b) {
    Sequence s;
    s.rule_ = Rule::Affine;
    s.a_ = a;
    s.b_ = b;
    return s;
  }

  static Sequence list(std::vector<long> prefix,
                       std::optional<Sequence> tail = std::nullopt) {
    if (prefix.empty()) raise(ErrorKind::InvalidParams, "empty sequence list");
    Sequence s = tail ? *tail : Sequence{};
    if (!tail) s.rule_ = Rule::RepeatLast;
    s.prefix_ = std::move(prefix);
    return s;
  }

  // Grammar: const:c | affine:a,b | list:x1,...,xm[|const:c|affine:a,b]
  static Sequence parse(const std::string& text) {
    auto fail = [&]() -> Sequence {
      raise(ErrorKind::ParseError, "bad sequence `" + text + "`");
    };
    auto numbers = [&](const std::string& body) {
      std::vector<long> values;
      std::stringstream in(body);
      for (std::string item; std::getline(in, item, ',');) {
        try {
          std::size_t used = 0;
          values.push_back(std::stoll(item, &used));
          if (used != item.size()) fail();
        } catch (const std::logic_error&) {
          fail();
        }
      }
      return values;
    };
    const auto colon = text.find(':');
    if (colon == std::string::npos) fail();
    const std::string kind = text.substr(0, colon);
    std::string body = text.substr(colon + 1);
    if (kind == "const") {
      const auto v = numbers(body);
      if (v.size() != 1) fail();
      return constant(v[0]);
    }
    if (kind == "affine") {
      const auto v = numbers(body);
      if (v.size() != 2) fail();
      return affine(v[0], v[1]);
    }
    if (kind == "list") {
      std::optional<Sequence> tail;
      if (const auto bar = body.find('|'); bar != std::string::npos) {
        tail = parse(body.substr(bar + 1));
        if (!tail->prefix_.empty()) fail();
        body = body.substr(0, bar);
      }
      return list(numbers(body), tail);
    }
    return fail();
  }

  long at(long k) const {
    if (k >= 1 && static_cast<std::size_t>(k) <= prefix_.size()) {
      return prefix_[k - 1];
    }
    switch (rule_) {
      case Rule::Constant: return b_;
      case Rule::Affine: return a_ * k + b_;
      case Rule::RepeatLast: return prefix_.back();
    }
    return 0;
  }

  std::size_t prefix_length() const { return prefix_.size(); }
  Rule rule() const { return rule_; }
  long slope() const { return rule_ == Rule::Affine ? a_ : 0; }

  std::string describe() const {
    std::string tail;
    switch (rule_) {
      case Rule::Constant: tail = "const:" + std::to_string(b_); break;
      case Rule::Affine:
        tail = "affine:" + std::to_string(a_) + "," + std::to_string(b_);
        break;
      case Rule::RepeatLast: tail = ""; break;
    }
    if (prefix_.empty()) return tail;
    std::string out = "list:";
    for (std::size_t i = 0; i < prefix_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(prefix_[i]);
    }
    if (!tail.empty()) out += "|" + tail;
    return out;
  }

 private:
  std::vector<long> prefix_;
  Rule rule_ = Rule::Constant;
  long a_ = 0;
  long b_ = 0;
};

struct SalamaParams {
  Sequence r;  // r_k parallel edges b_{k-1} -> b_k
  Sequence l;  // cumulative return-trunk lengths
  bool base_loop = true;
};

// Tail rules are checked structurally; the prefix plus this many terms
// are checked pointwise.
inline constexpr long kSequenceCheckTerms = 4096;

inline void validate(const SalamaParams& params) {
  auto fail = [](const std::string& why) {
    raise(ErrorKind::InvalidParams, why);
  };
  const auto& r = params.r;
  const auto& l = params.l;
  if (l.at(1) < 2) fail("l_1 must be >= 2 (return chain of length l_1 - 1)");
  if (l.rule() == Sequence::Rule::Constant ||
      l.rule() == Sequence::Rule::RepeatLast ||
      (l.rule() == Sequence::Rule::Affine && l.slope() < 1)) {
    fail("l must have a strictly increasing tail rule");
  }
  if (r.rule() == Sequence::Rule::Affine && r.slope() < 0) {
    fail("r must not decrease without bound");
  }
  const long terms =
      static_cast<long>(std::max(r.prefix_length(), l.prefix_length())) +
      kSequenceCheckTerms;
  for (long k = 1; k <= terms; ++k) {
    if (r.at(k) < 1) fail("r_" + std::to_string(k) + " < 1");
    if (l.at(k) + 1 > l.at(k + 1)) {
      fail("l_" + std::to_string(k) + " + 1 > l_" + std::to_string(k + 1));
    }
  }
}

namespace detail {

inline std::string trunk_label(long j) {
  return j == 0 ? "0" : "t" + std::to_string(j);
}
inline std::string ray_label(long k) {
  return k == 0 ? "0" : "b" + std::to_string(k);
}

// Parses "b12" / "t7" / "0" into (kind, index); kind 'b' for the root.
inline std::optional<std::pair<char, long>> salama_vertex(
    const std::string& label) {
  if (label == "0") return std::make_pair('b', 0L);
  if (label.size() < 2 || (label[0] != 'b' && label[0] != 't')) {
    return std::nullopt;
  }
  long index = 0;
  for (std::size_t i = 1; i < label.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(label[i]))) return std::nullopt;
    index = index * 10 + (label[i] - '0');
  }
  if (index == 0 || label[1] == '0') return std::nullopt;
  return std::make_pair(label[0], index);
}

}  // namespace detail

/// Ray b_0 = 0, b_1, ... with r_k parallel edges b_{k-1} -> b_k, an edge
/// b_k -> v_k, and one shared return trunk ... -> t_2 -> t_1 -> 0 on which
/// v_k sits at position l_k - 1. First-return loops at 0 have lengths
/// k + l_k with multiplicity r_1 ... r_k (plus the optional loop at 0).
inline GraphOracle salama(const SalamaParams& params) {
  validate(params);
  const SalamaParams p = params;
  // k with l_k - 1 == j, if any (l is strictly increasing and l_k >= k + 1).
  auto top_index = [p](long j) -> std::optional<long> {
    for (long k = 1; k <= j; ++k) {
      const long pos = p.l.at(k) - 1;
      if (pos == j) return k;
      if (pos > j) break;
    }
    return std::nullopt;
  };
  auto ray_edges = [p](long k) {
    std::vector<EdgeSpec> edges;
    for (long i = 1; i <= p.r.at(k); ++i) {
      edges.push_back({"r" + std::to_string(k) + "." + std::to_string(i),
                       detail::ray_label(k - 1), detail::ray_label(k)});
    }
    return edges;
  };
  auto up_edge = [p](long k) {
    return EdgeSpec{"u" + std::to_string(k), detail::ray_label(k),
                    detail::trunk_label(p.l.at(k) - 1)};
  };
  auto trunk_edge = [](long j) {
    return EdgeSpec{"c" + std::to_string(j), detail::trunk_label(j),
                    detail::trunk_label(j - 1)};
  };
  auto out = [=](const std::string& label) {
    std::vector<EdgeSpec> edges;
    const auto v = detail::salama_vertex(label);
    if (!v) return edges;
    const auto [kind, index] = *v;
    if (kind == 'b') {
      if (index == 0 && p.base_loop) edges.push_back({"loop", "0", "0"});
      for (auto& e : ray_edges(index + 1)) edges.push_back(std::move(e));
      if (index > 0) edges.push_back(up_edge(index));
    } else {
      edges.push_back(trunk_edge(index));
    }
    return edges;
  };
  auto in = [=](const std::string& label) {
    std::vector<EdgeSpec> edges;
    const auto v = detail::salama_vertex(label);
    if (!v) return edges;
    const auto [kind, index] = *v;
    if (kind == 'b' && index == 0) {
      if (p.base_loop) edges.push_back({"loop", "0", "0"});
      edges.push_back(trunk_edge(1));
    } else if (kind == 'b') {
      edges = ray_edges(index);
    } else {
      edges.push_back(trunk_edge(index + 1));
      if (auto k = top_index(index)) edges.push_back(up_edge(*k));
    }
    return edges;
  };
  auto contains = [](const std::string& label) {
    return detail::salama_vertex(label).has_value();
  };
  return {out, in, "0", contains};
}

/// Value of the first-return generating function at z for the root of
/// salama(params): [base_loop] z + sum_k r_1...r_k z^(k + l_k), exactly,
/// when r has a constant tail and l an affine tail. nullopt when the tail is
/// not of that shape or the series diverges at z.
inline std::optional<Rational> salama_renewal_value(const SalamaParams& params,
                                                    const Rational& z) {
  const auto& r = params.r;
  const auto& l = params.l;
  const bool r_closed = r.rule() == Sequence::Rule::Constant ||
                        r.rule() == Sequence::Rule::RepeatLast;
  if (!r_closed || l.rule() != Sequence::Rule::Affine) return std::nullopt;
  auto zpow = [&](long e) {
    Rational result(1);
    for (long i = 0; i < e; ++i) result *= z;
    return result;
  };
  const long head = static_cast<long>(
      std::max(r.prefix_length(), l.prefix_length()));
  Rational total = params.base_loop ? z : Rational(0);
  BigInt product = 1;
  for (long k = 1; k <= head; ++k) {
    product *= r.at(k);
    total += Rational(product) * zpow(k + l.at(k));
  }
  // Beyond the prefix: term_{k+1} / term_k = c * z^(1 + a).
  const long k0 = head + 1;
  const Rational ratio = Rational(r.at(k0 + 1)) * zpow(1 + l.slope());
  if (abs(ratio) >= 1) return std::nullopt;
  const Rational first = Rational(product * r.at(k0)) * zpow(k0 + l.at(k0));
  total += first / (1 - ratio);
  total.canonicalize();
  return total;
}

struct KnownEntropies {
  double h_l = 0;
  double h_b = 0;
  double h_b_t = 0;
  std::string provenance;
};

struct FamilyDescriptor {
  std::string name;
  std::string label;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::set<std::string> asserted_properties;  // "irreducible", "locally_finite"
  std::optional<KnownEntropies> known_entropies;

  bool asserts(const std::string& property) const {
    return asserted_properties.contains(property);
  }
};

/// A family instance: always an oracle, and the explicit graph when finite.
struct Family {
  GraphOracle oracle;
  std::optional<FiniteGraph> finite;
  FamilyDescriptor descriptor;
};

inline Family salama_family(const SalamaParams& params, std::string name) {
  Family f{salama(params), std::nullopt, {}};
  f.descriptor.name = std::move(name);
  f.descriptor.params = {{"r", params.r.describe()},
                         {"l", params.l.describe()},
                         {"base_loop", params.base_loop}};
  // Irreducible: every b_k returns to 0 through the trunk, every trunk
  // vertex drains into 0, and 0 reaches every b_k.
  f.descriptor.asserted_properties = {"irreducible", "locally_finite"};
  return f;
}

/// r_k = 8, l_k = 3k + 1, loop at 0: loop entropy log 2, block entropy
/// log 8, co-block entropy log 2.
inline Family salama_2_8() {
  SalamaParams params{Sequence::constant(8), Sequence::affine(3, 1), true};
  Family f = salama_family(params, "salama_2_8");
  const auto renewal = salama_renewal_value(params, Rational(1, 2));
  if (!renewal || *renewal != 1) {
    raise(ErrorKind::InvalidParams, "renewal identity fails at z = 1/2");
  }
  f.descriptor.known_entropies = KnownEntropies{
      std::log(2.0), std::log(8.0), std::log(2.0),
      "first returns z + sum 8^k z^(4k+1) = 1 at z = 1/2 (h_l = log 2); "
      "8-fold branching along the ray (h_b = log 8); range-side avoidance "
      "counts 1 + 8^(k-1) + 8^(k-4) + ... at length 4k grow like 8^(n/4) "
      "< 2^n (h_b of the transpose = h_l = log 2)"};
  return f;
}

/// Member E_p of the Salama family with equal loop and block entropy log p:
/// r_1 = p(p-1)^2, r_k = p for k >= 2, l_k = k + 1, loop at 0. The first
/// return series then satisfies 1/p + r_1 / (p^2 (p-1)) = 1 at z = 1/p.
inline Family salama_pp(long p) {
  if (p < 2) raise(ErrorKind::InvalidParams, "salama_pp needs p >= 2");
  const long r1 = p * (p - 1) * (p - 1);
  SalamaParams params{Sequence::list({r1}, Sequence::constant(p)),
                      Sequence::affine(1, 1), true};
  Family f = salama_family(params, "salama_pp");
  f.descriptor.params["p"] = p;
  const auto renewal = salama_renewal_value(params, Rational(1, p));
  if (!renewal || *renewal != 1) {
    raise(ErrorKind::InvalidParams,
          "renewal identity fails at z = 1/" + std::to_string(p));
  }
  const double value = std::log(static_cast<double>(p));
  f.descriptor.known_entropies = KnownEntropies{
      value, value, value,
      "first returns z + sum r_1 p^(k-1) z^(2k+1) = 1 at z = 1/p (h_l = log p); "
      "p-fold branching along the ray (h_b = log p); transpose bounded by "
      "the block entropy"};
  return f;
}

/// 0 -> 1 -> 2 -> ...; with `two_sided`, the bi-infinite line over Z.
inline Family ray(bool two_sided) {
  auto valid = [two_sided](const std::string& label) -> std::optional<long> {
    try {
      std::size_t used = 0;
      const long v = std::stoll(label, &used);
      if (used != label.size() || std::to_string(v) != label) return std::nullopt;
      if (!two_sided && v < 0) return std::nullopt;
      return v;
    } catch (const std::logic_error&) {
      return std::nullopt;
    }
  };
  auto edge = [](long from) {
    return EdgeSpec{"a" + std::to_string(from), std::to_string(from),
                    std::to_string(from + 1)};
  };
  auto out = [=](const std::string& label) {
    std::vector<EdgeSpec> edges;
    if (auto v = valid(label)) edges.push_back(edge(*v));
    return edges;
  };
  auto in = [=](const std::string& label) {
    std::vector<EdgeSpec> edges;
    if (auto v = valid(label); v && (two_sided || *v > 0)) {
      edges.push_back(edge(*v - 1));
    }
    return edges;
  };
  auto contains = [=](const std::string& label) { return valid(label).has_value(); };
  Family f{{out, in, "0", contains}, std::nullopt, {}};
  f.descriptor.name = "ray";
  f.descriptor.params = {{"two_sided", two_sided}};
  f.descriptor.asserted_properties = {"locally_finite"};
  f.descriptor.known_entropies =
      KnownEntropies{0, 0, 0, "no cycles; at most one path of each length "
                              "leaves or enters a vertex"};
  return f;
}

/// Seeded strongly connected graph on vertices "0".."n-1": a random
/// Hamiltonian cycle plus each other ordered pair with probability
/// `density`. Uses raw 64-bit engine output so results are portable.
inline FiniteGraph random_strongly_connected(std::size_t n_vertices,
                                            double density,
                                            std::uint64_t seed) {
  if (n_vertices < 1) raise(ErrorKind::InvalidParams, "need >= 1 vertex");
  std::mt19937_64 engine(seed);
  auto below = [&](std::uint64_t bound) { return engine() % bound; };
  auto unit = [&]() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };

  std::vector<std::size_t> perm(n_vertices);
  for (std::size_t i = 0; i < n_vertices; ++i) perm[i] = i;
  for (std::size_t i = n_vertices - 1; i > 0; --i) {
    std::swap(perm[i], perm[below(i + 1)]);
  }
  std::vector<std::string> vertices;
  for (std::size_t i = 0; i < n_vertices; ++i) vertices.push_back(std::to_string(i));
  std::vector<EdgeSpec> edges;
  std::set<std::pair<std::size_t, std::size_t>> present;
  std::vector<std::size_t> out_degree(n_vertices, 0);
  auto add = [&](std::size_t a, std::size_t b) {
    edges.push_back({"e" + std::to_string(edges.size() + 1), vertices[a],
                     vertices[b]});
    present.emplace(a, b);
    ++out_degree[a];
  };
  for (std::size_t i = 0; i < n_vertices; ++i) {
    add(perm[i], perm[(i + 1) % n_vertices]);
  }
  for (std::size_t a = 0; a < n_vertices; ++a) {
    for (std::size_t b = 0; b < n_vertices; ++b) {
      const double draw = unit();
      if (!present.contains({a, b}) && draw < density) add(a, b);
    }
  }
  const bool branching = std::any_of(out_degree.begin(), out_degree.end(),
                                     [](std::size_t d) { return d >= 2; });
  if (!branching && density > 0 && n_vertices >= 2) {
    const std::size_t a = below(n_vertices);
    for (std::size_t step = 0; step < n_vertices; ++step) {
      const std::size_t b = (a + step) % n_vertices;
      if (!present.contains({a, b})) {
        add(a, b);
        break;
      }
    }
  }
  return FiniteGraph::build(vertices, edges);
}

inline Family finite_family(FiniteGraph graph, std::string root,
                            std::string name) {
  if (root.empty() && graph.vertex_count() > 0) root = graph.label(0);
  Family f{oracle_from_graph(graph, root), graph, {}};
  f.descriptor.name = std::move(name);
  f.descriptor.asserted_properties = {"locally_finite"};
  if (is_irreducible(graph)) f.descriptor.asserted_properties.insert("irreducible");
  return f;
}

inline FiniteGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::ParseError, "cannot open " + path.string());
  return parse_edge_list(in);
}

/// Builds a family from a JSON description; relative paths resolve against
/// `base_dir`. Unknown fields are rejected.
inline Family make_family(const nlohmann::json& spec,
                          const std::filesystem::path& base_dir = ".") {
  if (!spec.is_object() || !spec.contains("family") ||
      !spec.at("family").is_string()) {
    raise(ErrorKind::ParseError, "family spec needs a string field `family`");
  }
  const std::string name = spec.at("family").get<std::string>();
  auto allow = [&](std::set<std::string> fields) {
    fields.insert("family");
    fields.insert("label");
    for (const auto& [key, value] : spec.items()) {
      if (!fields.contains(key)) {
        raise(ErrorKind::ParseError,
              "unknown field `" + key + "` for family " + name);
      }
    }
  };
  auto need = [&](const std::string& key) -> const nlohmann::json& {
    if (!spec.contains(key)) {
      raise(ErrorKind::ParseError, "family " + name + " needs `" + key + "`");
    }
    return spec.at(key);
  };
  Family family;
  try {
    if (name == "salama_2_8") {
      allow({});
      family = salama_2_8();
    } else if (name == "salama_pp") {
      allow({"p"});
      family = salama_pp(need("p").get<long>());
    } else if (name == "salama") {
      allow({"r", "l", "base_loop"});
      SalamaParams params{Sequence::parse(need("r").get<std::string>()),
                          Sequence::parse(need("l").get<std::string>()),
                          spec.value("base_loop", true)};
      family = salama_family(params, "salama");
    } else if (name == "finite") {
      allow({"path", "root"});
      std::filesystem::path path = need("path").get<std::string>();
      if (path.is_relative()) path = base_dir / path;
      family = finite_family(load_edge_list(path),
                             spec.value("root", std::string{}), "finite");
      family.descriptor.params = {{"path", need("path").get<std::string>()}};
    } else if (name == "ray") {
      allow({"two_sided"});
      family = ray(spec.value("two_sided", false));
    } else if (name == "random_strongly_connected") {
      allow({"n", "density", "seed"});
      const auto n = need("n").get<std::size_t>();
      const auto density = need("density").get<double>();
      const auto seed = need("seed").get<std::uint64_t>();
      family = finite_family(random_strongly_connected(n, density, seed), "",
                             "random_strongly_connected");
      family.descriptor.params = {{"n", n}, {"density", density}, {"seed", seed}};
    } else {
      raise(ErrorKind::UnknownFamily, name);
    }
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::ParseError, std::string("family ") + name + ": " + e.what());
  }
  family.descriptor.label = spec.value("label", family.descriptor.name);
  return family;
}

inline Family load_family(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::ParseError, "cannot open " + path.string());
  nlohmann::json spec;
  try {
    spec = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    raise(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  return make_family(spec, path.parent_path());
}

}  // namespace graphent
