#pragma once

// Finite directed multigraphs with interned vertex/edge ids, plus the
// structural operations the rest of the library builds on: transposition,
// strongly connected components and the edge matrix.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "graphent/error.hpp"

namespace graphent {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  EdgeId id;
  VertexId src;
  VertexId dst;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Labelled edge used at construction time and by oracles.
struct EdgeSpec {
  std::string id;
  std::string src;
  std::string dst;

  friend bool operator==(const EdgeSpec&, const EdgeSpec&) = default;
};

class FiniteGraph {
 public:
  FiniteGraph() = default;

  /// Validates and interns the given vertices and edges. Edge order is kept.
  static FiniteGraph build(const std::vector<std::string>& vertices,
                           const std::vector<EdgeSpec>& edges) {
    FiniteGraph g;
    for (const auto& label : vertices) g.intern_vertex(label);
    g.out_.resize(g.vertex_labels_.size());
    g.in_.resize(g.vertex_labels_.size());
    for (const auto& spec : edges) {
      const auto src = g.find_vertex(spec.src);
      const auto dst = g.find_vertex(spec.dst);
      if (!src || !dst) {
        raise(ErrorKind::DanglingEndpoint,
              "edge " + spec.id + " references unknown vertex " +
                  (!src ? spec.src : spec.dst));
      }
      if (g.edge_index_.contains(spec.id)) {
        raise(ErrorKind::DuplicateEdgeId, "edge id " + spec.id);
      }
      const auto id = static_cast<EdgeId>(g.edges_.size());
      g.edge_index_.emplace(spec.id, id);
      g.edge_labels_.push_back(spec.id);
      g.edges_.push_back({id, *src, *dst});
      g.out_[*src].push_back(id);
      g.in_[*dst].push_back(id);
    }
    return g;
  }

  std::size_t vertex_count() const { return vertex_labels_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const EdgeId> out_edges(VertexId v) const { return out_[v]; }
  std::span<const EdgeId> in_edges(VertexId v) const { return in_[v]; }

  const std::string& label(VertexId v) const { return vertex_labels_[v]; }
  const std::string& edge_label(EdgeId e) const { return edge_labels_[e]; }
  const std::vector<std::string>& vertex_labels() const {
    return vertex_labels_;
  }

  std::optional<VertexId> find_vertex(const std::string& label) const {
    auto it = vertex_index_.find(label);
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
  }

  VertexId vertex(const std::string& label) const {
    if (auto v = find_vertex(label)) return *v;
    raise(ErrorKind::UnknownVertex, label);
  }

  std::optional<EdgeId> find_edge(const std::string& label) const {
    auto it = edge_index_.find(label);
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }

  EdgeId edge_id(const std::string& label) const {
    if (auto e = find_edge(label)) return *e;
    raise(ErrorKind::InvalidParams, "unknown edge " + label);
  }

  std::vector<EdgeSpec> edge_specs() const {
    std::vector<EdgeSpec> specs;
    specs.reserve(edges_.size());
    for (const auto& e : edges_) {
      specs.push_back({edge_labels_[e.id], vertex_labels_[e.src],
                       vertex_labels_[e.dst]});
    }
    return specs;
  }

  friend bool operator==(const FiniteGraph& a, const FiniteGraph& b) {
    return a.vertex_labels_ == b.vertex_labels_ &&
           a.edge_labels_ == b.edge_labels_ && a.edges_ == b.edges_;
  }

 private:
  void intern_vertex(const std::string& label) {
    if (vertex_index_.contains(label)) return;
    vertex_index_.emplace(label, static_cast<VertexId>(vertex_labels_.size()));
    vertex_labels_.push_back(label);
  }

  std::vector<std::string> vertex_labels_;
  std::unordered_map<std::string, VertexId> vertex_index_;
  std::vector<std::string> edge_labels_;
  std::unordered_map<std::string, EdgeId> edge_index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
};

inline FiniteGraph build_finite(const std::vector<std::string>& vertices,
                                const std::vector<EdgeSpec>& edges) {
  return FiniteGraph::build(vertices, edges);
}

/// Same vertices and edge ids, every edge reversed.
inline FiniteGraph transpose(const FiniteGraph& g) {
  std::vector<EdgeSpec> reversed = g.edge_specs();
  for (auto& e : reversed) std::swap(e.src, e.dst);
  return FiniteGraph::build(g.vertex_labels(), reversed);
}

/// Subgraph induced on `keep` (vertex order and edge order of `g` preserved).
inline FiniteGraph induced_subgraph(const FiniteGraph& g,
                                   const std::vector<bool>& keep) {
  std::vector<std::string> vertices;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (keep[v]) vertices.push_back(g.label(v));
  }
  std::vector<EdgeSpec> edges;
  for (const auto& e : g.edges()) {
    if (keep[e.src] && keep[e.dst]) {
      edges.push_back({g.edge_label(e.id), g.label(e.src), g.label(e.dst)});
    }
  }
  return FiniteGraph::build(vertices, edges);
}

struct Components {
  std::vector<std::size_t> component_of;  // indexed by VertexId
  std::size_t count = 0;
};

// Tarjan's algorithm, iterative so deep windows do not blow the stack.
inline Components strongly_connected_components(const FiniteGraph& g) {
  const std::size_t n = g.vertex_count();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<VertexId> stack;
  Components result;
  result.component_of.assign(n, 0);
  std::size_t counter = 0;

  struct Frame {
    VertexId v;
    std::size_t next_edge;
  };
  std::vector<Frame> call;
  for (VertexId root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& frame = call.back();
      const auto outs = g.out_edges(frame.v);
      if (frame.next_edge < outs.size()) {
        const VertexId w = g.edge(outs[frame.next_edge++]).dst;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[frame.v] = std::min(low[frame.v], index[w]);
        }
        continue;
      }
      const VertexId v = frame.v;
      call.pop_back();
      if (!call.empty()) {
        low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
      if (low[v] == index[v]) {
        VertexId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          result.component_of[w] = result.count;
        } while (w != v);
        ++result.count;
      }
    }
  }
  return result;
}

inline bool is_irreducible(const FiniteGraph& g) {
  if (g.vertex_count() == 0) return false;
  // A lone vertex needs a loop to carry a cycle.
  if (g.vertex_count() == 1) return g.edge_count() > 0;
  return strongly_connected_components(g).count == 1;
}

/// The strongly connected component containing `v`, as an induced subgraph.
inline FiniteGraph component_of(const FiniteGraph& g, VertexId v) {
  const auto comps = strongly_connected_components(g);
  std::vector<bool> keep(g.vertex_count());
  for (VertexId w = 0; w < g.vertex_count(); ++w) {
    keep[w] = comps.component_of[w] == comps.component_of[v];
  }
  return induced_subgraph(g, keep);
}

/// 0/1 matrix over edges: entry (e, f) is 1 iff f can follow e.
struct EdgeMatrix {
  std::size_t dim = 0;
  std::vector<std::uint8_t> entries;  // row-major

  std::uint8_t at(std::size_t row, std::size_t col) const {
    return entries[row * dim + col];
  }
};

inline EdgeMatrix edge_matrix(const FiniteGraph& g) {
  EdgeMatrix m;
  m.dim = g.edge_count();
  m.entries.assign(m.dim * m.dim, 0);
  for (const auto& e : g.edges()) {
    for (EdgeId f : g.out_edges(e.dst)) m.entries[e.id * m.dim + f] = 1;
  }
  return m;
}

// Edge-list text format:
//   src dst [multiplicity]   one line per edge (k parallel edges for k > 1)
//   vertex v                 declares an isolated vertex
//   # ...                    comment; blank lines ignored
// Generated edge ids are e1, e2, ... in file order.
inline FiniteGraph parse_edge_list(std::istream& in) {
  std::vector<std::string> vertices;
  std::unordered_set<std::string> seen;
  std::vector<EdgeSpec> edges;
  auto declare = [&](const std::string& v) {
    if (seen.insert(v).second) vertices.push_back(v);
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream tokens(line);
    std::vector<std::string> words;
    for (std::string w; tokens >> w;) words.push_back(w);
    if (words.empty()) continue;
    auto fail = [&](const std::string& why) {
      raise(ErrorKind::ParseError,
            "line " + std::to_string(line_no) + ": " + why);
    };
    if (words[0] == "vertex") {
      if (words.size() != 2) fail("expected `vertex <label>`");
      declare(words[1]);
      continue;
    }
    if (words.size() < 2 || words.size() > 3) {
      fail("expected `src dst [multiplicity]`");
    }
    long multiplicity = 1;
    if (words.size() == 3) {
      try {
        std::size_t used = 0;
        multiplicity = std::stol(words[2], &used);
        if (used != words[2].size()) fail("bad multiplicity");
      } catch (const std::logic_error&) {
        fail("bad multiplicity " + words[2]);
      }
      if (multiplicity < 1) fail("multiplicity must be positive");
    }
    declare(words[0]);
    declare(words[1]);
    for (long i = 0; i < multiplicity; ++i) {
      edges.push_back(
          {"e" + std::to_string(edges.size() + 1), words[0], words[1]});
    }
  }
  return FiniteGraph::build(vertices, edges);
}

/// Writes one line per edge sorted by edge id; isolated vertices declared.
inline void write_edge_list(std::ostream& out, const FiniteGraph& g) {
  std::vector<EdgeSpec> specs = g.edge_specs();
  std::sort(specs.begin(), specs.end(),
            [](const EdgeSpec& a, const EdgeSpec& b) { return a.id < b.id; });
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.out_edges(v).empty() && g.in_edges(v).empty()) {
      out << "vertex " << g.label(v) << '\n';
    }
  }
  for (const auto& e : specs) {
    out << e.src << ' ' << e.dst << "  # " << e.id << '\n';
  }
}

}  // namespace graphent
