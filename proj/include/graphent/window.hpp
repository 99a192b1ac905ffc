#pragma once

// Oracle-backed (possibly infinite) locally finite graphs and their finite
// windows. A window of radius R around a base set holds every vertex at
// forward or backward distance <= R from the base, and every edge between
// held vertices. Any path of length <= R that touches the base stays inside,
// so counts of such paths computed on the window are exact.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "graphent/error.hpp"
#include "graphent/graph.hpp"

namespace graphent {

inline constexpr std::size_t kDefaultMaxDegree = 1'000'000;
inline constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

/// Pure, deterministic neighbourhood queries on a locally finite graph.
struct GraphOracle {
  std::function<std::vector<EdgeSpec>(const std::string&)> out_edges;
  std::function<std::vector<EdgeSpec>(const std::string&)> in_edges;
  std::string root;
  // Membership test; when unset every label is accepted.
  std::function<bool(const std::string&)> contains;
};

inline GraphOracle oracle_from_graph(FiniteGraph graph, std::string root) {
  auto shared = std::make_shared<const FiniteGraph>(std::move(graph));
  auto collect = [shared](const std::string& label, bool outgoing) {
    std::vector<EdgeSpec> result;
    const auto v = shared->find_vertex(label);
    if (!v) return result;
    const auto ids = outgoing ? shared->out_edges(*v) : shared->in_edges(*v);
    for (EdgeId e : ids) {
      const Edge& edge = shared->edge(e);
      result.push_back({shared->edge_label(e), shared->label(edge.src),
                        shared->label(edge.dst)});
    }
    return result;
  };
  return {[collect](const std::string& v) { return collect(v, true); },
          [collect](const std::string& v) { return collect(v, false); },
          std::move(root),
          [shared](const std::string& v) { return shared->find_vertex(v).has_value(); }};
}

struct GraphWindow {
  FiniteGraph graph;
  std::vector<VertexId> base;
  std::size_t radius = 0;
  std::vector<VertexId> boundary;
  // The window is closed under adjacency: it holds whole components and
  // answers queries of any length.
  bool saturated = false;
  std::vector<std::size_t> forward_distance;   // kUnreached beyond radius
  std::vector<std::size_t> backward_distance;

  bool covers(std::size_t n) const { return saturated || radius >= n; }

  bool in_base(VertexId v) const {
    return std::find(base.begin(), base.end(), v) != base.end();
  }

  VertexId vertex(const std::string& label) const { return graph.vertex(label); }

  /// Throws unless counts of length <= n anchored at `v` are exact here.
  void require(std::size_t n, VertexId v) const {
    if (!covers(n)) {
      raise(ErrorKind::WindowTooSmall,
            "window radius " + std::to_string(radius) + " < " +
                std::to_string(n));
    }
    if (!saturated && !in_base(v)) {
      raise(ErrorKind::WindowTooSmall,
            "vertex " + graph.label(v) + " is not in the window base");
    }
  }
};

/// Wraps an explicit finite graph as a saturated window based at every vertex.
inline GraphWindow whole_graph_window(FiniteGraph g) {
  GraphWindow w;
  const std::size_t n = g.vertex_count();
  w.graph = std::move(g);
  for (VertexId v = 0; v < n; ++v) w.base.push_back(v);
  w.radius = n;
  w.saturated = true;
  w.forward_distance.assign(n, 0);
  w.backward_distance.assign(n, 0);
  return w;
}

namespace detail {

class OracleCache {
 public:
  OracleCache(const GraphOracle& oracle, std::size_t max_degree)
      : oracle_(oracle), max_degree_(max_degree) {}

  const std::vector<EdgeSpec>& out(const std::string& v) {
    return fetch(out_, v, true);
  }
  const std::vector<EdgeSpec>& in(const std::string& v) {
    return fetch(in_, v, false);
  }

 private:
  using Table = std::unordered_map<std::string, std::vector<EdgeSpec>>;

  const std::vector<EdgeSpec>& fetch(Table& table, const std::string& v,
                                     bool outgoing) {
    auto it = table.find(v);
    if (it != table.end()) return it->second;
    auto edges = outgoing ? oracle_.out_edges(v) : oracle_.in_edges(v);
    if (edges.size() > max_degree_) {
      raise(ErrorKind::LocalFinitenessViolation,
            "vertex " + v + " has " + std::to_string(edges.size()) +
                (outgoing ? " outgoing" : " incoming") + " edges (cap " +
                std::to_string(max_degree_) + ")");
    }
    for (const auto& e : edges) {
      if ((outgoing ? e.src : e.dst) != v) {
        raise(ErrorKind::OracleInconsistency,
              "edge " + e.id + " listed at " + v + " has wrong endpoint");
      }
    }
    return table.emplace(v, std::move(edges)).first->second;
  }

  const GraphOracle& oracle_;
  std::size_t max_degree_;
  Table out_;
  Table in_;
};

inline bool lists_edge(const std::vector<EdgeSpec>& edges, const EdgeSpec& e) {
  return std::find(edges.begin(), edges.end(), e) != edges.end();
}

}  // namespace detail

inline GraphWindow materialize(const GraphOracle& oracle,
                               const std::vector<std::string>& base,
                               std::size_t radius,
                               std::size_t max_degree = kDefaultMaxDegree) {
  if (base.empty()) raise(ErrorKind::InvalidParams, "empty window base");
  for (const auto& b : base) {
    if (oracle.contains && !oracle.contains(b)) {
      raise(ErrorKind::UnknownVertex, "vertex " + b + " is not in the graph");
    }
  }
  detail::OracleCache cache(oracle, max_degree);

  std::vector<std::string> order;
  std::unordered_map<std::string, std::size_t> fdist, bdist;
  auto bfs = [&](auto& dist, bool forward) {
    std::deque<std::string> queue;
    for (const auto& b : base) {
      if (dist.emplace(b, 0).second) queue.push_back(b);
    }
    while (!queue.empty()) {
      const std::string v = queue.front();
      queue.pop_front();
      const std::size_t d = dist.at(v);
      if (d == radius) continue;
      const auto& edges = forward ? cache.out(v) : cache.in(v);
      for (const auto& e : edges) {
        const std::string& w = forward ? e.dst : e.src;
        if (dist.emplace(w, d + 1).second) queue.push_back(w);
      }
    }
  };
  bfs(fdist, true);
  bfs(bdist, false);

  std::unordered_set<std::string> members;
  auto add = [&](const std::string& v) {
    if (members.insert(v).second) order.push_back(v);
  };
  for (const auto& b : base) add(b);
  // Deterministic discovery order: sort each ball by (distance, label).
  auto sorted_ball = [](const auto& dist) {
    std::vector<std::pair<std::size_t, std::string>> items;
    for (const auto& [v, d] : dist) items.emplace_back(d, v);
    std::sort(items.begin(), items.end());
    return items;
  };
  for (const auto& [d, v] : sorted_ball(fdist)) add(v);
  for (const auto& [d, v] : sorted_ball(bdist)) add(v);

  std::vector<EdgeSpec> edges;
  bool closed = true;
  for (const auto& v : order) {
    for (const auto& e : cache.out(v)) {
      if (!members.contains(e.dst)) {
        closed = false;
        continue;
      }
      if (!detail::lists_edge(cache.in(e.dst), e)) {
        raise(ErrorKind::OracleInconsistency,
              "edge " + e.id + " is outgoing at " + v + " but not incoming at " +
                  e.dst);
      }
      edges.push_back(e);
    }
    for (const auto& e : cache.in(v)) {
      if (!members.contains(e.src)) {
        closed = false;
        continue;
      }
      if (!detail::lists_edge(cache.out(e.src), e)) {
        raise(ErrorKind::OracleInconsistency,
              "edge " + e.id + " is incoming at " + v + " but not outgoing at " +
                  e.src);
      }
    }
  }

  GraphWindow w;
  w.graph = FiniteGraph::build(order, edges);
  w.radius = radius;
  w.saturated = closed;
  const std::size_t n = w.graph.vertex_count();
  w.forward_distance.assign(n, kUnreached);
  w.backward_distance.assign(n, kUnreached);
  for (VertexId v = 0; v < n; ++v) {
    const auto& label = w.graph.label(v);
    if (auto it = fdist.find(label); it != fdist.end()) {
      w.forward_distance[v] = it->second;
    }
    if (auto it = bdist.find(label); it != bdist.end()) {
      w.backward_distance[v] = it->second;
    }
    if (std::min(w.forward_distance[v], w.backward_distance[v]) == radius) {
      w.boundary.push_back(v);
    }
  }
  for (const auto& b : base) w.base.push_back(w.graph.vertex(b));
  return w;
}

/// The window of a smaller radius, cut out of an existing window.
inline GraphWindow restrict_window(const GraphWindow& window,
                                   std::size_t radius) {
  if (window.saturated || radius >= window.radius) return window;
  const auto& g = window.graph;
  std::vector<bool> keep(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    keep[v] = window.forward_distance[v] <= radius ||
              window.backward_distance[v] <= radius;
  }
  GraphWindow w;
  w.graph = induced_subgraph(g, keep);
  w.radius = radius;
  w.saturated = false;
  const std::size_t n = w.graph.vertex_count();
  w.forward_distance.assign(n, kUnreached);
  w.backward_distance.assign(n, kUnreached);
  for (VertexId v = 0; v < n; ++v) {
    const VertexId old = g.vertex(w.graph.label(v));
    if (window.forward_distance[old] <= radius) {
      w.forward_distance[v] = window.forward_distance[old];
    }
    if (window.backward_distance[old] <= radius) {
      w.backward_distance[v] = window.backward_distance[old];
    }
    if (std::min(w.forward_distance[v], w.backward_distance[v]) == radius) {
      w.boundary.push_back(v);
    }
  }
  for (VertexId b : window.base) w.base.push_back(w.graph.vertex(g.label(b)));
  return w;
}

}  // namespace graphent
