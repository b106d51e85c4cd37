#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ppsz/error.hpp"
#include "ppsz/rng.hpp"

namespace ppsz {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;  // u < v
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected simple graph; vertices 0..n-1, edges indexed in insertion order.
class Graph {
 public:
  struct Incidence {
    std::size_t neighbor;
    std::size_t edge;
  };

  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n) {}

  std::size_t num_vertices() const { return adj_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  const std::vector<Incidence>& incident(std::size_t v) const { return adj_.at(v); }
  std::size_t degree(std::size_t v) const { return adj_.at(v).size(); }

  bool has_edge(std::size_t u, std::size_t v) const {
    for (const auto& inc : adj_.at(u)) {
      if (inc.neighbor == v) return true;
    }
    return false;
  }

  std::size_t add_edge(std::size_t u, std::size_t v) {
    if (u >= num_vertices() || v >= num_vertices()) throw PreconditionError("edge endpoint out of range");
    if (u == v) throw PreconditionError("self-loop");
    if (has_edge(u, v)) throw PreconditionError("multi-edge");
    if (u > v) std::swap(u, v);
    const std::size_t id = edges_.size();
    edges_.push_back({u, v});
    adj_[u].push_back({v, id});
    adj_[v].push_back({u, id});
    return id;
  }

  std::size_t min_degree() const {
    std::size_t d = std::numeric_limits<std::size_t>::max();
    for (const auto& a : adj_) d = std::min(d, a.size());
    return adj_.empty() ? 0 : d;
  }

  std::string to_edge_list() const {
    std::ostringstream os;
    for (const Edge& e : edges_) os << e.u << ' ' << e.v << '\n';
    return os.str();
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adj_;
};

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

inline std::vector<std::size_t> bfs_distances(const Graph& g, std::size_t src) {
  std::vector<std::size_t> dist(g.num_vertices(), kUnreachable);
  std::queue<std::size_t> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (const auto& inc : g.incident(u)) {
      if (dist[inc.neighbor] == kUnreachable) {
        dist[inc.neighbor] = dist[u] + 1;
        q.push(inc.neighbor);
      }
    }
  }
  return dist;
}

inline std::vector<std::vector<std::size_t>> all_pairs_distances(const Graph& g) {
  std::vector<std::vector<std::size_t>> d;
  d.reserve(g.num_vertices());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) d.push_back(bfs_distances(g, v));
  return d;
}

/// Length of a shortest cycle; nullopt for forests.
inline std::optional<std::size_t> girth(const Graph& g) {
  std::size_t best = kUnreachable;
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> dist(n), parent_edge(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kUnreachable);
    std::queue<std::size_t> q;
    dist[s] = 0;
    parent_edge[s] = kUnreachable;
    q.push(s);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      if (2 * dist[u] + 1 >= best) break;
      for (const auto& inc : g.incident(u)) {
        if (inc.edge == parent_edge[u]) continue;
        const std::size_t w = inc.neighbor;
        if (dist[w] == kUnreachable) {
          dist[w] = dist[u] + 1;
          parent_edge[w] = inc.edge;
          q.push(w);
        } else {
          best = std::min(best, dist[u] + dist[w] + 1);
        }
      }
    }
  }
  if (best == kUnreachable) return std::nullopt;
  return best;
}

/// min over endpoint pairs of vertex distance; nullopt when disconnected.
inline std::optional<std::size_t> edge_distance(const Graph& g, std::size_t e, std::size_t f) {
  if (e == f) throw PreconditionError("edge_distance needs two distinct edges");
  const Edge& a = g.edge(e);
  const Edge& b = g.edge(f);
  std::size_t best = kUnreachable;
  for (std::size_t src : {a.u, a.v}) {
    const auto d = bfs_distances(g, src);
    best = std::min({best, d[b.u], d[b.v]});
  }
  if (best == kUnreachable) return std::nullopt;
  return best;
}

/// Random k-regular simple graph with girth >= min_girth, by configuration
/// model pairing with rejection. Attempt i uses derive_seed(seed, i).
inline Graph random_regular_graph(std::size_t n, std::size_t k, std::size_t min_girth, std::uint64_t seed,
                                  std::size_t max_retries = 10'000) {
  if (k < 2) throw PreconditionError("degree must be at least 2");
  if ((n * k) % 2 != 0) throw PreconditionError("n*k must be even");
  if (k >= n) throw PreconditionError("degree must be below the vertex count");
  std::vector<std::size_t> stubs;
  for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    stubs.clear();
    for (std::size_t v = 0; v < n; ++v) stubs.insert(stubs.end(), k, v);
    rng.shuffle(stubs);
    Graph g(n);
    bool simple = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      const std::size_t u = stubs[i], v = stubs[i + 1];
      if (u == v || g.has_edge(u, v)) {
        simple = false;
        break;
      }
      g.add_edge(u, v);
    }
    if (!simple) continue;
    const auto gg = girth(g);
    if (!gg || *gg >= min_girth) return g;
  }
  throw GenerationError("no simple " + std::to_string(k) + "-regular graph on " + std::to_string(n) +
                        " vertices with girth >= " + std::to_string(min_girth) + " after " +
                        std::to_string(max_retries) + " attempts (seed " + std::to_string(seed) + ")");
}

/// Uniform simple graph with exactly m edges (G(n, m)).
inline Graph random_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 2 && m > 0) throw PreconditionError("too many edges");
  if (m > n * (n - 1) / 2) throw PreconditionError("too many edges");
  Rng rng(seed);
  Graph g(n);
  while (g.num_edges() < m) {
    const std::size_t u = rng.uniform(n), v = rng.uniform(n);
    if (u != v && !g.has_edge(u, v)) g.add_edge(u, v);
  }
  return g;
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw PreconditionError("a cycle needs at least 3 vertices");
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

inline Graph path_graph(std::size_t n) {
  Graph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

/// Edge permutations (as edge index maps) generating the dihedral symmetry
/// of cycle_graph(n): one rotation and one reflection.
inline std::vector<std::vector<std::size_t>> cycle_edge_automorphisms(std::size_t n) {
  std::vector<std::size_t> rot(n), refl(n);
  for (std::size_t i = 0; i < n; ++i) {
    rot[i] = (i + 1) % n;
    refl[i] = (2 * n - 2 - i) % n;  // edge (i,i+1) -> (n-1-i-1, n-1-i)
  }
  return {rot, refl};
}

/// Some cycle inside the subgraph formed by `subset` (edge indices), as an
/// ordered list of edge indices; nullopt iff that subgraph is a forest.
inline std::optional<std::vector<std::size_t>> find_cycle(const Graph& g, const std::vector<std::size_t>& subset) {
  const std::size_t n = g.num_vertices();
  std::vector<bool> in(g.num_edges(), false);
  for (std::size_t e : subset) in.at(e) = true;
  std::vector<std::size_t> parent(n, kUnreachable), parent_edge(n, kUnreachable), depth(n, 0);
  std::vector<bool> seen(n, false);
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    seen[root] = true;
    while (!stack.empty()) {
      auto& [u, idx] = stack.back();
      if (idx == g.incident(u).size()) {
        stack.pop_back();
        continue;
      }
      const auto inc = g.incident(u)[idx++];
      if (!in[inc.edge] || inc.edge == parent_edge[u]) continue;
      const std::size_t w = inc.neighbor;
      if (!seen[w]) {
        seen[w] = true;
        parent[w] = u;
        parent_edge[w] = inc.edge;
        depth[w] = depth[u] + 1;
        stack.push_back({w, 0});
        continue;
      }
      // back edge u-w closes a cycle through the DFS tree
      std::vector<std::size_t> left{inc.edge}, right;
      std::size_t a = u, b = w;
      while (depth[a] > depth[b]) {
        left.push_back(parent_edge[a]);
        a = parent[a];
      }
      while (depth[b] > depth[a]) {
        right.push_back(parent_edge[b]);
        b = parent[b];
      }
      while (a != b) {
        left.push_back(parent_edge[a]);
        a = parent[a];
        right.push_back(parent_edge[b]);
        b = parent[b];
      }
      left.insert(left.end(), right.rbegin(), right.rend());
      return left;
    }
  }
  return std::nullopt;
}

inline std::vector<std::size_t> all_edges(const Graph& g) {
  std::vector<std::size_t> es(g.num_edges());
  for (std::size_t i = 0; i < es.size(); ++i) es[i] = i;
  return es;
}

/// True when `cycle` is a set of distinct edges forming one simple cycle.
inline bool is_cycle(const Graph& g, const std::vector<std::size_t>& cycle) {
  if (cycle.size() < 3) return false;
  std::set<std::size_t> distinct(cycle.begin(), cycle.end());
  if (distinct.size() != cycle.size()) return false;
  std::vector<std::size_t> deg(g.num_vertices(), 0);
  for (std::size_t e : cycle) {
    if (e >= g.num_edges()) return false;
    ++deg[g.edge(e).u];
    ++deg[g.edge(e).v];
  }
  std::size_t touched = 0;
  for (std::size_t d : deg) {
    if (d != 0 && d != 2) return false;
    touched += d != 0;
  }
  if (touched != cycle.size()) return false;
  // connected: one cycle rather than several
  std::vector<std::size_t> rest(cycle.begin() + 1, cycle.end());
  return !find_cycle(g, rest).has_value();
}

/// One cycle per non-tree edge of a BFS spanning forest.
inline std::vector<std::vector<std::size_t>> fundamental_cycles(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> parent(n, kUnreachable), parent_edge(n, kUnreachable), depth(n, 0);
  std::vector<bool> seen(n, false), tree(g.num_edges(), false);
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    std::queue<std::size_t> q;
    q.push(root);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (const auto& inc : g.incident(u)) {
        if (seen[inc.neighbor]) continue;
        seen[inc.neighbor] = true;
        parent[inc.neighbor] = u;
        parent_edge[inc.neighbor] = inc.edge;
        depth[inc.neighbor] = depth[u] + 1;
        tree[inc.edge] = true;
        q.push(inc.neighbor);
      }
    }
  }
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (tree[e]) continue;
    std::vector<std::size_t> left{e}, right;
    std::size_t a = g.edge(e).u, b = g.edge(e).v;
    while (depth[a] > depth[b]) {
      left.push_back(parent_edge[a]);
      a = parent[a];
    }
    while (depth[b] > depth[a]) {
      right.push_back(parent_edge[b]);
      b = parent[b];
    }
    while (a != b) {
      left.push_back(parent_edge[a]);
      a = parent[a];
      right.push_back(parent_edge[b]);
      b = parent[b];
    }
    left.insert(left.end(), right.rbegin(), right.rend());
    out.push_back(std::move(left));
  }
  return out;
}

struct SlenderPath {
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> edges;
  bool closed = false;  // the whole path is a cycle component
  std::size_t length() const { return edges.size(); }
};

/// Maximal paths whose vertices all have degree <= 2; length counts edges.
inline std::vector<SlenderPath> slender_paths(const Graph& g, std::size_t min_len) {
  const std::size_t n = g.num_vertices();
  auto low = [&](std::size_t v) { return g.degree(v) <= 2; };
  std::vector<bool> done(n, false);
  std::vector<SlenderPath> out;

  auto walk = [&](std::size_t start, std::size_t from_edge, SlenderPath& p) {
    std::size_t v = start, came = from_edge;
    while (true) {
      std::size_t next = kUnreachable, via = kUnreachable;
      for (const auto& inc : g.incident(v)) {
        if (inc.edge == came || !low(inc.neighbor) || done[inc.neighbor]) continue;
        next = inc.neighbor;
        via = inc.edge;
        break;
      }
      if (next == kUnreachable) return;
      p.edges.push_back(via);
      p.vertices.push_back(next);
      done[next] = true;
      v = next;
      came = via;
    }
  };

  // open paths: start from an endpoint (a low vertex with < 2 low neighbors)
  for (std::size_t v = 0; v < n; ++v) {
    if (done[v] || !low(v)) continue;
    std::size_t low_nbrs = 0;
    for (const auto& inc : g.incident(v)) low_nbrs += low(inc.neighbor);
    if (low_nbrs == 2) continue;
    SlenderPath p;
    p.vertices.push_back(v);
    done[v] = true;
    walk(v, kUnreachable, p);
    if (p.length() >= min_len) out.push_back(std::move(p));
  }
  // what remains among low vertices are whole cycle components
  for (std::size_t v = 0; v < n; ++v) {
    if (done[v] || !low(v)) continue;
    SlenderPath p;
    p.closed = true;
    p.vertices.push_back(v);
    done[v] = true;
    walk(v, kUnreachable, p);
    for (const auto& inc : g.incident(p.vertices.back())) {
      if (inc.neighbor == v && (p.edges.empty() || inc.edge != p.edges.back())) {
        p.edges.push_back(inc.edge);
        break;
      }
    }
    if (p.length() >= min_len) out.push_back(std::move(p));
  }
  return out;
}

struct Subgraph {
  Graph graph;
  /// original vertex id of each vertex in `graph`
  std::vector<std::size_t> original;
};

inline Subgraph induced_subgraph(const Graph& g, const std::vector<bool>& keep) {
  Subgraph s;
  std::vector<std::size_t> id(g.num_vertices(), kUnreachable);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (keep[v]) {
      id[v] = s.original.size();
      s.original.push_back(v);
    }
  }
  s.graph = Graph(s.original.size());
  for (const Edge& e : g.edges()) {
    if (keep[e.u] && keep[e.v]) s.graph.add_edge(id[e.u], id[e.v]);
  }
  return s;
}

/// Prunes degree <= 1 vertices, then repeatedly deletes the interior of
/// slender paths of length >= ceil(2/eps) (whole components when closed) and
/// prunes again. Returns the remaining core, or nullopt when nothing is left.
inline std::optional<Subgraph> dense_core(const Graph& g, double eps) {
  if (!(eps > 0)) throw PreconditionError("epsilon must be positive");
  const auto min_len = static_cast<std::size_t>(std::ceil(2.0 / eps));
  std::vector<bool> keep(g.num_vertices(), true);
  while (true) {
    Subgraph cur = induced_subgraph(g, keep);
    bool changed = false;
    for (std::size_t v = 0; v < cur.graph.num_vertices(); ++v) {
      if (cur.graph.degree(v) <= 1) {
        keep[cur.original[v]] = false;
        changed = true;
      }
    }
    if (changed) continue;
    for (const SlenderPath& p : slender_paths(cur.graph, min_len)) {
      // the path's vertices all have degree <= 2 here; removing them leaves
      // the endpoints' outside neighbours with one fewer edge
      for (std::size_t v : p.vertices) keep[cur.original[v]] = false;
      changed = true;
    }
    if (!changed) {
      if (cur.graph.num_vertices() == 0) return std::nullopt;
      return cur;
    }
  }
}

}  // namespace ppsz
