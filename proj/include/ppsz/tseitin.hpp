#pragma once

// Tseitin parity formulas over graphs, with negative 2-clauses between
// distant edges so that 0 is the only solution.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ppsz/cnf.hpp"
#include "ppsz/dimacs.hpp"
#include "ppsz/error.hpp"
#include "ppsz/graph.hpp"
#include "ppsz/inference.hpp"

namespace ppsz {

/// var_of_edge[e] for e in 0..|E|-1; the default maps edge e to variable e+1.
inline std::vector<Var> default_edge_vars(const Graph& g) {
  std::vector<Var> m(g.num_edges());
  for (std::size_t e = 0; e < m.size(); ++e) m[e] = static_cast<Var>(e + 1);
  return m;
}

/// Even parity at every vertex.
inline std::vector<Clause> tseitin_clauses(const Graph& g, const std::vector<Var>& var_of_edge) {
  std::vector<Clause> out;
  std::vector<Var> vars;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    vars.clear();
    for (const auto& inc : g.incident(v)) vars.push_back(var_of_edge.at(inc.edge));
    auto cs = even_parity_clauses(vars);
    out.insert(out.end(), cs.begin(), cs.end());
  }
  return out;
}

/// (~x_e | ~x_f) for each pair of edges at distance >= threshold.
inline std::vector<Clause> bridge_clauses(const Graph& g, const std::vector<Var>& var_of_edge, std::size_t threshold) {
  const auto dist = all_pairs_distances(g);
  std::vector<Clause> out;
  const auto& es = g.edges();
  for (std::size_t e = 0; e < es.size(); ++e) {
    for (std::size_t f = e + 1; f < es.size(); ++f) {
      const std::size_t d = std::min({dist[es[e].u][es[f].u], dist[es[e].u][es[f].v], dist[es[e].v][es[f].u],
                                      dist[es[e].v][es[f].v]});
      if (d >= threshold) {
        out.push_back(Clause({Literal{var_of_edge.at(e), true}, Literal{var_of_edge.at(f), true}}));
      }
    }
  }
  return out;
}

/// ceil(g/2 - 1), i.e. floor((g-1)/2); 0 for forests.
inline std::size_t default_bridge_threshold(std::optional<std::size_t> g) {
  if (!g || *g < 2) return 0;
  return (*g - 1) / 2;
}

struct TseitinInstance {
  Graph graph;
  CnfFormula formula;
  std::vector<Var> var_of_edge;
  std::optional<std::size_t> girth;
  std::size_t bridge_count = 0;
  bool unique_verified = false;
  std::size_t bridge_threshold = 0;
  std::size_t min_girth = 0;
  std::uint64_t seed = 0;
  /// Regeneration round that produced this instance (0 = first graph).
  std::size_t attempt = 0;
  std::size_t n = 0, k = 0;

  std::vector<std::string> comments() const {
    std::vector<std::string> c;
    c.push_back("family=tseitin seed=" + std::to_string(seed) + " n=" + std::to_string(n) +
                " k=" + std::to_string(k));
    c.push_back("girth=" + (girth ? std::to_string(*girth) : std::string("inf")) +
                " min_girth=" + std::to_string(min_girth) + " bridge_threshold=" + std::to_string(bridge_threshold) +
                " bridges=" + std::to_string(bridge_count) + " attempt=" + std::to_string(attempt) +
                " unique_verified=" + (unique_verified ? "1" : "0"));
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
      c.push_back("edge " + std::to_string(var_of_edge[e]) + " = (" + std::to_string(graph.edge(e).u) + "," +
                  std::to_string(graph.edge(e).v) + ")");
    }
    return c;
  }

  std::string to_dimacs() const { return emit_dimacs(formula, comments()); }
};

inline TseitinInstance make_tseitin_instance(const Graph& g, std::optional<std::size_t> threshold = {}) {
  TseitinInstance inst;
  inst.graph = g;
  inst.var_of_edge = default_edge_vars(g);
  inst.girth = girth(g);
  inst.bridge_threshold = threshold ? *threshold : default_bridge_threshold(inst.girth);
  inst.formula = CnfFormula(g.num_edges(), tseitin_clauses(g, inst.var_of_edge));
  for (Clause& c : bridge_clauses(g, inst.var_of_edge, inst.bridge_threshold)) {
    inst.formula.add_clause(std::move(c));
    ++inst.bridge_count;
  }
  return inst;
}

inline constexpr std::size_t kTseitinUniqueCheckMaxEdges = 28;

/// Smallest g with (k-1)^g >= n, i.e. ceil(log_{k-1} n); at least 3.
inline std::size_t default_min_girth(std::size_t n, std::size_t k) {
  if (k < 3) return 3;
  std::size_t g = 0;
  for (std::size_t p = 1; p < n; p *= (k - 1)) ++g;
  return std::max<std::size_t>(g, 3);
}

struct TseitinOptions {
  std::optional<std::size_t> min_girth;
  std::optional<std::size_t> bridge_threshold;
  std::size_t max_regenerations = 200;
  std::size_t graph_retries = 10'000;
};

/// Random k-regular graph with girth >= ceil(log_{k-1} n) (or the override),
/// Tseitin clauses plus bridges. With |E| <= 28 the solution set is checked to
/// be {0}; a failing graph is discarded and the next attempt drawn.
inline TseitinInstance generate_tseitin_instance(std::size_t n, std::size_t k, std::uint64_t seed,
                                                 const TseitinOptions& options = {}) {
  if ((n * k) % 2 != 0) throw PreconditionError("n*k must be even");
  const std::size_t min_girth = options.min_girth.value_or(default_min_girth(n, k));
  const bool check = n * k / 2 <= kTseitinUniqueCheckMaxEdges;
  for (std::size_t attempt = 0; attempt < options.max_regenerations; ++attempt) {
    Graph g = random_regular_graph(n, k, min_girth, derive_seed(seed, attempt), options.graph_retries);
    TseitinInstance inst = make_tseitin_instance(g, options.bridge_threshold);
    inst.seed = seed;
    inst.attempt = attempt;
    inst.min_girth = min_girth;
    inst.n = n;
    inst.k = k;
    if (check) {
      if (!uniquely_satisfied_by_zero(inst.formula, kTseitinUniqueCheckMaxEdges)) continue;
      inst.unique_verified = true;
    }
    return inst;
  }
  throw GenerationError("no uniquely satisfiable Tseitin instance for n=" + std::to_string(n) +
                        " k=" + std::to_string(k) + " after " + std::to_string(options.max_regenerations) +
                        " graphs (seed " + std::to_string(seed) + ")");
}

/// Rebuilds the graph from the "edge <var> = (u,v)" comments of a generated
/// instance file.
inline std::pair<Graph, std::vector<Var>> graph_from_metadata(const InstanceMetadata& meta, std::size_t num_vars) {
  if (meta.edges.size() != num_vars) throw PreconditionError("edge map does not cover every variable");
  std::size_t nv = 0;
  for (const auto& [var, uv] : meta.edges) nv = std::max({nv, uv.first + 1, uv.second + 1});
  Graph g(nv);
  std::vector<Var> var_of_edge;
  for (const auto& [var, uv] : meta.edges) {
    if (var < 1 || var > num_vars) throw PreconditionError("edge comment names an unknown variable");
    g.add_edge(uv.first, uv.second);
    var_of_edge.push_back(var);
  }
  return {std::move(g), std::move(var_of_edge)};
}

struct ObstructionResult {
  bool passed = false;
  /// Cycle variable the weak heuristic could determine, if any.
  std::optional<Var> inferred_var;
  bool collapses = false;
};

/// Fix every edge off the cycle to 0; the test passes when weak(w) leaves all
/// cycle variables undetermined and the restricted formula does not collapse.
inline ObstructionResult cycle_obstruction_test(const CnfFormula& formula, const Graph& g,
                                                const std::vector<Var>& var_of_edge,
                                                const std::vector<std::size_t>& cycle, std::size_t w,
                                                const InferenceLimits& limits = {}) {
  if (!is_cycle(g, cycle)) throw PreconditionError("edge list is not a cycle of the graph");
  const std::size_t n = formula.num_vars();
  std::vector<bool> on_cycle(g.num_edges(), false);
  for (std::size_t e : cycle) on_cycle[e] = true;
  Restriction sigma(n);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!on_cycle[e]) sigma.set(var_of_edge.at(e), false);
  }
  Prover prover(formula, HeuristicSpec::weak(w), limits);
  ObstructionResult r;
  for (std::size_t e : cycle) {
    if (prover.infer(sigma, var_of_edge[e]) != Inference::Unknown) {
      r.inferred_var = var_of_edge[e];
      break;
    }
  }
  r.collapses = collapse_check(prover, sigma).collapses;
  r.passed = !r.inferred_var && !r.collapses;
  return r;
}

inline ObstructionResult cycle_obstruction_test(const TseitinInstance& inst, const std::vector<std::size_t>& cycle,
                                                std::size_t w, const InferenceLimits& limits = {}) {
  return cycle_obstruction_test(inst.formula, inst.graph, inst.var_of_edge, cycle, w, limits);
}

/// Largest w the obstruction is expected to survive: ceil(girth/2) - 1.
inline std::size_t obstruction_horizon(std::size_t girth) { return (girth + 1) / 2 - 1; }

}  // namespace ppsz
