#pragma once

// Experiment commands behind the CLI. Each returns a JSON document with
// "config", "metrics" and "provenance"; metrics depend only on the config.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppsz/cnf.hpp"
#include "ppsz/dimacs.hpp"
#include "ppsz/engine.hpp"
#include "ppsz/error.hpp"
#include "ppsz/graph.hpp"
#include "ppsz/inference.hpp"
#include "ppsz/linear.hpp"
#include "ppsz/tseitin.hpp"

namespace ppsz {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.3.0";

/// Bad arguments or a check that does not apply to the given instance.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitGuard = 3 };

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline Json provenance() {
  return Json{{"tool", "ppsz"}, {"version", kToolVersion}, {"timestamp", utc_timestamp()}};
}

inline Json make_result(Json config, Json metrics, bool pass = true) {
  Json r;
  r["schema_version"] = kSchemaVersion;
  r["config"] = std::move(config);
  r["metrics"] = std::move(metrics);
  r["pass"] = pass;
  r["provenance"] = provenance();
  return r;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

inline HeuristicSpec parse_heuristic(const std::string& kind, std::size_t w) {
  HeuristicSpec spec;
  if (kind == "weak")
    spec = HeuristicSpec::weak(w);
  else if (kind == "strong")
    spec = HeuristicSpec::strong(w);
  else
    throw UsageError("heuristic must be 'weak' or 'strong'");
  spec.validate();
  return spec;
}

inline std::string assignment_string(const Assignment& a) { return a.to_string(); }

// ---------------------------------------------------------------- generate

struct GenerateConfig {
  std::string family;  // tseitin | linear
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> min_girth;
  std::optional<std::size_t> bridge_threshold;
  std::string out;  // empty: DIMACS goes to the returned "dimacs" field only

  Json to_json() const {
    Json j{{"command", "generate"}, {"family", family}, {"n", n}, {"k", k}, {"seed", seed}};
    if (family == "tseitin") {
      j["min_girth"] = min_girth.value_or(default_min_girth(n, k));
      j["bridge_threshold"] = bridge_threshold ? Json(*bridge_threshold) : Json("default");
    }
    j["out"] = out;
    return j;
  }
};

struct GenerateOutput {
  Json result;
  std::string dimacs;
};

inline GenerateOutput cmd_generate(const GenerateConfig& cfg) {
  Json m;
  std::string dimacs;
  if (cfg.family == "tseitin") {
    if (cfg.k < 2) throw UsageError("tseitin needs k >= 2");
    if ((cfg.n * cfg.k) % 2 != 0) throw UsageError("n*k must be even for a k-regular graph");
    TseitinOptions opt;
    opt.min_girth = cfg.min_girth;
    opt.bridge_threshold = cfg.bridge_threshold;
    const auto inst = generate_tseitin_instance(cfg.n, cfg.k, cfg.seed, opt);
    m["num_vars"] = inst.formula.num_vars();
    m["num_clauses"] = inst.formula.num_clauses();
    m["girth"] = inst.girth ? Json(*inst.girth) : Json(nullptr);
    m["bridge_threshold"] = inst.bridge_threshold;
    m["bridge_count"] = inst.bridge_count;
    m["attempt"] = inst.attempt;
    m["unique_verified"] = inst.unique_verified;
    Json edges = Json::array();
    for (std::size_t e = 0; e < inst.graph.num_edges(); ++e)
      edges.push_back({inst.var_of_edge[e], inst.graph.edge(e).u, inst.graph.edge(e).v});
    m["edge_map"] = std::move(edges);
    dimacs = inst.to_dimacs();
  } else if (cfg.family == "linear") {
    const auto inst = generate_linear_instance(cfg.n, cfg.k, cfg.seed);
    m["num_vars"] = inst.formula.num_vars();
    m["num_clauses"] = inst.formula.num_clauses();
    m["rank"] = inst.rank;
    m["appended_unit_rows"] = inst.appended;
    Json hist = Json::object();
    for (const auto& [w, c] : inst.weight_histogram) hist[std::to_string(w)] = c;
    m["row_weight_histogram"] = std::move(hist);
    m["zero_rows_skipped"] = inst.zero_rows;
    m["unique_verified"] = inst.unique_verified;
    Json rows = Json::array();
    for (const auto& r : inst.matrix.rows()) rows.push_back(r.support());
    m["rows"] = std::move(rows);
    dimacs = inst.to_dimacs();
  } else {
    throw UsageError("family must be 'tseitin' or 'linear'");
  }
  Json result = make_result(cfg.to_json(), std::move(m));
  if (!cfg.out.empty()) {
    write_text_file(cfg.out, dimacs);
    write_text_file(cfg.out + ".meta.json", result.dump(2) + "\n");
  }
  return {std::move(result), std::move(dimacs)};
}

// ---------------------------------------------------------------- ppsz

struct PpszConfig {
  std::string instance;
  std::string heuristic = "weak";
  std::size_t w = 1;
  std::string mode = "exact";  // exact | montecarlo
  std::uint64_t trials = 100'000;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;

  Json to_json() const {
    Json j{{"command", "ppsz"}, {"instance", instance}, {"heuristic", heuristic}, {"w", w}, {"mode", mode}};
    if (mode == "montecarlo") {
      j["trials"] = trials;
      j["seed"] = seed ? Json(*seed) : Json(nullptr);
    }
    j["workers"] = resolve_workers(workers);
    return j;
  }
};

inline Json cmd_ppsz(const PpszConfig& cfg) {
  const auto file = parse_dimacs_file(read_text_file(cfg.instance));
  const auto spec = parse_heuristic(cfg.heuristic, cfg.w);
  Json m{{"num_vars", file.formula.num_vars()}, {"num_clauses", file.formula.num_clauses()}};
  if (cfg.mode == "exact") {
    const Rational p = exact_success_probability(file.formula, spec);
    m["success_probability"] = p.str();
    m["success_probability_float"] = static_cast<double>(p);
    m["log2_probability"] = p > 0 ? Json(std::log2(static_cast<double>(p))) : Json(nullptr);
  } else if (cfg.mode == "montecarlo") {
    if (!cfg.seed) throw UsageError("montecarlo mode needs --seed");
    const auto est = monte_carlo_success(file.formula, spec, cfg.trials, *cfg.seed, resolve_workers(cfg.workers));
    m["trials"] = est.trials;
    m["successes"] = est.successes;
    m["estimate"] = est.estimate;
    m["stderr"] = est.stderr_;
  } else {
    throw UsageError("mode must be 'exact' or 'montecarlo'");
  }
  return make_result(cfg.to_json(), std::move(m));
}

// ---------------------------------------------------------------- verify

struct VerifyConfig {
  std::string instance;
  std::string check;  // unique | cycle-obstruction | codelength | row-vector
  std::string heuristic = "weak";
  std::size_t w = 1;
  std::uint64_t budget = 2'000'000;

  Json to_json() const {
    return Json{{"command", "verify"}, {"instance", instance}, {"check", check},   {"heuristic", heuristic},
                {"w", w},             {"budget", budget}};
  }
};

inline Json cmd_verify(const VerifyConfig& cfg) {
  const auto file = parse_dimacs_file(read_text_file(cfg.instance));
  const CnfFormula& f = file.formula;
  const auto meta = parse_metadata(file.comments);
  Json m{{"num_vars", f.num_vars()}};
  bool pass = false;

  if (cfg.check == "unique") {
    const auto sols = first_satisfying(f, 2);
    m["solutions_found"] = sols.size();
    if (!sols.empty()) m["first_solution"] = sols.front().to_string();
    pass = sols.size() == 1 && sols.front().is_zero();
  } else if (cfg.check == "cycle-obstruction") {
    if (meta.edges.empty()) throw UsageError("cycle-obstruction needs a tseitin instance (edge comments)");
    const auto [g, var_of_edge] = graph_from_metadata(meta, f.num_vars());
    const auto cycles = fundamental_cycles(g);
    if (cycles.empty()) throw UsageError("graph has no cycles");
    std::size_t passed = 0;
    Json failures = Json::array();
    for (const auto& c : cycles) {
      const auto r = cycle_obstruction_test(f, g, var_of_edge, c, cfg.w);
      if (r.passed) {
        ++passed;
      } else {
        Json fail{{"cycle_edges", c}, {"collapses", r.collapses}};
        if (r.inferred_var) fail["inferred_var"] = *r.inferred_var;
        failures.push_back(std::move(fail));
      }
    }
    Json witness = Json::array();
    for (std::size_t e : cycles.front()) witness.push_back(var_of_edge[e]);
    m["cycles_tested"] = cycles.size();
    m["cycles_passed"] = passed;
    m["witness_cycle_vars"] = std::move(witness);
    m["failures"] = std::move(failures);
    pass = passed == cycles.size();
  } else if (cfg.check == "codelength") {
    const auto spec = parse_heuristic(cfg.heuristic, cfg.w);
    Prover prover(f, spec);
    const Assignment zero(f.num_vars());
    CodelengthOptions opt;
    opt.budget = cfg.budget;
    const auto cl = codelength(prover, zero, opt);
    const bool collapses = collapse_witness_check(prover, cl.guessed);
    m["codelength"] = cl.length;
    m["optimal"] = cl.optimal;
    m["upper_bound_only"] = !cl.optimal;
    m["lower_bound"] = cl.lower_bound;
    m["expansions"] = cl.expansions;
    m["witness"] = cl.guessed;
    m["witness_collapses"] = collapses;
    pass = collapses;
  } else if (cfg.check == "row-vector") {
    if (meta.rows.empty()) throw UsageError("row-vector needs a linear instance (row comments)");
    const F2Matrix a = matrix_from_metadata(meta, f.num_vars());
    Prover prover(f, HeuristicSpec::weak(cfg.w));
    const Restriction none(f.num_vars());
    std::size_t determined = 0, witnessed = 0;
    Json missing = Json::array();
    for (Var x = 1; x <= f.num_vars(); ++x) {
      if (prover.infer(none, x) == Inference::Unknown) continue;
      ++determined;
      if (row_combination_for_unit(a, x - 1, cfg.w))
        ++witnessed;
      else
        missing.push_back(x);
    }
    m["determined"] = determined;
    m["witnessed"] = witnessed;
    m["missing"] = std::move(missing);
    pass = determined == witnessed;
  } else {
    throw UsageError("unknown check '" + cfg.check + "'");
  }
  return make_result(cfg.to_json(), std::move(m), pass);
}

// ---------------------------------------------------------------- experiment

struct ExperimentConfig {
  std::string name;  // kernel | mixing | expansion
  std::vector<std::size_t> n_list{24};
  std::size_t k = 5;
  std::size_t d = 16;
  std::size_t u_size = 8;
  std::uint64_t trials = 500;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  std::string mode = "exhaustive";  // expansion only
  std::uint64_t budget = 1'000'000;
  std::optional<std::size_t> t, ell, w;

  Json to_json() const {
    Json j{{"command", "experiment"}, {"name", name}, {"n", n_list}, {"seed", seed ? Json(*seed) : Json(nullptr)}};
    if (name == "kernel") {
      j["k"] = k;
      j["trials"] = trials;
    } else if (name == "mixing") {
      j["d"] = d;
      j["u_size"] = u_size;
      j["trials"] = trials;
    } else if (name == "expansion") {
      j["k"] = k;
      j["mode"] = mode;
      j["budget"] = budget;
      j["t"] = t ? Json(*t) : Json("default");
      j["ell"] = ell ? Json(*ell) : Json("default");
      j["w"] = w ? Json(*w) : Json("default");
    }
    j["workers"] = resolve_workers(workers);
    return j;
  }
};

inline Json experiment_point(const ExperimentConfig& cfg, std::size_t n) {
  const std::uint64_t seed = *cfg.seed;
  const unsigned workers = resolve_workers(cfg.workers);
  Json m{{"n", n}};
  if (cfg.name == "kernel") {
    const auto s = kernel_experiment(n, cfg.k, cfg.trials, seed, workers);
    m["k"] = cfg.k;
    m["trials"] = s.trials;
    m["mean_kernel"] = s.mean_kernel;
    m["median_kernel"] = s.median_kernel;
    m["fraction_kernel_le_n2"] = s.fraction_small;
    m["mean_rank"] = s.mean_rank;
    m["fraction_rank_ge_n_minus_2log2n"] = s.fraction_rank_high;
    m["max_kernel_log2"] = s.max_kernel_log2;
  } else if (cfg.name == "mixing") {
    if (cfg.u_size > n) throw UsageError("|U| exceeds n");
    std::vector<std::size_t> cols(cfg.u_size);
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
    const auto r = mixing_experiment(n, cfg.d, cols, cfg.trials, seed, workers);
    m["d"] = cfg.d;
    m["u_size"] = cfg.u_size;
    m["trials"] = r.trials;
    m["empirical_max"] = r.empirical_max;
    m["stderr"] = r.stderr_;
    m["bound"] = r.bound;
    m["exact_max"] = r.exact_max;
    m["within_bound"] = r.empirical_max <= r.bound + 3 * r.stderr_;
  } else if (cfg.name == "expansion") {
    ExpanderParams p = ExpanderParams::from(n, cfg.k);
    if (cfg.t) p.t = std::min(*cfg.t, n);
    if (cfg.ell) p.ell = *cfg.ell;
    if (cfg.w) p.w = *cfg.w;
    const F2Matrix a = sample_matrix(n, cfg.k, seed);
    Rng urng(derive_seed(seed, 1));
    auto perm = urng.permutation<std::size_t>(n, 0);
    std::vector<std::size_t> cols(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(p.t));
    std::sort(cols.begin(), cols.end());
    SearchMode mode;
    if (cfg.mode == "exhaustive")
      mode = SearchMode::Exhaustive;
    else if (cfg.mode == "randomized")
      mode = SearchMode::Randomized;
    else
      throw UsageError("mode must be 'exhaustive' or 'randomized'");
    const auto r = expansion_search(a, cols, p, cfg.k, mode, cfg.budget, derive_seed(seed, 2));
    m["k"] = cfg.k;
    m["t"] = p.t;
    m["ell"] = p.ell;
    m["w"] = p.w;
    m["columns"] = cols;
    m["status"] = to_string(r.status);
    m["examined"] = r.examined;
    Json seq = Json::array();
    for (const auto& u : r.sequence) seq.push_back(u.support());
    m["violation"] = std::move(seq);
  } else {
    throw UsageError("experiment must be 'kernel', 'mixing' or 'expansion'");
  }
  return m;
}

inline Json cmd_experiment(const ExperimentConfig& cfg) {
  if (!cfg.seed) throw UsageError("experiments need --seed");
  if (cfg.n_list.empty()) throw UsageError("need at least one n");
  if (cfg.n_list.size() == 1) return make_result(cfg.to_json(), experiment_point(cfg, cfg.n_list.front()));
  Json points = Json::array();
  for (std::size_t n : cfg.n_list) points.push_back(experiment_point(cfg, n));
  return make_result(cfg.to_json(), Json{{"points", std::move(points)}});
}

/// One CSV row per sweep point; columns are the union of scalar metric keys
/// in first-seen order.
inline std::string sweep_csv(const Json& result) {
  const Json& metrics = result.at("metrics");
  std::vector<Json> points;
  if (metrics.contains("points"))
    for (const auto& p : metrics["points"]) points.push_back(p);
  else
    points.push_back(metrics);
  std::vector<std::string> cols;
  for (const auto& p : points)
    for (auto it = p.begin(); it != p.end(); ++it)
      if (it.value().is_primitive() && std::find(cols.begin(), cols.end(), it.key()) == cols.end())
        cols.push_back(it.key());
  std::ostringstream os;
  os << "schema_version";
  for (const auto& c : cols) os << ',' << c;
  os << '\n';
  for (const auto& p : points) {
    os << kSchemaVersion;
    for (const auto& c : cols) {
      os << ',';
      if (!p.contains(c)) continue;
      const Json& v = p[c];
      os << (v.is_string() ? v.get<std::string>() : v.dump());
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace ppsz
