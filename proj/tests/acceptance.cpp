// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>

#include "ppsz/harness.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace ppsz;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out.pass) ++failures;
  std::printf("%s %2d %-34s %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", id, name.c_str(), out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

const HeuristicSpec kSpecs[] = {HeuristicSpec::weak(1), HeuristicSpec::weak(2), HeuristicSpec::strong(1),
                                HeuristicSpec::strong(2)};

std::vector<support::PlantedFormula> small_corpus() { return support::planted_corpus(60, 3, 6, 3, 20240601); }

std::vector<TseitinInstance> tseitin_corpus() {
  std::vector<TseitinInstance> out;
  const std::size_t ns[] = {6, 8, 10};
  for (std::size_t i = 0; i < 20; ++i) out.push_back(generate_tseitin_instance(ns[i % 3], 3, 1000 + i));
  return out;
}

Graph random_dense_graph(std::size_t n, double eps, std::uint64_t seed) {
  const auto m = static_cast<std::size_t>(std::ceil((1 + eps) * static_cast<double>(n)));
  return random_graph(n, m, seed);
}

Outcome encode_identity() {
  std::size_t checked = 0;
  for (const auto& p : small_corpus()) {
    for (const auto& spec : kSpecs) {
      const Rational exact = exact_success_probability(p.formula, spec);
      const Rational replay = support::replay_success_probability(p.formula, spec);
      if (exact != replay)
        return {false, fmt("seed %llu %s: exact %s vs replay %s", (unsigned long long)p.seed, spec.to_string().c_str(),
                           exact.str().c_str(), replay.str().c_str())};
      ++checked;
    }
  }
  return {true, fmt("%zu formula/heuristic pairs equal", checked)};
}

Outcome ppz_bound() {
  std::size_t checked = 0;
  double worst = 1e9;
  for (const auto& p : small_corpus()) {
    const std::size_t n = p.formula.num_vars();
    const Rational pr = exact_success_probability(p.formula, HeuristicSpec::weak(1));
    if (!meets_ppz_bound(pr, n, 3)) return {false, fmt("seed %llu: p=%s below 2^-(2/3)%zu", (unsigned long long)p.seed, pr.str().c_str(), n)};
    worst = std::min(worst, std::log2(static_cast<double>(pr)) / static_cast<double>(n));
    ++checked;
  }
  return {true, fmt("%zu formulas; min log2(p)/n = %.3f >= -0.667", checked, worst)};
}

Outcome codelength_oracle() {
  std::size_t checked = 0;
  for (const auto& p : support::planted_corpus(36, 3, 7, 3, 777)) {
    for (const auto& spec : {HeuristicSpec::weak(1), HeuristicSpec::weak(2), HeuristicSpec::strong(3)}) {
      Prover prover(p.formula, spec);
      const auto cl = codelength(prover, p.solution);
      const auto brute = support::brute_codelength(prover, p.solution);
      if (!cl.optimal || cl.length != brute)
        return {false, fmt("seed %llu %s: search %zu vs brute %zu", (unsigned long long)p.seed, spec.to_string().c_str(), cl.length, brute)};
      if (!collapse_witness_check(prover, cl.guessed, &p.solution))
        return {false, fmt("seed %llu %s: witness does not collapse", (unsigned long long)p.seed, spec.to_string().c_str())};
      ++checked;
    }
  }
  return {true, fmt("%zu instance/heuristic pairs match n! brute force", checked)};
}

Outcome tseitin_unique(const std::vector<TseitinInstance>& insts) {
  for (const auto& inst : insts) {
    const auto sols = satisfying_assignments(inst.formula);
    if (sols.size() != 1 || !sols[0].is_zero())
      return {false, fmt("n=%zu seed=%llu has %zu solutions", inst.n, (unsigned long long)inst.seed, sols.size())};
  }
  return {true, fmt("%zu instances, sat set = {0}", insts.size())};
}

Outcome cycle_obstruction(const std::vector<TseitinInstance>& insts) {
  std::size_t tests = 0;
  for (const auto& inst : insts) {
    const std::size_t g = inst.girth.value();
    std::set<std::size_t> widths{1, obstruction_horizon(g)};
    widths.erase(0);
    for (const auto& c : fundamental_cycles(inst.graph)) {
      for (std::size_t w : widths) {
        if (!cycle_obstruction_test(inst, c, w).passed)
          return {false, fmt("n=%zu seed=%llu girth=%zu w=%zu cycle of length %zu", inst.n, (unsigned long long)inst.seed, g, w, c.size())};
        ++tests;
      }
    }
  }
  return {true, fmt("%zu cycle/width checks", tests)};
}

Outcome slender_core() {
  std::size_t graphs = 0;
  for (double eps : {0.5, 1.0}) {
    const auto min_len = static_cast<std::size_t>(std::ceil(2.0 / eps));
    for (std::size_t i = 0; i < 50; ++i) {
      const std::size_t n = 10 + 5 * (i % 11);
      const Graph g = random_dense_graph(n, eps, derive_seed(static_cast<std::uint64_t>(eps * 10), i));
      const auto core = dense_core(g, eps);
      if (!core) return {false, fmt("eps=%.1f graph %zu: empty core", eps, i)};
      if (core->graph.min_degree() < 2) return {false, "core has a vertex of degree < 2"};
      if (!slender_paths(core->graph, min_len).empty()) return {false, "core keeps a long slender path"};
      ++graphs;
    }
  }
  const auto k5 = dense_core(complete_graph(5), 1.0);
  if (!k5 || k5->graph.num_vertices() != 5 || k5->graph.num_edges() != 10) return {false, "K5 fixture"};
  Graph kp(7);
  for (std::size_t u = 0; u < 4; ++u)
    for (std::size_t v = u + 1; v < 4; ++v) kp.add_edge(u, v);
  kp.add_edge(3, 4);
  kp.add_edge(4, 5);
  kp.add_edge(5, 6);
  const auto k4 = dense_core(kp, 1.0);
  if (!k4 || k4->original != std::vector<std::size_t>{0, 1, 2, 3} || k4->graph.num_edges() != 6)
    return {false, "K4+pendant fixture"};
  return {true, fmt("%zu random graphs + K5, K4+pendant fixtures", graphs)};
}

std::set<std::string> kernel_strings(const F2Matrix& a) {
  const auto basis = kernel_basis(a);
  std::set<std::string> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << basis.size()); ++m) {
    BitVector x(a.num_cols());
    for (std::size_t i = 0; i < basis.size(); ++i)
      if ((m >> i) & 1u) x ^= basis[i];
    out.insert(x.to_string());
  }
  return out;
}

std::set<std::string> solution_strings(const CnfFormula& f) {
  std::set<std::string> out;
  for (const auto& a : satisfying_assignments(f)) out.insert(a.to_string());
  return out;
}

Outcome linear_semantics() {
  std::size_t matrices = 0;
  for (std::size_t n = 4; n <= 16; ++n) {
    for (std::uint64_t s = 0; s < 4; ++s) {
      const auto inst = generate_linear_instance(n, 1 + s % 4, derive_seed(n, s));
      if (solution_strings(linear_cnf(inst.sampled)) != kernel_strings(inst.sampled))
        return {false, fmt("n=%zu: sampled A kernel mismatch", n)};
      const auto sols = solution_strings(inst.formula);
      if (sols != kernel_strings(inst.matrix) || sols.size() != 1 || sols.begin()->find('1') != std::string::npos)
        return {false, fmt("n=%zu: augmented A' not uniquely 0", n)};
      matrices += 2;
    }
  }
  return {true, fmt("%zu matrices, sat(linear_cnf) = ker", matrices)};
}

Outcome kernel_size() {
  const auto s = kernel_experiment(24, 5, 500, 8, 0);
  return {s.fraction_small >= 0.90, fmt("fraction |ker|<=n^2 = %.3f (mean |ker| %.2f, n+1 = 25)", s.fraction_small, s.mean_kernel)};
}

Outcome walk_mixing() {
  const auto r = mixing_experiment(16, 16, {0, 1, 2, 3, 4, 5, 6, 7}, 1'000'000, 9, 0);
  const bool big = r.empirical_max <= r.bound + 3 * r.stderr_;
  const auto small = exact_projected_distribution(2, 2, 2);
  const double small_max = *std::max_element(small.begin(), small.end());
  const bool tiny = small_max == 0.5 && mixing_bound(2, 2, 2) == 0.5;
  return {big && tiny, fmt("n=16: max %.5f <= bound %.5f + 3*%.5f; n=2,d=2: max %.3f = bound %.3f", r.empirical_max,
                           r.bound, r.stderr_, small_max, mixing_bound(2, 2, 2))};
}

Outcome row_vector() {
  std::size_t determined = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const std::size_t n = 6 + i % 5;
    const auto inst = generate_linear_instance(n, 2 + i % 3, 500 + i);
    for (std::size_t w = 1; w <= 3; ++w) {
      Prover prover(inst.formula, HeuristicSpec::weak(w));
      for (Var x = 1; x <= n; ++x) {
        if (prover.infer(Restriction(n), x) == Inference::Unknown) continue;
        ++determined;
        const auto r = row_combination_for_unit(inst.matrix, x - 1, w);
        if (!r) return {false, fmt("instance %llu w=%zu x%u: no row combination", (unsigned long long)i, w, x)};
        if (r->weight() > w || inst.matrix.combine(*r) != BitVector::unit(n, x - 1))
          return {false, fmt("instance %llu w=%zu x%u: bad witness", (unsigned long long)i, w, x)};
      }
    }
  }
  return {determined > 0, fmt("%zu determined (instance, w, var) triples all witnessed", determined)};
}

int run(const std::string& args) {
  const std::string cmd = std::string(PPSZ_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("ppsz_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string inst = (dir / "t.cnf").string();
  if (run("generate tseitin -n 8 -k 3 --seed 11 --out " + inst) != 0) return {false, "generate failed"};
  const std::vector<std::string> configs = {
      "ppsz " + inst + " --mode montecarlo --trials 20000 --seed 4",
      "experiment mixing -n 16 -d 16 --trials 200000 --seed 4",
      "experiment kernel -n 24 -k 5 --trials 200 --seed 4",
  };
  std::size_t compared = 0;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    std::string first;
    for (int workers : {1, 3, 8}) {
      const std::string out = (dir / ("r" + std::to_string(c) + "_" + std::to_string(workers) + ".json")).string();
      if (run(configs[c] + " --workers " + std::to_string(workers) + " --out " + out) != 0)
        return {false, "run failed: " + configs[c]};
      const std::string metrics = Json::parse(read_text_file(out))["metrics"].dump();
      if (first.empty())
        first = metrics;
      else if (metrics != first)
        return {false, "metrics differ for: " + configs[c]};
      ++compared;
    }
  }
  fs::remove_all(dir);
  return {true, fmt("%zu runs over %zu configs byte-identical", compared, configs.size())};
}

}  // namespace

int main() {
  criterion(1, "encode identity", encode_identity);
  criterion(2, "PPZ lower bound", ppz_bound);
  criterion(3, "codelength oracle", codelength_oracle);
  std::vector<TseitinInstance> insts;
  criterion(4, "Tseitin uniqueness", [&] {
    insts = tseitin_corpus();
    return tseitin_unique(insts);
  });
  criterion(5, "cycle obstruction", [&] { return cycle_obstruction(insts); });
  criterion(6, "slender core", slender_core);
  criterion(7, "linear semantics", linear_semantics);
  criterion(8, "kernel size", kernel_size);
  criterion(9, "walk mixing", walk_mixing);
  criterion(10, "row-vector correspondence", row_vector);
  criterion(11, "determinism", determinism);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
