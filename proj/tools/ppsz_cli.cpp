#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ppsz/harness.hpp"

using namespace ppsz;

namespace {

int emit(const Json& result, const std::string& out) {
  const std::string text = result.dump(2) + "\n";
  if (out.empty())
    std::cout << text;
  else
    write_text_file(out, text);
  return result.value("pass", true) ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PPSZ experiments: instance generation, success probability, structural checks"};
  app.require_subcommand(1);

  GenerateConfig gen;
  std::size_t min_girth = 0, threshold = 0;
  auto* g = app.add_subcommand("generate", "write a tseitin or linear instance as DIMACS");
  g->add_option("family", gen.family, "tseitin | linear")->required()->check(CLI::IsMember({"tseitin", "linear"}));
  g->add_option("-n", gen.n, "vertices (tseitin) or variables (linear)")->required();
  g->add_option("-k", gen.k, "degree (tseitin) or walk length (linear)")->required();
  g->add_option("--seed", gen.seed)->required();
  auto* g_girth = g->add_option("--min-girth", min_girth, "override ceil(log_{k-1} n)");
  auto* g_thr = g->add_option("--bridge-threshold", threshold, "override ceil(g/2 - 1)");
  g->add_option("--out", gen.out, "DIMACS path; metadata goes to <out>.meta.json");

  PpszConfig pp;
  std::uint64_t pp_seed = 0;
  auto* p = app.add_subcommand("ppsz", "success probability of PPSZ on an instance");
  p->add_option("instance", pp.instance)->required();
  p->add_option("--heuristic", pp.heuristic)->check(CLI::IsMember({"weak", "strong"}))->capture_default_str();
  p->add_option("-w", pp.w)->capture_default_str();
  p->add_option("--mode", pp.mode)->check(CLI::IsMember({"exact", "montecarlo"}))->capture_default_str();
  p->add_option("--trials", pp.trials)->capture_default_str();
  auto* p_seed = p->add_option("--seed", pp_seed);
  p->add_option("--workers", pp.workers, "0 = all cores");
  std::string p_out;
  p->add_option("--out", p_out);

  VerifyConfig ver;
  auto* v = app.add_subcommand("verify", "run a structural check on an instance");
  v->add_option("instance", ver.instance)->required();
  v->add_option("--check", ver.check)
      ->required()
      ->check(CLI::IsMember({"unique", "cycle-obstruction", "codelength", "row-vector"}));
  v->add_option("--heuristic", ver.heuristic)->check(CLI::IsMember({"weak", "strong"}))->capture_default_str();
  v->add_option("-w", ver.w)->capture_default_str();
  v->add_option("--budget", ver.budget, "codelength search expansions")->capture_default_str();
  std::string v_out;
  v->add_option("--out", v_out);

  ExperimentConfig ex;
  std::uint64_t ex_seed = 0;
  std::size_t ex_t = 0, ex_ell = 0, ex_w = 0;
  bool csv = false;
  auto* e = app.add_subcommand("experiment", "kernel, mixing or expansion experiment");
  e->add_option("name", ex.name)->required()->check(CLI::IsMember({"kernel", "mixing", "expansion"}));
  e->add_option("-n", ex.n_list, "one value, or several for a sweep")->delimiter(',')->capture_default_str();
  e->add_option("-k", ex.k)->capture_default_str();
  e->add_option("-d", ex.d, "walk length (mixing)")->capture_default_str();
  e->add_option("--u-size", ex.u_size, "|U| (mixing)")->capture_default_str();
  e->add_option("--trials", ex.trials)->capture_default_str();
  auto* e_seed = e->add_option("--seed", ex_seed);
  e->add_option("--workers", ex.workers, "0 = all cores");
  e->add_option("--mode", ex.mode, "expansion search mode")
      ->check(CLI::IsMember({"exhaustive", "randomized"}))
      ->capture_default_str();
  e->add_option("--budget", ex.budget)->capture_default_str();
  auto* e_t = e->add_option("-t", ex_t);
  auto* e_ell = e->add_option("--ell", ex_ell);
  auto* e_w = e->add_option("-W,--width", ex_w);
  e->add_flag("--csv", csv, "write CSV instead of JSON");
  std::string e_out;
  e->add_option("--out", e_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) {
      if (*g_girth) gen.min_girth = min_girth;
      if (*g_thr) gen.bridge_threshold = threshold;
      auto out = cmd_generate(gen);
      if (gen.out.empty())
        std::cout << out.dimacs;
      else
        std::cerr << "wrote " << gen.out << " (" << out.result["metrics"]["num_vars"] << " vars)\n";
      return kExitOk;
    }
    if (*p) {
      if (*p_seed) pp.seed = pp_seed;
      return emit(cmd_ppsz(pp), p_out);
    }
    if (*v) return emit(cmd_verify(ver), v_out);
    if (*e) {
      if (*e_seed) ex.seed = ex_seed;
      if (*e_t) ex.t = ex_t;
      if (*e_ell) ex.ell = ex_ell;
      if (*e_w) ex.w = ex_w;
      const Json result = cmd_experiment(ex);
      if (!csv) return emit(result, e_out);
      if (e_out.empty())
        std::cout << sweep_csv(result);
      else
        write_text_file(e_out, sweep_csv(result));
      return kExitOk;
    }
  } catch (const GuardError& err) {
    std::cerr << "refused: " << err.what() << '\n';
    return kExitGuard;
  } catch (const GenerationError& err) {
    std::cerr << "generation failed: " << err.what() << '\n';
    return kExitGuard;
  } catch (const ParseError& err) {
    std::cerr << "parse error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
