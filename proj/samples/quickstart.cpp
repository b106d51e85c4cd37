// Generate a small Tseitin instance, then look at it through PPSZ.

#include <iostream>

#include "ppsz/ppsz.hpp"

int main() {
  using namespace ppsz;

  const auto inst = generate_tseitin_instance(6, 3, 42);
  std::cout << "vars " << inst.formula.num_vars() << ", clauses " << inst.formula.num_clauses() << ", girth "
            << *inst.girth << ", unique " << inst.unique_verified << "\n";

  for (auto spec : {HeuristicSpec::weak(1), HeuristicSpec::weak(2), HeuristicSpec::strong(3)}) {
    Prover prover(inst.formula, spec);
    const auto cl = codelength(prover, Assignment(inst.formula.num_vars()));
    const auto mc = monte_carlo_success(inst.formula, spec, 20000, 1, 0);
    std::cout << spec.to_string() << ": codelength " << cl.length << ", success ~ " << mc.estimate << " +- "
              << mc.stderr_ << "\n";
  }

  // exact probability needs n <= 8
  const CnfFormula small(2, {Clause{1}, Clause{-1, 2}});
  std::cout << "exact on (x1)(~x1|x2): " << exact_success_probability(small, HeuristicSpec::weak(1)) << "\n";
}
