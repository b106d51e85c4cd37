#pragma once

// Small planted k-CNF formulas with exactly one solution.

#include <cstdint>
#include <vector>

#include "ppsz/ppsz.hpp"

namespace ppsz::support {

struct PlantedFormula {
  CnfFormula formula;
  Assignment solution;
  std::uint64_t seed;
};

/// Random k-clauses satisfied by a random planted b, added until b is the
/// only solution. With `zero`, b is the all-zero assignment.
inline PlantedFormula planted_unique(std::size_t n, std::size_t k, std::uint64_t seed, bool zero = false) {
  Rng rng(seed);
  Assignment b(n);
  if (!zero)
    for (Var v = 1; v <= n; ++v) b.set(v, rng.coin());
  CnfFormula f(n);
  for (;;) {
    auto vars = rng.permutation<Var>(n, 1);
    std::vector<Literal> lits;
    for (std::size_t j = 0; j < k; ++j) lits.push_back({vars[j], rng.coin()});
    Clause c(lits);
    if (!satisfies(c, b)) continue;
    f.add_clause(std::move(c));
    auto sols = first_satisfying(f, 2);
    if (sols.size() == 1) break;
  }
  return {std::move(f), std::move(b), seed};
}

/// `count` formulas with n cycling through [n_lo, n_hi].
inline std::vector<PlantedFormula> planted_corpus(std::size_t count, std::size_t n_lo, std::size_t n_hi,
                                                  std::size_t k, std::uint64_t seed, bool zero = false) {
  std::vector<PlantedFormula> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = n_lo + i % (n_hi - n_lo + 1);
    out.push_back(planted_unique(n, k, derive_seed(seed, i), zero));
  }
  return out;
}

/// Uniformly random k-CNF with m clauses (no satisfiability promise).
inline CnfFormula random_kcnf(std::size_t n, std::size_t k, std::size_t m, Rng& rng) {
  CnfFormula f(n);
  for (std::size_t i = 0; i < m; ++i) {
    auto vars = rng.permutation<Var>(n, 1);
    std::vector<Literal> lits;
    for (std::size_t j = 0; j < k; ++j) lits.push_back({vars[j], rng.coin()});
    f.add_clause(Clause(lits));
  }
  return f;
}

}  // namespace ppsz::support
