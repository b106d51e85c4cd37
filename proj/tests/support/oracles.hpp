#pragma once

// Brute-force reference implementations used by the tests. They only go
// through the public run/encode entry points and enumerate everything.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "ppsz/ppsz.hpp"

namespace ppsz::support {

/// Fraction of (permutation, coin string) pairs on which run_ppsz succeeds.
/// n coins are always enough, so every pair is weighted 1 / (n! 2^n).
inline Rational replay_success_probability(const CnfFormula& f, HeuristicSpec spec) {
  const std::size_t n = f.num_vars();
  Prover prover(f, spec);
  Permutation pi = identity_permutation(n);
  BigInt wins = 0, total = 0;
  std::vector<bool> coins(n);
  do {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      for (std::size_t i = 0; i < n; ++i) coins[i] = (mask >> i) & 1u;
      ++total;
      if (run_ppsz(prover, pi, coins).success) ++wins;
    }
  } while (std::next_permutation(pi.begin(), pi.end()));
  return Rational(wins, total);
}

/// min over all n! permutations of |encode(b, pi)|.
inline std::size_t brute_codelength(Prover& prover, const Assignment& b) {
  Permutation pi = identity_permutation(prover.num_vars());
  std::size_t best = std::numeric_limits<std::size_t>::max();
  do {
    best = std::min(best, encode(b, pi, prover).size());
  } while (best > 0 && std::next_permutation(pi.begin(), pi.end()));
  return best;
}

/// Collapse by definition: some ordering of the free variables in which each
/// of the first (free - 1) is determined after fixing its predecessors to 0.
inline bool exhaustive_collapse(Prover& prover, const Restriction& fixed = {}) {
  const std::size_t n = prover.num_vars();
  const Restriction start = fixed.num_vars() == 0 ? Restriction(n) : fixed;
  std::vector<Var> free;
  for (Var x = 1; x <= n; ++x)
    if (!start.assigned(x)) free.push_back(x);
  if (free.size() <= 1) return true;
  do {
    Restriction rho = start;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < free.size() && ok; ++i) {
      ok = prover.infer(rho, free[i]) != Inference::Unknown;
      rho.set(free[i], false);
    }
    if (ok) return true;
  } while (std::next_permutation(free.begin(), free.end()));
  return false;
}

inline std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace ppsz::support
