#pragma once

// PPSZ with externalized randomness, the encode procedure, and the quantities
// built on it: exact and sampled success probability and codelength.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ppsz/cnf.hpp"
#include "ppsz/error.hpp"
#include "ppsz/inference.hpp"
#include "ppsz/parallel.hpp"
#include "ppsz/rng.hpp"

namespace ppsz {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// pi[i] is the variable processed at step i.
using Permutation = std::vector<Var>;

inline void check_permutation(std::span<const Var> pi, std::size_t n) {
  if (pi.size() != n) throw PreconditionError("permutation has wrong length");
  std::vector<bool> seen(n + 1, false);
  for (Var v : pi) {
    if (v < 1 || v > n || seen[v]) throw PreconditionError("not a permutation of the variables");
    seen[v] = true;
  }
}

inline Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), Var{1});
  return p;
}

struct Codeword {
  std::vector<bool> bits;
  std::vector<Var> guessed_vars;

  std::size_t size() const { return bits.size(); }

  std::string to_string() const {
    std::string s;
    for (bool b : bits) s.push_back(b ? '1' : '0');
    return s;
  }
};

/// Walks pi; a variable the heuristic cannot determine in the current
/// restricted formula contributes its bit of b. Every variable is then fixed
/// to its value in b.
inline Codeword encode(const Assignment& b, std::span<const Var> pi, Prover& prover) {
  const std::size_t n = prover.num_vars();
  check_permutation(pi, n);
  if (b.size() != n) throw PreconditionError("assignment has wrong length");
  Codeword c;
  Restriction rho(n);
  for (Var x : pi) {
    if (prover.infer(rho, x) == Inference::Unknown) {
      c.bits.push_back(b[x]);
      c.guessed_vars.push_back(x);
    }
    rho.set(x, b[x]);
  }
  return c;
}

inline Codeword encode(const Assignment& b, std::span<const Var> pi, const CnfFormula& f, HeuristicSpec spec) {
  Prover prover(f, spec);
  return encode(b, pi, prover);
}

struct PpszOutcome {
  Assignment assignment;
  bool success = false;
  std::size_t coins_used = 0;
};

struct RunOptions {
  /// Stop as soon as the restricted formula contains the empty clause; the
  /// unvisited variables are left at 0.
  bool early_exit = false;
};

/// One PPSZ run with explicit randomness: variables in pi order, each set by
/// the heuristic when it is determined and otherwise by the next coin.
/// Success is decided by evaluating F on the final assignment.
inline PpszOutcome run_ppsz(Prover& prover, std::span<const Var> pi, const std::vector<bool>& coins,
                            const RunOptions& options = {}) {
  const std::size_t n = prover.num_vars();
  check_permutation(pi, n);
  if (coins.size() < n) throw PreconditionError("need at least n coins");
  PpszOutcome out{Assignment(n), false, 0};
  Restriction rho(n);
  for (Var x : pi) {
    bool value = false;
    switch (prover.infer(rho, x)) {
      case Inference::Zero: value = false; break;
      case Inference::One: value = true; break;
      case Inference::Unknown: value = coins[out.coins_used++]; break;
    }
    rho.set(x, value);
    out.assignment.set(x, value);
    if (options.early_exit && restrict(prover.formula(), rho).has_empty_clause()) return out;
  }
  out.success = satisfies(prover.formula(), out.assignment);
  return out;
}

inline PpszOutcome run_ppsz(const CnfFormula& f, HeuristicSpec spec, std::span<const Var> pi,
                            const std::vector<bool>& coins, const RunOptions& options = {}) {
  Prover prover(f, spec);
  return run_ppsz(prover, pi, coins, options);
}

inline constexpr std::size_t kExactProbabilityGuard = 8;

/// Sum over b in sat(F) of the average over all n! permutations of
/// 2^-|encode(b, pi)|, as an exact rational.
inline Rational exact_success_probability(Prover& prover, std::size_t guard = kExactProbabilityGuard) {
  const std::size_t n = prover.num_vars();
  if (n > guard) {
    throw GuardError("exact success probability enumerates n! permutations; refusing n=" + std::to_string(n) +
                     " (guard " + std::to_string(guard) + ")");
  }
  BigInt numerator = 0;  // in units of 1 / (n! 2^n)
  BigInt permutations = 0;
  const auto sols = satisfying_assignments(prover.formula());
  Permutation pi = identity_permutation(n);
  do {
    ++permutations;
    for (const Assignment& b : sols) {
      const std::size_t len = encode(b, pi, prover).size();
      numerator += BigInt(1) << (n - len);
    }
  } while (std::next_permutation(pi.begin(), pi.end()));
  const BigInt denominator = permutations << n;
  return Rational(numerator, denominator);
}

inline Rational exact_success_probability(const CnfFormula& f, HeuristicSpec spec,
                                          std::size_t guard = kExactProbabilityGuard) {
  Prover prover(f, spec);
  return exact_success_probability(prover, guard);
}

/// p >= 2^{-(1 - 1/k) n}, compared exactly as p^k * 2^{(k-1) n} >= 1.
inline bool meets_ppz_bound(const Rational& p, std::size_t n, std::size_t k) {
  if (k == 0) throw PreconditionError("k must be positive");
  // compare numerator^k * 2^{(k-1)n} against denominator^k
  const BigInt num = boost::multiprecision::pow(boost::multiprecision::numerator(p), static_cast<unsigned>(k));
  const BigInt den = boost::multiprecision::pow(boost::multiprecision::denominator(p), static_cast<unsigned>(k));
  return (num << ((k - 1) * n)) >= den;
}

struct McEstimate {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double estimate = 0.0;
  double stderr_ = 0.0;
};

/// Draws the permutation and coins of trial `index` from the seeded stream.
inline void sample_trial_randomness(std::uint64_t seed, std::uint64_t index, std::size_t n, Permutation& pi,
                                    std::vector<bool>& coins) {
  Rng rng(derive_seed(seed, index));
  pi = rng.permutation<Var>(n, Var{1});
  coins.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) coins[i] = rng.coin();
}

/// Fraction of successful runs over independent (pi, coins) samples. Trial i
/// draws from derive_seed(seed, i), so the estimate does not depend on the
/// number of workers.
inline McEstimate monte_carlo_success(const CnfFormula& f, HeuristicSpec spec, std::uint64_t trials,
                                      std::uint64_t seed, unsigned workers = 1, const InferenceLimits& limits = {}) {
  if (trials < 1) throw PreconditionError("need at least one trial");
  const std::size_t n = f.num_vars();
  std::vector<std::uint8_t> ok(trials, 0);
  parallel_chunks(trials, workers, [&](std::size_t begin, std::size_t end) {
    Prover prover(f, spec, limits);
    Permutation pi;
    std::vector<bool> coins;
    for (std::size_t i = begin; i < end; ++i) {
      sample_trial_randomness(seed, i, n, pi, coins);
      ok[i] = run_ppsz(prover, pi, coins).success ? 1 : 0;
    }
  });
  McEstimate est;
  est.trials = trials;
  est.successes = static_cast<std::uint64_t>(std::count(ok.begin(), ok.end(), std::uint8_t{1}));
  est.estimate = static_cast<double>(est.successes) / static_cast<double>(trials);
  est.stderr_ = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
  return est;
}

struct CodelengthOptions {
  /// Maximum number of search-node expansions before giving up on optimality.
  std::uint64_t budget = 2'000'000;
  /// Variable permutations (g[v-1] = image of v) that map F to itself and fix
  /// b. Used to skip symmetric guesses.
  std::vector<Permutation> automorphisms;
};

struct CodelengthResult {
  std::size_t length = 0;
  /// Guessed variables of a shortest encoding found (witness set S).
  std::vector<Var> guessed;
  /// False when the budget ran out; `length` is then an upper bound.
  bool optimal = true;
  std::size_t lower_bound = 0;
  std::uint64_t expansions = 0;
};

namespace detail {

inline std::vector<Clause> sorted_unique_clauses(const CnfFormula& f) {
  std::vector<Clause> cs = f.clauses();
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  return cs;
}

inline void check_automorphism(const CnfFormula& f, const Assignment& b, const Permutation& g) {
  check_permutation(g, f.num_vars());
  for (Var v = 1; v <= f.num_vars(); ++v) {
    if (b[g[v - 1]] != b[v]) throw PreconditionError("automorphism does not fix the target assignment");
  }
  CnfFormula image(f.num_vars());
  std::vector<Literal> lits;
  for (const Clause& c : f.clauses()) {
    lits.assign(c.begin(), c.end());
    for (Literal& l : lits) l.var = g[l.var - 1];
    image.add_clause(Clause(lits));
  }
  if (sorted_unique_clauses(image) != sorted_unique_clauses(f)) {
    throw PreconditionError("supplied permutation is not an automorphism of the formula");
  }
}

class CodelengthSearch {
 public:
  using Mask = std::uint64_t;

  CodelengthSearch(Prover& prover, const Assignment& b, const CodelengthOptions& options)
      : prover_(prover), b_(b), options_(options), n_(prover.num_vars()) {
    full_ = n_ == 64 ? ~Mask{0} : ((Mask{1} << n_) - 1);
  }

  CodelengthResult run() {
    const Mask start = close(0);
    CodelengthResult result;
    std::size_t depth = 0;
    try {
      for (depth = 0; depth <= n_; ++depth) {
        path_.clear();
        if (search(start, depth)) {
          result.length = depth;
          result.guessed = path_;
          result.lower_bound = depth;
          result.optimal = true;
          result.expansions = expansions_;
          return result;
        }
      }
    } catch (const BudgetExhausted&) {
    }
    // Budget ran out: fall back to greedy max-gain guessing for an upper bound.
    result.optimal = false;
    result.lower_bound = depth;
    Mask state = start;
    while (state != full_) {
      Var best = 0;
      int best_gain = -1;
      Mask best_state = 0;
      for (Var x = 1; x <= n_; ++x) {
        if (state & bit(x)) continue;
        const Mask next = close(state | bit(x));
        const int gain = std::popcount(next);
        if (gain > best_gain) {
          best_gain = gain;
          best = x;
          best_state = next;
        }
      }
      result.guessed.push_back(best);
      state = best_state;
    }
    result.length = result.guessed.size();
    result.expansions = expansions_;
    return result;
  }

 private:
  struct BudgetExhausted {};

  static Mask bit(Var x) { return Mask{1} << (x - 1); }

  Mask close(Mask fixed) {
    if (auto it = closures_.find(fixed); it != closures_.end()) return it->second;
    Restriction rho(n_);
    for (Var x = 1; x <= n_; ++x) {
      if (fixed & bit(x)) rho.set(x, b_[x]);
    }
    Mask out = fixed;
    for (Var x : forced_closure(prover_, b_, rho)) out |= bit(x);
    closures_.emplace(fixed, out);
    return out;
  }

  Mask apply(const Permutation& g, Mask s) const {
    Mask out = 0;
    for (Var x = 1; x <= n_; ++x) {
      if (s & bit(x)) out |= bit(g[x - 1]);
    }
    return out;
  }

  /// Smallest image of s under the identity and each single generator. Any
  /// key that lies in s's orbit is sound, since the remaining cost is
  /// invariant under automorphisms fixing b.
  Mask key(Mask s) const {
    Mask k = s;
    for (const auto& g : options_.automorphisms) k = std::min(k, apply(g, s));
    return k;
  }

  /// One candidate per orbit of the unfixed variables under the generators
  /// that stabilize s.
  std::vector<Var> candidates(Mask s) const {
    std::vector<Var> parent(n_ + 1);
    std::iota(parent.begin(), parent.end(), Var{0});
    auto find = [&](Var v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (const auto& g : options_.automorphisms) {
      if (apply(g, s) != s) continue;
      for (Var x = 1; x <= n_; ++x) {
        if (s & bit(x)) continue;
        Var a = find(x);
        Var c = find(g[x - 1]);
        if (a != c) parent[std::max(a, c)] = std::min(a, c);
      }
    }
    std::vector<Var> out;
    for (Var x = 1; x <= n_; ++x) {
      if (!(s & bit(x)) && find(x) == x) out.push_back(x);
    }
    return out;
  }

  bool search(Mask s, std::size_t depth) {
    if (s == full_) return true;
    if (depth == 0) return false;
    const Mask k = key(s);
    if (auto it = failed_.find(k); it != failed_.end() && it->second >= depth) return false;
    if (++expansions_ > options_.budget) throw BudgetExhausted{};
    for (Var x : candidates(s)) {
      path_.push_back(x);
      if (search(close(s | bit(x)), depth - 1)) return true;
      path_.pop_back();
    }
    auto& slot = failed_[k];
    slot = std::max(slot, depth);
    return false;
  }

  Prover& prover_;
  const Assignment& b_;
  const CodelengthOptions& options_;
  std::size_t n_;
  Mask full_ = 0;
  std::uint64_t expansions_ = 0;
  std::vector<Var> path_;
  std::unordered_map<Mask, Mask> closures_;
  std::unordered_map<Mask, std::size_t> failed_;
};

}  // namespace detail

/// min over permutations of |encode(b, pi)|. Because inference is monotone
/// under restrictions consistent with b, this is the least number of guesses
/// whose forced closure fixes every variable; iterative deepening over guess
/// sets finds it, memoizing on closure-saturated fixed sets.
inline CodelengthResult codelength(Prover& prover, const Assignment& b, const CodelengthOptions& options = {}) {
  const std::size_t n = prover.num_vars();
  if (n > 64) throw GuardError("codelength search supports at most 64 variables");
  if (b.size() != n || !satisfies(prover.formula(), b)) {
    throw PreconditionError("codelength needs a satisfying assignment");
  }
  for (const auto& g : options.automorphisms) detail::check_automorphism(prover.formula(), b, g);
  return detail::CodelengthSearch(prover, b, options).run();
}

inline CodelengthResult codelength(const CnfFormula& f, HeuristicSpec spec, const Assignment& b,
                                   const CodelengthOptions& options = {}) {
  Prover prover(f, spec);
  return codelength(prover, b, options);
}

/// Does F|(S -> b) collapse? (b defaults to all-zero.)
inline bool collapse_witness_check(Prover& prover, std::span<const Var> s, const Assignment* b = nullptr) {
  const std::size_t n = prover.num_vars();
  const Assignment target = b ? *b : Assignment(n);
  Restriction fixed(n);
  for (Var v : s) {
    if (v < 1 || v > n) throw PreconditionError("witness variable out of range");
    fixed.set(v, target[v]);
  }
  return collapse_check(prover, fixed, &target).collapses;
}

inline bool collapse_witness_check(const CnfFormula& f, HeuristicSpec spec, std::span<const Var> s,
                                   const Assignment* b = nullptr) {
  Prover prover(f, spec);
  return collapse_witness_check(prover, s, b);
}

}  // namespace ppsz
