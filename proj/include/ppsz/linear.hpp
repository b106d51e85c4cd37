#pragma once

// Linear (XOR) instances A x = 0 from random-walk rows plus a random
// permutation matrix, and the experiments around them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppsz/cnf.hpp"
#include "ppsz/dimacs.hpp"
#include "ppsz/error.hpp"
#include "ppsz/gf2.hpp"
#include "ppsz/parallel.hpp"
#include "ppsz/rng.hpp"

namespace ppsz {

/// Endpoint of a walk on {0,1}^n from 0; each step flips a uniform coordinate.
inline BitVector random_walk_vector(std::size_t n, std::size_t steps, Rng& rng) {
  BitVector v(n);
  if (n == 0) return v;
  for (std::size_t s = 0; s < steps; ++s) v.flip(rng.uniform(n));
  return v;
}

/// A = B + P: row i of B is a k-step walk endpoint, P a uniform permutation
/// matrix.
inline F2Matrix sample_matrix(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("n must be positive");
  Rng rng(seed);
  F2Matrix a(n);
  for (std::size_t i = 0; i < n; ++i) a.add_row(random_walk_vector(n, k, rng));
  const auto perm = rng.permutation<std::size_t>(n, 0);
  for (std::size_t i = 0; i < n; ++i) a.row(i).flip(perm[i]);
  return a;
}

/// Parity-0 clauses per row over variables column+1. Zero rows produce
/// nothing and are counted in *skipped.
inline CnfFormula linear_cnf(const F2Matrix& a, std::size_t* skipped = nullptr) {
  CnfFormula f(a.num_cols());
  std::size_t zero_rows = 0;
  std::vector<Var> vars;
  for (const auto& r : a.rows()) {
    vars.clear();
    for (std::size_t c : r.support()) vars.push_back(static_cast<Var>(c + 1));
    if (vars.empty()) {
      ++zero_rows;
      continue;
    }
    for (Clause& c : even_parity_clauses(vars)) f.add_clause(std::move(c));
  }
  if (skipped) *skipped = zero_rows;
  return f;
}

inline constexpr std::size_t kLinearUniqueCheckMaxVars = 24;

struct LinearInstance {
  std::size_t n = 0, k = 0;
  std::uint64_t seed = 0;
  F2Matrix sampled;
  F2Matrix matrix;  // sampled plus appended unit rows
  std::vector<std::size_t> appended;
  std::size_t rank = 0;
  std::map<std::size_t, std::size_t> weight_histogram;
  std::size_t zero_rows = 0;
  CnfFormula formula;
  bool unique_verified = false;

  std::vector<std::string> comments() const {
    std::vector<std::string> c;
    c.push_back("family=linear seed=" + std::to_string(seed) + " n=" + std::to_string(n) + " k=" + std::to_string(k));
    std::string hist;
    for (const auto& [w, cnt] : weight_histogram) {
      if (!hist.empty()) hist += ',';
      hist += std::to_string(w) + ":" + std::to_string(cnt);
    }
    c.push_back("rank=" + std::to_string(rank) + " appended=" + std::to_string(appended.size()) +
                " weights=" + hist + " unique_verified=" + (unique_verified ? "1" : "0"));
    for (std::size_t i = 0; i < matrix.num_rows(); ++i) {
      std::string line = "row " + std::to_string(i) + " =";
      for (std::size_t col : matrix.row(i).support()) line += " " + std::to_string(col + 1);
      c.push_back(std::move(line));
    }
    return c;
  }

  std::string to_dimacs() const { return emit_dimacs(formula, comments()); }
};

inline LinearInstance generate_linear_instance(std::size_t n, std::size_t k, std::uint64_t seed) {
  LinearInstance inst;
  inst.n = n;
  inst.k = k;
  inst.seed = seed;
  inst.sampled = sample_matrix(n, k, seed);
  inst.rank = f2_rank(inst.sampled);
  auto aug = steinitz_augment(inst.sampled);
  inst.matrix = std::move(aug.matrix);
  inst.appended = std::move(aug.appended);
  for (const auto& r : inst.sampled.rows()) ++inst.weight_histogram[r.weight()];
  inst.formula = linear_cnf(inst.matrix, &inst.zero_rows);
  if (n <= kLinearUniqueCheckMaxVars) {
    if (!uniquely_satisfied_by_zero(inst.formula, kLinearUniqueCheckMaxVars)) {
      throw GenerationError("augmented linear instance is not uniquely satisfiable");
    }
    inst.unique_verified = true;
  }
  return inst;
}

/// Rebuilds A' from "row i = cols" comments (1-based columns).
inline F2Matrix matrix_from_metadata(const InstanceMetadata& meta, std::size_t num_vars) {
  if (meta.rows.empty()) throw PreconditionError("instance carries no row comments");
  F2Matrix a(num_vars);
  for (const auto& [idx, cols] : meta.rows) {
    BitVector r(num_vars);
    for (Var c : cols) {
      if (c < 1 || c > num_vars) throw PreconditionError("row comment names an unknown column");
      r.flip(c - 1);
    }
    a.add_row(std::move(r));
  }
  return a;
}

struct WellIncreasingBounds {
  std::size_t lo, hi;
  static WellIncreasingBounds of(std::size_t n, std::size_t k) {
    if (k == 0) throw PreconditionError("k must be positive");
    return {n / k, (4 * n + k - 1) / k};
  }
  bool admits(std::size_t fresh) const { return lo <= fresh && fresh <= hi; }
};

/// floor(n/k) <= |u_i minus the union of earlier u_j| <= ceil(4n/k) for all i.
inline bool well_increasing_check(const std::vector<BitVector>& seq, std::size_t n, std::size_t k) {
  const auto b = WellIncreasingBounds::of(n, k);
  BitVector seen(n);
  for (const auto& u : seq) {
    if (u.size() != n) throw PreconditionError("vector length differs from n");
    if (!b.admits(u.andnot_weight(seen))) return false;
    seen |= u;
  }
  return true;
}

struct ExpanderParams {
  std::size_t t = 1, ell = 1, w = 1;

  /// t = round(60 log2(k) / k * n) clamped to [1, n]; ell = floor(k t / 4n),
  /// at least 1; w = round(2n / k), at least 1.
  static ExpanderParams from(std::size_t n, std::size_t k) {
    if (n == 0 || k < 2) throw PreconditionError("expander parameters need n >= 1 and k >= 2");
    ExpanderParams p;
    const double t = std::round(60.0 * std::log2(static_cast<double>(k)) / static_cast<double>(k) *
                                static_cast<double>(n));
    p.t = std::clamp<std::size_t>(static_cast<std::size_t>(t), 1, n);
    p.ell = std::max<std::size_t>(1, k * p.t / (4 * n));
    p.w = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(2.0 * static_cast<double>(n) / static_cast<double>(k))));
    return p;
  }
};

enum class ExpansionStatus { Violation, NoneFound, NoneFoundSampled, BudgetExceeded };

inline std::string to_string(ExpansionStatus s) {
  switch (s) {
    case ExpansionStatus::Violation: return "violation";
    case ExpansionStatus::NoneFound: return "none_found";
    case ExpansionStatus::NoneFoundSampled: return "none_found_sampled";
    case ExpansionStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

enum class SearchMode { Exhaustive, Randomized };

struct ExpansionResult {
  ExpansionStatus status = ExpansionStatus::NoneFound;
  std::vector<BitVector> sequence;  // the violating u_1..u_ell
  std::uint64_t examined = 0;
};

inline constexpr std::size_t kExhaustiveExpansionMaxN = 12;

namespace detail {

class ExpansionProblem {
 public:
  ExpansionProblem(const F2Matrix& a, const std::vector<std::size_t>& cols, const ExpanderParams& params, std::size_t k)
      : a_(a), params_(params), m_(a.num_rows()), bounds_(WellIncreasingBounds::of(m_, k)), umask_(a.num_cols()) {
    for (std::size_t c : cols) umask_.set(c);
  }

  /// |u A_U|
  std::size_t image_weight(const BitVector& u) const { return a_.combine(u).and_weight(umask_); }
  bool short_image(const BitVector& u) const { return image_weight(u) <= params_.w; }
  std::size_t rows() const { return m_; }
  const WellIncreasingBounds& bounds() const { return bounds_; }
  std::size_t ell() const { return params_.ell; }

 private:
  const F2Matrix& a_;
  ExpanderParams params_;
  std::size_t m_;
  WellIncreasingBounds bounds_;
  BitVector umask_;
};

}  // namespace detail

/// Looks for a well-increasing u_1..u_ell (over the rows of A) with
/// |u_i A_U| <= w for every i, i.e. a witness that A is not a robust expander
/// on U. Exhaustive mode is complete for n <= 12 and ell <= 2; randomized mode
/// draws `budget` sequences.
inline ExpansionResult expansion_search(const F2Matrix& a, const std::vector<std::size_t>& cols,
                                        const ExpanderParams& params, std::size_t k, SearchMode mode,
                                        std::uint64_t budget, std::uint64_t seed = 0) {
  for (std::size_t c : cols)
    if (c >= a.num_cols()) throw PreconditionError("column index out of range");
  detail::ExpansionProblem prob(a, cols, params, k);
  const std::size_t m = prob.rows();
  ExpansionResult res;

  if (mode == SearchMode::Exhaustive) {
    if (m > kExhaustiveExpansionMaxN || params.ell > 2) {
      throw GuardError("exhaustive expansion search needs n <= 12 and ell <= 2");
    }
    const std::uint64_t space = std::uint64_t{1} << m;
    auto vec = [&](std::uint64_t bits) {
      BitVector v(m);
      for (std::size_t i = 0; i < m; ++i)
        if ((bits >> i) & 1u) v.set(i);
      return v;
    };
    // first vectors that already qualify
    std::vector<std::uint64_t> firsts;
    for (std::uint64_t x = 1; x < space; ++x) {
      if (!prob.bounds().admits(static_cast<std::size_t>(std::popcount(x)))) continue;
      if (++res.examined > budget) {
        res.status = ExpansionStatus::BudgetExceeded;
        return res;
      }
      if (prob.short_image(vec(x))) firsts.push_back(x);
    }
    if (params.ell == 1) {
      if (!firsts.empty()) {
        res.status = ExpansionStatus::Violation;
        res.sequence = {vec(firsts.front())};
      }
      return res;
    }
    std::vector<std::uint8_t> short_img(space, 2);  // 2 = not computed
    for (std::uint64_t x : firsts) {
      for (std::uint64_t y = 1; y < space; ++y) {
        if (!prob.bounds().admits(static_cast<std::size_t>(std::popcount(y & ~x)))) continue;
        if (++res.examined > budget) {
          res.status = ExpansionStatus::BudgetExceeded;
          return res;
        }
        if (short_img[y] == 2) short_img[y] = prob.short_image(vec(y)) ? 1 : 0;
        if (short_img[y]) {
          res.status = ExpansionStatus::Violation;
          res.sequence = {vec(x), vec(y)};
          return res;
        }
      }
    }
    return res;
  }

  // randomized: fresh part uniform in size and position, plus a random subset
  // of the already covered rows
  Rng rng(seed);
  const auto& b = prob.bounds();
  for (std::uint64_t trial = 0; trial < budget; ++trial) {
    ++res.examined;
    std::vector<BitVector> seq;
    BitVector seen(m);
    bool ok = true;
    for (std::size_t i = 0; i < params.ell && ok; ++i) {
      std::vector<std::size_t> fresh_pool, old_pool;
      for (std::size_t r = 0; r < m; ++r) (seen.get(r) ? old_pool : fresh_pool).push_back(r);
      const std::size_t hi = std::min(b.hi, fresh_pool.size());
      const std::size_t lo = std::max<std::size_t>(b.lo, 1);
      if (lo > hi) {
        ok = false;
        break;
      }
      const std::size_t size = lo + rng.uniform(hi - lo + 1);
      rng.shuffle(fresh_pool);
      BitVector u(m);
      for (std::size_t j = 0; j < size; ++j) u.set(fresh_pool[j]);
      for (std::size_t r : old_pool)
        if (rng.coin()) u.set(r);
      if (!prob.short_image(u)) ok = false;
      seen |= u;
      seq.push_back(std::move(u));
    }
    if (ok) {
      res.status = ExpansionStatus::Violation;
      res.sequence = std::move(seq);
      return res;
    }
  }
  res.status = ExpansionStatus::NoneFoundSampled;
  return res;
}

struct KernelStats {
  std::size_t trials = 0;
  double mean_kernel = 0;    // mean of |ker| = 2^{n - rank}
  double median_kernel = 0;
  double fraction_small = 0;  // |ker| <= n^2
  double mean_rank = 0;
  double fraction_rank_high = 0;  // rank >= n - 2 log2 n
  std::size_t max_kernel_log2 = 0;
};

/// Sample i uses derive_seed(seed, i).
inline KernelStats kernel_experiment(std::size_t n, std::size_t k, std::size_t trials, std::uint64_t seed,
                                     unsigned workers = 1) {
  if (trials < 1) throw PreconditionError("need at least one trial");
  std::vector<std::size_t> ranks(trials);
  parallel_chunks(trials, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) ranks[i] = f2_rank(sample_matrix(n, k, derive_seed(seed, i)));
  });
  KernelStats s;
  s.trials = trials;
  std::vector<double> kers;
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  const double rank_floor = static_cast<double>(n) - 2.0 * std::log2(static_cast<double>(n));
  std::size_t small = 0, high = 0;
  double sum_rank = 0;
  for (std::size_t r : ranks) {
    const std::size_t d = n - r;
    const double ker = std::ldexp(1.0, static_cast<int>(d));
    kers.push_back(ker);
    small += ker <= nn;
    high += static_cast<double>(r) >= rank_floor;
    sum_rank += static_cast<double>(r);
    s.max_kernel_log2 = std::max(s.max_kernel_log2, d);
  }
  double sum = 0;
  for (double k2 : kers) sum += k2;
  s.mean_kernel = sum / static_cast<double>(trials);
  std::sort(kers.begin(), kers.end());
  s.median_kernel = trials % 2 ? kers[trials / 2] : 0.5 * (kers[trials / 2 - 1] + kers[trials / 2]);
  s.fraction_small = static_cast<double>(small) / static_cast<double>(trials);
  s.fraction_rank_high = static_cast<double>(high) / static_cast<double>(trials);
  s.mean_rank = sum_rank / static_cast<double>(trials);
  return s;
}

/// 2 ((1 + (1 - 2/n)^d) / 2)^|U|
inline double mixing_bound(std::size_t n, std::size_t d, std::size_t u) {
  const double q = std::pow(1.0 - 2.0 / static_cast<double>(n), static_cast<double>(d));
  return 2.0 * std::pow((1.0 + q) / 2.0, static_cast<double>(u));
}

/// Exact law of the walk endpoint projected to U: a step leaves x_U alone
/// with probability 1 - |U|/n, otherwise flips a uniform coordinate of U.
inline std::vector<double> exact_projected_distribution(std::size_t n, std::size_t d, std::size_t u) {
  if (u > 24 || u > n) throw GuardError("projection too large to tabulate");
  const std::size_t cells = std::size_t{1} << u;
  std::vector<double> p(cells, 0.0), q(cells);
  p[0] = 1.0;
  const double stay = 1.0 - static_cast<double>(u) / static_cast<double>(n);
  const double each = 1.0 / static_cast<double>(n);
  for (std::size_t s = 0; s < d; ++s) {
    for (std::size_t x = 0; x < cells; ++x) {
      double v = stay * p[x];
      for (std::size_t j = 0; j < u; ++j) v += each * p[x ^ (std::size_t{1} << j)];
      q[x] = v;
    }
    std::swap(p, q);
  }
  return p;
}

struct MixingResult {
  std::uint64_t trials = 0;
  double empirical_max = 0;
  double stderr_ = 0;
  double bound = 0;
  double exact_max = 0;
  std::size_t argmax_cell = 0;
};

inline constexpr std::size_t kMixingBlock = 4096;
inline constexpr std::size_t kMixingMaxCells = 20;

/// Trials run in fixed blocks of 4096; block j draws from derive_seed(seed, j).
inline MixingResult mixing_experiment(std::size_t n, std::size_t d, const std::vector<std::size_t>& cols,
                                      std::uint64_t trials, std::uint64_t seed, unsigned workers = 1) {
  if (cols.size() > kMixingMaxCells) throw GuardError("|U| too large to tabulate");
  if (n == 0 || trials < 1) throw PreconditionError("need n >= 1 and trials >= 1");
  std::vector<int> slot(n, -1);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j] >= n || slot[cols[j]] != -1) throw PreconditionError("bad coordinate set");
    slot[cols[j]] = static_cast<int>(j);
  }
  const std::size_t cells = std::size_t{1} << cols.size();
  const std::size_t blocks = (trials + kMixingBlock - 1) / kMixingBlock;
  std::vector<std::vector<std::uint64_t>> counts(blocks);
  parallel_chunks(blocks, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t bi = begin; bi < end; ++bi) {
      Rng rng(derive_seed(seed, bi));
      auto& c = counts[bi];
      c.assign(cells, 0);
      const std::uint64_t todo = std::min<std::uint64_t>(kMixingBlock, trials - bi * kMixingBlock);
      for (std::uint64_t t = 0; t < todo; ++t) {
        std::size_t cell = 0;
        for (std::size_t s = 0; s < d; ++s) {
          const int j = slot[rng.uniform(n)];
          if (j >= 0) cell ^= std::size_t{1} << j;
        }
        ++c[cell];
      }
    }
  });
  std::vector<std::uint64_t> total(cells, 0);
  for (const auto& c : counts)
    for (std::size_t x = 0; x < cells; ++x) total[x] += c[x];
  MixingResult r;
  r.trials = trials;
  r.argmax_cell = static_cast<std::size_t>(std::max_element(total.begin(), total.end()) - total.begin());
  r.empirical_max = static_cast<double>(total[r.argmax_cell]) / static_cast<double>(trials);
  r.stderr_ = std::sqrt(r.empirical_max * (1.0 - r.empirical_max) / static_cast<double>(trials));
  r.bound = mixing_bound(n, d, cols.size());
  const auto exact = exact_projected_distribution(n, d, cols.size());
  r.exact_max = *std::max_element(exact.begin(), exact.end());
  return r;
}

/// Some r with |r| <= w and r A = e_i, by increasing weight; nullopt if none.
inline std::optional<BitVector> row_combination_for_unit(const F2Matrix& a, std::size_t i, std::size_t w) {
  const std::size_t m = a.num_rows();
  const BitVector target = BitVector::unit(a.num_cols(), i);
  std::vector<std::size_t> pick;
  std::optional<BitVector> found;
  // depth-first over index-increasing subsets of size exactly s
  auto rec = [&](auto&& self, std::size_t start, std::size_t left, const BitVector& acc) -> bool {
    if (left == 0) {
      if (acc == target) {
        BitVector r(m);
        for (std::size_t p : pick) r.set(p);
        found = std::move(r);
        return true;
      }
      return false;
    }
    for (std::size_t j = start; j + left <= m; ++j) {
      pick.push_back(j);
      if (self(self, j + 1, left - 1, acc ^ a.row(j))) return true;
      pick.pop_back();
    }
    return false;
  };
  for (std::size_t s = 1; s <= w; ++s) {
    if (rec(rec, 0, s, BitVector(a.num_cols()))) return found;
  }
  return std::nullopt;
}

}  // namespace ppsz
