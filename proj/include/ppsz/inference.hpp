#pragma once

// Sound proof heuristics used by PPSZ.
//
// weak(w) determines x when some set of at most w clauses of the (already
// restricted) formula implies a value for x. strong(w) determines x when the
// unit clause is derivable by resolution in which every clause has width at
// most max(w, k), k being the formula's clause width.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ppsz/cnf.hpp"
#include "ppsz/error.hpp"
#include "ppsz/rng.hpp"

namespace ppsz {

enum class Inference : std::uint8_t { Zero, One, Unknown };

inline const char* to_string(Inference r) {
  switch (r) {
    case Inference::Zero: return "0";
    case Inference::One: return "1";
    case Inference::Unknown: return "?";
  }
  return "?";
}

enum class HeuristicKind : std::uint8_t { Weak, Strong };

struct HeuristicSpec {
  HeuristicKind kind = HeuristicKind::Weak;
  std::size_t width = 1;

  static HeuristicSpec weak(std::size_t w) { return {HeuristicKind::Weak, w}; }
  static HeuristicSpec strong(std::size_t w) { return {HeuristicKind::Strong, w}; }

  void validate() const {
    if (width < 1) throw PreconditionError("heuristic width must be at least 1");
  }

  std::string to_string() const {
    return std::string(kind == HeuristicKind::Weak ? "weak" : "strong") + "(" + std::to_string(width) + ")";
  }

  bool operator==(const HeuristicSpec&) const = default;
};

inline constexpr std::size_t kDefaultSubsetVarGuard = 24;
inline constexpr std::size_t kDefaultClosureCap = 2'000'000;

struct InferenceLimits {
  /// weak(w) refuses when w * max_clause_width exceeds this.
  std::size_t subset_var_guard = kDefaultSubsetVarGuard;
  /// Maximum number of clauses in a resolution closure.
  std::size_t closure_cap = kDefaultClosureCap;
};

namespace detail {

/// Truth table over a handful of local variables; bit a is set when local
/// assignment a (bit j = value of local variable j) is allowed.
class TruthTable {
 public:
  explicit TruthTable(std::size_t vars, bool fill = true)
      : vars_(vars), words_(vars >= 6 ? (std::size_t{1} << (vars - 6)) : 1, fill ? ~std::uint64_t{0} : 0) {
    trim();
  }

  static TruthTable of_clause(const Clause& c, const std::vector<Var>& local) {
    TruthTable t(local.size(), false);
    const std::size_t cells = std::size_t{1} << local.size();
    std::vector<std::pair<std::size_t, bool>> lits;
    for (const Literal& l : c) {
      auto pos = static_cast<std::size_t>(std::lower_bound(local.begin(), local.end(), l.var) - local.begin());
      lits.emplace_back(pos, l.negated);
    }
    for (std::size_t a = 0; a < cells; ++a) {
      for (auto [j, neg] : lits) {
        if ((((a >> j) & 1u) != 0) != neg) {
          t.words_[a >> 6] |= std::uint64_t{1} << (a & 63);
          break;
        }
      }
    }
    return t;
  }

  /// Assignments in which local variable j has the given value.
  static TruthTable literal(std::size_t vars, std::size_t j, bool value) {
    TruthTable t(vars, false);
    const std::size_t cells = std::size_t{1} << vars;
    for (std::size_t a = 0; a < cells; ++a) {
      if ((((a >> j) & 1u) != 0) == value) t.words_[a >> 6] |= std::uint64_t{1} << (a & 63);
    }
    return t;
  }

  TruthTable& operator&=(const TruthTable& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }

  bool intersects(const TruthTable& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & o.words_[i]) return true;
    }
    return false;
  }

  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

 private:
  void trim() {
    if (vars_ < 6) words_[0] &= (std::uint64_t{1} << (std::size_t{1} << vars_)) - 1;
  }

  std::size_t vars_;
  std::vector<std::uint64_t> words_;
};

/// Is there a subset of at most `max_size` tables whose conjunction misses
/// every cell of `forbidden`?
inline bool some_subset_avoids(const std::vector<TruthTable>& tables, std::size_t max_size,
                               const TruthTable& forbidden) {
  TruthTable all = forbidden;
  for (const auto& t : tables) all &= t;
  if (!all.none()) return false;
  if (tables.size() <= max_size) return true;

  std::vector<TruthTable> stack;
  stack.reserve(max_size + 1);
  stack.push_back(forbidden);
  // Depth-first over increasing index combinations.
  auto dfs = [&](auto& self, std::size_t start) -> bool {
    for (std::size_t i = start; i < tables.size(); ++i) {
      TruthTable next = stack.back();
      next &= tables[i];
      if (next.none()) return true;
      if (stack.size() < max_size) {
        stack.push_back(std::move(next));
        if (self(self, i + 1)) return true;
        stack.pop_back();
      }
    }
    return false;
  };
  return dfs(dfs, 0);
}

/// Weak-heuristic queries against one fixed formula.
///
/// A minimally unsatisfiable CNF has more clauses than variables, so if a set
/// G of at most w clauses implies a value for x then some such G lives on a
/// connected variable set W containing x with |W| <= w, and uses only clauses
/// of width <= w. The search enumerates exactly those W and decides the
/// implication by truth tables over W. Unsatisfiable sets of <= w clauses that
/// do not touch x (they imply everything) are detected once per formula.
class WeakContext {
 public:
  WeakContext(const CnfFormula& f, std::size_t w) : w_(w), n_(f.num_vars()) {
    has_empty_ = f.has_empty_clause();
    occ_.resize(n_ + 1);
    neighbors_.resize(n_ + 1);
    std::unordered_set<Clause, ClauseHash> seen;
    for (const Clause& c : f.clauses()) {
      if (c.empty() || c.width() > w_) continue;
      if (!seen.insert(c).second) continue;
      const auto idx = static_cast<std::uint32_t>(short_.size());
      short_.push_back(c);
      for (const Literal& l : c) {
        occ_[l.var].push_back(idx);
        for (const Literal& m : c) {
          if (m.var != l.var) neighbors_[l.var].push_back(m.var);
        }
      }
    }
    for (auto& nb : neighbors_) {
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
  }

  Inference infer(Var x) {
    if (has_empty_) return Inference::Zero;
    if (x >= 1 && x <= n_) {
      if (w_ == 1) {
        for (auto idx : occ_[x]) {
          const Clause& c = short_[idx];
          if (c.width() == 1) return c[0].negated ? Inference::Zero : Inference::One;
        }
      } else {
        std::optional<Inference> found;
        visit_var_sets(x, w_, [&](const std::vector<Var>& vars) {
          auto tables = tables_within(vars);
          if (tables.empty()) return false;
          const auto j = static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), x) - vars.begin());
          if (some_subset_avoids(tables, w_, TruthTable::literal(vars.size(), j, true))) {
            found = Inference::Zero;
          } else if (some_subset_avoids(tables, w_, TruthTable::literal(vars.size(), j, false))) {
            found = Inference::One;
          }
          return found.has_value();
        });
        if (found) return *found;
      }
    }
    return refutable() ? Inference::Zero : Inference::Unknown;
  }

  /// Some set of at most w clauses is unsatisfiable on its own.
  bool refutable() {
    if (refutable_) return *refutable_;
    bool result = has_empty_;
    if (!result && w_ >= 2) {
      std::set<std::vector<Var>> seen;
      for (Var y = 1; y <= n_ && !result; ++y) {
        if (occ_[y].empty()) continue;
        visit_var_sets(y, w_ - 1, [&](const std::vector<Var>& vars) {
          auto tables = tables_within(vars);
          if (!tables.empty() && some_subset_avoids(tables, w_, TruthTable(vars.size(), true))) result = true;
          return result;
        }, &seen);
      }
    }
    refutable_ = result;
    return result;
  }

 private:
  /// Calls fn on every variable set containing `seed` with at most `limit`
  /// variables that is connected through short clauses. Stops when fn
  /// returns true.
  template <typename Fn>
  void visit_var_sets(Var seed, std::size_t limit, Fn&& fn, std::set<std::vector<Var>>* shared_seen = nullptr) {
    std::set<std::vector<Var>> local_seen;
    auto& seen = shared_seen ? *shared_seen : local_seen;
    std::vector<Var> start{seed};
    if (!seen.insert(start).second) return;
    bool stop = false;
    auto grow = [&](auto& self, const std::vector<Var>& vars) -> void {
      if (stop) return;
      if (fn(vars)) {
        stop = true;
        return;
      }
      if (vars.size() >= limit) return;
      for (Var v : vars) {
        for (Var y : neighbors_[v]) {
          if (std::binary_search(vars.begin(), vars.end(), y)) continue;
          std::vector<Var> next = vars;
          next.insert(std::upper_bound(next.begin(), next.end(), y), y);
          if (!seen.insert(next).second) continue;
          self(self, next);
          if (stop) return;
        }
      }
    };
    grow(grow, start);
  }

  std::vector<TruthTable> tables_within(const std::vector<Var>& vars) const {
    std::vector<std::uint32_t> ids;
    for (Var v : vars) {
      for (auto idx : occ_[v]) {
        const Clause& c = short_[idx];
        bool inside = std::all_of(c.begin(), c.end(), [&](const Literal& l) {
          return std::binary_search(vars.begin(), vars.end(), l.var);
        });
        if (inside) ids.push_back(idx);
      }
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<TruthTable> tables;
    tables.reserve(ids.size());
    for (auto idx : ids) tables.push_back(TruthTable::of_clause(short_[idx], vars));
    return tables;
  }

  std::size_t w_;
  std::size_t n_;
  bool has_empty_ = false;
  std::vector<Clause> short_;
  std::vector<std::vector<std::uint32_t>> occ_;
  std::vector<std::vector<Var>> neighbors_;
  std::optional<bool> refutable_;
};

inline void check_weak_guard(std::size_t w, std::size_t width, const InferenceLimits& limits) {
  if (w * width > limits.subset_var_guard) {
    throw GuardError("weak(" + std::to_string(w) + ") on width-" + std::to_string(width) +
                     " clauses exceeds the enumeration guard of " + std::to_string(limits.subset_var_guard) +
                     " variables");
  }
}

inline std::optional<Clause> resolve(const Clause& a, const Clause& b, Var pivot) {
  std::vector<Literal> out;
  out.reserve(a.width() + b.width());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->var < j->var)) {
      if (i->var != pivot) out.push_back(*i);
      ++i;
    } else if (i == a.end() || j->var < i->var) {
      if (j->var != pivot) out.push_back(*j);
      ++j;
    } else {
      if (i->var != pivot) {
        if (i->negated != j->negated) return std::nullopt;  // tautology
        out.push_back(*i);
      }
      ++i;
      ++j;
    }
  }
  return Clause(std::move(out));
}

inline std::size_t literal_code(const Literal& l) { return 2 * static_cast<std::size_t>(l.var) + (l.negated ? 1 : 0); }

/// Per-variable answers read off a closure.
inline std::vector<Inference> answers_from_closure(const std::vector<Clause>& closure, std::size_t n) {
  std::vector<Inference> out(n, Inference::Unknown);
  for (const Clause& c : closure) {
    if (c.empty()) return std::vector<Inference>(n, Inference::Zero);
  }
  for (const Clause& c : closure) {
    if (c.width() != 1) continue;
    auto& slot = out[c[0].var - 1];
    if (c[0].negated) {
      slot = Inference::Zero;
    } else if (slot == Inference::Unknown) {
      slot = Inference::One;
    }
  }
  return out;
}

}  // namespace detail

/// Least set of clauses containing every clause of F of width <= w and closed
/// under taking non-tautological resolvents of width <= w.
inline std::vector<Clause> resolution_closure(const CnfFormula& f, std::size_t w,
                                              std::size_t cap = kDefaultClosureCap) {
  std::vector<Clause> list;
  std::unordered_set<Clause, ClauseHash> seen;
  std::vector<std::vector<std::uint32_t>> occ(2 * (f.num_vars() + 1));
  auto add = [&](Clause c) {
    if (c.width() > w) return;
    if (!seen.insert(c).second) return;
    if (list.size() >= cap) {
      throw ClosureOverflow("resolution closure exceeded " + std::to_string(cap) + " clauses at width " +
                            std::to_string(w));
    }
    list.push_back(std::move(c));
  };
  for (const Clause& c : f.clauses()) add(c);
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Clause current = list[i];
    for (const Literal& l : current) {
      const auto& partners = occ[detail::literal_code(~l)];
      for (std::size_t p = 0; p < partners.size(); ++p) {
        if (auto r = detail::resolve(current, list[partners[p]], l.var)) add(std::move(*r));
      }
    }
    for (const Literal& l : current) occ[detail::literal_code(l)].push_back(static_cast<std::uint32_t>(i));
  }
  return list;
}

inline Inference weak_infer(const CnfFormula& f, Var x, std::size_t w, const InferenceLimits& limits = {}) {
  if (w < 1) throw PreconditionError("weak width must be at least 1");
  detail::check_weak_guard(w, max_clause_width(f), limits);
  return detail::WeakContext(f, w).infer(x);
}

/// The closure width is floored at the formula's own clause width; the empty
/// clause in the closure determines every variable.
inline Inference strong_infer(const CnfFormula& f, Var x, std::size_t w, const InferenceLimits& limits = {}) {
  if (w < 1) throw PreconditionError("strong width must be at least 1");
  const std::size_t width = std::max(w, max_clause_width(f));
  auto closure = resolution_closure(f, width, limits.closure_cap);
  if (x < 1 || x > f.num_vars()) return Inference::Unknown;
  return detail::answers_from_closure(closure, f.num_vars())[x - 1];
}

inline Inference infer(const CnfFormula& f, Var x, HeuristicSpec spec, const InferenceLimits& limits = {}) {
  spec.validate();
  return spec.kind == HeuristicKind::Weak ? weak_infer(f, x, spec.width, limits)
                                          : strong_infer(f, x, spec.width, limits);
}

/// Answers heuristic queries on restrictions of one root formula, caching the
/// answers per restriction.
///
/// For strong(w) the width floor is resolved once against the root formula, so
/// every restriction is queried at the same width max(w, k). Restricting a
/// derivation never increases its width, which keeps answers monotone under
/// further restriction.
///
/// Not thread-safe; give each worker its own Prover.
class Prover {
 public:
  Prover(CnfFormula f, HeuristicSpec spec, InferenceLimits limits = {})
      : formula_(std::move(f)), spec_(spec), limits_(limits) {
    spec_.validate();
    const std::size_t k = max_clause_width(formula_);
    if (spec_.kind == HeuristicKind::Weak) {
      detail::check_weak_guard(spec_.width, k, limits_);
      width_ = spec_.width;
    } else {
      width_ = std::max(spec_.width, k);
    }
  }

  const CnfFormula& formula() const { return formula_; }
  HeuristicSpec spec() const { return spec_; }
  std::size_t num_vars() const { return formula_.num_vars(); }
  /// Width actually used for queries (strong: max(w, k)).
  std::size_t effective_width() const { return width_; }
  std::size_t cache_size() const { return cache_.size(); }

  Inference infer(const Restriction& rho, Var x) {
    if (x < 1 || x > formula_.num_vars()) throw PreconditionError("variable out of range");
    load(rho);
    std::int8_t& slot = (*current_)[x - 1];
    if (slot >= 0) return static_cast<Inference>(slot);
    if (spec_.kind == HeuristicKind::Weak) {
      if (!weak_) weak_.emplace(restrict(formula_, rho), width_);
      slot = static_cast<std::int8_t>(weak_->infer(x));
    } else {
      auto closure = resolution_closure(restrict(formula_, rho), width_, limits_.closure_cap);
      auto answers = detail::answers_from_closure(closure, formula_.num_vars());
      for (std::size_t i = 0; i < answers.size(); ++i) (*current_)[i] = static_cast<std::int8_t>(answers[i]);
    }
    return static_cast<Inference>(slot);
  }

 private:
  static constexpr std::size_t kMaxCachedStates = 1u << 17;

  void load(const Restriction& rho) {
    std::string_view key = rho.key();
    if (current_ && key == current_key_) return;
    if (cache_.size() >= kMaxCachedStates) cache_.clear();
    current_key_.assign(key);
    auto [it, inserted] = cache_.try_emplace(current_key_, formula_.num_vars(), std::int8_t{-1});
    current_ = &it->second;
    weak_.reset();
  }

  CnfFormula formula_;
  HeuristicSpec spec_;
  InferenceLimits limits_;
  std::size_t width_ = 1;
  std::unordered_map<std::string, std::vector<std::int8_t>> cache_;
  std::string current_key_;
  std::vector<std::int8_t>* current_ = nullptr;
  std::optional<detail::WeakContext> weak_;
};

/// Least fixpoint: starting from `start`, repeatedly fix to b any unfixed
/// variable the heuristic determines in F|(fixed -> b). Returns the variables
/// in the order they were added. With `picker`, each step picks uniformly
/// among all currently determined variables instead of scanning in index
/// order; the final set is the same either way.
inline std::vector<Var> forced_closure(Prover& prover, const Assignment& b, const Restriction& start = {},
                                       Rng* picker = nullptr) {
  const std::size_t n = prover.num_vars();
  Restriction rho = start.num_vars() == 0 ? Restriction(n) : start;
  std::vector<Var> added;
  if (picker) {
    for (;;) {
      std::vector<Var> ready;
      for (Var x = 1; x <= n; ++x) {
        if (!rho.assigned(x) && prover.infer(rho, x) != Inference::Unknown) ready.push_back(x);
      }
      if (ready.empty()) break;
      Var x = ready[picker->uniform(ready.size())];
      rho.set(x, b[x]);
      added.push_back(x);
    }
    return added;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (Var x = 1; x <= n; ++x) {
      if (rho.assigned(x)) continue;
      if (prover.infer(rho, x) != Inference::Unknown) {
        rho.set(x, b[x]);
        added.push_back(x);
        changed = true;
      }
    }
  }
  return added;
}

inline std::vector<Var> forced_closure(const CnfFormula& f, const Assignment& b, HeuristicSpec spec,
                                       const InferenceLimits& limits = {}) {
  if (b.size() != f.num_vars() || !satisfies(f, b)) {
    throw PreconditionError("forced_closure needs a satisfying assignment");
  }
  Prover prover(f, spec, limits);
  return forced_closure(prover, b);
}

struct CollapseResult {
  bool collapses = false;
  /// Variables inferred in order, then the remaining free variables; empty
  /// when the formula does not collapse.
  std::vector<Var> ordering;
  /// The forced closure of the all-zero assignment.
  std::vector<Var> inferred;
};

/// Does F|fixed collapse under the heuristic? The free variables are those
/// `fixed` leaves unassigned; collapse asks that all but (at most) one of them
/// be inferred in some order after fixing the previous ones to 0 (or to
/// `target`, when given). The greedy closure decides this because inference is
/// monotone under restriction.
inline CollapseResult collapse_check(Prover& prover, const Restriction& fixed = {},
                                     const Assignment* target = nullptr) {
  const std::size_t n = prover.num_vars();
  Restriction start = fixed.num_vars() == 0 ? Restriction(n) : fixed;
  const Assignment b = target ? *target : Assignment(n);
  if (b.size() != n || !satisfies(restrict(prover.formula(), start), b)) {
    throw PreconditionError("collapse_check needs the target assignment to satisfy the formula");
  }
  std::size_t free_vars = 0;
  for (Var x = 1; x <= n; ++x) free_vars += start.assigned(x) ? 0 : 1;

  CollapseResult result;
  result.inferred = forced_closure(prover, b, start);
  result.collapses = result.inferred.size() + 1 >= free_vars;
  if (result.collapses) {
    result.ordering = result.inferred;
    std::vector<bool> used(n + 1, false);
    for (Var x : result.inferred) used[x] = true;
    for (Var x = 1; x <= n; ++x) {
      if (!start.assigned(x) && !used[x]) result.ordering.push_back(x);
    }
  }
  return result;
}

inline CollapseResult collapse_check(const CnfFormula& f, HeuristicSpec spec, const Restriction& fixed = {},
                                     const InferenceLimits& limits = {}) {
  Prover prover(f, spec, limits);
  return collapse_check(prover, fixed);
}

}  // namespace ppsz
