#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ppsz/error.hpp"

namespace ppsz {

/// Variables are dense 1-based indices.
using Var = std::uint32_t;

struct Literal {
  Var var = 1;
  bool negated = false;

  static Literal from_dimacs(int lit) {
    if (lit == 0) throw PreconditionError("literal 0 is not a variable");
    return Literal{static_cast<Var>(std::abs(lit)), lit < 0};
  }
  int to_dimacs() const { return negated ? -static_cast<int>(var) : static_cast<int>(var); }

  /// True when the literal is satisfied by setting `var` to `value`.
  bool satisfied_by(bool value) const { return value != negated; }

  Literal operator~() const { return Literal{var, !negated}; }

  auto operator<=>(const Literal&) const = default;
};

/// A set of literals over distinct variables, kept sorted by variable so that
/// equality and hashing are canonical. The empty clause is the falsified
/// clause.
class Clause {
 public:
  Clause() = default;

  explicit Clause(std::vector<Literal> lits) : lits_(std::move(lits)) { normalize(); }

  Clause(std::initializer_list<int> dimacs) {
    lits_.reserve(dimacs.size());
    for (int l : dimacs) lits_.push_back(Literal::from_dimacs(l));
    normalize();
  }

  std::span<const Literal> literals() const { return lits_; }
  std::size_t width() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }
  const Literal& operator[](std::size_t i) const { return lits_[i]; }

  Var max_var() const { return lits_.empty() ? 0 : lits_.back().var; }

  bool contains_var(Var v) const {
    auto it = std::lower_bound(lits_.begin(), lits_.end(), Literal{v, false});
    return it != lits_.end() && it->var == v;
  }

  bool operator==(const Clause&) const = default;
  auto operator<=>(const Clause&) const = default;

 private:
  void normalize() {
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
    for (std::size_t i = 1; i < lits_.size(); ++i) {
      if (lits_[i].var == lits_[i - 1].var) {
        throw PreconditionError("clause contains x" + std::to_string(lits_[i].var) +
                                " with both polarities");
      }
    }
  }

  std::vector<Literal> lits_;
};

struct ClauseHash {
  std::size_t operator()(const Clause& c) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const Literal& l : c) {
      h ^= static_cast<std::size_t>(l.to_dimacs()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

class CnfFormula {
 public:
  CnfFormula() = default;
  explicit CnfFormula(std::size_t num_vars) : num_vars_(num_vars) {}
  CnfFormula(std::size_t num_vars, std::vector<Clause> clauses) : num_vars_(num_vars) {
    clauses_.reserve(clauses.size());
    for (auto& c : clauses) add_clause(std::move(c));
  }

  std::size_t num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }

  void add_clause(Clause c) {
    if (c.max_var() > num_vars_) {
      throw PreconditionError("clause mentions x" + std::to_string(c.max_var()) + " but formula has " +
                              std::to_string(num_vars_) + " variables");
    }
    clauses_.push_back(std::move(c));
  }

  bool has_empty_clause() const {
    return std::any_of(clauses_.begin(), clauses_.end(), [](const Clause& c) { return c.empty(); });
  }

  /// Same clauses in first-occurrence order with duplicates dropped.
  CnfFormula deduplicated() const {
    CnfFormula out(num_vars_);
    std::unordered_set<Clause, ClauseHash> seen;
    for (const Clause& c : clauses_) {
      if (seen.insert(c).second) out.clauses_.push_back(c);
    }
    return out;
  }

  bool operator==(const CnfFormula&) const = default;

 private:
  std::size_t num_vars_ = 0;
  std::vector<Clause> clauses_;
};

/// Full assignment to x1..xn.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t n, bool value = false) : bits_(n, value ? 1 : 0) {}

  /// From a bit string such as "0110" (x1 first).
  static Assignment from_string(std::string_view s) {
    Assignment a(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1') throw PreconditionError("assignment string must be 0/1");
      a.bits_[i] = s[i] == '1';
    }
    return a;
  }

  std::size_t size() const { return bits_.size(); }
  bool operator[](Var v) const { return bits_[v - 1] != 0; }
  void set(Var v, bool value) { bits_[v - 1] = value ? 1 : 0; }

  bool is_zero() const {
    return std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b == 0; });
  }

  std::string to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = bits_[i] ? '1' : '0';
    return s;
  }

  bool operator==(const Assignment&) const = default;
  auto operator<=>(const Assignment&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Partial assignment. Each variable may be mapped at most once.
class Restriction {
 public:
  static constexpr std::int8_t kUnset = -1;

  Restriction() = default;
  explicit Restriction(std::size_t num_vars) : values_(num_vars, kUnset) {}

  /// The restriction S -> b.
  static Restriction from(const Assignment& b, std::span<const Var> vars) {
    Restriction r(b.size());
    for (Var v : vars) r.set(v, b[v]);
    return r;
  }

  std::size_t num_vars() const { return values_.size(); }

  bool assigned(Var v) const { return v <= values_.size() && values_[v - 1] != kUnset; }
  bool value(Var v) const { return values_[v - 1] == 1; }

  std::size_t count() const {
    return static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(), [](std::int8_t x) { return x != kUnset; }));
  }

  void set(Var v, bool value) {
    if (v == 0) throw PreconditionError("variable index 0");
    if (v > values_.size()) values_.resize(v, kUnset);
    if (values_[v - 1] != kUnset) {
      throw PreconditionError("x" + std::to_string(v) + " is already restricted");
    }
    values_[v - 1] = value ? 1 : 0;
  }

  /// Union with a restriction over a disjoint domain.
  Restriction merged(const Restriction& other) const {
    Restriction r = *this;
    for (Var v = 1; v <= other.values_.size(); ++v) {
      if (other.assigned(v)) r.set(v, other.value(v));
    }
    return r;
  }

  /// Byte string usable as a hash key.
  std::string_view key() const {
    return {reinterpret_cast<const char*>(values_.data()), values_.size()};
  }

  bool operator==(const Restriction&) const = default;

 private:
  std::vector<std::int8_t> values_;
};

/// F|rho: clauses with a satisfied literal are dropped and falsified literals
/// deleted. A clause whose literals are all falsified stays as the empty clause.
inline CnfFormula restrict(const CnfFormula& f, const Restriction& rho) {
  CnfFormula out(f.num_vars());
  std::vector<Literal> kept;
  for (const Clause& c : f.clauses()) {
    kept.clear();
    bool satisfied = false;
    for (const Literal& l : c) {
      if (!rho.assigned(l.var)) {
        kept.push_back(l);
      } else if (l.satisfied_by(rho.value(l.var))) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) out.add_clause(Clause(kept));
  }
  return out;
}

inline bool satisfies(const Clause& c, const Assignment& a) {
  return std::any_of(c.begin(), c.end(), [&](const Literal& l) { return l.satisfied_by(a[l.var]); });
}

inline bool satisfies(const CnfFormula& f, const Assignment& a) {
  return std::all_of(f.clauses().begin(), f.clauses().end(),
                     [&](const Clause& c) { return satisfies(c, a); });
}

inline std::size_t max_clause_width(const CnfFormula& f) {
  std::size_t w = 0;
  for (const Clause& c : f.clauses()) w = std::max(w, c.width());
  return w;
}

inline constexpr std::size_t kDefaultEnumerationGuard = 30;

/// Calls `visit` on every satisfying assignment in lexicographic order
/// (x1 most significant, 0 before 1) until it returns false. Backtracking
/// checks each clause as soon as its largest variable is assigned.
inline void for_each_satisfying(const CnfFormula& f, const std::function<bool(const Assignment&)>& visit,
                                std::size_t guard = kDefaultEnumerationGuard) {
  const std::size_t n = f.num_vars();
  if (n > guard) {
    throw GuardError("refusing to enumerate 2^" + std::to_string(n) + " assignments (guard " +
                     std::to_string(guard) + ")");
  }
  if (f.has_empty_clause()) return;
  std::vector<std::vector<const Clause*>> closing(n + 1);
  for (const Clause& c : f.clauses()) closing[c.max_var()].push_back(&c);

  Assignment a(n);
  // Iterative DFS: choice[v] is the value currently tried for v, 2 = exhausted.
  std::vector<std::uint8_t> choice(n + 2, 0);
  Var v = 1;
  if (n == 0) {
    visit(a);
    return;
  }
  choice[1] = 0;
  while (v >= 1) {
    if (choice[v] > 1) {
      choice[v] = 0;
      --v;
      if (v >= 1) ++choice[v];
      continue;
    }
    a.set(v, choice[v] == 1);
    bool ok = true;
    for (const Clause* c : closing[v]) {
      if (!satisfies(*c, a)) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      ++choice[v];
      continue;
    }
    if (v == n) {
      if (!visit(a)) return;
      ++choice[v];
      continue;
    }
    ++v;
    choice[v] = 0;
  }
}

/// All satisfying assignments, lexicographically ordered. Refuses above the
/// guard (default 30 variables).
inline std::vector<Assignment> satisfying_assignments(const CnfFormula& f,
                                                      std::size_t guard = kDefaultEnumerationGuard) {
  std::vector<Assignment> out;
  for_each_satisfying(f, [&](const Assignment& a) {
    out.push_back(a);
    return true;
  }, guard);
  return out;
}

/// Up to `limit` satisfying assignments.
inline std::vector<Assignment> first_satisfying(const CnfFormula& f, std::size_t limit,
                                                std::size_t guard = kDefaultEnumerationGuard) {
  std::vector<Assignment> out;
  if (limit == 0) return out;
  for_each_satisfying(f, [&](const Assignment& a) {
    out.push_back(a);
    return out.size() < limit;
  }, guard);
  return out;
}

/// True iff the formula's only satisfying assignment is all-zero.
inline bool uniquely_satisfied_by_zero(const CnfFormula& f, std::size_t guard = kDefaultEnumerationGuard) {
  auto sols = first_satisfying(f, 2, guard);
  return sols.size() == 1 && sols.front().is_zero();
}

/// Clauses of the constraint sum(vars) = 0 (mod 2): one clause forbidding each
/// odd-parity assignment, 2^(d-1) clauses for d variables.
inline std::vector<Clause> even_parity_clauses(std::span<const Var> vars) {
  std::vector<Clause> out;
  const std::size_t d = vars.size();
  if (d == 0) return out;
  if (d >= 31) throw GuardError("parity constraint too wide");
  out.reserve(std::size_t{1} << (d - 1));
  std::vector<Literal> lits(d);
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    if (std::popcount(mask) % 2 == 0) continue;
    for (std::size_t j = 0; j < d; ++j) lits[j] = Literal{vars[j], ((mask >> j) & 1u) != 0};
    out.emplace_back(lits);
  }
  return out;
}

/// Flips the polarity of every variable set to 1 in `b`, so that `b`'s image
/// is the all-zero assignment.
inline CnfFormula flip_to_zero(const CnfFormula& f, const Assignment& b) {
  CnfFormula out(f.num_vars());
  std::vector<Literal> lits;
  for (const Clause& c : f.clauses()) {
    lits.assign(c.begin(), c.end());
    for (Literal& l : lits) {
      if (b[l.var]) l.negated = !l.negated;
    }
    out.add_clause(Clause(lits));
  }
  return out;
}

}  // namespace ppsz
