#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ppsz/error.hpp"

namespace ppsz {

/// Fixed-length bit vector over GF(2), packed into 64-bit words.
class BitVector {
 public:
  using Word = std::uint64_t;

  BitVector() = default;
  explicit BitVector(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  static BitVector unit(std::size_t n, std::size_t i) {
    BitVector v(n);
    v.set(i);
    return v;
  }

  static BitVector from_support(std::size_t n, const std::vector<std::size_t>& support) {
    BitVector v(n);
    for (std::size_t i : support) v.flip(i);
    return v;
  }

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value = true) {
    check(i);
    if (value)
      w_[i >> 6] |= Word{1} << (i & 63);
    else
      w_[i >> 6] &= ~(Word{1} << (i & 63));
  }
  void flip(std::size_t i) {
    check(i);
    w_[i >> 6] ^= Word{1} << (i & 63);
  }

  BitVector& operator^=(const BitVector& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }
  BitVector& operator&=(const BitVector& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  BitVector& operator|=(const BitVector& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
  friend bool operator==(const BitVector&, const BitVector&) = default;

  std::size_t weight() const {
    std::size_t c = 0;
    for (Word x : w_) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }
  /// |a & b| without materializing the intersection.
  std::size_t and_weight(const BitVector& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) c += static_cast<std::size_t>(std::popcount(w_[i] & o.w_[i]));
    return c;
  }
  /// |a & ~b|
  std::size_t andnot_weight(const BitVector& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) c += static_cast<std::size_t>(std::popcount(w_[i] & ~o.w_[i]));
    return c;
  }
  bool none() const {
    for (Word x : w_)
      if (x) return false;
    return true;
  }
  /// Lowest set index, or size() when empty.
  std::size_t first() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(w_[i]));
    return n_;
  }
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < w_.size(); ++i) {
      Word x = w_[i];
      while (x) {
        out.push_back(i * 64 + static_cast<std::size_t>(std::countr_zero(x)));
        x &= x - 1;
      }
    }
    return out;
  }
  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }
  const std::vector<Word>& words() const { return w_; }

 private:
  void check(std::size_t i) const {
    if (i >= n_) throw PreconditionError("bit index out of range");
  }

  std::size_t n_ = 0;
  std::vector<Word> w_;
};

struct BitVectorHash {
  std::size_t operator()(const BitVector& v) const noexcept {
    std::size_t h = v.size();
    for (auto w : v.words()) h = h * 0x9e3779b97f4a7c15ULL ^ std::hash<std::uint64_t>{}(w);
    return h;
  }
};

/// Rows of n-bit vectors.
class F2Matrix {
 public:
  F2Matrix() = default;
  explicit F2Matrix(std::size_t cols) : cols_(cols) {}
  F2Matrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

  static F2Matrix identity(std::size_t n) {
    F2Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.add_row(BitVector::unit(n, i));
    return m;
  }

  static F2Matrix from_supports(std::size_t cols, const std::vector<std::vector<std::size_t>>& supports) {
    F2Matrix m(cols);
    for (const auto& s : supports) m.add_row(BitVector::from_support(cols, s));
    return m;
  }

  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_cols() const { return cols_; }
  const BitVector& row(std::size_t i) const { return rows_.at(i); }
  BitVector& row(std::size_t i) { return rows_.at(i); }
  const std::vector<BitVector>& rows() const { return rows_; }

  void add_row(BitVector r) {
    if (r.size() != cols_) throw PreconditionError("row length does not match column count");
    rows_.push_back(std::move(r));
  }

  /// A x over GF(2), as a vector with one bit per row.
  BitVector multiply(const BitVector& x) const {
    BitVector out(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (rows_[i].and_weight(x) & 1u) out.set(i);
    return out;
  }

  /// r A: XOR of the rows selected by r.
  BitVector combine(const BitVector& r) const {
    BitVector out(cols_);
    for (std::size_t i : r.support()) out ^= rows_.at(i);
    return out;
  }

  /// One line per row, space separated 0-based column indices.
  std::string to_support_text() const {
    std::ostringstream os;
    for (const auto& r : rows_) {
      bool first = true;
      for (std::size_t c : r.support()) {
        if (!first) os << ' ';
        os << c;
        first = false;
      }
      os << '\n';
    }
    return os.str();
  }

  friend bool operator==(const F2Matrix&, const F2Matrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

/// Incremental row-echelon basis: each stored vector has a distinct pivot
/// (its lowest set bit) and is reduced against earlier pivots.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t n) : n_(n), by_pivot_(n, npos) {}

  BitVector reduce(BitVector v) const {
    // a pivot-p vector only has bits >= p, so one left-to-right pass suffices
    for (std::size_t p = 0; p < n_; ++p) {
      if (v.get(p) && by_pivot_[p] != npos) v ^= basis_[by_pivot_[p]];
    }
    return v;
  }

  bool contains(const BitVector& v) const { return reduce(v).none(); }

  /// Adds v if independent; returns whether it was.
  bool insert(const BitVector& v) {
    BitVector r = reduce(v);
    if (r.none()) return false;
    by_pivot_[r.first()] = basis_.size();
    basis_.push_back(std::move(r));
    return true;
  }

  std::size_t rank() const { return basis_.size(); }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t n_;
  std::vector<std::size_t> by_pivot_;
  std::vector<BitVector> basis_;
};

inline std::size_t f2_rank(const F2Matrix& a) {
  EchelonBasis basis(a.num_cols());
  for (const auto& r : a.rows()) basis.insert(r);
  return basis.rank();
}

/// log2 |{x : A x = 0}| = n - rank.
inline std::size_t kernel_size_log2(const F2Matrix& a) { return a.num_cols() - f2_rank(a); }

/// Basis of the kernel, one vector per free column of the reduced row
/// echelon form.
inline std::vector<BitVector> kernel_basis(const F2Matrix& a) {
  const std::size_t n = a.num_cols();
  std::vector<BitVector> rows = a.rows();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && !rows[sel].get(c)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i].get(c)) rows[i] ^= rows[r];
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  std::vector<BitVector> out;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    BitVector x(n);
    x.set(f);
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
      if (rows[i].get(f)) x.set(pivot_col[i]);
    out.push_back(std::move(x));
  }
  return out;
}

struct Augmented {
  F2Matrix matrix;
  /// Columns i whose unit row e_i was appended, in order.
  std::vector<std::size_t> appended;
};

/// Appends unit rows e_i (scanning i upward, taking any e_i outside the
/// current row space) until the row rank is n.
inline Augmented steinitz_augment(const F2Matrix& a) {
  const std::size_t n = a.num_cols();
  Augmented out{a, {}};
  EchelonBasis basis(n);
  for (const auto& r : a.rows()) basis.insert(r);
  for (std::size_t i = 0; i < n && basis.rank() < n; ++i) {
    BitVector e = BitVector::unit(n, i);
    if (basis.insert(e)) {
      out.matrix.add_row(std::move(e));
      out.appended.push_back(i);
    }
  }
  return out;
}

}  // namespace ppsz
