#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cobcalc/arith.hpp"

namespace cobcalc {

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows) {
    std::size_t cols = rows.empty() ? 0 : rows.front().size();
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("IntMatrix: ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
  }
  /// col[dst] += k * col[src]
  void add_col(std::size_t dst, std::size_t src, const Integer& k) {
    if (k == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("IntMatrix: dimension mismatch");
    IntMatrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Integer& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  std::vector<Integer> operator*(const std::vector<Integer>& x) const {
    if (x.size() != cols_) throw std::invalid_argument("IntMatrix: vector length mismatch");
    std::vector<Integer> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Integer> data_;
};

/// left * A * right == diagonal, with left and right unimodular and
/// diagonal[k] | diagonal[k+1] (nonnegative entries, zeros last).
struct SmithDecomposition {
  IntMatrix diagonal;
  IntMatrix left;
  IntMatrix right;
  std::size_t rank = 0;
};

namespace detail {

inline std::optional<std::pair<std::size_t, std::size_t>> min_abs_entry(const IntMatrix& a,
                                                                       std::size_t from) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  Integer best_abs;
  for (std::size_t i = from; i < a.rows(); ++i)
    for (std::size_t j = from; j < a.cols(); ++j) {
      const Integer& x = a(i, j);
      if (x == 0) continue;
      Integer ax = boost::multiprecision::abs(x);
      if (!best || ax < best_abs) {
        best = {i, j};
        best_abs = ax;
        if (best_abs == 1) return best;
      }
    }
  return best;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

/// Smith normal form, pivoting on the entry of least absolute value.
inline SmithDecomposition smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  SmithDecomposition out{a, IntMatrix::identity(m), IntMatrix::identity(n), 0};
  IntMatrix& d = out.diagonal;
  IntMatrix& left = out.left;
  IntMatrix& right = out.right;

  auto row_op = [&](std::size_t dst, std::size_t src, const Integer& k) {
    d.add_row(dst, src, k);
    left.add_row(dst, src, k);
  };
  auto col_op = [&](std::size_t dst, std::size_t src, const Integer& k) {
    d.add_col(dst, src, k);
    right.add_col(dst, src, k);
  };

  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    auto pivot = detail::min_abs_entry(d, t);
    if (!pivot) break;
    d.swap_rows(t, pivot->first);
    left.swap_rows(t, pivot->first);
    d.swap_cols(t, pivot->second);
    right.swap_cols(t, pivot->second);

    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        row_op(i, t, -detail::floor_div(d(i, t), d(t, t)));
        if (d(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        col_op(j, t, -detail::floor_div(d(t, j), d(t, t)));
        if (d(t, j) != 0) dirty = true;
      }
      if (!dirty) {
        // the pivot must divide the whole remaining block
        std::optional<std::size_t> bad_row;
        for (std::size_t i = t + 1; i < m && !bad_row; ++i)
          for (std::size_t j = t + 1; j < n; ++j)
            if (d(i, j) % d(t, t) != 0) {
              bad_row = i;
              break;
            }
        if (!bad_row) break;
        row_op(t, *bad_row, 1);
        continue;
      }
      // a nonzero remainder is now smaller than the pivot; move it into place
      auto next = detail::min_abs_entry(d, t);
      d.swap_rows(t, next->first);
      left.swap_rows(t, next->first);
      d.swap_cols(t, next->second);
      right.swap_cols(t, next->second);
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      left.negate_row(t);
    }
  }
  out.rank = t;
  return out;
}

/// Unimodular row reduction to echelon form; returns the nonzero rows, which
/// form a basis of the row lattice of `a`.
inline IntMatrix row_lattice_basis(const IntMatrix& a) {
  IntMatrix h = a;
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    for (;;) {
      std::optional<std::size_t> piv;
      for (std::size_t i = r; i < h.rows(); ++i)
        if (h(i, c) != 0 &&
            (!piv || boost::multiprecision::abs(h(i, c)) < boost::multiprecision::abs(h(*piv, c))))
          piv = i;
      if (!piv) break;
      h.swap_rows(r, *piv);
      bool done = true;
      for (std::size_t i = r + 1; i < h.rows(); ++i) {
        if (h(i, c) == 0) continue;
        h.add_row(i, r, -detail::floor_div(h(i, c), h(r, c)));
        if (h(i, c) != 0) done = false;
      }
      if (done) {
        ++r;
        break;
      }
    }
  }
  IntMatrix basis(r, h.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) basis(i, j) = h(i, j);
  return basis;
}

/// An integer solution z of A z = b, or nullopt if none exists.
inline std::optional<std::vector<Integer>> solve_integer_system(const IntMatrix& a,
                                                                const std::vector<Integer>& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_integer_system: size mismatch");
  SmithDecomposition snf = smith_normal_form(a);
  // D (R^{-1} z) = L b
  std::vector<Integer> lb = snf.left * b;
  std::vector<Integer> y(a.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    if (k < snf.rank) {
      const Integer& dk = snf.diagonal(k, k);
      if (lb[k] % dk != 0) return std::nullopt;
      y[k] = lb[k] / dk;
    } else if (lb[k] != 0) {
      return std::nullopt;
    }
  }
  return snf.right * y;
}

}  // namespace cobcalc
