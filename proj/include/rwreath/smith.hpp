#pragma once

// Integer Smith normal form with unimodular transforms tracked on both
// sides (and their inverses), used to present subgroups and quotients of
// finite abelian groups.

#include "rwreath/numeric.hpp"

#include <cstddef>
#include <vector>

namespace rwreath {

struct IntMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Int> a;  // row-major

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Int(0)) {}

  Int& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  friend bool operator==(const IntMatrix& x, const IntMatrix& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

inline IntMatrix mat_mul(const IntMatrix& x, const IntMatrix& y) {
  if (x.cols != y.rows) throw UsageError("matrix dimension mismatch");
  IntMatrix r(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      if (x.at(i, k) == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) r.at(i, j) += x.at(i, k) * y.at(k, j);
    }
  return r;
}

// Cofactor expansion; fine for the small matrices this project meets.
inline Int determinant(const IntMatrix& m) {
  if (m.rows != m.cols) throw UsageError("determinant of non-square matrix");
  std::size_t n = m.rows;
  if (n == 0) return 1;
  if (n == 1) return m.at(0, 0);
  Int det = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m.at(0, j) == 0) continue;
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t jj = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == j) continue;
        minor.at(i - 1, jj++) = m.at(i, k);
      }
    }
    Int term = m.at(0, j) * determinant(minor);
    det += (j % 2 == 0) ? term : -term;
  }
  return det;
}

struct SmithResult {
  IntMatrix u, d, v;          // u * m * v = d
  IntMatrix u_inv, v_inv;     // exact inverses of the unimodular factors
};

// U*M*V = D, U and V unimodular, D diagonal with d1 | d2 | ... >= 0.
inline SmithResult smith_normal_form(const IntMatrix& m) {
  const std::size_t r = m.rows, c = m.cols;
  SmithResult s;
  s.d = m;
  s.u = IntMatrix::identity(r);
  s.u_inv = IntMatrix::identity(r);
  s.v = IntMatrix::identity(c);
  s.v_inv = IntMatrix::identity(c);
  IntMatrix& d = s.d;

  auto row_swap = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < c; ++k) std::swap(d.at(i, k), d.at(j, k));
    for (std::size_t k = 0; k < r; ++k) std::swap(s.u.at(i, k), s.u.at(j, k));
    for (std::size_t k = 0; k < r; ++k) std::swap(s.u_inv.at(k, i), s.u_inv.at(k, j));
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < r; ++k) std::swap(d.at(k, i), d.at(k, j));
    for (std::size_t k = 0; k < c; ++k) std::swap(s.v.at(k, i), s.v.at(k, j));
    for (std::size_t k = 0; k < c; ++k) std::swap(s.v_inv.at(i, k), s.v_inv.at(j, k));
  };
  // row i += f * row j
  auto row_addmul = [&](std::size_t i, std::size_t j, const Int& f) {
    if (f == 0) return;
    for (std::size_t k = 0; k < c; ++k) d.at(i, k) += f * d.at(j, k);
    for (std::size_t k = 0; k < r; ++k) s.u.at(i, k) += f * s.u.at(j, k);
    for (std::size_t k = 0; k < r; ++k) s.u_inv.at(k, j) -= f * s.u_inv.at(k, i);
  };
  // col i += f * col j
  auto col_addmul = [&](std::size_t i, std::size_t j, const Int& f) {
    if (f == 0) return;
    for (std::size_t k = 0; k < r; ++k) d.at(k, i) += f * d.at(k, j);
    for (std::size_t k = 0; k < c; ++k) s.v.at(k, i) += f * s.v.at(k, j);
    for (std::size_t k = 0; k < c; ++k) s.v_inv.at(j, k) -= f * s.v_inv.at(i, k);
  };
  auto row_negate = [&](std::size_t i) {
    for (std::size_t k = 0; k < c; ++k) d.at(i, k) = -d.at(i, k);
    for (std::size_t k = 0; k < r; ++k) s.u.at(i, k) = -s.u.at(i, k);
    for (std::size_t k = 0; k < r; ++k) s.u_inv.at(k, i) = -s.u_inv.at(k, i);
  };

  const std::size_t steps = r < c ? r : c;
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // Smallest nonzero |entry| in the trailing submatrix.
      std::size_t pi = t, pj = t;
      Int best = 0;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j) {
          Int v = abs(d.at(i, j));
          if (v != 0 && (best == 0 || v < best)) {
            best = v;
            pi = i;
            pj = j;
          }
        }
      if (best == 0) break;  // submatrix exhausted
      row_swap(t, pi);
      col_swap(t, pj);

      bool dirty = false;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (d.at(i, t) != 0) {
          row_addmul(i, t, -(d.at(i, t) / d.at(t, t)));
          if (d.at(i, t) != 0) dirty = true;
        }
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (d.at(t, j) != 0) {
          col_addmul(j, t, -(d.at(t, j) / d.at(t, t)));
          if (d.at(t, j) != 0) dirty = true;
        }
      }
      if (dirty) continue;

      // Enforce the divisibility chain before moving on.
      bool fixed = true;
      for (std::size_t i = t + 1; i < r && fixed; ++i)
        for (std::size_t j = t + 1; j < c && fixed; ++j)
          if (d.at(i, j) % d.at(t, t) != 0) {
            row_addmul(t, i, 1);
            fixed = false;
          }
      if (fixed) break;
    }
    if (t < r && t < c && d.at(t, t) < 0) row_negate(t);
  }
  return s;
}

// Basis of the integer kernel {x : M x = 0}, columns-of-V form.
inline std::vector<std::vector<Int>> integer_kernel_basis(const IntMatrix& m) {
  SmithResult s = smith_normal_form(m);
  std::vector<std::vector<Int>> basis;
  const std::size_t steps = m.rows < m.cols ? m.rows : m.cols;
  for (std::size_t j = 0; j < m.cols; ++j) {
    bool free_col = j >= steps || s.d.at(j, j) == 0;
    if (!free_col) continue;
    std::vector<Int> vec(m.cols);
    for (std::size_t i = 0; i < m.cols; ++i) vec[i] = s.v.at(i, j);
    basis.push_back(std::move(vec));
  }
  return basis;
}

}  // namespace rwreath
