#pragma once

// Linear algebra over a prime field F_p, p machine-word sized. This is the
// working arithmetic of the character-table solver: class-multiplication
// matrices are split into a common eigenbasis here, then lifted back to
// cyclotomic integers.

#include "rwreath/numeric.hpp"

#include <cstdint>
#include <vector>

namespace rwreath {

inline std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

inline std::uint64_t mod_inv(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw InternalError("division by zero mod p");
  return mod_pow(a % p, p - 2, p);
}

struct PrimeFieldMatrix {
  std::uint64_t p = 2;
  std::size_t rows = 0, cols = 0;
  std::vector<std::uint64_t> a;  // row-major residues

  PrimeFieldMatrix() = default;
  PrimeFieldMatrix(std::uint64_t prime, std::size_t r, std::size_t c)
      : p(prime), rows(r), cols(c), a(r * c, 0) {}

  std::uint64_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  std::uint64_t at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  std::vector<std::uint64_t> apply(const std::vector<std::uint64_t>& v) const {
    if (v.size() != cols) throw UsageError("matrix/vector size mismatch");
    std::vector<std::uint64_t> r(rows, 0);
    for (std::size_t i = 0; i < rows; ++i) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < cols; ++j) acc = (acc + at(i, j) * v[j]) % p;
      r[i] = acc;
    }
    return r;
  }
};

// Reduced-row-echelon nullspace basis; deterministic. Each basis vector has
// a 1 in one free column and zeros in the other free columns.
inline std::vector<std::vector<std::uint64_t>> nullspace(PrimeFieldMatrix m) {
  const std::uint64_t p = m.p;
  const std::size_t rows = m.rows, cols = m.cols;
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && m.at(piv, col) == 0) ++piv;
    if (piv == rows) continue;
    for (std::size_t j = 0; j < cols; ++j) std::swap(m.at(rank, j), m.at(piv, j));
    std::uint64_t inv = mod_inv(m.at(rank, col), p);
    for (std::size_t j = col; j < cols; ++j) m.at(rank, j) = m.at(rank, j) * inv % p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || m.at(i, col) == 0) continue;
      std::uint64_t f = m.at(i, col);
      for (std::size_t j = col; j < cols; ++j)
        m.at(i, j) = (m.at(i, j) + (p - f) * m.at(rank, j)) % p;
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<char> is_pivot(cols, 0);
  for (std::size_t c : pivot_col) is_pivot[c] = 1;
  std::vector<std::vector<std::uint64_t>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<std::uint64_t> v(cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < rank; ++i) {
      std::uint64_t coeff = m.at(i, free);
      if (coeff) v[pivot_col[i]] = (p - coeff) % p;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

// Common eigenbasis of a pairwise-commuting, simultaneously diagonalizable
// family, by iterative refinement: every current subspace is split into
// eigenspaces of each matrix in turn until all pieces are one-dimensional.
inline std::vector<std::vector<std::uint64_t>> simultaneous_eigenbasis(
    const std::vector<PrimeFieldMatrix>& mats) {
  if (mats.empty()) throw UsageError("simultaneous_eigenbasis needs at least one matrix");
  const std::uint64_t p = mats[0].p;
  const std::size_t n = mats[0].rows;
  for (const auto& m : mats)
    if (m.p != p || m.rows != n || m.cols != n)
      throw UsageError("matrices must be square over one prime field");

  using Basis = std::vector<std::vector<std::uint64_t>>;  // list of length-n vectors
  Basis full(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) full[i][i] = 1;
  std::vector<Basis> subspaces{full};

  auto all_split = [&] {
    for (const auto& s : subspaces)
      if (s.size() > 1) return false;
    return true;
  };

  for (const auto& m : mats) {
    if (all_split()) break;
    std::vector<Basis> refined;
    for (auto& sub : subspaces) {
      const std::size_t d = sub.size();
      if (d == 1) {
        refined.push_back(std::move(sub));
        continue;
      }
      // images of the basis vectors
      std::vector<std::vector<std::uint64_t>> image(d);
      for (std::size_t k = 0; k < d; ++k) image[k] = m.apply(sub[k]);
      std::size_t found = 0;
      for (std::uint64_t lambda = 0; lambda < p && found < d; ++lambda) {
        // columns = coefficient vectors c with (M - lambda) * (B c) = 0
        PrimeFieldMatrix sys(p, n, d);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t k = 0; k < d; ++k)
            sys.at(i, k) = (image[k][i] + (p - lambda) * sub[k][i]) % p;
        auto coeffs = nullspace(sys);
        if (coeffs.empty()) continue;
        Basis eigen;
        for (const auto& c : coeffs) {
          std::vector<std::uint64_t> v(n, 0);
          for (std::size_t k = 0; k < d; ++k) {
            if (c[k] == 0) continue;
            for (std::size_t i = 0; i < n; ++i) v[i] = (v[i] + c[k] * sub[k][i]) % p;
          }
          eigen.push_back(std::move(v));
        }
        found += eigen.size();
        refined.push_back(std::move(eigen));
      }
      if (found != d)
        throw InternalError("simultaneous_eigenbasis: bad prime or non-commuting input");
    }
    subspaces = std::move(refined);
  }
  if (!all_split())
    throw InternalError("simultaneous_eigenbasis: bad prime or non-commuting input");

  std::vector<std::vector<std::uint64_t>> out;
  out.reserve(n);
  for (auto& s : subspaces) {
    auto v = std::move(s[0]);
    // normalize leading nonzero to 1 for determinism
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i]) {
        std::uint64_t inv = mod_inv(v[i], p);
        for (auto& x : v) x = x * inv % p;
        break;
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

inline bool is_eigenvector(const PrimeFieldMatrix& m, const std::vector<std::uint64_t>& v) {
  auto w = m.apply(v);
  // find lambda from first nonzero component
  std::uint64_t lambda = 0;
  bool have = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i]) {
      lambda = w[i] * mod_inv(v[i], m.p) % m.p;
      have = true;
      break;
    }
  }
  if (!have) return false;  // zero vector
  for (std::size_t i = 0; i < v.size(); ++i)
    if (w[i] != lambda * v[i] % m.p) return false;
  return true;
}

// Smallest prime p with p = 1 (mod e) and p > 2*ceil(sqrt(order)); keeps
// lifted character degrees (bounded by sqrt(order)) below p/2.
inline std::uint64_t dixon_prime(long long exponent, long long order) {
  long long s = 0;
  while (s * s < order) ++s;  // ceil(sqrt)
  long long lower = 2 * s;
  long long p = exponent + 1;
  if (p <= 2) p = 2;
  for (;; p += exponent) {
    if (p > lower && is_prime_ll(p) && (p - 1) % exponent == 0) return static_cast<std::uint64_t>(p);
  }
}

// Deterministic primitive e-th root of unity in F_p (requires e | p-1).
inline std::uint64_t primitive_root_of_unity(std::uint64_t p, long long e) {
  if ((p - 1) % static_cast<std::uint64_t>(e) != 0)
    throw UsageError("no e-th roots of unity in this prime field");
  auto order_is_e = [&](std::uint64_t z) {
    if (mod_pow(z, static_cast<std::uint64_t>(e), p) != 1) return false;
    // order is exactly e iff z^(e/q) != 1 for every prime q | e
    long long m = e;
    for (long long q = 2; q * q <= m; ++q) {
      if (m % q == 0) {
        if (mod_pow(z, static_cast<std::uint64_t>(e / q), p) == 1) return false;
        while (m % q == 0) m /= q;
      }
    }
    if (m > 1 && mod_pow(z, static_cast<std::uint64_t>(e / m), p) == 1) return false;
    return true;
  };
  for (std::uint64_t c = 1; c < p; ++c) {
    std::uint64_t z = mod_pow(c, (p - 1) / static_cast<std::uint64_t>(e), p);
    if (order_is_e(z)) return z;
  }
  throw InternalError("no primitive root of unity found");
}

}  // namespace rwreath
