#pragma once

// Exact complex character tables for finite groups presented by enumeration
// and class data. The solver is Dixon-Schneider: class-multiplication
// matrices are diagonalized simultaneously over a prime field F_p with
// p = 1 (mod exponent), degrees are recovered from orthogonality residues,
// and values are lifted to cyclotomic integers by Fourier inversion over
// the power map. Induction, restriction, inner products and decomposition
// of class functions live here too.

#include "rwreath/cyclotomic.hpp"
#include "rwreath/parallel.hpp"
#include "rwreath/primefield.hpp"
#include "rwreath/wreath.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace rwreath {

// One cyclotomic value per conjugacy class of the owner group.
struct ClassFunction {
  long long conductor = 1;
  std::vector<Cyclotomic> values;
};

class CharacterTable {
 public:
  CharacterTable() = default;
  CharacterTable(long long group_order, long long conductor, std::vector<long long> class_sizes,
                 std::vector<std::vector<Cyclotomic>> rows)
      : order_(group_order),
        conductor_(conductor),
        class_sizes_(std::move(class_sizes)),
        rows_(std::move(rows)) {
    degrees_.reserve(rows_.size());
    for (const auto& row : rows_) {
      long long d = -1;
      if (!row.empty()) {
        if (auto q = row[0].as_rational(); q && is_integer(*q)) d = to_ll(rat_num(*q));
      }
      degrees_.push_back(d);
    }
  }

  long long group_order() const { return order_; }
  long long conductor() const { return conductor_; }
  int class_count() const { return static_cast<int>(class_sizes_.size()); }
  long long class_size(int c) const { return class_sizes_.at(c); }
  const std::vector<long long>& class_sizes() const { return class_sizes_; }
  int row_count() const { return static_cast<int>(rows_.size()); }
  const std::vector<Cyclotomic>& row(int i) const { return rows_.at(i); }
  const Cyclotomic& value(int i, int c) const { return rows_.at(i).at(c); }
  long long degree(int i) const { return degrees_.at(i); }

  ClassFunction row_function(int i) const { return ClassFunction{conductor_, rows_.at(i)}; }

  // Canonical row order: ascending degree, then lexicographic on the value
  // sequence under the fixed class order.
  void sort_rows() {
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (degrees_[x] != degrees_[y]) return degrees_[x] < degrees_[y];
      for (std::size_t c = 0; c < class_sizes_.size(); ++c) {
        if (!(rows_[x][c] == rows_[y][c])) return Cyclotomic::lex_less(rows_[x][c], rows_[y][c]);
      }
      return false;
    });
    std::vector<std::vector<Cyclotomic>> rows;
    std::vector<long long> degs;
    for (std::size_t i : order) {
      rows.push_back(std::move(rows_[i]));
      degs.push_back(degrees_[i]);
    }
    rows_ = std::move(rows);
    degrees_ = std::move(degs);
  }

  int find_row(const std::vector<Cyclotomic>& values) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      bool same = true;
      for (std::size_t c = 0; c < class_sizes_.size() && same; ++c)
        same = rows_[i][c] == values[c];
      if (same) return static_cast<int>(i);
    }
    return -1;
  }

  friend bool operator==(const CharacterTable& a, const CharacterTable& b) {
    return a.order_ == b.order_ && a.conductor_ == b.conductor_ &&
           a.class_sizes_ == b.class_sizes_ && a.rows_ == b.rows_;
  }

 private:
  long long order_ = 1;
  long long conductor_ = 1;
  std::vector<long long> class_sizes_;
  std::vector<std::vector<Cyclotomic>> rows_;
  std::vector<long long> degrees_;
};

template <class Grp>
ClassFunction trivial_character(const Grp& grp) {
  return ClassFunction{1, std::vector<Cyclotomic>(grp.class_count(), Cyclotomic::one(1))};
}

template <class Grp>
ClassFunction regular_character(const Grp& grp) {
  ClassFunction f{1, std::vector<Cyclotomic>(grp.class_count(), Cyclotomic::zero(1))};
  f.values[0] = Cyclotomic::from_rational(1, Rational(grp.order()));
  return f;
}

// (1/|G|) sum_C |C| f(C) conj(h(C)); exact, and rational for character pairs.
template <class Grp>
Rational inner_product(const Grp& grp, const ClassFunction& f, const ClassFunction& h) {
  if (static_cast<int>(f.values.size()) != grp.class_count() ||
      static_cast<int>(h.values.size()) != grp.class_count())
    throw UsageError("class function does not match the group's class count");
  long long m = lcm_ll(f.conductor, h.conductor);
  Cyclotomic acc(m);
  for (int c = 0; c < grp.class_count(); ++c) {
    Cyclotomic term = f.values[c].embedded(m) * h.values[c].embedded(m).conj();
    acc += term.scaled(Rational(grp.class_size(c)));
  }
  auto q = acc.as_rational();
  if (!q) throw UsageError("inner product of these class functions is not rational");
  return *q / Rational(grp.order());
}

// (Ind chi)(g) = (1/|K|) sum_{x in Big, x^-1 g x in K} chi(x^-1 g x).
template <class Sub, class Big>
ClassFunction induce(const Sub& sub, const Big& big, const ClassFunction& chi) {
  if (static_cast<int>(chi.values.size()) != sub.class_count())
    throw UsageError("class function does not match the subgroup's class count");
  const FiniteAbelianGroup& g = big.group();
  long long m = lcm_ll(chi.conductor, big.exponent());
  std::vector<Cyclotomic> embedded;
  embedded.reserve(chi.values.size());
  for (const auto& v : chi.values) embedded.push_back(v.embedded(m));

  ClassFunction out{m, std::vector<Cyclotomic>(big.class_count(), Cyclotomic(m))};
  for (int c = 0; c < big.class_count(); ++c) {
    const WreathElement& rep = big.class_rep(c);
    std::vector<long long> hits(sub.class_count(), 0);
    for (const auto& x : big.elements()) {
      WreathElement conj = wreath_mul(g, wreath_mul(g, wreath_inv(g, x), rep), x);
      int cls = sub.class_of_element(conj);
      if (cls >= 0) ++hits[cls];
    }
    Cyclotomic acc(m);
    for (int cls = 0; cls < sub.class_count(); ++cls)
      if (hits[cls]) acc += embedded[cls].scaled(Rational(hits[cls]));
    out.values[c] = acc.scaled(Rational(1, sub.order()));
  }
  return out;
}

// Values copied along the embedding by class lookup.
template <class Sub, class Big>
ClassFunction restrict_to(const Sub& sub, const Big& big, const ClassFunction& chi) {
  if (static_cast<int>(chi.values.size()) != big.class_count())
    throw UsageError("class function does not match the overgroup's class count");
  ClassFunction out{chi.conductor, {}};
  out.values.reserve(sub.class_count());
  for (int c = 0; c < sub.class_count(); ++c) {
    int big_class = big.class_of_element(sub.class_rep(c));
    if (big_class < 0) throw UsageError("subgroup representative is not in the overgroup");
    out.values.push_back(chi.values[big_class]);
  }
  return out;
}

// Grothendieck coordinates <f, chi_i>; exact integers for virtual characters.
template <class Grp>
std::vector<long long> decompose(const Grp& grp, const CharacterTable& table,
                                 const ClassFunction& f) {
  std::vector<long long> coeffs(table.row_count());
  for (int i = 0; i < table.row_count(); ++i) {
    Rational q = inner_product(grp, f, table.row_function(i));
    if (!is_integer(q))
      throw UsageError("non-integer multiplicity: input was not a virtual character");
    coeffs[i] = to_ll(rat_num(q));
  }
  return coeffs;
}

namespace detail {

inline void verify_orthonormal_rows(const CharacterTable& t) {
  std::vector<std::vector<Cyclotomic>> conj_rows(t.row_count());
  for (int i = 0; i < t.row_count(); ++i) {
    conj_rows[i].reserve(t.class_count());
    for (int c = 0; c < t.class_count(); ++c) conj_rows[i].push_back(t.value(i, c).conj());
  }
  for (int i = 0; i < t.row_count(); ++i) {
    for (int j = i; j < t.row_count(); ++j) {
      Cyclotomic acc(t.conductor());
      for (int c = 0; c < t.class_count(); ++c) {
        acc += (t.value(i, c) * conj_rows[j][c]).scaled(Rational(t.class_size(c)));
      }
      Rational expected = (i == j) ? Rational(t.group_order()) : Rational(0);
      auto q = acc.as_rational();
      if (!q || *q != expected)
        throw InternalError("character table failed exact row orthogonality");
    }
  }
}

}  // namespace detail

// Dixon-Schneider. Requires class data and power maps on the group.
template <class Grp>
CharacterTable compute_character_table(const Grp& grp, int jobs = 1) {
  const int r = grp.class_count();
  const long long order = grp.order();
  const long long e = grp.exponent();
  const FiniteAbelianGroup& g = grp.group();

  // class multiplication coefficients a[i][j][k] = #{(x,y) in C_i x C_j, xy = g_k}
  std::vector<long long> a(static_cast<std::size_t>(r) * r * r, 0);
  auto slot = [r](int i, int j, int k) {
    return (static_cast<std::size_t>(i) * r + j) * r + k;
  };
  {
    const auto& elems = grp.elements();
    std::vector<WreathElement> inverses(elems.size());
    for (std::size_t x = 0; x < elems.size(); ++x) inverses[x] = wreath_inv(g, elems[x]);
    parallel_for(jobs, static_cast<std::size_t>(r), [&](std::size_t k) {
      const WreathElement& rep = grp.class_rep(static_cast<int>(k));
      for (std::size_t x = 0; x < elems.size(); ++x) {
        int i = grp.class_of_index(static_cast<int>(x));
        WreathElement y = wreath_mul(g, inverses[x], rep);
        int j = grp.class_of_element(y);
        if (j < 0) throw InternalError("class constants: product left the group");
        ++a[slot(i, j, static_cast<int>(k))];
      }
    });
  }

  const std::uint64_t p = dixon_prime(e, order);
  std::vector<PrimeFieldMatrix> mats;
  mats.reserve(r);
  for (int i = 0; i < r; ++i) {
    PrimeFieldMatrix m(p, r, r);
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k)
        m.at(j, k) = static_cast<std::uint64_t>(a[slot(i, j, k)] % static_cast<long long>(p));
    mats.push_back(std::move(m));
  }

  auto eigen = simultaneous_eigenbasis(mats);

  const std::uint64_t z = primitive_root_of_unity(p, e);
  std::vector<std::uint64_t> zpow(static_cast<std::size_t>(e));
  for (long long t = 0; t < e; ++t) zpow[t] = mod_pow(z, static_cast<std::uint64_t>(t), p);
  const std::uint64_t inv_e = mod_inv(static_cast<std::uint64_t>(e % static_cast<long long>(p)), p);

  std::vector<std::vector<Cyclotomic>> rows;
  std::vector<long long> degrees;
  for (auto& w : eigen) {
    // normalize so the identity-class component is 1
    if (w[0] == 0) throw InternalError("eigenvector vanishes at the identity class");
    std::uint64_t scale = mod_inv(w[0], p);
    for (auto& x : w) x = x * scale % p;

    // degree from the orthogonality residue sum_k w_k w_{k^-1} / n_k
    std::uint64_t s = 0;
    for (int k = 0; k < r; ++k) {
      int kinv = grp.power_class(k, e - 1);
      std::uint64_t nk = static_cast<std::uint64_t>(grp.class_size(k) % static_cast<long long>(p));
      s = (s + w[k] * w[kinv] % p * mod_inv(nk, p)) % p;
    }
    if (s == 0) throw InternalError("degree recovery failed (zero residue)");
    std::uint64_t d2 = static_cast<std::uint64_t>(order % static_cast<long long>(p)) * mod_inv(s, p) % p;
    long long deg = -1;
    for (std::uint64_t d = 1; 2 * d < p; ++d) {
      if (d * d % p == d2) {
        deg = static_cast<long long>(d);
        break;
      }
    }
    if (deg < 0) throw InternalError("degree recovery failed (no admissible square root)");

    // character residues c_k = deg * w_k / n_k
    std::vector<std::uint64_t> c(r);
    for (int k = 0; k < r; ++k) {
      std::uint64_t nk = static_cast<std::uint64_t>(grp.class_size(k) % static_cast<long long>(p));
      c[k] = static_cast<std::uint64_t>(deg) % p * w[k] % p * mod_inv(nk, p) % p;
    }

    // cyclotomic lift: multiplicity of zeta^t among the eigenvalues of rho(g_k)
    // is (1/e) sum_j chi(g_k^j) z^{-jt}
    std::vector<Cyclotomic> row(r, Cyclotomic(e));
    for (int k = 0; k < r; ++k) {
      std::vector<Rational> powers(static_cast<std::size_t>(e), Rational(0));
      long long total = 0;
      for (long long t = 0; t < e; ++t) {
        std::uint64_t acc = 0;
        for (long long j = 0; j < e; ++j) {
          std::uint64_t zinv = zpow[static_cast<std::size_t>((e - (j * t) % e) % e)];
          acc = (acc + c[grp.power_class(k, j)] * zinv) % p;
        }
        std::uint64_t m = inv_e * acc % p;
        if (m > static_cast<std::uint64_t>(deg))
          throw InternalError("cyclotomic lift produced an impossible multiplicity");
        powers[static_cast<std::size_t>(t)] = Rational(static_cast<long long>(m));
        total += static_cast<long long>(m);
      }
      if (total != deg) throw InternalError("cyclotomic lift multiplicities do not sum to the degree");
      row[k] = Cyclotomic::from_power_coeffs(e, std::move(powers));
    }
    rows.push_back(std::move(row));
    degrees.push_back(deg);
  }

  std::vector<long long> sizes(r);
  for (int k = 0; k < r; ++k) sizes[k] = grp.class_size(k);
  CharacterTable table(order, e, std::move(sizes), std::move(rows));
  table.sort_rows();
  detail::verify_orthonormal_rows(table);

  long long degree_square_sum = 0;
  for (int i = 0; i < table.row_count(); ++i)
    degree_square_sum += table.degree(i) * table.degree(i);
  if (degree_square_sum != order)
    throw InternalError("character degrees do not satisfy the order identity");
  return table;
}

// Tensor table of a product group: classes are pairs (left factor most
// significant), characters are products of factor characters.
inline CharacterTable tensor_table(const CharacterTable& a, const CharacterTable& b) {
  long long m = lcm_ll(a.conductor(), b.conductor());
  std::vector<long long> sizes;
  sizes.reserve(static_cast<std::size_t>(a.class_count()) * b.class_count());
  for (int c1 = 0; c1 < a.class_count(); ++c1)
    for (int c2 = 0; c2 < b.class_count(); ++c2) sizes.push_back(a.class_size(c1) * b.class_size(c2));

  std::vector<std::vector<Cyclotomic>> rows;
  rows.reserve(static_cast<std::size_t>(a.row_count()) * b.row_count());
  for (int i = 0; i < a.row_count(); ++i) {
    std::vector<Cyclotomic> arow;
    arow.reserve(a.class_count());
    for (int c1 = 0; c1 < a.class_count(); ++c1) arow.push_back(a.value(i, c1).embedded(m));
    for (int j = 0; j < b.row_count(); ++j) {
      std::vector<Cyclotomic> row;
      row.reserve(sizes.size());
      for (int c1 = 0; c1 < a.class_count(); ++c1) {
        for (int c2 = 0; c2 < b.class_count(); ++c2)
          row.push_back(arow[c1] * b.value(j, c2).embedded(m));
      }
      rows.push_back(std::move(row));
    }
  }
  return CharacterTable(a.group_order() * b.group_order(), m, std::move(sizes), std::move(rows));
}

}  // namespace rwreath
