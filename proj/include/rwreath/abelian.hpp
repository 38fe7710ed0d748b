#pragma once

// Finite abelian groups in invariant-factor form, their subgroups,
// quotients, and linear characters. Elements are handled as dense indices
// 0..order-1 (mixed-radix encoding of the residue vector, first factor
// most significant), so index order equals lexicographic order on
// residue vectors.

#include "rwreath/cyclotomic.hpp"
#include "rwreath/numeric.hpp"
#include "rwreath/smith.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <vector>

namespace rwreath {

class FiniteAbelianGroup {
 public:
  // Accepts any list of moduli >= 1 and normalizes it to invariant factors
  // (divisibility chain, trivial factors dropped) via Smith normal form.
  explicit FiniteAbelianGroup(const std::vector<long long>& moduli = {}) {
    for (long long m : moduli)
      if (m < 1) throw UsageError("group moduli must be positive");
    std::vector<long long> nontrivial;
    for (long long m : moduli)
      if (m > 1) nontrivial.push_back(m);
    if (!nontrivial.empty()) {
      IntMatrix diag(nontrivial.size(), nontrivial.size());
      for (std::size_t i = 0; i < nontrivial.size(); ++i) diag.at(i, i) = nontrivial[i];
      SmithResult s = smith_normal_form(diag);
      for (std::size_t i = 0; i < nontrivial.size(); ++i) {
        long long d = to_ll(s.d.at(i, i));
        if (d > 1) factors_.push_back(d);
      }
    }
    order_ = 1;
    for (long long m : factors_) order_ *= m;
    exponent_ = factors_.empty() ? 1 : factors_.back();
  }

  const std::vector<long long>& factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  long long order() const { return order_; }
  long long exponent() const { return exponent_; }
  bool is_trivial() const { return order_ == 1; }
  bool is_cyclic() const { return factors_.size() <= 1; }

  std::vector<long long> decode(int idx) const {
    if (idx < 0 || idx >= order_) throw UsageError("element index out of range");
    std::vector<long long> r(factors_.size());
    for (std::size_t i = factors_.size(); i-- > 0;) {
      r[i] = idx % factors_[i];
      idx = static_cast<int>(idx / factors_[i]);
    }
    return r;
  }

  // Residue values are reduced componentwise; the length must match.
  int encode(const std::vector<long long>& residues) const {
    if (residues.size() != factors_.size())
      throw UsageError("residue vector length does not match group rank");
    long long idx = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      long long r = residues[i] % factors_[i];
      if (r < 0) r += factors_[i];
      idx = idx * factors_[i] + r;
    }
    return static_cast<int>(idx);
  }

  int zero() const { return 0; }

  int add(int a, int b) const {
    auto ra = decode(a), rb = decode(b);
    for (std::size_t i = 0; i < ra.size(); ++i) ra[i] = (ra[i] + rb[i]) % factors_[i];
    // already reduced, encode without revalidation
    long long idx = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) idx = idx * factors_[i] + ra[i];
    return static_cast<int>(idx);
  }

  int neg(int a) const {
    auto ra = decode(a);
    for (std::size_t i = 0; i < ra.size(); ++i) ra[i] = (factors_[i] - ra[i]) % factors_[i];
    long long idx = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) idx = idx * factors_[i] + ra[i];
    return static_cast<int>(idx);
  }

  int scalar_mul(const Int& c, int a) const {
    auto ra = decode(a);
    long long idx = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
      Int v = (c * ra[i]) % factors_[i];
      if (v < 0) v += factors_[i];
      idx = idx * factors_[i] + to_ll(v);
    }
    return static_cast<int>(idx);
  }

  long long order_of(int a) const {
    long long n = 1;
    int x = a;
    while (x != 0) {
      x = add(x, a);
      ++n;
    }
    return n;
  }

  friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<long long> factors_;
  long long order_ = 1;
  long long exponent_ = 1;
};

using FiniteAbelianGroupPtr = std::shared_ptr<const FiniteAbelianGroup>;

// A finite abelian group presented by explicit cyclic generators inside an
// ambient group: orders d_1 | d_2 | ..., one generator per factor, and the
// coordinate tuple of every member element.
struct CyclicDecomposition {
  std::vector<long long> orders;          // each >= 2
  std::vector<int> generators;            // ambient element indices
  std::map<int, std::vector<int>> coords; // member element -> coordinate tuple
  long long order = 1;                    // product of orders

  long long exponent() const { return orders.empty() ? 1 : orders.back(); }
};

class AbelianSubgroup {
 public:
  AbelianSubgroup() = default;

  AbelianSubgroup(FiniteAbelianGroupPtr ambient, std::vector<int> generators)
      : g_(std::move(ambient)) {
    if (!g_) throw UsageError("subgroup needs an ambient group");
    std::set<int> genset;
    for (int gen : generators) {
      if (gen < 0 || gen >= g_->order()) throw UsageError("generator is not an element of G");
      if (gen != 0) genset.insert(gen);
    }
    gens_.assign(genset.begin(), genset.end());

    // exhaustive closure
    member_.assign(static_cast<std::size_t>(g_->order()), 0);
    member_[0] = 1;
    std::vector<int> queue{0};
    while (!queue.empty()) {
      int x = queue.back();
      queue.pop_back();
      for (int gen : gens_) {
        int y = g_->add(x, gen);
        if (!member_[y]) {
          member_[y] = 1;
          queue.push_back(y);
        }
      }
    }
    for (int i = 0; i < g_->order(); ++i)
      if (member_[i]) elements_.push_back(i);
    index_ = g_->order() / static_cast<long long>(elements_.size());
    build_decomposition();
  }

  const FiniteAbelianGroup& group() const { return *g_; }
  FiniteAbelianGroupPtr group_ptr() const { return g_; }
  const std::vector<int>& generators() const { return gens_; }
  const std::vector<int>& elements() const { return elements_; }
  long long order() const { return static_cast<long long>(elements_.size()); }
  long long index() const { return index_; }
  bool contains(int elem) const { return elem >= 0 && elem < g_->order() && member_[elem]; }
  long long exponent() const { return decomp_.exponent(); }
  const std::vector<long long>& invariant_factors() const { return decomp_.orders; }
  const CyclicDecomposition& decomposition() const { return decomp_; }
  bool is_full() const { return order() == g_->order(); }

 private:
  FiniteAbelianGroupPtr g_;
  std::vector<int> gens_;
  std::vector<int> elements_;
  std::vector<char> member_;
  long long index_ = 1;
  CyclicDecomposition decomp_;

  // Present H as Z^r / L via the generator map and Smith normal form, then
  // realize each cyclic factor by an explicit generator in G.
  void build_decomposition() {
    decomp_ = CyclicDecomposition{};
    if (gens_.empty()) {
      decomp_.coords[0] = {};
      if (elements_.size() != 1) throw InternalError("trivial subgroup closure mismatch");
      return;
    }
    const std::size_t k = g_->rank();
    const std::size_t r = gens_.size();
    IntMatrix b(k, r + k);
    for (std::size_t j = 0; j < r; ++j) {
      auto res = g_->decode(gens_[j]);
      for (std::size_t i = 0; i < k; ++i) b.at(i, j) = res[i];
    }
    for (std::size_t i = 0; i < k; ++i) b.at(i, r + i) = g_->factors()[i];

    auto kernel = integer_kernel_basis(b);
    IntMatrix lattice(r, kernel.size());
    for (std::size_t j = 0; j < kernel.size(); ++j)
      for (std::size_t i = 0; i < r; ++i) lattice.at(i, j) = kernel[j][i];

    SmithResult s = smith_normal_form(lattice);
    std::vector<long long> gen_orders(r, 0);
    const std::size_t steps = std::min(lattice.rows, lattice.cols);
    for (std::size_t i = 0; i < r; ++i) {
      if (i < steps) gen_orders[i] = to_ll(s.d.at(i, i));
      if (gen_orders[i] == 0)
        throw InternalError("subgroup presentation is not finite");
    }
    for (std::size_t i = 0; i < r; ++i) {
      if (gen_orders[i] <= 1) continue;
      decomp_.orders.push_back(gen_orders[i]);
      // generator = sum_j u_inv[j][i] * gens_[j]
      int h = 0;
      for (std::size_t j = 0; j < r; ++j)
        h = g_->add(h, g_->scalar_mul(s.u_inv.at(j, i), gens_[j]));
      decomp_.generators.push_back(h);
    }
    decomp_.order = 1;
    for (long long d : decomp_.orders) decomp_.order *= d;
    if (decomp_.order != order())
      throw InternalError("subgroup invariant factors disagree with closure");

    // coordinates of every member (tuples in mixed-radix order)
    std::size_t nfac = decomp_.orders.size();
    std::vector<int> tuple(nfac, 0);
    for (long long t = 0; t < decomp_.order; ++t) {
      long long rem = t;
      int elem = 0;
      for (std::size_t i = nfac; i-- > 0;) {
        tuple[i] = static_cast<int>(rem % decomp_.orders[i]);
        rem /= decomp_.orders[i];
      }
      for (std::size_t i = 0; i < nfac; ++i)
        elem = g_->add(elem, g_->scalar_mul(tuple[i], decomp_.generators[i]));
      if (!contains(elem)) throw InternalError("subgroup coordinates left the closure");
      if (!decomp_.coords.emplace(elem, tuple).second)
        throw InternalError("subgroup coordinates are not injective");
    }
  }
};

inline AbelianSubgroup subgroup_from_generators(FiniteAbelianGroupPtr g,
                                                std::vector<int> generators) {
  return AbelianSubgroup(std::move(g), std::move(generators));
}

inline AbelianSubgroup full_subgroup(FiniteAbelianGroupPtr g) {
  std::vector<int> gens;
  const auto& f = g->factors();
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<long long> res(f.size(), 0);
    res[i] = 1;
    gens.push_back(g->encode(res));
  }
  return AbelianSubgroup(std::move(g), std::move(gens));
}

// Surjective homomorphism G -> G/H with kernel exactly H, target presented
// in invariant factors.
class QuotientMap {
 public:
  QuotientMap() = default;

  QuotientMap(FiniteAbelianGroupPtr g, const AbelianSubgroup& h) : g_(std::move(g)) {
    if (!g_ || !(h.group() == *g_)) throw UsageError("subgroup does not live in this group");
    const std::size_t k = g_->rank();
    const std::size_t r = h.generators().size();
    IntMatrix c(k, k + r);
    for (std::size_t i = 0; i < k; ++i) c.at(i, i) = g_->factors()[i];
    for (std::size_t j = 0; j < r; ++j) {
      auto res = g_->decode(h.generators()[j]);
      for (std::size_t i = 0; i < k; ++i) c.at(i, k + j) = res[i];
    }
    SmithResult s = smith_normal_form(c);
    std::vector<long long> diag(k, 1);
    const std::size_t steps = std::min(c.rows, c.cols);
    for (std::size_t i = 0; i < k && i < steps; ++i) {
      diag[i] = to_ll(s.d.at(i, i));
      if (diag[i] == 0) throw InternalError("quotient is not finite");
    }
    std::vector<long long> kept;
    std::vector<std::size_t> kept_slots;
    for (std::size_t i = 0; i < k; ++i) {
      if (diag[i] > 1) {
        kept.push_back(diag[i]);
        kept_slots.push_back(i);
      }
    }
    target_ = std::make_shared<FiniteAbelianGroup>(kept);

    image_.resize(static_cast<std::size_t>(g_->order()));
    for (int x = 0; x < g_->order(); ++x) {
      auto res = g_->decode(x);
      std::vector<long long> img(kept.size());
      for (std::size_t t = 0; t < kept_slots.size(); ++t) {
        Int y = 0;
        for (std::size_t j = 0; j < k; ++j) y += s.u.at(kept_slots[t], j) * res[j];
        Int v = y % kept[t];
        if (v < 0) v += kept[t];
        img[t] = to_ll(v);
      }
      image_[x] = target_->encode(img);
    }
    // kernel must be exactly H
    for (int x = 0; x < g_->order(); ++x)
      if ((image_[x] == 0) != h.contains(x))
        throw InternalError("quotient kernel does not match the subgroup");
  }

  const FiniteAbelianGroup& source() const { return *g_; }
  FiniteAbelianGroupPtr source_ptr() const { return g_; }
  const FiniteAbelianGroup& target() const { return *target_; }
  FiniteAbelianGroupPtr target_ptr() const { return target_; }
  int map(int elem) const { return image_.at(static_cast<std::size_t>(elem)); }

 private:
  FiniteAbelianGroupPtr g_;
  FiniteAbelianGroupPtr target_;
  std::vector<int> image_;
};

inline QuotientMap quotient(FiniteAbelianGroupPtr g, const AbelianSubgroup& h) {
  return QuotientMap(std::move(g), h);
}

// A character of a finite abelian group (or subgroup of one), stored as the
// exponent of a fixed primitive root of unity per domain element.
class LinearCharacter {
 public:
  LinearCharacter() = default;
  LinearCharacter(long long modulus, std::vector<long long> factor_orders,
                  std::vector<int> tuple, std::vector<long long> expo, long long domain_order)
      : modulus_(modulus),
        orders_(std::move(factor_orders)),
        tuple_(std::move(tuple)),
        expo_(std::move(expo)),
        domain_order_(domain_order) {}

  long long modulus() const { return modulus_; }
  long long domain_order() const { return domain_order_; }
  const std::vector<int>& tuple() const { return tuple_; }

  int index() const {
    long long idx = 0;
    for (std::size_t i = 0; i < tuple_.size(); ++i) idx = idx * orders_[i] + tuple_[i];
    return static_cast<int>(idx);
  }

  bool is_trivial() const {
    return std::all_of(tuple_.begin(), tuple_.end(), [](int t) { return t == 0; });
  }

  bool defined_at(int elem) const {
    return elem >= 0 && elem < static_cast<int>(expo_.size()) && expo_[elem] >= 0;
  }

  long long exponent_at(int elem) const {
    if (!defined_at(elem)) throw UsageError("element is not in the character's domain");
    return expo_[elem];
  }

  // Value as a root of unity in Q(zeta_modulus).
  Cyclotomic value(int elem) const {
    return Cyclotomic::root_of_unity(modulus_, exponent_at(elem));
  }

  friend LinearCharacter operator*(const LinearCharacter& a, const LinearCharacter& b) {
    a.require_same_family(b);
    LinearCharacter r = a;
    for (std::size_t i = 0; i < r.tuple_.size(); ++i)
      r.tuple_[i] = static_cast<int>((r.tuple_[i] + b.tuple_[i]) % r.orders_[i]);
    for (std::size_t e = 0; e < r.expo_.size(); ++e)
      if (r.expo_[e] >= 0) r.expo_[e] = (r.expo_[e] + b.expo_[e]) % r.modulus_;
    return r;
  }

  LinearCharacter inverse() const {
    LinearCharacter r = *this;
    for (std::size_t i = 0; i < r.tuple_.size(); ++i)
      r.tuple_[i] = static_cast<int>((orders_[i] - tuple_[i]) % orders_[i]);
    for (std::size_t e = 0; e < r.expo_.size(); ++e)
      if (r.expo_[e] >= 0) r.expo_[e] = (modulus_ - expo_[e]) % modulus_;
    return r;
  }

  friend bool operator==(const LinearCharacter& a, const LinearCharacter& b) {
    return a.modulus_ == b.modulus_ && a.expo_ == b.expo_;
  }

 private:
  long long modulus_ = 1;
  std::vector<long long> orders_;
  std::vector<int> tuple_;
  std::vector<long long> expo_;  // per ambient element index; -1 outside domain
  long long domain_order_ = 1;

  void require_same_family(const LinearCharacter& o) const {
    if (modulus_ != o.modulus_ || orders_ != o.orders_ || expo_.size() != o.expo_.size())
      throw UsageError("characters belong to different dual groups");
  }
};

namespace detail {

inline std::vector<LinearCharacter> dual_from_decomposition(const CyclicDecomposition& dec,
                                                            std::size_t ambient_size) {
  const long long e = dec.exponent();
  const std::size_t nfac = dec.orders.size();
  std::vector<LinearCharacter> characters;
  characters.reserve(static_cast<std::size_t>(dec.order));
  std::vector<int> tuple(nfac, 0);
  for (long long t = 0; t < dec.order; ++t) {
    long long rem = t;
    for (std::size_t i = nfac; i-- > 0;) {
      tuple[i] = static_cast<int>(rem % dec.orders[i]);
      rem /= dec.orders[i];
    }
    std::vector<long long> expo(ambient_size, -1);
    for (const auto& [elem, coord] : dec.coords) {
      long long sum = 0;
      for (std::size_t i = 0; i < nfac; ++i)
        sum = (sum + tuple[i] * coord[i] % e * (e / dec.orders[i])) % e;
      expo[static_cast<std::size_t>(elem)] = sum;
    }
    characters.emplace_back(e, dec.orders, tuple, std::move(expo), dec.order);
  }
  return characters;
}

}  // namespace detail

// All |H| characters of a subgroup, in the canonical mixed-radix order of
// its invariant-factor presentation (trivial character first).
inline std::vector<LinearCharacter> dual_group(const AbelianSubgroup& h) {
  return detail::dual_from_decomposition(h.decomposition(),
                                         static_cast<std::size_t>(h.group().order()));
}

inline std::vector<LinearCharacter> dual_group(const FiniteAbelianGroup& g) {
  CyclicDecomposition dec;
  dec.orders = g.factors();
  dec.order = g.order();
  for (std::size_t i = 0; i < g.factors().size(); ++i) {
    std::vector<long long> res(g.factors().size(), 0);
    res[i] = 1;
    dec.generators.push_back(g.encode(res));
  }
  for (int x = 0; x < g.order(); ++x) {
    auto res = g.decode(x);
    std::vector<int> coord(res.begin(), res.end());
    dec.coords[x] = coord;
  }
  return detail::dual_from_decomposition(dec, static_cast<std::size_t>(g.order()));
}

}  // namespace rwreath
