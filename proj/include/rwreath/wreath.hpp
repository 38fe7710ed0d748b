#pragma once

// The groups G_n(G,H): monomial matrices with entries in an abelian group G
// whose entries sum into a subgroup H. An element is a color vector in G^n
// together with a permutation; the law matches products of matrices
// D(colors)*P(perm). Includes enumeration, conjugacy classes, power maps,
// block-diagonal embeddings, and color reduction mod H.

#include "rwreath/abelian.hpp"
#include "rwreath/numeric.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rwreath {

struct WreathElement {
  std::vector<int> colors;  // element indices in G, length n
  std::vector<int> perm;    // one-line notation, perm[i] = sigma(i)

  int degree() const { return static_cast<int>(perm.size()); }

  bool is_identity() const {
    for (int i = 0; i < degree(); ++i)
      if (perm[i] != i) return false;
    for (int c : colors)
      if (c != 0) return false;
    return true;
  }

  bool has_identity_perm() const {
    for (int i = 0; i < degree(); ++i)
      if (perm[i] != i) return false;
    return true;
  }

  // Fixed element ordering: lexicographic on (one-line permutation, colors).
  friend bool operator<(const WreathElement& a, const WreathElement& b) {
    if (a.perm != b.perm) return a.perm < b.perm;
    return a.colors < b.colors;
  }
  friend bool operator==(const WreathElement& a, const WreathElement& b) {
    return a.perm == b.perm && a.colors == b.colors;
  }
};

inline std::string element_key(const WreathElement& e) {
  std::string k;
  k.reserve(e.perm.size() + e.colors.size());
  for (int p : e.perm) k.push_back(static_cast<char>(p));
  for (int c : e.colors) k.push_back(static_cast<char>(c));
  return k;
}

inline WreathElement wreath_identity(int n) {
  WreathElement e;
  e.colors.assign(n, 0);
  e.perm.resize(n);
  std::iota(e.perm.begin(), e.perm.end(), 0);
  return e;
}

// (v,s)*(w,t) = (v + s.w, s t) with (s.w)_i = w_{s^-1(i)}.
inline WreathElement wreath_mul(const FiniteAbelianGroup& g, const WreathElement& a,
                                const WreathElement& b) {
  const int n = a.degree();
  if (b.degree() != n) throw UsageError("wreath elements have different degrees");
  WreathElement c;
  c.perm.resize(n);
  c.colors.resize(n);
  std::vector<int> a_inv(n);
  for (int i = 0; i < n; ++i) a_inv[a.perm[i]] = i;
  for (int i = 0; i < n; ++i) {
    c.perm[i] = a.perm[b.perm[i]];
    c.colors[i] = g.add(a.colors[i], b.colors[a_inv[i]]);
  }
  return c;
}

inline WreathElement wreath_inv(const FiniteAbelianGroup& g, const WreathElement& a) {
  const int n = a.degree();
  WreathElement c;
  c.perm.resize(n);
  c.colors.resize(n);
  for (int i = 0; i < n; ++i) c.perm[a.perm[i]] = i;
  for (int i = 0; i < n; ++i) c.colors[i] = g.neg(a.colors[a.perm[i]]);
  return c;
}

// The sum map s(v,sigma) = sum_i v_i, a homomorphism S_n[G] -> G.
inline int color_sum(const FiniteAbelianGroup& g, const WreathElement& a) {
  int s = 0;
  for (int c : a.colors) s = g.add(s, c);
  return s;
}

// Reduce colors along a quotient map; permutation part unchanged.
inline WreathElement reduce_colors(const QuotientMap& q, const WreathElement& a) {
  WreathElement r = a;
  for (auto& c : r.colors) c = q.map(c);
  return r;
}

namespace detail {

// Shared machinery for any finite group of wreath elements given by an
// explicit element list: lookup, conjugacy classes (orbit closure from
// unvisited seeds, minimal element as representative), power maps.
struct EnumeratedClasses {
  std::vector<WreathElement> elems;
  std::unordered_map<std::string, int> index;
  std::vector<int> class_of;
  std::vector<int> class_rep;
  std::vector<long long> class_size;
  long long exponent = 1;
  std::vector<std::vector<int>> power_map;  // [class][j], j in 0..exponent-1

  void build(const FiniteAbelianGroup& g) {
    const std::size_t n = elems.size();
    index.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!index.emplace(element_key(elems[i]), static_cast<int>(i)).second)
        throw InternalError("duplicate element in enumeration");
    }
    std::vector<WreathElement> inverses(n);
    for (std::size_t i = 0; i < n; ++i) inverses[i] = wreath_inv(g, elems[i]);

    class_of.assign(n, -1);
    for (std::size_t seed = 0; seed < n; ++seed) {
      if (class_of[seed] >= 0) continue;
      int cls = static_cast<int>(class_rep.size());
      class_rep.push_back(static_cast<int>(seed));
      long long size = 0;
      for (std::size_t x = 0; x < n; ++x) {
        WreathElement conj = wreath_mul(g, wreath_mul(g, elems[x], elems[seed]), inverses[x]);
        auto it = index.find(element_key(conj));
        if (it == index.end()) throw InternalError("conjugation left the element set");
        if (class_of[it->second] < 0) {
          class_of[it->second] = cls;
          ++size;
        }
      }
      class_size.push_back(size);
    }

    exponent = 1;
    std::vector<long long> orders(class_rep.size());
    for (std::size_t c = 0; c < class_rep.size(); ++c) {
      const WreathElement& rep = elems[class_rep[c]];
      WreathElement cur = rep;
      long long ord = 1;
      while (!cur.is_identity()) {
        cur = wreath_mul(g, cur, rep);
        ++ord;
      }
      orders[c] = ord;
      exponent = lcm_ll(exponent, ord);
    }
    power_map.assign(class_rep.size(), std::vector<int>(static_cast<std::size_t>(exponent)));
    for (std::size_t c = 0; c < class_rep.size(); ++c) {
      const WreathElement& rep = elems[class_rep[c]];
      WreathElement cur = wreath_identity(rep.degree());
      for (long long j = 0; j < exponent; ++j) {
        auto it = index.find(element_key(cur));
        if (it == index.end()) throw InternalError("power left the element set");
        power_map[c][static_cast<std::size_t>(j)] = class_of[it->second];
        cur = wreath_mul(g, cur, rep);
      }
    }
  }
};

}  // namespace detail

class RestrictedWreathGroup {
 public:
  RestrictedWreathGroup(FiniteAbelianGroupPtr g, AbelianSubgroup h, int n,
                        long long budget = 100000)
      : g_(std::move(g)), h_(std::move(h)), n_(n) {
    if (!g_ || !(h_.group() == *g_)) throw UsageError("subgroup does not live in this group");
    if (n_ < 0) throw UsageError("degree must be nonnegative");

    Int bound = 1;
    for (int i = 2; i <= n_; ++i) bound *= i;
    bound *= int_pow(Int(g_->order()), static_cast<unsigned long long>(n_));
    if (bound > budget)
      throw BudgetError("enumeration budget exceeded: n!*|G|^n = " + bound.str() +
                        " > budget " + std::to_string(budget));

    enumerate();
    if (n_ >= 1) {
      Int expected = bound / h_.index();
      if (Int(static_cast<long long>(data_.elems.size())) != expected)
        throw InternalError("element count disagrees with n!*|G|^n/[G:H]");
    }
    data_.build(*g_);
    if (!data_.elems[0].is_identity() || data_.class_size[0] != 1)
      throw InternalError("canonical ordering did not put the identity first");
  }

  const FiniteAbelianGroup& group() const { return *g_; }
  FiniteAbelianGroupPtr group_ptr() const { return g_; }
  const AbelianSubgroup& subgroup() const { return h_; }
  int degree() const { return n_; }
  long long order() const { return static_cast<long long>(data_.elems.size()); }

  const std::vector<WreathElement>& elements() const { return data_.elems; }
  const WreathElement& element(int i) const { return data_.elems.at(i); }

  WreathElement identity() const { return wreath_identity(n_); }
  WreathElement mul(const WreathElement& a, const WreathElement& b) const {
    return wreath_mul(*g_, a, b);
  }
  WreathElement inv(const WreathElement& a) const { return wreath_inv(*g_, a); }

  // Constrained constructor: membership (color sum in H) enforced.
  WreathElement make_element(std::vector<int> colors, std::vector<int> perm) const {
    WreathElement e{std::move(colors), std::move(perm)};
    if (index_of(e) < 0) throw UsageError("element does not satisfy the sum-in-H constraint");
    return e;
  }

  bool contains(const WreathElement& e) const { return index_of(e) >= 0; }

  int index_of(const WreathElement& e) const {
    if (e.degree() != n_ || static_cast<int>(e.colors.size()) != n_) return -1;
    auto it = data_.index.find(element_key(e));
    return it == data_.index.end() ? -1 : it->second;
  }

  int class_count() const { return static_cast<int>(data_.class_rep.size()); }
  long long class_size(int c) const { return data_.class_size.at(c); }
  const WreathElement& class_rep(int c) const { return data_.elems[data_.class_rep.at(c)]; }
  int class_of_index(int i) const { return data_.class_of.at(i); }
  int class_of_element(const WreathElement& e) const {
    int i = index_of(e);
    return i < 0 ? -1 : data_.class_of[i];
  }

  long long exponent() const { return data_.exponent; }

  // Class of rep^j for any representative of class c.
  int power_class(int c, long long j) const {
    long long e = data_.exponent;
    j %= e;
    if (j < 0) j += e;
    return data_.power_map.at(c)[static_cast<std::size_t>(j)];
  }

 private:
  FiniteAbelianGroupPtr g_;
  AbelianSubgroup h_;
  int n_;
  detail::EnumeratedClasses data_;

  void enumerate() {
    // permutations ascending in one-line order, colors ascending in mixed
    // radix, so the element list is sorted in the fixed element ordering
    std::vector<int> perm(n_);
    std::iota(perm.begin(), perm.end(), 0);
    const long long gorder = g_->order();
    do {
      WreathElement e;
      e.perm = perm;
      e.colors.assign(n_, 0);
      for (;;) {
        if (h_.contains(color_sum(*g_, e))) data_.elems.push_back(e);
        // odometer, last position fastest
        int pos = n_ - 1;
        while (pos >= 0) {
          if (++e.colors[pos] < gorder) break;
          e.colors[pos] = 0;
          --pos;
        }
        if (pos < 0) break;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
};

using WreathGroupPtr = std::shared_ptr<const RestrictedWreathGroup>;

// An arbitrary enumerated subgroup of S_n[G] given by an explicit element
// list (used for subgroups that are not block subgroups, e.g. the trivial
// one); validates closure.
class ExplicitSubgroup {
 public:
  ExplicitSubgroup(FiniteAbelianGroupPtr g, std::vector<WreathElement> elems)
      : g_(std::move(g)) {
    if (elems.empty()) throw UsageError("explicit subgroup needs at least the identity");
    std::sort(elems.begin(), elems.end());
    std::set<std::string> keys;
    for (const auto& e : elems) keys.insert(element_key(e));
    for (const auto& a : elems) {
      if (!keys.count(element_key(wreath_inv(*g_, a))))
        throw UsageError("explicit subgroup is not closed under inversion");
      for (const auto& b : elems)
        if (!keys.count(element_key(wreath_mul(*g_, a, b))))
          throw UsageError("explicit subgroup is not closed under multiplication");
    }
    data_.elems = std::move(elems);
    data_.build(*g_);
  }

  const FiniteAbelianGroup& group() const { return *g_; }
  FiniteAbelianGroupPtr group_ptr() const { return g_; }
  long long order() const { return static_cast<long long>(data_.elems.size()); }
  const std::vector<WreathElement>& elements() const { return data_.elems; }
  const WreathElement& element(int i) const { return data_.elems.at(i); }
  int index_of(const WreathElement& e) const {
    auto it = data_.index.find(element_key(e));
    return it == data_.index.end() ? -1 : it->second;
  }
  bool contains(const WreathElement& e) const { return index_of(e) >= 0; }
  int class_count() const { return static_cast<int>(data_.class_rep.size()); }
  long long class_size(int c) const { return data_.class_size.at(c); }
  const WreathElement& class_rep(int c) const { return data_.elems[data_.class_rep.at(c)]; }
  int class_of_index(int i) const { return data_.class_of.at(i); }
  int class_of_element(const WreathElement& e) const {
    int i = index_of(e);
    return i < 0 ? -1 : data_.class_of[i];
  }
  long long exponent() const { return data_.exponent; }
  int power_class(int c, long long j) const {
    long long e = data_.exponent;
    j %= e;
    if (j < 0) j += e;
    return data_.power_map.at(c)[static_cast<std::size_t>(j)];
  }

 private:
  FiniteAbelianGroupPtr g_;
  detail::EnumeratedClasses data_;
};

// Block-diagonal embedding data for a composition (k_1,...,k_r) of n.
inline bool is_block_preserving(const std::vector<int>& parts, const WreathElement& e) {
  int off = 0;
  for (int k : parts) {
    for (int i = off; i < off + k; ++i)
      if (e.perm[i] < off || e.perm[i] >= off + k) return false;
    off += k;
  }
  return true;
}

inline WreathElement block_embed(const std::vector<int>& parts,
                                 const std::vector<WreathElement>& factors) {
  if (parts.size() != factors.size()) throw UsageError("composition does not match factors");
  WreathElement e;
  int off = 0;
  for (std::size_t t = 0; t < parts.size(); ++t) {
    if (factors[t].degree() != parts[t]) throw UsageError("factor degree mismatch");
    for (int i = 0; i < parts[t]; ++i) {
      e.colors.push_back(factors[t].colors[i]);
      e.perm.push_back(off + factors[t].perm[i]);
    }
    off += parts[t];
  }
  return e;
}

inline std::vector<WreathElement> block_split(const std::vector<int>& parts,
                                              const WreathElement& e) {
  if (!is_block_preserving(parts, e)) throw UsageError("element does not preserve the blocks");
  std::vector<WreathElement> out;
  int off = 0;
  for (int k : parts) {
    WreathElement f;
    for (int i = 0; i < k; ++i) {
      f.colors.push_back(e.colors[off + i]);
      f.perm.push_back(e.perm[off + i] - off);
    }
    out.push_back(std::move(f));
    off += k;
  }
  return out;
}

// The block subgroup G_{k_1} x ... x G_{k_r} inside G_n(G,H), with classes
// given by tuples of factor classes (first factor most significant).
class BlockSubgroup {
 public:
  explicit BlockSubgroup(std::vector<WreathGroupPtr> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw UsageError("block subgroup needs at least one factor");
    g_ = factors_[0]->group_ptr();
    for (const auto& f : factors_) {
      if (!(f->group() == *g_) ||
          f->subgroup().elements() != factors_[0]->subgroup().elements())
        throw UsageError("block factors must share one (G,H)");
      parts_.push_back(f->degree());
      degree_ += f->degree();
    }
    order_ = 1;
    classes_ = 1;
    exponent_ = 1;
    for (const auto& f : factors_) {
      order_ *= f->order();
      classes_ *= f->class_count();
      exponent_ = lcm_ll(exponent_, f->exponent());
    }
    // class sizes and representatives per tuple
    class_size_.resize(static_cast<std::size_t>(classes_));
    class_rep_.resize(static_cast<std::size_t>(classes_));
    for (long long c = 0; c < classes_; ++c) {
      auto tuple = decode_class(static_cast<int>(c));
      long long size = 1;
      std::vector<WreathElement> reps;
      for (std::size_t t = 0; t < factors_.size(); ++t) {
        size *= factors_[t]->class_size(tuple[t]);
        reps.push_back(factors_[t]->class_rep(tuple[t]));
      }
      class_size_[static_cast<std::size_t>(c)] = size;
      class_rep_[static_cast<std::size_t>(c)] = block_embed(parts_, reps);
    }
  }

  const FiniteAbelianGroup& group() const { return *g_; }
  FiniteAbelianGroupPtr group_ptr() const { return g_; }
  const std::vector<int>& composition() const { return parts_; }
  int degree() const { return degree_; }
  long long order() const { return order_; }
  std::size_t factor_count() const { return factors_.size(); }
  const RestrictedWreathGroup& factor(std::size_t t) const { return *factors_.at(t); }
  long long exponent() const { return exponent_; }

  int class_count() const { return static_cast<int>(classes_); }
  long long class_size(int c) const { return class_size_.at(c); }
  const WreathElement& class_rep(int c) const { return class_rep_.at(c); }

  std::vector<int> decode_class(int c) const {
    std::vector<int> tuple(factors_.size());
    for (std::size_t t = factors_.size(); t-- > 0;) {
      tuple[t] = static_cast<int>(c % factors_[t]->class_count());
      c /= factors_[t]->class_count();
    }
    return tuple;
  }

  int encode_class(const std::vector<int>& tuple) const {
    long long c = 0;
    for (std::size_t t = 0; t < factors_.size(); ++t) c = c * factors_[t]->class_count() + tuple[t];
    return static_cast<int>(c);
  }

  bool contains(const WreathElement& e) const { return class_of_element(e) >= 0; }

  int class_of_element(const WreathElement& e) const {
    if (e.degree() != degree_) return -1;
    if (!is_block_preserving(parts_, e)) return -1;
    auto split = block_split(parts_, e);
    std::vector<int> tuple(factors_.size());
    for (std::size_t t = 0; t < factors_.size(); ++t) {
      int cls = factors_[t]->class_of_element(split[t]);
      if (cls < 0) return -1;
      tuple[t] = cls;
    }
    return encode_class(tuple);
  }

  // Materialized element list (factor indices in odometer order).
  const std::vector<WreathElement>& elements() const {
    if (elems_.empty()) {
      std::vector<std::size_t> idx(factors_.size(), 0);
      for (;;) {
        std::vector<WreathElement> fs;
        for (std::size_t t = 0; t < factors_.size(); ++t)
          fs.push_back(factors_[t]->element(static_cast<int>(idx[t])));
        elems_.push_back(block_embed(parts_, fs));
        std::size_t pos = factors_.size();
        bool wrapped = true;
        while (pos-- > 0) {
          if (++idx[pos] < static_cast<std::size_t>(factors_[pos]->order())) {
            wrapped = false;
            break;
          }
          idx[pos] = 0;
        }
        if (wrapped) break;
      }
    }
    return elems_;
  }

 private:
  std::vector<WreathGroupPtr> factors_;
  FiniteAbelianGroupPtr g_;
  std::vector<int> parts_;
  int degree_ = 0;
  long long order_ = 1;
  long long classes_ = 1;
  long long exponent_ = 1;
  std::vector<long long> class_size_;
  std::vector<WreathElement> class_rep_;
  mutable std::vector<WreathElement> elems_;
};

}  // namespace rwreath
