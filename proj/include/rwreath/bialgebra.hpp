#pragma once

// The graded bialgebra R(G,H): integer coordinates over the irreducibles of
// the tower G_n(G,H), the induction product, the restriction coproduct, and
// the graded inner product. A TowerContext owns the lazily built groups,
// character tables, block subgroups and structure-constant slabs of one
// tower, with optional disk caching.

#include "rwreath/cache.hpp"
#include "rwreath/chartab.hpp"
#include "rwreath/parallel.hpp"
#include "rwreath/serialize.hpp"
#include "rwreath/wreath.hpp"

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace rwreath {

struct BasisKey {
  int degree = 0;
  int index = 0;
  auto operator<=>(const BasisKey&) const = default;
};

inline std::string format_basis_label(const BasisKey& k) {
  return std::to_string(k.degree) + ":" + std::to_string(k.index);
}

inline BasisKey parse_basis_label(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("basis label must look like <degree>:<index>");
  try {
    return BasisKey{std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError("cannot parse basis label: " + s);
  }
}

// Finitely supported integer coefficients on (degree, irreducible) pairs.
class GradedVector {
 public:
  static GradedVector unit() { return basis(0, 0); }

  static GradedVector basis(int degree, int index) {
    GradedVector v;
    v.c_[BasisKey{degree, index}] = 1;
    return v;
  }

  long long coeff(const BasisKey& k) const {
    auto it = c_.find(k);
    return it == c_.end() ? 0 : it->second;
  }

  void add_to(const BasisKey& k, long long delta) {
    if (delta == 0) return;
    auto it = c_.try_emplace(k, 0).first;
    it->second += delta;
    if (it->second == 0) c_.erase(it);
  }

  bool is_zero() const { return c_.empty(); }

  bool nonnegative() const {
    for (const auto& [k, v] : c_)
      if (v < 0) return false;
    return true;
  }

  // "positive" = nonzero with all coefficients >= 0
  bool is_positive() const { return !is_zero() && nonnegative(); }

  int max_degree() const {
    int m = 0;
    for (const auto& [k, v] : c_) m = std::max(m, k.degree);
    return m;
  }

  bool homogeneous_of_degree(int n) const {
    for (const auto& [k, v] : c_)
      if (k.degree != n) return false;
    return true;
  }

  const std::map<BasisKey, long long>& coeffs() const { return c_; }

  friend GradedVector operator+(GradedVector a, const GradedVector& b) {
    for (const auto& [k, v] : b.c_) a.add_to(k, v);
    return a;
  }
  friend GradedVector operator-(GradedVector a, const GradedVector& b) {
    for (const auto& [k, v] : b.c_) a.add_to(k, -v);
    return a;
  }
  GradedVector scaled(long long f) const {
    GradedVector r;
    if (f == 0) return r;
    for (const auto& [k, v] : c_) r.c_[k] = v * f;
    return r;
  }

  friend bool operator==(const GradedVector& a, const GradedVector& b) { return a.c_ == b.c_; }

 private:
  std::map<BasisKey, long long> c_;
};

// An element of R (x) R: integer coefficients on ordered pairs of basis keys.
class TensorVector {
 public:
  using Key = std::pair<BasisKey, BasisKey>;

  long long coeff(const Key& k) const {
    auto it = c_.find(k);
    return it == c_.end() ? 0 : it->second;
  }
  void add_to(const Key& k, long long delta) {
    if (delta == 0) return;
    auto it = c_.try_emplace(k, 0).first;
    it->second += delta;
    if (it->second == 0) c_.erase(it);
  }
  bool is_zero() const { return c_.empty(); }
  bool nonnegative() const {
    for (const auto& [k, v] : c_)
      if (v < 0) return false;
    return true;
  }
  const std::map<Key, long long>& coeffs() const { return c_; }
  friend bool operator==(const TensorVector& a, const TensorVector& b) { return a.c_ == b.c_; }

 private:
  std::map<Key, long long> c_;
};

inline long long tensor_pairing(const TensorVector& a, const TensorVector& b) {
  long long acc = 0;
  for (const auto& [k, v] : a.coeffs()) acc += v * b.coeff(k);
  return acc;
}

// c[i][j][t] = multiplicity of irreducible t of G_{k+l} in the induction of
// (irreducible i of G_k) (x) (irreducible j of G_l).
struct StructureSlab {
  int k = 0, l = 0;
  std::size_t ni = 0, nj = 0, nt = 0;
  std::vector<long long> c;

  long long at(std::size_t i, std::size_t j, std::size_t t) const {
    return c[(i * nj + j) * nt + t];
  }
  long long& at(std::size_t i, std::size_t j, std::size_t t) {
    return c[(i * nj + j) * nt + t];
  }
};

// d[t][i][j] = multiplicity of (i (x) j) in the restriction of irreducible t
// of G_{k+l} to the (k,l) block subgroup.
struct RestrictionSlab {
  int k = 0, l = 0;
  std::size_t nt = 0, ni = 0, nj = 0;
  std::vector<long long> d;

  long long at(std::size_t t, std::size_t i, std::size_t j) const {
    return d[(t * ni + i) * nj + j];
  }
  long long& at(std::size_t t, std::size_t i, std::size_t j) {
    return d[(t * ni + i) * nj + j];
  }
};

inline int default_n_max(long long group_order) {
  if (group_order == 2) return 4;
  if (group_order <= 4) return 3;
  return 2;
}

struct TowerOptions {
  int n_max = -1;  // -1: default by |G|
  long long budget = 100000;
  int jobs = 1;
  std::shared_ptr<CacheStore> cache;  // null: no disk cache
};

class TowerContext {
 public:
  TowerContext(FiniteAbelianGroupPtr g, AbelianSubgroup h, TowerOptions opt = {})
      : g_(std::move(g)), h_(std::move(h)), opt_(std::move(opt)) {
    if (!g_ || !(h_.group() == *g_)) throw UsageError("subgroup does not live in this group");
    if (opt_.n_max < 0) opt_.n_max = default_n_max(g_->order());
    if (opt_.budget <= 0) throw UsageError("budget must be positive");
    hash_ = group_descriptor_hash(*g_, h_);
    levels_.resize(static_cast<std::size_t>(opt_.n_max) + 1);
  }

  const FiniteAbelianGroup& group() const { return *g_; }
  FiniteAbelianGroupPtr group_ptr() const { return g_; }
  const AbelianSubgroup& subgroup() const { return h_; }
  int n_max() const { return opt_.n_max; }
  long long budget() const { return opt_.budget; }
  int jobs() const { return opt_.jobs; }
  const std::string& descriptor_hash() const { return hash_; }
  Json descriptor_json() const { return group_descriptor_json(*g_, h_); }
  std::shared_ptr<CacheStore> cache() const { return opt_.cache; }

  struct Level {
    WreathGroupPtr grp;
    CharacterTable table;
  };

  const Level& level(int n) {
    if (n < 0) throw UsageError("negative degree");
    if (n > opt_.n_max)
      throw BudgetError("degree " + std::to_string(n) + " exceeds n_max = " +
                        std::to_string(opt_.n_max));
    auto& slot = levels_[static_cast<std::size_t>(n)];
    if (!slot) {
      auto grp = std::make_shared<RestrictedWreathGroup>(g_, h_, n, opt_.budget);
      std::string key = "chartab_" + hash_ + "_n" + std::to_string(n) + "_v" + kFormatVersion + ".json";
      std::optional<CharacterTable> table;
      if (opt_.cache) {
        if (auto j = opt_.cache->load(key)) {
          try {
            CharacterTable t = character_table_from_json(*j);
            if (t.group_order() == grp->order() &&
                t.class_count() == grp->class_count() &&
                t.row_count() == grp->class_count() &&
                [&] {
                  for (int c = 0; c < grp->class_count(); ++c)
                    if (t.class_size(c) != grp->class_size(c)) return false;
                  return true;
                }())
              table = std::move(t);
          } catch (const std::exception&) {
            // treat unreadable payloads as cache misses
          }
        }
      }
      if (!table) {
        table = compute_character_table(*grp, opt_.jobs);
        if (opt_.cache)
          opt_.cache->store(key, character_table_to_json(*g_, h_, n, *grp, *table));
      }
      slot = std::make_unique<Level>(Level{std::move(grp), std::move(*table)});
    }
    return *slot;
  }

  const RestrictedWreathGroup& wreath(int n) { return *level(n).grp; }
  const CharacterTable& table(int n) { return level(n).table; }

  int basis_size(int n) { return n == 0 ? 1 : table(n).row_count(); }

  // Character degree of a basis element (1 for the degree-0 unit).
  long long basis_char_degree(const BasisKey& k) {
    return k.degree == 0 ? 1 : table(k.degree).degree(k.index);
  }

  GradedVector basis_vector(int n, int i) {
    if (i < 0 || i >= basis_size(n)) throw UsageError("unknown basis element");
    return GradedVector::basis(n, i);
  }

  struct BlockPair {
    std::shared_ptr<BlockSubgroup> sub;
    CharacterTable table;
  };

  const BlockPair& block(int k, int l) {
    if (k < 1 || l < 1) throw UsageError("block pair needs positive degrees");
    auto key = std::make_pair(k, l);
    auto it = blocks_.find(key);
    if (it == blocks_.end()) {
      auto sub = std::make_shared<BlockSubgroup>(
          std::vector<WreathGroupPtr>{level(k).grp, level(l).grp});
      CharacterTable t = tensor_table(table(k), table(l));
      it = blocks_.emplace(key, BlockPair{std::move(sub), std::move(t)}).first;
    }
    return it->second;
  }

  const StructureSlab& slab(int k, int l) {
    auto key = std::make_pair(k, l);
    auto it = slabs_.find(key);
    if (it == slabs_.end()) it = slabs_.emplace(key, compute_slab(k, l)).first;
    return it->second;
  }

  const RestrictionSlab& restriction_slab(int k, int l) {
    auto key = std::make_pair(k, l);
    auto it = rslabs_.find(key);
    if (it == rslabs_.end()) it = rslabs_.emplace(key, compute_restriction_slab(k, l)).first;
    return it->second;
  }

  // Bilinear extension of induction from block subgroups; the degree-0 unit
  // acts as identity.
  GradedVector product(const GradedVector& a, const GradedVector& b) {
    GradedVector out;
    for (const auto& [ka, va] : a.coeffs()) {
      for (const auto& [kb, vb] : b.coeffs()) {
        long long f = va * vb;
        if (ka.degree == 0) {
          out.add_to(kb, f);
          continue;
        }
        if (kb.degree == 0) {
          out.add_to(ka, f);
          continue;
        }
        int n = ka.degree + kb.degree;
        if (n > opt_.n_max)
          throw BudgetError("product degree " + std::to_string(n) + " exceeds n_max = " +
                            std::to_string(opt_.n_max));
        const StructureSlab& s = slab(ka.degree, kb.degree);
        for (std::size_t t = 0; t < s.nt; ++t) {
          long long c = s.at(static_cast<std::size_t>(ka.index),
                             static_cast<std::size_t>(kb.index), t);
          if (c) out.add_to(BasisKey{n, static_cast<int>(t)}, f * c);
        }
      }
    }
    return out;
  }

  // Sum over all splits k+l = n of the decomposition of the restriction to
  // G_k x G_l, including the unit splits.
  TensorVector coproduct(const GradedVector& a) {
    TensorVector out;
    const BasisKey unit{0, 0};
    for (const auto& [key, v] : a.coeffs()) {
      if (key.degree == 0) {
        out.add_to({unit, unit}, v);
        continue;
      }
      out.add_to({unit, key}, v);
      out.add_to({key, unit}, v);
      for (int k = 1; k < key.degree; ++k) {
        int l = key.degree - k;
        const RestrictionSlab& s = restriction_slab(k, l);
        for (std::size_t i = 0; i < s.ni; ++i)
          for (std::size_t j = 0; j < s.nj; ++j) {
            long long c = s.at(static_cast<std::size_t>(key.index), i, j);
            if (c)
              out.add_to({BasisKey{k, static_cast<int>(i)}, BasisKey{l, static_cast<int>(j)}},
                         v * c);
          }
      }
    }
    return out;
  }

  // Graded inner product; the irreducible basis is orthonormal.
  long long pairing(const GradedVector& a, const GradedVector& b) const {
    long long acc = 0;
    for (const auto& [k, v] : a.coeffs()) acc += v * b.coeff(k);
    return acc;
  }

 private:
  FiniteAbelianGroupPtr g_;
  AbelianSubgroup h_;
  TowerOptions opt_;
  std::string hash_;
  std::vector<std::unique_ptr<Level>> levels_;
  std::map<std::pair<int, int>, BlockPair> blocks_;
  std::map<std::pair<int, int>, StructureSlab> slabs_;
  std::map<std::pair<int, int>, RestrictionSlab> rslabs_;

  std::string slab_key(int k, int l) const {
    return "slab_" + hash_ + "_k" + std::to_string(k) + "_l" + std::to_string(l) + "_v" +
           kFormatVersion + ".json";
  }

  Json slab_to_json(const StructureSlab& s) {
    Json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = "structure_constants";
    j["group"] = descriptor_json();
    j["k"] = s.k;
    j["l"] = s.l;
    auto degree_list = [&](int n) {
      Json arr = Json::array();
      for (int i = 0; i < basis_size(n); ++i)
        arr.push_back(basis_char_degree(BasisKey{n, i}));
      return arr;
    };
    j["left_degrees"] = degree_list(s.k);
    j["right_degrees"] = degree_list(s.l);
    j["target_degrees"] = degree_list(s.k + s.l);
    Json tensor = Json::array();
    for (std::size_t i = 0; i < s.ni; ++i) {
      Json row = Json::array();
      for (std::size_t jj = 0; jj < s.nj; ++jj) {
        Json cell = Json::array();
        for (std::size_t t = 0; t < s.nt; ++t) cell.push_back(s.at(i, jj, t));
        row.push_back(std::move(cell));
      }
      tensor.push_back(std::move(row));
    }
    j["tensor"] = std::move(tensor);
    return j;
  }

  std::optional<StructureSlab> slab_from_json(int k, int l, const Json& j) {
    try {
      if (j.value("format_version", "") != kFormatVersion ||
          j.value("kind", "") != "structure_constants" || j.at("k").get<int>() != k ||
          j.at("l").get<int>() != l)
        return std::nullopt;
      StructureSlab s;
      s.k = k;
      s.l = l;
      s.ni = static_cast<std::size_t>(basis_size(k));
      s.nj = static_cast<std::size_t>(basis_size(l));
      s.nt = static_cast<std::size_t>(basis_size(k + l));
      const Json& tensor = j.at("tensor");
      if (tensor.size() != s.ni) return std::nullopt;
      s.c.assign(s.ni * s.nj * s.nt, 0);
      for (std::size_t i = 0; i < s.ni; ++i) {
        if (tensor[i].size() != s.nj) return std::nullopt;
        for (std::size_t jj = 0; jj < s.nj; ++jj) {
          if (tensor[i][jj].size() != s.nt) return std::nullopt;
          for (std::size_t t = 0; t < s.nt; ++t) s.at(i, jj, t) = tensor[i][jj][t].get<long long>();
        }
      }
      return s;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  StructureSlab compute_slab(int k, int l) {
    StructureSlab s;
    s.k = k;
    s.l = l;
    s.ni = static_cast<std::size_t>(basis_size(k));
    s.nj = static_cast<std::size_t>(basis_size(l));
    s.nt = static_cast<std::size_t>(basis_size(k + l));
    s.c.assign(s.ni * s.nj * s.nt, 0);
    if (k == 0 || l == 0) {
      // unit: identity tensor
      for (std::size_t i = 0; i < s.ni; ++i)
        for (std::size_t j = 0; j < s.nj; ++j) {
          std::size_t t = (k == 0) ? j : i;
          s.at(i, j, t) = 1;
        }
      return s;
    }
    if (opt_.cache) {
      if (auto j = opt_.cache->load(slab_key(k, l))) {
        if (auto loaded = slab_from_json(k, l, *j)) return std::move(*loaded);
      }
    }
    const BlockPair& bp = block(k, l);
    const Level& big = level(k + l);
    parallel_for(opt_.jobs, s.ni * s.nj, [&](std::size_t pair) {
      std::size_t i = pair / s.nj, j = pair % s.nj;
      ClassFunction chi = bp.table.row_function(static_cast<int>(i * s.nj + j));
      ClassFunction ind = induce(*bp.sub, *big.grp, chi);
      auto coeffs = decompose(*big.grp, big.table, ind);
      for (std::size_t t = 0; t < s.nt; ++t) s.at(i, j, t) = coeffs[t];
    });
    if (opt_.cache) opt_.cache->store(slab_key(k, l), slab_to_json(s));
    return s;
  }

  RestrictionSlab compute_restriction_slab(int k, int l) {
    if (k < 1 || l < 1) throw UsageError("restriction slab needs positive degrees");
    RestrictionSlab s;
    s.k = k;
    s.l = l;
    s.nt = static_cast<std::size_t>(basis_size(k + l));
    s.ni = static_cast<std::size_t>(basis_size(k));
    s.nj = static_cast<std::size_t>(basis_size(l));
    s.d.assign(s.nt * s.ni * s.nj, 0);
    const BlockPair& bp = block(k, l);
    const Level& big = level(k + l);
    parallel_for(opt_.jobs, s.nt, [&](std::size_t t) {
      ClassFunction chi = big.table.row_function(static_cast<int>(t));
      ClassFunction res = restrict_to(*bp.sub, *big.grp, chi);
      auto coeffs = decompose(*bp.sub, bp.table, res);
      for (std::size_t i = 0; i < s.ni; ++i)
        for (std::size_t j = 0; j < s.nj; ++j) s.at(t, i, j) = coeffs[i * s.nj + j];
    });
    return s;
  }
};

using TowerContextPtr = std::shared_ptr<TowerContext>;

}  // namespace rwreath
