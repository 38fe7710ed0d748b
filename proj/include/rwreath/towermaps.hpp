#pragma once

// The tower apparatus between R(G/H,1) and R(G,H): twists tau_l by linear
// characters of H (extended to G_n(G,H) through the color sum), inflation
// phi* along color reduction mod H, the maps Phi_l = tau_l . phi* and their
// adjoints Psi_l, the tensor-power map Phi and its adjoint Psi, diagonal
// double-coset counts, and the weak-surjectivity scan.

#include "rwreath/bialgebra.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace rwreath {

// A tuple of nonnegative integers indexed by H* in canonical order.
using LambdaTuple = std::vector<int>;

inline int lambda_weight(const LambdaTuple& t) {
  int n = 0;
  for (int x : t) n += x;
  return n;
}

// l(lambda): the number of nonzero parts.
inline int lambda_parts(const LambdaTuple& t) {
  int n = 0;
  for (int x : t)
    if (x > 0) ++n;
  return n;
}

// All tuples of the given length summing to total, lexicographic order.
inline std::vector<LambdaTuple> lambda_tuples(std::size_t length, int total) {
  std::vector<LambdaTuple> out;
  LambdaTuple cur(length, 0);
  auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos + 1 == length) {
      cur[pos] = remaining;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  if (length == 0) {
    if (total == 0) out.push_back({});
    return out;
  }
  rec(rec, 0, total);
  return out;
}

class TowerMaps {
 public:
  explicit TowerMaps(TowerContextPtr target) : target_(std::move(target)) {
    if (!target_) throw UsageError("tower maps need a target context");
    qmap_ = quotient(target_->group_ptr(), target_->subgroup());
    TowerOptions opt;
    opt.n_max = target_->n_max();
    opt.budget = target_->budget();
    opt.jobs = target_->jobs();
    opt.cache = target_->cache();
    source_ = std::make_shared<TowerContext>(
        qmap_.target_ptr(), AbelianSubgroup(qmap_.target_ptr(), {}), opt);
    hstar_ = dual_group(target_->subgroup());
  }

  TowerContext& target() { return *target_; }
  TowerContext& source() { return *source_; }
  TowerContextPtr target_ptr() { return target_; }
  TowerContextPtr source_ptr() { return source_; }
  const QuotientMap& quotient_map() const { return qmap_; }

  std::size_t hstar_size() const { return hstar_.size(); }
  const LinearCharacter& hstar(int l) const { return hstar_.at(l); }

  // Index of the product character l * l' in the canonical H* order.
  int hstar_product_index(int l, int lp) const { return (hstar_.at(l) * hstar_.at(lp)).index(); }
  int hstar_inverse_index(int l) const { return hstar_.at(l).inverse().index(); }

  // tau_l on basis elements of degree n: multiply each character pointwise
  // by the extension l~(v,s) = l(sum_i v_i); a permutation of the basis.
  const std::vector<int>& twist_permutation(int l, int n) {
    auto key = std::make_pair(l, n);
    auto it = twist_perm_.find(key);
    if (it != twist_perm_.end()) return it->second;
    std::vector<int> perm;
    if (n == 0) {
      perm = {0};
    } else {
      const CharacterTable& t = target_->table(n);
      const RestrictedWreathGroup& w = target_->wreath(n);
      const LinearCharacter& chi = hstar_.at(l);
      std::vector<Cyclotomic> twist_values;
      twist_values.reserve(t.class_count());
      for (int c = 0; c < t.class_count(); ++c) {
        int sum = color_sum(target_->group(), w.class_rep(c));
        twist_values.push_back(chi.value(sum).embedded(t.conductor()));
      }
      perm.resize(t.row_count());
      for (int i = 0; i < t.row_count(); ++i) {
        std::vector<Cyclotomic> twisted;
        twisted.reserve(t.class_count());
        for (int c = 0; c < t.class_count(); ++c) twisted.push_back(t.value(i, c) * twist_values[c]);
        int j = t.find_row(twisted);
        if (j < 0) throw InternalError("twist of an irreducible is not in the table");
        perm[i] = j;
      }
    }
    return twist_perm_.emplace(key, std::move(perm)).first->second;
  }

  GradedVector twist(int l, const GradedVector& a) {
    GradedVector out;
    for (const auto& [key, v] : a.coeffs())
      out.add_to(BasisKey{key.degree, twist_permutation(l, key.degree)[key.index]}, v);
    return out;
  }

  // phi* basis map at degree n: source irreducible -> target irreducible,
  // values pulled back along color reduction mod H.
  const std::vector<int>& inflation_map(int n) {
    auto it = inflation_.find(n);
    if (it != inflation_.end()) return it->second;
    std::vector<int> map;
    if (n == 0) {
      map = {0};
    } else {
      const CharacterTable& ts = source_->table(n);
      const CharacterTable& tt = target_->table(n);
      const RestrictedWreathGroup& ws = source_->wreath(n);
      const RestrictedWreathGroup& wt = target_->wreath(n);
      std::vector<int> class_map(tt.class_count());
      for (int c = 0; c < tt.class_count(); ++c) {
        int sc = ws.class_of_element(reduce_colors(qmap_, wt.class_rep(c)));
        if (sc < 0) throw InternalError("color reduction left the quotient tower");
        class_map[c] = sc;
      }
      map.resize(ts.row_count());
      for (int j = 0; j < ts.row_count(); ++j) {
        std::vector<Cyclotomic> pulled;
        pulled.reserve(tt.class_count());
        for (int c = 0; c < tt.class_count(); ++c)
          pulled.push_back(ts.value(j, class_map[c]).embedded(tt.conductor()));
        int i = tt.find_row(pulled);
        if (i < 0) throw InternalError("pullback of an irreducible is not in the table");
        map[j] = i;
      }
    }
    return inflation_.emplace(n, std::move(map)).first->second;
  }

  GradedVector inflate(const GradedVector& a) {
    GradedVector out;
    for (const auto& [key, v] : a.coeffs())
      out.add_to(BasisKey{key.degree, inflation_map(key.degree)[key.index]}, v);
    return out;
  }

  GradedVector phi_l(int l, const GradedVector& a) { return twist(l, inflate(a)); }

  // Basis image of Phi_l at degree n (injective), and its partial inverse.
  const std::vector<int>& phi_basis_map(int l, int n) {
    auto key = std::make_pair(l, n);
    auto it = phi_map_.find(key);
    if (it != phi_map_.end()) return it->second;
    const auto& infl = inflation_map(n);
    const auto& tw = twist_permutation(l, n);
    std::vector<int> map(infl.size());
    for (std::size_t j = 0; j < infl.size(); ++j) map[j] = tw[infl[j]];
    return phi_map_.emplace(key, std::move(map)).first->second;
  }

  // target irreducible -> source irreducible, or -1 outside the image.
  const std::vector<int>& phi_basis_inverse(int l, int n) {
    auto key = std::make_pair(l, n);
    auto it = phi_inv_.find(key);
    if (it != phi_inv_.end()) return it->second;
    const auto& map = phi_basis_map(l, n);
    std::vector<int> inv(static_cast<std::size_t>(target_->basis_size(n)), -1);
    for (std::size_t j = 0; j < map.size(); ++j) {
      if (inv[map[j]] >= 0) throw InternalError("Phi_l basis map is not injective");
      inv[map[j]] = static_cast<int>(j);
    }
    return phi_inv_.emplace(key, std::move(inv)).first->second;
  }

  // Pairing-adjoint of Phi_l: the coefficient of rho in Psi_l(pi) is
  // <pi, Phi_l(rho)>.
  GradedVector psi_l(int l, const GradedVector& a) {
    GradedVector out;
    for (const auto& [key, v] : a.coeffs()) {
      int j = phi_basis_inverse(l, key.degree)[key.index];
      if (j >= 0) out.add_to(BasisKey{key.degree, j}, v);
    }
    return out;
  }

  // Phi applied to one labeled basis tuple: factors[i] indexes an
  // irreducible of the source tower at degree lambda[i] (ignored when
  // lambda[i] = 0). Memoized; the product is taken in canonical H* order.
  const GradedVector& big_phi_basis(const LambdaTuple& lambda, const std::vector<int>& factors) {
    if (lambda.size() != hstar_.size() || factors.size() != hstar_.size())
      throw UsageError("lambda tuple must be indexed by H*");
    auto key = std::make_pair(lambda, factors);
    auto it = big_phi_.find(key);
    if (it != big_phi_.end()) return it->second;
    GradedVector acc = GradedVector::unit();
    for (std::size_t l = 0; l < hstar_.size(); ++l) {
      if (lambda[l] == 0) continue;
      GradedVector factor = phi_l(static_cast<int>(l),
                                  source_->basis_vector(lambda[l], factors[l]));
      acc = target_->product(acc, factor);
    }
    return big_phi_.emplace(std::move(key), std::move(acc)).first->second;
  }

  // Phi on a general per-l assignment of source vectors.
  GradedVector big_phi(const std::vector<GradedVector>& assignment) {
    if (assignment.size() != hstar_.size())
      throw UsageError("assignment must have one vector per element of H*");
    GradedVector acc = GradedVector::unit();
    for (std::size_t l = 0; l < hstar_.size(); ++l)
      acc = target_->product(acc, phi_l(static_cast<int>(l), assignment[l]));
    return acc;
  }

  // Psi = ((x)_l Psi_l) . m*^(|H*|): iterated coproduct into |H*| factors,
  // then Psi_l on the factor belonging to l. Coefficients indexed by tuples
  // of source basis keys in canonical H* order.
  using PsiTensor = std::map<std::vector<BasisKey>, long long>;

  PsiTensor big_psi(const GradedVector& a) {
    const std::size_t t = hstar_.size();
    std::map<std::vector<BasisKey>, long long> terms;
    for (const auto& [key, v] : a.coeffs()) terms[{key}] += v;
    // iterated coproduct: expand the last factor until t factors
    for (std::size_t len = 1; len < t; ++len) {
      std::map<std::vector<BasisKey>, long long> next;
      for (const auto& [tuple, v] : terms) {
        TensorVector split = target_->coproduct(GradedVector::basis(tuple.back().degree,
                                                                    tuple.back().index));
        for (const auto& [pair_key, c] : split.coeffs()) {
          std::vector<BasisKey> expanded(tuple.begin(), tuple.end() - 1);
          expanded.push_back(pair_key.first);
          expanded.push_back(pair_key.second);
          next[expanded] += v * c;
        }
      }
      terms = std::move(next);
    }
    PsiTensor out;
    for (const auto& [tuple, v] : terms) {
      if (v == 0) continue;
      std::vector<BasisKey> mapped(t);
      bool alive = true;
      for (std::size_t l = 0; l < t && alive; ++l) {
        int j = phi_basis_inverse(static_cast<int>(l), tuple[l].degree)[tuple[l].index];
        if (j < 0)
          alive = false;
        else
          mapped[l] = BasisKey{tuple[l].degree, j};
      }
      if (alive) {
        auto it = out.try_emplace(mapped, 0).first;
        it->second += v;
        if (it->second == 0) out.erase(it);
      }
    }
    return out;
  }

  // <Psi(a), (x)_l basis> convenience: coefficient lookup.
  static long long psi_coefficient(const PsiTensor& psi, const std::vector<BasisKey>& tuple) {
    auto it = psi.find(tuple);
    return it == psi.end() ? 0 : it->second;
  }

  struct DoubleCosetCount {
    long long total = 0;
    long long with_diagonal = 0;
  };

  // Enumerates G_lambda \ G_n / G_mu by orbit closure and counts the double
  // cosets containing a diagonal matrix (identity permutation).
  DoubleCosetCount count_diagonal_double_cosets(const LambdaTuple& lambda,
                                                const LambdaTuple& mu) {
    int n = lambda_weight(lambda);
    if (n != lambda_weight(mu)) throw UsageError("lambda and mu must have equal weight");
    DoubleCosetCount count;
    if (n == 0) {
      count.total = 1;
      count.with_diagonal = 1;
      return count;
    }
    auto block_of = [&](const LambdaTuple& t) {
      std::vector<WreathGroupPtr> factors;
      for (int part : t)
        if (part > 0) factors.push_back(target_->level(part).grp);
      return BlockSubgroup(std::move(factors));
    };
    BlockSubgroup left = block_of(lambda);
    BlockSubgroup right = block_of(mu);
    const RestrictedWreathGroup& big = target_->wreath(n);
    const FiniteAbelianGroup& g = target_->group();

    std::vector<char> visited(static_cast<std::size_t>(big.order()), 0);
    for (long long seed = 0; seed < big.order(); ++seed) {
      if (visited[static_cast<std::size_t>(seed)]) continue;
      ++count.total;
      bool diagonal = false;
      for (const auto& a : left.elements()) {
        WreathElement ag = wreath_mul(g, a, big.element(static_cast<int>(seed)));
        for (const auto& b : right.elements()) {
          WreathElement y = wreath_mul(g, ag, b);
          int idx = big.index_of(y);
          if (idx < 0) throw InternalError("double coset left the group");
          if (!visited[static_cast<std::size_t>(idx)]) {
            visited[static_cast<std::size_t>(idx)] = 1;
            if (y.has_identity_perm()) diagonal = true;
          }
        }
      }
      if (diagonal) ++count.with_diagonal;
    }
    return count;
  }

  // Multiplicity of l^{(x)n} in the restriction of the target irreducible to
  // the color subgroup H^n (the image-membership test for Phi_l).
  long long isotypic_multiplicity(int l, int n, int irr) {
    if (n == 0) return 1;
    const CharacterTable& t = target_->table(n);
    const RestrictedWreathGroup& w = target_->wreath(n);
    const LinearCharacter& chi = hstar_.at(l);
    const auto& helems = target_->subgroup().elements();
    const FiniteAbelianGroup& g = target_->group();
    long long m = lcm_ll(t.conductor(), chi.modulus());

    Cyclotomic acc(m);
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    long long count = 0;
    for (;;) {
      WreathElement e = wreath_identity(n);
      int sum = 0;
      for (int i = 0; i < n; ++i) {
        e.colors[i] = helems[idx[static_cast<std::size_t>(i)]];
        sum = g.add(sum, e.colors[i]);
      }
      int cls = w.class_of_element(e);
      if (cls < 0) throw InternalError("H^n element is not in the group");
      acc += t.value(irr, cls).embedded(m) * chi.value(sum).embedded(m).conj();
      ++count;
      std::size_t pos = idx.size();
      bool wrapped = true;
      for (; pos-- > 0;) {
        if (++idx[pos] < helems.size()) {
          wrapped = false;
          break;
        }
        idx[pos] = 0;
      }
      if (wrapped) break;
    }
    auto q = acc.as_rational();
    if (!q) throw InternalError("isotypic multiplicity is not rational");
    Rational mult = *q / Rational(count);
    if (!is_integer(mult)) throw InternalError("isotypic multiplicity is not integral");
    return to_ll(rat_num(mult));
  }

  // Factor index tuples compatible with lambda (index ranges over the
  // source basis at each nonzero part; -0 slots fixed to 0).
  std::vector<std::vector<int>> factor_tuples(const LambdaTuple& lambda) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(lambda.size(), 0);
    auto rec = [&](auto&& self, std::size_t pos) -> void {
      if (pos == lambda.size()) {
        out.push_back(cur);
        return;
      }
      if (lambda[pos] == 0) {
        cur[pos] = 0;
        self(self, pos + 1);
        return;
      }
      int count = source_->basis_size(lambda[pos]);
      for (int i = 0; i < count; ++i) {
        cur[pos] = i;
        self(self, pos + 1);
      }
    };
    rec(rec, 0);
    return out;
  }

  struct SurjectivityWitness {
    LambdaTuple lambda;
    std::vector<int> factors;
    long long multiplicity = 0;
  };

  struct SurjectivityReport {
    int degree = 0;
    std::vector<std::optional<SurjectivityWitness>> witness;  // per irreducible
    bool all_witnessed() const {
      for (const auto& w : witness)
        if (!w) return false;
      return true;
    }
  };

  // For every irreducible of G_n(G,H), scan all lambda with |lambda| = n and
  // all factor tuples for a Phi-image containing it.
  SurjectivityReport weak_surjectivity_scan(int n) {
    SurjectivityReport report;
    report.degree = n;
    report.witness.assign(static_cast<std::size_t>(target_->basis_size(n)), std::nullopt);
    for (const auto& lambda : lambda_tuples(hstar_.size(), n)) {
      for (const auto& factors : factor_tuples(lambda)) {
        const GradedVector& image = big_phi_basis(lambda, factors);
        for (const auto& [key, coeff] : image.coeffs()) {
          if (key.degree != n || coeff <= 0) continue;
          auto& slot = report.witness[static_cast<std::size_t>(key.index)];
          if (!slot) slot = SurjectivityWitness{lambda, factors, coeff};
        }
      }
    }
    return report;
  }

 private:
  TowerContextPtr target_;
  TowerContextPtr source_;
  QuotientMap qmap_;
  std::vector<LinearCharacter> hstar_;
  std::map<std::pair<int, int>, std::vector<int>> twist_perm_;
  std::map<int, std::vector<int>> inflation_;
  std::map<std::pair<int, int>, std::vector<int>> phi_map_;
  std::map<std::pair<int, int>, std::vector<int>> phi_inv_;
  std::map<std::pair<LambdaTuple, std::vector<int>>, GradedVector> big_phi_;
};

}  // namespace rwreath
