#pragma once

// Machine verification of the tower-map and bialgebra laws: runs every
// invariant of the tower apparatus over a (G,H) pair and collects
// structured pass/fail results with witnesses. Failures never abort the
// suite; they are data.

#include "rwreath/towermaps.hpp"

#include <functional>
#include <iostream>
#include <string>
#include <vector>

namespace rwreath {

struct CheckResult {
  std::string id;
  Json params = Json::object();
  long long checked = 0;
  bool pass = true;
  Json witnesses = Json::array();
};

struct TowerMapReport {
  Json group;
  int n_max = 0;
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  long long total_assertions() const {
    long long n = 0;
    for (const auto& c : checks) n += c.checked;
    return n;
  }

  Json to_json() const {
    Json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = "verification_report";
    j["group"] = group;
    j["n_max"] = n_max;
    j["all_pass"] = all_pass();
    Json arr = Json::array();
    long long failed = 0;
    for (const auto& c : checks) {
      Json e;
      e["id"] = c.id;
      e["params"] = c.params;
      e["checked"] = c.checked;
      e["pass"] = c.pass;
      e["witnesses"] = c.witnesses;
      arr.push_back(std::move(e));
      if (!c.pass) ++failed;
    }
    j["summary"] = Json{{"checks", checks.size()}, {"failed", failed},
                        {"assertions", total_assertions()}};
    j["checks"] = std::move(arr);
    return j;
  }

  void print_summary(std::ostream& out) const {
    for (const auto& c : checks) {
      out << (c.pass ? "PASS " : "FAIL ") << c.id;
      if (!c.params.empty()) out << " " << c.params.dump();
      out << " (" << c.checked << " assertions)";
      if (!c.pass && !c.witnesses.empty()) out << " witness: " << c.witnesses[0].dump();
      out << "\n";
    }
  }
};

class Verifier {
 public:
  explicit Verifier(TowerMaps& maps) : maps_(maps) { begin(); }

  void begin() {
    report_ = TowerMapReport{};
    report_.group = maps_.target().descriptor_json();
    report_.n_max = maps_.target().n_max();
  }

  TowerMapReport take() { return std::move(report_); }

  // Sections, runnable independently. Each covers both towers where the
  // law in question lives on a plain context.
  void tables() {
    for (bool source : {false, true}) check_tables(source);
  }
  void bialgebra() {
    for (bool source : {false, true}) check_bialgebra(source);
  }
  void operator_laws() {
    check_twists();
    check_inflation();
    check_phi_l_maps();
    check_phi_l_images();
    check_psi_l();
  }
  void tensor_power_laws() { check_tensor_power(); }
  void adjoint_map_laws() {
    check_psi_positive();
    if (maps_.target().subgroup().is_full()) check_full_wreath_bijection();
  }

  TowerMapReport run() {
    begin();
    // character-table exactness first: it is the corruption detector for
    // cache-loaded tables and everything downstream depends on it
    tables();
    bialgebra();
    operator_laws();
    tensor_power_laws();
    adjoint_map_laws();
    return take();
  }

 private:
  TowerMaps& maps_;
  TowerMapReport report_;

  static constexpr int kMaxWitnesses = 5;

  TowerContext& side(bool source) { return source ? maps_.source() : maps_.target(); }

  static Json side_params(bool source) {
    return Json{{"tower", source ? "R(G/H,1)" : "R(G,H)"}};
  }

  void guarded(const std::string& id, Json params,
               const std::function<void(CheckResult&)>& body) {
    CheckResult res;
    res.id = id;
    res.params = std::move(params);
    try {
      body(res);
    } catch (const std::exception& e) {
      res.pass = false;
      res.witnesses.push_back(Json{{"error", e.what()}});
    }
    report_.checks.push_back(std::move(res));
  }

  static void expect(CheckResult& res, bool ok, const std::function<Json()>& witness) {
    ++res.checked;
    if (!ok) {
      res.pass = false;
      if (res.witnesses.size() < kMaxWitnesses) res.witnesses.push_back(witness());
    }
  }

  int bialgebra_cap(TowerContext& ctx) const { return std::min(ctx.n_max(), 3); }
  int map_cap() const { return std::min(maps_.target().n_max(), 2); }

  void check_tables(bool source) {
    TowerContext& ctx = side(source);
    guarded("chartab.row_orthogonality", side_params(source), [&](CheckResult& res) {
      for (int n = 0; n <= ctx.n_max(); ++n) {
        const CharacterTable& t = ctx.table(n);
        const RestrictedWreathGroup& w = ctx.wreath(n);
        for (int i = 0; i < t.row_count(); ++i)
          for (int j = i; j < t.row_count(); ++j) {
            Rational got;
            bool rational = true;
            try {
              got = inner_product(w, t.row_function(i), t.row_function(j));
            } catch (const std::exception&) {
              rational = false;
            }
            Rational want = i == j ? Rational(1) : Rational(0);
            expect(res, rational && got == want, [&] {
              return Json{{"degree", n}, {"i", i}, {"j", j},
                          {"value", rational ? format_rational(got) : "irrational"}};
            });
          }
      }
    });
    guarded("chartab.degree_identity", side_params(source), [&](CheckResult& res) {
      for (int n = 0; n <= ctx.n_max(); ++n) {
        const CharacterTable& t = ctx.table(n);
        long long order = ctx.wreath(n).order();
        long long sum = 0;
        bool divides = true;
        for (int i = 0; i < t.row_count(); ++i) {
          long long d = t.degree(i);
          if (d <= 0 || order % d != 0) divides = false;
          sum += d * d;
        }
        expect(res, sum == order && t.row_count() == ctx.wreath(n).class_count() && divides,
               [&] {
                 return Json{{"degree", n}, {"sum_of_squares", sum}, {"order", order},
                             {"rows", t.row_count()}};
               });
      }
    });
    guarded("chartab.column_orthogonality", side_params(source), [&](CheckResult& res) {
      for (int n = 0; n <= ctx.n_max(); ++n) {
        const CharacterTable& t = ctx.table(n);
        for (int c1 = 0; c1 < t.class_count(); ++c1)
          for (int c2 = c1; c2 < t.class_count(); ++c2) {
            Cyclotomic acc(t.conductor());
            for (int i = 0; i < t.row_count(); ++i)
              acc += t.value(i, c1) * t.value(i, c2).conj();
            auto q = acc.as_rational();
            Rational want =
                c1 == c2 ? Rational(t.group_order(), t.class_size(c1)) : Rational(0);
            expect(res, q.has_value() && *q == want, [&] {
              return Json{{"degree", n}, {"c1", c1}, {"c2", c2}};
            });
          }
      }
    });
    guarded("chartab.class_partition", side_params(source), [&](CheckResult& res) {
      for (int n = 0; n <= ctx.n_max(); ++n) {
        const RestrictedWreathGroup& w = ctx.wreath(n);
        long long total = 0;
        for (int c = 0; c < w.class_count(); ++c) total += w.class_size(c);
        expect(res, total == w.order(),
               [&] { return Json{{"degree", n}, {"class_size_sum", total}}; });
      }
    });
  }

  void check_bialgebra(bool source) {
    TowerContext& ctx = side(source);
    const int cap = bialgebra_cap(ctx);

    guarded("bialgebra.unit_counit", side_params(source), [&](CheckResult& res) {
      for (int n = 0; n <= cap; ++n)
        for (int i = 0; i < ctx.basis_size(n); ++i) {
          GradedVector e = ctx.basis_vector(n, i);
          expect(res, ctx.product(GradedVector::unit(), e) == e &&
                          ctx.product(e, GradedVector::unit()) == e,
                 [&] { return Json{{"degree", n}, {"index", i}, {"law", "unit"}}; });
          TensorVector d = ctx.coproduct(e);
          bool counit = n == 0
              ? d.coeff({BasisKey{0, 0}, BasisKey{0, 0}}) == 1
              : d.coeff({BasisKey{0, 0}, BasisKey{n, i}}) == 1 &&
                    d.coeff({BasisKey{n, i}, BasisKey{0, 0}}) == 1;
          expect(res, counit,
                 [&] { return Json{{"degree", n}, {"index", i}, {"law", "counit"}}; });
        }
    });

    guarded("bialgebra.commutativity", side_params(source), [&](CheckResult& res) {
      for (int k = 1; k < cap; ++k)
        for (int l = 1; k + l <= cap; ++l) {
          const StructureSlab& s = ctx.slab(k, l);
          const StructureSlab& swapped = ctx.slab(l, k);
          for (std::size_t i = 0; i < s.ni; ++i)
            for (std::size_t j = 0; j < s.nj; ++j)
              for (std::size_t t = 0; t < s.nt; ++t)
                expect(res, s.at(i, j, t) == swapped.at(j, i, t), [&] {
                  return Json{{"k", k}, {"l", l}, {"i", i}, {"j", j}, {"t", t}};
                });
        }
    });

    guarded("bialgebra.cocommutativity", side_params(source), [&](CheckResult& res) {
      for (int n = 1; n <= cap; ++n)
        for (int i = 0; i < ctx.basis_size(n); ++i) {
          TensorVector d = ctx.coproduct(ctx.basis_vector(n, i));
          for (const auto& [key, v] : d.coeffs())
            expect(res, d.coeff({key.second, key.first}) == v, [&] {
              return Json{{"degree", n}, {"index", i}};
            });
        }
    });

    guarded("bialgebra.associativity", side_params(source), [&](CheckResult& res) {
      for (int k1 = 1; k1 <= cap - 2; ++k1)
        for (int k2 = 1; k1 + k2 <= cap - 1; ++k2)
          for (int k3 = 1; k1 + k2 + k3 <= cap; ++k3)
            for (int i = 0; i < ctx.basis_size(k1); ++i)
              for (int j = 0; j < ctx.basis_size(k2); ++j)
                for (int k = 0; k < ctx.basis_size(k3); ++k) {
                  GradedVector a = ctx.basis_vector(k1, i);
                  GradedVector b = ctx.basis_vector(k2, j);
                  GradedVector c = ctx.basis_vector(k3, k);
                  expect(res,
                         ctx.product(ctx.product(a, b), c) == ctx.product(a, ctx.product(b, c)),
                         [&] {
                           return Json{{"degrees", Json::array({k1, k2, k3})},
                                       {"indices", Json::array({i, j, k})}};
                         });
                }
    });

    guarded("bialgebra.coassociativity", side_params(source), [&](CheckResult& res) {
      auto expand = [&](const GradedVector& v, bool left) {
        std::map<std::vector<BasisKey>, long long> out;
        TensorVector first = ctx.coproduct(v);
        for (const auto& [pair, c1] : first.coeffs()) {
          const BasisKey& e = left ? pair.first : pair.second;
          const BasisKey& keep = left ? pair.second : pair.first;
          TensorVector second = ctx.coproduct(GradedVector::basis(e.degree, e.index));
          for (const auto& [pair2, c2] : second.coeffs()) {
            std::vector<BasisKey> key =
                left ? std::vector<BasisKey>{pair2.first, pair2.second, keep}
                     : std::vector<BasisKey>{keep, pair2.first, pair2.second};
            out[key] += c1 * c2;
          }
        }
        return out;
      };
      for (int n = 0; n <= cap; ++n)
        for (int i = 0; i < ctx.basis_size(n); ++i) {
          GradedVector v = ctx.basis_vector(n, i);
          expect(res, expand(v, true) == expand(v, false),
                 [&] { return Json{{"degree", n}, {"index", i}}; });
        }
    });

    guarded("bialgebra.adjointness", side_params(source), [&](CheckResult& res) {
      for (int k = 1; k < cap; ++k)
        for (int l = 1; k + l <= cap; ++l)
          for (int i = 0; i < ctx.basis_size(k); ++i)
            for (int j = 0; j < ctx.basis_size(l); ++j) {
              GradedVector ab = ctx.product(ctx.basis_vector(k, i), ctx.basis_vector(l, j));
              for (int t = 0; t < ctx.basis_size(k + l); ++t) {
                long long lhs = ctx.pairing(ab, ctx.basis_vector(k + l, t));
                long long rhs =
                    ctx.coproduct(ctx.basis_vector(k + l, t)).coeff({BasisKey{k, i},
                                                                     BasisKey{l, j}});
                expect(res, lhs == rhs, [&] {
                  return Json{{"k", k}, {"l", l}, {"i", i}, {"j", j}, {"t", t},
                              {"lhs", lhs}, {"rhs", rhs}};
                });
              }
            }
    });

    guarded("bialgebra.positivity", side_params(source), [&](CheckResult& res) {
      for (int k = 1; k < cap; ++k)
        for (int l = 1; k + l <= cap; ++l) {
          const StructureSlab& s = ctx.slab(k, l);
          for (std::size_t i = 0; i < s.ni; ++i)
            for (std::size_t j = 0; j < s.nj; ++j) {
              bool nonneg = true, nonzero = false;
              for (std::size_t t = 0; t < s.nt; ++t) {
                if (s.at(i, j, t) < 0) nonneg = false;
                if (s.at(i, j, t) != 0) nonzero = true;
              }
              expect(res, nonneg && nonzero,
                     [&] { return Json{{"k", k}, {"l", l}, {"i", i}, {"j", j}}; });
            }
        }
      for (int n = 1; n <= cap; ++n)
        for (int i = 0; i < ctx.basis_size(n); ++i) {
          TensorVector d = ctx.coproduct(ctx.basis_vector(n, i));
          expect(res, d.nonnegative() && !d.is_zero(),
                 [&] { return Json{{"degree", n}, {"index", i}}; });
        }
    });

    guarded("bialgebra.grading", side_params(source), [&](CheckResult& res) {
      for (int k = 1; k < cap; ++k)
        for (int l = 1; k + l <= cap; ++l)
          for (int i = 0; i < ctx.basis_size(k); ++i)
            for (int j = 0; j < ctx.basis_size(l); ++j) {
              GradedVector ab = ctx.product(ctx.basis_vector(k, i), ctx.basis_vector(l, j));
              expect(res, ab.homogeneous_of_degree(k + l),
                     [&] { return Json{{"k", k}, {"l", l}, {"i", i}, {"j", j}}; });
            }
      for (int n = 1; n <= cap; ++n)
        for (int i = 0; i < ctx.basis_size(n); ++i) {
          TensorVector d = ctx.coproduct(ctx.basis_vector(n, i));
          bool graded = true;
          for (const auto& [key, v] : d.coeffs())
            graded = graded && key.first.degree + key.second.degree == n;
          expect(res, graded, [&] { return Json{{"degree", n}, {"index", i}}; });
        }
    });
  }

  // twists a tensor vector componentwise (for the coalgebra-map law)
  TensorVector twist_tensor(int l, const TensorVector& t) {
    TensorVector out;
    for (const auto& [key, v] : t.coeffs()) {
      BasisKey a{key.first.degree,
                 maps_.twist_permutation(l, key.first.degree)[key.first.index]};
      BasisKey b{key.second.degree,
                 maps_.twist_permutation(l, key.second.degree)[key.second.index]};
      out.add_to({a, b}, v);
    }
    return out;
  }

  void check_twists() {
    TowerContext& tgt = maps_.target();
    const int cap = map_cap();
    const int hs = static_cast<int>(maps_.hstar_size());

    guarded("tau.trivial_identity", {}, [&](CheckResult& res) {
      for (int n = 0; n <= tgt.n_max(); ++n)
        for (int i = 0; i < tgt.basis_size(n); ++i) {
          GradedVector e = tgt.basis_vector(n, i);
          expect(res, maps_.twist(0, e) == e,
                 [&] { return Json{{"degree", n}, {"index", i}}; });
        }
    });

    guarded("tau.group_action", {}, [&](CheckResult& res) {
      for (int l = 0; l < hs; ++l)
        for (int lp = 0; lp < hs; ++lp) {
          int prod = maps_.hstar_product_index(l, lp);
          for (int n = 0; n <= cap; ++n)
            for (int i = 0; i < tgt.basis_size(n); ++i) {
              GradedVector e = tgt.basis_vector(n, i);
              expect(res, maps_.twist(l, maps_.twist(lp, e)) == maps_.twist(prod, e), [&] {
                return Json{{"l", l}, {"l'", lp}, {"degree", n}, {"index", i}};
              });
            }
        }
    });

    guarded("tau.orthogonal", {}, [&](CheckResult& res) {
      for (int l = 0; l < hs; ++l)
        for (int n = 0; n <= cap; ++n)
          for (int i = 0; i < tgt.basis_size(n); ++i)
            for (int j = 0; j < tgt.basis_size(n); ++j) {
              long long lhs = tgt.pairing(maps_.twist(l, tgt.basis_vector(n, i)),
                                          maps_.twist(l, tgt.basis_vector(n, j)));
              expect(res, lhs == (i == j ? 1 : 0),
                     [&] { return Json{{"l", l}, {"degree", n}, {"i", i}, {"j", j}}; });
            }
    });

    guarded("tau.adjoint_inverse", {}, [&](CheckResult& res) {
      for (int l = 0; l < hs; ++l) {
        int linv = maps_.hstar_inverse_index(l);
        for (int n = 0; n <= cap; ++n)
          for (int i = 0; i < tgt.basis_size(n); ++i)
            for (int j = 0; j < tgt.basis_size(n); ++j) {
              long long lhs = tgt.pairing(maps_.twist(l, tgt.basis_vector(n, i)),
                                          tgt.basis_vector(n, j));
              long long rhs = tgt.pairing(tgt.basis_vector(n, i),
                                          maps_.twist(linv, tgt.basis_vector(n, j)));
              expect(res, lhs == rhs,
                     [&] { return Json{{"l", l}, {"degree", n}, {"i", i}, {"j", j}}; });
            }
      }
    });

    guarded("tau.algebra_map", {}, [&](CheckResult& res) {
      // degree-(1,1) and, when the tower is deep enough, degree-(1,2)
      for (int l = 0; l < hs; ++l)
        for (int k2 = 1; 1 + k2 <= std::min(tgt.n_max(), 3); ++k2)
          for (int i = 0; i < tgt.basis_size(1); ++i)
            for (int j = 0; j < tgt.basis_size(k2); ++j) {
              GradedVector a = tgt.basis_vector(1, i);
              GradedVector b = tgt.basis_vector(k2, j);
              expect(res,
                     maps_.twist(l, tgt.product(a, b)) ==
                         tgt.product(maps_.twist(l, a), maps_.twist(l, b)),
                     [&] {
                       return Json{{"l", l}, {"k2", k2}, {"i", i}, {"j", j}};
                     });
            }
    });

    guarded("tau.coalgebra_map", {}, [&](CheckResult& res) {
      for (int l = 0; l < hs; ++l)
        for (int n = 1; n <= cap; ++n)
          for (int i = 0; i < tgt.basis_size(n); ++i) {
            TensorVector lhs = tgt.coproduct(maps_.twist(l, tgt.basis_vector(n, i)));
            TensorVector rhs = twist_tensor(l, tgt.coproduct(tgt.basis_vector(n, i)));
            expect(res, lhs == rhs,
                   [&] { return Json{{"l", l}, {"degree", n}, {"index", i}}; });
          }
    });
  }

  void check_inflation() {
    TowerContext& tgt = maps_.target();
    TowerContext& src = maps_.source();
    const int cap = map_cap();

    guarded("phi_star.pullback_definition", {}, [&](CheckResult& res) {
      for (int n = 1; n <= tgt.n_max(); ++n) {
        const auto& infl = maps_.inflation_map(n);
        const CharacterTable& ts = src.table(n);
        const CharacterTable& tt = tgt.table(n);
        for (int j = 0; j < ts.row_count(); ++j)
          for (int c = 0; c < tt.class_count(); ++c) {
            WreathElement reduced =
                reduce_colors(maps_.quotient_map(), tgt.wreath(n).class_rep(c));
            int sc = src.wreath(n).class_of_element(reduced);
            expect(res, sc >= 0 && tt.value(infl[j], c) == ts.value(j, sc), [&] {
              return Json{{"degree", n}, {"irr", j}, {"class", c}};
            });
          }
      }
    });

    guarded("phi_star.distinct_irreducibles", {}, [&](CheckResult& res) {
      for (int n = 0; n <= tgt.n_max(); ++n) {
        const auto& infl = maps_.inflation_map(n);
        std::set<int> image(infl.begin(), infl.end());
        expect(res, image.size() == infl.size(),
               [&] { return Json{{"degree", n}}; });
      }
    });

    guarded("phi_star.algebra_map", {}, [&](CheckResult& res) {
      // degree-(1,1) and, when the tower is deep enough, degree-(1,2)
      for (int k2 = 1; 1 + k2 <= std::min(tgt.n_max(), 3); ++k2)
        for (int i = 0; i < src.basis_size(1); ++i)
          for (int j = 0; j < src.basis_size(k2); ++j) {
            GradedVector a = src.basis_vector(1, i), b = src.basis_vector(k2, j);
            expect(res,
                   maps_.inflate(src.product(a, b)) ==
                       tgt.product(maps_.inflate(a), maps_.inflate(b)),
                   [&] {
                     return Json{{"k2", k2}, {"i", i}, {"j", j}};
                   });
          }
    });

    guarded("phi_star.coalgebra_map", {}, [&](CheckResult& res) {
      for (int n = 1; n <= cap; ++n)
        for (int j = 0; j < src.basis_size(n); ++j) {
          TensorVector lhs = tgt.coproduct(maps_.inflate(src.basis_vector(n, j)));
          TensorVector rhs;
          TensorVector split = src.coproduct(src.basis_vector(n, j));
          for (const auto& [key, v] : split.coeffs()) {
            BasisKey a{key.first.degree, maps_.inflation_map(key.first.degree)[key.first.index]};
            BasisKey b{key.second.degree,
                       maps_.inflation_map(key.second.degree)[key.second.index]};
            rhs.add_to({a, b}, v);
          }
          expect(res, lhs == rhs, [&] { return Json{{"degree", n}, {"irr", j}}; });
        }
    });
  }

  void check_phi_l_maps() {
    TowerContext& tgt = maps_.target();
    TowerContext& src = maps_.source();
    const int hs = static_cast<int>(maps_.hstar_size());

    guarded("phi_l.irreducible_to_irreducible", {}, [&](CheckResult& res) {
      for (int l = 0; l < hs; ++l)
        for (int n = 0; n <= tgt.n_max(); ++n) {
          const auto& map = maps_.phi_basis_map(l, n);
          std::set<int> image(map.begin(), map.end());
          expect(res, image.size() == map.size(), [&] {
            return Json{{"l", l}, {"degree", n}, {"reason", "not injective"}};
          });
          for (int j = 0; j < src.basis_size(n); ++j) {
            GradedVector img = maps_.phi_l(l, src.basis_vector(n, j));
            expect(res,
                   img.coeffs().size() == 1 && img.coeffs().begin()->second == 1 &&
                       img.coeffs().begin()->first == BasisKey{n, map[j]},
                   [&] { return Json{{"l", l}, {"degree", n}, {"irr", j}}; });
          }
        }
    });

    guarded("phi_l.algebra_map", {}, [&](CheckResult& res) {
      // exhaustive degree-(1,1) and degree-(1,2) inputs
      for (int l = 0; l < hs; ++l)
        for (int k2 = 1; 1 + k2 <= std::min(tgt.n_max(), 3); ++k2)
          for (int i = 0; i < src.basis_size(1); ++i)
            for (int j = 0; j < src.basis_size(k2); ++j) {
              GradedVector a = src.basis_vector(1, i), b = src.basis_vector(k2, j);
              expect(res,
                     maps_.phi_l(l, src.product(a, b)) ==
                         tgt.product(maps_.phi_l(l, a), maps_.phi_l(l, b)),
                     [&] {
                       return Json{{"l", l}, {"k2", k2}, {"i", i}, {"j", j}};
                     });
            }
    });

    guarded("phi_l.coalgebra_map", {}, [&](CheckResult& res) {
      for (int l = 0; l < hs; ++l)
        for (int n = 1; n <= map_cap(); ++n)
          for (int j = 0; j < src.basis_size(n); ++j) {
            TensorVector lhs = tgt.coproduct(maps_.phi_l(l, src.basis_vector(n, j)));
            TensorVector rhs;
            TensorVector split = src.coproduct(src.basis_vector(n, j));
            for (const auto& [key, v] : split.coeffs()) {
              BasisKey a{key.first.degree,
                         maps_.phi_basis_map(l, key.first.degree)[key.first.index]};
              BasisKey b{key.second.degree,
                         maps_.phi_basis_map(l, key.second.degree)[key.second.index]};
              rhs.add_to({a, b}, v);
            }
            expect(res, lhs == rhs, [&] { return Json{{"l", l}, {"degree", n}, {"irr", j}}; });
          }
    });
  }

  void check_phi_l_images() {
    TowerContext& tgt = maps_.target();
    const int hs = static_cast<int>(maps_.hstar_size());

    guarded("phi_l.image_characterization", {}, [&](CheckResult& res) {
      for (int l = 0; l < hs; ++l)
        for (int n = 1; n <= tgt.n_max(); ++n) {
          const auto& inv = maps_.phi_basis_inverse(l, n);
          for (int i = 0; i < tgt.basis_size(n); ++i) {
            long long mult = maps_.isotypic_multiplicity(l, n, i);
            bool in_image = inv[i] >= 0;
            bool ok = (mult > 0) == in_image && (!in_image || mult == tgt.table(n).degree(i));
            expect(res, ok, [&] {
              return Json{{"l", l}, {"degree", n}, {"irr", i}, {"multiplicity", mult},
                          {"in_image", in_image}};
            });
          }
        }
    });

    guarded("phi_l.orthogonal_images", {}, [&](CheckResult& res) {
      for (int l = 0; l < hs; ++l)
        for (int lp = l + 1; lp < hs; ++lp)
          for (int n = 1; n <= tgt.n_max(); ++n) {
            const auto& ml = maps_.phi_basis_map(l, n);
            const auto& mlp = maps_.phi_basis_map(lp, n);
            bool disjoint = true;
            for (int x : ml)
              for (int y : mlp)
                if (x == y) disjoint = false;
            expect(res, disjoint, [&] { return Json{{"l", l}, {"l'", lp}, {"degree", n}}; });
          }
    });
  }

  void check_psi_l() {
    TowerContext& tgt = maps_.target();
    TowerContext& src = maps_.source();
    const int hs = static_cast<int>(maps_.hstar_size());

    guarded("psi_l.left_inverse", {}, [&](CheckResult& res) {
      for (int l = 0; l < hs; ++l)
        for (int n = 0; n <= tgt.n_max(); ++n)
          for (int j = 0; j < src.basis_size(n); ++j) {
            GradedVector x = src.basis_vector(n, j);
            expect(res, maps_.psi_l(l, maps_.phi_l(l, x)) == x,
                   [&] { return Json{{"l", l}, {"degree", n}, {"irr", j}}; });
          }
    });

    guarded("psi_l.orthogonal_projection", {}, [&](CheckResult& res) {
      for (int l = 0; l < hs; ++l)
        for (int n = 0; n <= tgt.n_max(); ++n)
          for (int i = 0; i < tgt.basis_size(n); ++i) {
            GradedVector a = tgt.basis_vector(n, i);
            GradedVector proj = maps_.phi_l(l, maps_.psi_l(l, a));
            bool idempotent = maps_.phi_l(l, maps_.psi_l(l, proj)) == proj;
            bool orthogonal = tgt.pairing(a - proj, proj) == 0;
            expect(res, idempotent && orthogonal,
                   [&] { return Json{{"l", l}, {"degree", n}, {"irr", i}}; });
          }
    });

    guarded("psi_l.kills_other_images", {}, [&](CheckResult& res) {
      for (int l = 0; l < hs; ++l)
        for (int lp = 0; lp < hs; ++lp) {
          if (l == lp) continue;
          for (int n = 1; n <= tgt.n_max(); ++n)
            for (int j = 0; j < src.basis_size(n); ++j) {
              GradedVector image = maps_.phi_l(lp, src.basis_vector(n, j));
              expect(res, maps_.psi_l(l, image).is_zero(), [&] {
                return Json{{"l", l}, {"l'", lp}, {"degree", n}, {"irr", j}};
              });
            }
        }
    });
  }

  void check_tensor_power() {
    TowerContext& tgt = maps_.target();
    const std::size_t hs = maps_.hstar_size();
    const long long index = tgt.subgroup().index();

    guarded("tensor_power.norm_formula", {}, [&](CheckResult& res) {
      struct Labeled {
        LambdaTuple lambda;
        std::vector<int> factors;
      };
      std::vector<Labeled> tuples;
      for (int n = 0; n <= tgt.n_max(); ++n)
        for (const auto& lambda : lambda_tuples(hs, n))
          for (const auto& factors : maps_.factor_tuples(lambda))
            tuples.push_back({lambda, factors});
      for (const auto& x : tuples)
        for (const auto& y : tuples) {
          long long got = tgt.pairing(maps_.big_phi_basis(x.lambda, x.factors),
                                      maps_.big_phi_basis(y.lambda, y.factors));
          long long want = 0;
          if (x.lambda == y.lambda && x.factors == y.factors) {
            want = 1;
            for (int t = 1; t < lambda_parts(x.lambda); ++t) want *= index;
          }
          expect(res, got == want, [&] {
            return Json{{"lambda", x.lambda}, {"mu", y.lambda}, {"factors_left", x.factors},
                        {"factors_right", y.factors}, {"got", got}, {"want", want}};
          });
        }
    });

    guarded("tensor_power.diagonal_double_cosets", {}, [&](CheckResult& res) {
      for (int n = 1; n <= tgt.n_max(); ++n)
        for (const auto& lambda : lambda_tuples(hs, n)) {
          auto count = maps_.count_diagonal_double_cosets(lambda, lambda);
          long long want = 1;
          for (int t = 1; t < lambda_parts(lambda); ++t) want *= index;
          expect(res, count.with_diagonal == want, [&] {
            return Json{{"lambda", lambda}, {"got", count.with_diagonal}, {"want", want}};
          });
        }
    });

    guarded("tensor_power.weak_surjectivity", {}, [&](CheckResult& res) {
      for (int n = 0; n <= tgt.n_max(); ++n) {
        auto report = maps_.weak_surjectivity_scan(n);
        for (std::size_t i = 0; i < report.witness.size(); ++i)
          expect(res, report.witness[i].has_value(), [&] {
            return Json{{"degree", n}, {"irr", i},
                        {"reason", "no Phi image contains this irreducible"}};
          });
      }
    });
  }

  void check_psi_positive() {
    TowerContext& tgt = maps_.target();
    guarded("tensor_power.psi_positive", {}, [&](CheckResult& res) {
      for (int n = 0; n <= tgt.n_max(); ++n)
        for (int i = 0; i < tgt.basis_size(n); ++i) {
          auto psi = maps_.big_psi(tgt.basis_vector(n, i));
          bool nonneg = true;
          for (const auto& [key, v] : psi) nonneg = nonneg && v > 0;
          expect(res, !psi.empty() && nonneg,
                 [&] { return Json{{"degree", n}, {"irr", i}}; });
        }
    });
  }

  void check_full_wreath_bijection() {
    TowerContext& tgt = maps_.target();
    const std::size_t hs = maps_.hstar_size();
    guarded("tensor_power.full_wreath_bijection", {}, [&](CheckResult& res) {
      for (int n = 0; n <= tgt.n_max(); ++n) {
        std::set<BasisKey> hits;
        long long tuples = 0;
        for (const auto& lambda : lambda_tuples(hs, n)) {
          for (const auto& factors : maps_.factor_tuples(lambda)) {
            ++tuples;
            const GradedVector& image = maps_.big_phi_basis(lambda, factors);
            bool single = image.coeffs().size() == 1 && image.coeffs().begin()->second == 1;
            expect(res, single, [&] {
              return Json{{"lambda", lambda}, {"factors", factors},
                          {"reason", "image is not a single irreducible"}};
            });
            if (single) {
              hits.insert(image.coeffs().begin()->first);
              // Psi inverts Phi on this tuple
              auto psi = maps_.big_psi(image);
              std::vector<BasisKey> want(hs);
              for (std::size_t l = 0; l < hs; ++l) want[l] = BasisKey{lambda[l], factors[l]};
              expect(res, psi.size() == 1 && psi.begin()->first == want &&
                              psi.begin()->second == 1,
                     [&] {
                       return Json{{"lambda", lambda}, {"factors", factors},
                                   {"reason", "Psi does not invert Phi"}};
                     });
            }
          }
        }
        expect(res,
               static_cast<long long>(hits.size()) == tuples &&
                   tuples == tgt.basis_size(n),
               [&] {
                 return Json{{"degree", n}, {"tuples", tuples},
                             {"basis", tgt.basis_size(n)},
                             {"distinct_images", hits.size()}};
               });
      }
    });
  }
};

// Runs every invariant of the tower-map module and the bialgebra over the
// pair (R(G,H), R(G/H,1)); failures are collected, not thrown.
inline TowerMapReport full_verification(TowerMaps& maps) { return Verifier(maps).run(); }

}  // namespace rwreath
