#include <catch2/catch_amalgamated.hpp>

#include "rwreath/abelian.hpp"
#include "rwreath/serialize.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

using namespace rwreath;

namespace {

FiniteAbelianGroupPtr make_group(std::vector<long long> factors) {
  return std::make_shared<FiniteAbelianGroup>(factors);
}

}  // namespace

TEST_CASE("invariant factor normalization") {
  FiniteAbelianGroup g({2, 3});  // Z/2 + Z/3 = Z/6
  REQUIRE(g.factors() == std::vector<long long>{6});
  FiniteAbelianGroup h({4, 2});
  REQUIRE(h.factors() == std::vector<long long>{2, 4});
  FiniteAbelianGroup t({1, 1});
  REQUIRE(t.is_trivial());
  REQUIRE(t.order() == 1);
  REQUIRE(t.exponent() == 1);
  REQUIRE_THROWS_AS(FiniteAbelianGroup({0}), UsageError);
}

TEST_CASE("element arithmetic and ordering") {
  FiniteAbelianGroup g({2, 4});
  REQUIRE(g.order() == 8);
  REQUIRE(g.exponent() == 4);
  // index order is lexicographic on residue vectors
  REQUIRE(g.encode({0, 0}) == 0);
  REQUIRE(g.encode({0, 3}) == 3);
  REQUIRE(g.encode({1, 0}) == 4);
  REQUIRE(g.decode(5) == std::vector<long long>{1, 1});
  REQUIRE(g.add(g.encode({1, 3}), g.encode({1, 2})) == g.encode({0, 1}));
  REQUIRE(g.neg(g.encode({1, 1})) == g.encode({1, 3}));
  REQUIRE(g.order_of(g.encode({0, 2})) == 2);
  REQUIRE(g.order_of(g.encode({1, 1})) == 4);
  REQUIRE_THROWS_AS(g.encode({1}), UsageError);
}

TEST_CASE("subgroup from generators: pinned examples") {
  auto z4 = make_group({4});
  AbelianSubgroup h = subgroup_from_generators(z4, {z4->encode({2})});
  REQUIRE(h.elements() == std::vector<int>{0, 2});
  REQUIRE(h.index() == 2);
  REQUIRE(h.invariant_factors() == std::vector<long long>{2});

  auto z6 = make_group({6});
  AbelianSubgroup trivial = subgroup_from_generators(z6, {});
  REQUIRE(trivial.order() == 1);
  REQUIRE(trivial.index() == 6);

  auto klein = make_group({2, 2});
  AbelianSubgroup diag = subgroup_from_generators(klein, {klein->encode({1, 1})});
  REQUIRE(diag.order() == 2);
  REQUIRE(diag.index() == 2);

  REQUIRE_THROWS_AS(subgroup_from_generators(z4, {17}), UsageError);
}

TEST_CASE("subgroup invariant factors agree with a brute-force structure scan") {
  auto g = make_group({2, 4});
  // H = <(1,2)> has order 2? (1,2)+(1,2) = (0,0): yes, order 2.
  AbelianSubgroup h1 = subgroup_from_generators(g, {g->encode({1, 2})});
  REQUIRE(h1.order() == 2);
  REQUIRE(h1.invariant_factors() == std::vector<long long>{2});
  // H = <(0,1)> is cyclic of order 4
  AbelianSubgroup h2 = subgroup_from_generators(g, {g->encode({0, 1})});
  REQUIRE(h2.invariant_factors() == std::vector<long long>{4});
  // H = <(1,0),(0,2)> is Z/2 + Z/2
  AbelianSubgroup h3 = subgroup_from_generators(g, {g->encode({1, 0}), g->encode({0, 2})});
  REQUIRE(h3.order() == 4);
  REQUIRE(h3.invariant_factors() == std::vector<long long>{2, 2});
  // oracle: count solutions of 2x = 0 inside the closure
  int involutions = 0;
  for (int x : h3.elements())
    if (g->add(x, x) == 0) ++involutions;
  REQUIRE(involutions == 4);  // rules out Z/4
}

TEST_CASE("quotient maps: pinned examples and kernel exactness") {
  auto z4 = make_group({4});
  AbelianSubgroup h = subgroup_from_generators(z4, {z4->encode({2})});
  QuotientMap q = quotient(z4, h);
  REQUIRE(q.target().factors() == std::vector<long long>{2});
  for (int x = 0; x < 4; ++x) REQUIRE((q.map(x) == 0) == h.contains(x));

  AbelianSubgroup full = full_subgroup(z4);
  QuotientMap qf = quotient(z4, full);
  REQUIRE(qf.target().is_trivial());

  // homomorphism property, exhaustive
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      REQUIRE(q.map(z4->add(a, b)) == q.target().add(q.map(a), q.map(b)));
}

TEST_CASE("quotient of Z/2+Z/4 by <(0,2)> is the Klein group") {
  auto g = make_group({2, 4});
  AbelianSubgroup h = subgroup_from_generators(g, {g->encode({0, 2})});
  QuotientMap q = quotient(g, h);

  // Oracle: enumerate cosets by brute force and inspect coset arithmetic.
  std::set<std::set<int>> cosets;
  for (int x = 0; x < g->order(); ++x) {
    std::set<int> coset;
    for (int m : h.elements()) coset.insert(g->add(x, m));
    cosets.insert(coset);
  }
  REQUIRE(cosets.size() == 4);
  // every coset doubled is the identity coset -> exponent 2 -> Klein
  for (const auto& coset : cosets) {
    int rep = *coset.begin();
    int doubled = g->add(rep, rep);
    REQUIRE(h.contains(doubled));
  }

  REQUIRE(q.target().factors() == std::vector<long long>{2, 2});
  for (int x = 0; x < g->order(); ++x) REQUIRE((q.map(x) == 0) == h.contains(x));
}

TEST_CASE("dual groups: counts and pinned values") {
  FiniteAbelianGroup trivial;
  auto dual_trivial = dual_group(trivial);
  REQUIRE(dual_trivial.size() == 1);
  REQUIRE(dual_trivial[0].is_trivial());

  FiniteAbelianGroup z2({2});
  auto dual_z2 = dual_group(z2);
  REQUIRE(dual_z2.size() == 2);
  REQUIRE(dual_z2[0].is_trivial());
  REQUIRE(dual_z2[1].value(1) == Cyclotomic::from_rational(2, Rational(-1)));
}

TEST_CASE("dual of the Klein group matches an exhaustive homomorphism search") {
  FiniteAbelianGroup klein({2, 2});
  auto duals = dual_group(klein);
  REQUIRE(duals.size() == 4);

  // Oracle: all functions klein -> {+1,-1}, filtered for multiplicativity.
  std::set<std::vector<int>> expected;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<int> f(4);
    for (int x = 0; x < 4; ++x) f[x] = (mask >> x & 1) ? -1 : 1;
    bool hom = true;
    for (int a = 0; a < 4 && hom; ++a)
      for (int b = 0; b < 4 && hom; ++b) hom = f[klein.add(a, b)] == f[a] * f[b];
    if (hom) expected.insert(f);
  }
  REQUIRE(expected.size() == 4);

  std::set<std::vector<int>> actual;
  for (const auto& l : duals) {
    std::vector<int> f(4);
    for (int x = 0; x < 4; ++x) f[x] = l.exponent_at(x) == 0 ? 1 : -1;
    actual.insert(f);
  }
  REQUIRE(actual == expected);

  // closed under product: the tuple-indexed product lands back in the list
  for (const auto& a : duals)
    for (const auto& b : duals) {
      LinearCharacter p = a * b;
      REQUIRE(p.index() >= 0);
      REQUIRE(p.index() < 4);
      REQUIRE(duals[p.index()] == p);
    }
}

TEST_CASE("subgroup duals: multiplicativity, orthogonality, nondegeneracy") {
  auto g = make_group({2, 4});
  AbelianSubgroup h = subgroup_from_generators(g, {g->encode({1, 0}), g->encode({0, 2})});
  auto duals = dual_group(h);
  REQUIRE(duals.size() == static_cast<std::size_t>(h.order()));
  REQUIRE(duals[0].is_trivial());

  // multiplicative on the whole domain
  for (const auto& l : duals)
    for (int a : h.elements())
      for (int b : h.elements())
        REQUIRE(l.value(g->add(a, b)) == l.value(a) * l.value(b));

  // exact character orthogonality: (1/|H|) sum_a l(a) conj(l'(a)) = delta
  for (std::size_t i = 0; i < duals.size(); ++i) {
    for (std::size_t j = 0; j < duals.size(); ++j) {
      Cyclotomic acc(duals[i].modulus());
      for (int a : h.elements()) acc += duals[i].value(a) * duals[j].value(a).conj();
      auto q = acc.as_rational();
      REQUIRE(q.has_value());
      REQUIRE(*q == (i == j ? Rational(h.order()) : Rational(0)));
    }
  }

  // nondegeneracy: every nonzero element is separated from the identity
  for (int a : h.elements()) {
    if (a == 0) continue;
    bool separated = false;
    for (const auto& l : duals) separated = separated || l.exponent_at(a) != 0;
    REQUIRE(separated);
  }

  // inverses stay in the family
  for (const auto& l : duals) REQUIRE(duals[l.inverse().index()] == l.inverse());
}

TEST_CASE("descriptor JSON is canonical") {
  auto g = make_group({4});
  AbelianSubgroup h = subgroup_from_generators(g, {g->encode({2}), 0, g->encode({2})});
  Json d = group_descriptor_json(*g, h);
  REQUIRE(d["invariant_factors"] == Json::array({4}));
  // zero generators dropped, duplicates collapsed
  REQUIRE(d["subgroup_generators"].size() == 1);
  REQUIRE(d["subgroup_generators"][0] == Json::array({2}));
  REQUIRE(group_descriptor_hash(*g, h) ==
          group_descriptor_hash(*g, subgroup_from_generators(g, {g->encode({2})})));
}
