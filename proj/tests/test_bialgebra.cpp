#include <catch2/catch_amalgamated.hpp>

#include "rwreath/bialgebra.hpp"

#include <random>

using namespace rwreath;

namespace {

TowerContextPtr make_context(std::vector<long long> factors,
                             std::vector<std::vector<long long>> gens, int n_max,
                             std::shared_ptr<CacheStore> cache = nullptr) {
  auto g = std::make_shared<FiniteAbelianGroup>(std::move(factors));
  std::vector<int> gen_idx;
  for (const auto& v : gens) gen_idx.push_back(g->encode(v));
  TowerOptions opt;
  opt.n_max = n_max;
  opt.cache = std::move(cache);
  return std::make_shared<TowerContext>(g, subgroup_from_generators(g, gen_idx), opt);
}

// the symmetric group tower R(1,1)
TowerContextPtr make_sym_context(int n_max) { return make_context({}, {}, n_max); }

int row_of_trivial(const CharacterTable& t) {
  std::vector<Cyclotomic> ones(t.class_count(), Cyclotomic::one(t.conductor()));
  int i = t.find_row(ones);
  REQUIRE(i >= 0);
  return i;
}

}  // namespace

TEST_CASE("basis labels parse and print") {
  REQUIRE(format_basis_label(BasisKey{2, 3}) == "2:3");
  REQUIRE(parse_basis_label("2:3") == BasisKey{2, 3});
  REQUIRE_THROWS_AS(parse_basis_label("23"), UsageError);
  REQUIRE_THROWS_AS(parse_basis_label("a:b"), UsageError);
}

TEST_CASE("n_max defaults follow the group order") {
  REQUIRE(default_n_max(2) == 4);
  REQUIRE(default_n_max(4) == 3);
  REQUIRE(default_n_max(8) == 2);
}

TEST_CASE("unit laws and degree-0 structure constants") {
  auto ctx = make_sym_context(3);
  GradedVector a = ctx->basis_vector(2, 0) + ctx->basis_vector(1, 0).scaled(3);
  REQUIRE(ctx->product(GradedVector::unit(), a) == a);
  REQUIRE(ctx->product(a, GradedVector::unit()) == a);

  const StructureSlab& s = ctx->slab(0, 2);
  REQUIRE(s.ni == 1);
  for (std::size_t j = 0; j < s.nj; ++j)
    for (std::size_t t = 0; t < s.nt; ++t) REQUIRE(s.at(0, j, t) == (j == t ? 1 : 0));
}

TEST_CASE("product of two trivial S_1 classes is trivial plus sign of S_2") {
  auto ctx = make_sym_context(2);
  GradedVector x = ctx->basis_vector(1, 0);
  GradedVector xx = ctx->product(x, x);
  int triv = row_of_trivial(ctx->table(2));
  REQUIRE(xx.coeff(BasisKey{2, triv}) == 1);
  REQUIRE(xx.coeff(BasisKey{2, 1 - triv}) == 1);
  long long total = 0;
  for (const auto& [k, v] : xx.coeffs()) total += v;
  REQUIRE(total == 2);

  // the (1,1) structure slab is the 1x1x2 all-ones tensor
  const StructureSlab& s = ctx->slab(1, 1);
  REQUIRE(s.ni == 1);
  REQUIRE(s.nj == 1);
  REQUIRE(s.nt == 2);
  REQUIRE(s.at(0, 0, 0) == 1);
  REQUIRE(s.at(0, 0, 1) == 1);
}

TEST_CASE("coproduct of the trivial S_2 class") {
  auto ctx = make_sym_context(2);
  int triv2 = row_of_trivial(ctx->table(2));
  TensorVector d = ctx->coproduct(ctx->basis_vector(2, triv2));
  BasisKey unit{0, 0};
  BasisKey t2{2, triv2};
  BasisKey t1{1, 0};
  REQUIRE(d.coeff({unit, t2}) == 1);
  REQUIRE(d.coeff({t2, unit}) == 1);
  REQUIRE(d.coeff({t1, t1}) == 1);
  REQUIRE(d.coeffs().size() == 3);

  REQUIRE(ctx->coproduct(GradedVector::unit()).coeff({unit, unit}) == 1);
}

TEST_CASE("grading, commutativity and cocommutativity up to degree 3") {
  for (auto ctx : {make_sym_context(3), make_context({4}, {{2}}, 3)}) {
    for (int k = 1; k <= 2; ++k) {
      for (int l = 1; k + l <= 3; ++l) {
        for (int i = 0; i < ctx->basis_size(k); ++i) {
          for (int j = 0; j < ctx->basis_size(l); ++j) {
            GradedVector ab = ctx->product(ctx->basis_vector(k, i), ctx->basis_vector(l, j));
            GradedVector ba = ctx->product(ctx->basis_vector(l, j), ctx->basis_vector(k, i));
            REQUIRE(ab == ba);
            REQUIRE(!ab.is_zero());
            REQUIRE(ab.nonnegative());
            REQUIRE(ab.homogeneous_of_degree(k + l));
          }
        }
      }
    }
    for (int n = 1; n <= 3; ++n) {
      for (int i = 0; i < ctx->basis_size(n); ++i) {
        TensorVector d = ctx->coproduct(ctx->basis_vector(n, i));
        REQUIRE(d.nonnegative());
        for (const auto& [key, v] : d.coeffs()) {
          REQUIRE(key.first.degree + key.second.degree == n);
          REQUIRE(d.coeff({key.second, key.first}) == v);  // cocommutative
        }
      }
    }
  }
}

TEST_CASE("associativity and coassociativity up to total degree 3") {
  auto ctx = make_context({4}, {{2}}, 3);
  // associativity on irreducible triples of degrees (1,1,1)
  for (int i = 0; i < ctx->basis_size(1); ++i)
    for (int j = 0; j < ctx->basis_size(1); ++j)
      for (int k = 0; k < ctx->basis_size(1); ++k) {
        GradedVector a = ctx->basis_vector(1, i), b = ctx->basis_vector(1, j),
                     c = ctx->basis_vector(1, k);
        REQUIRE(ctx->product(ctx->product(a, b), c) == ctx->product(a, ctx->product(b, c)));
      }

  // coassociativity on all basis elements of degree <= 3:
  // expanding the left factor of the coproduct equals expanding the right
  auto triple_expand = [&](const GradedVector& v, bool left) {
    std::map<std::vector<BasisKey>, long long> out;
    TensorVector first = ctx->coproduct(v);
    for (const auto& [pair, c1] : first.coeffs()) {
      const BasisKey& expand = left ? pair.first : pair.second;
      const BasisKey& keep = left ? pair.second : pair.first;
      TensorVector second = ctx->coproduct(GradedVector::basis(expand.degree, expand.index));
      for (const auto& [pair2, c2] : second.coeffs()) {
        std::vector<BasisKey> key = left
            ? std::vector<BasisKey>{pair2.first, pair2.second, keep}
            : std::vector<BasisKey>{keep, pair2.first, pair2.second};
        out[key] += c1 * c2;
      }
    }
    return out;
  };
  for (int n = 0; n <= 3; ++n)
    for (int i = 0; i < ctx->basis_size(n); ++i) {
      GradedVector v = ctx->basis_vector(n, i);
      REQUIRE(triple_expand(v, true) == triple_expand(v, false));
    }
}

TEST_CASE("pairing: orthonormal basis, positivity, Frobenius adjointness") {
  auto ctx = make_sym_context(3);
  for (int n = 0; n <= 2; ++n)
    for (int i = 0; i < ctx->basis_size(n); ++i)
      for (int m = 0; m <= 2; ++m)
        for (int j = 0; j < ctx->basis_size(m); ++j)
          REQUIRE(ctx->pairing(ctx->basis_vector(n, i), ctx->basis_vector(m, j)) ==
                  ((n == m && i == j) ? 1 : 0));

  std::mt19937 rng(31);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    GradedVector a;
    for (int n = 0; n <= 2; ++n)
      for (int i = 0; i < ctx->basis_size(n); ++i) a.add_to(BasisKey{n, i}, coeff(rng));
    long long norm = ctx->pairing(a, a);
    REQUIRE(norm >= 0);
    REQUIRE((norm == 0) == a.is_zero());
  }

  // <ab, c> = <a (x) b, m*(c)> exhaustively for total degree <= 3
  for (int k = 1; k <= 2; ++k)
    for (int l = 1; k + l <= 3; ++l)
      for (int i = 0; i < ctx->basis_size(k); ++i)
        for (int j = 0; j < ctx->basis_size(l); ++j)
          for (int t = 0; t < ctx->basis_size(k + l); ++t) {
            GradedVector ab = ctx->product(ctx->basis_vector(k, i), ctx->basis_vector(l, j));
            long long lhs = ctx->pairing(ab, ctx->basis_vector(k + l, t));
            TensorVector dc = ctx->coproduct(ctx->basis_vector(k + l, t));
            long long rhs = dc.coeff({BasisKey{k, i}, BasisKey{l, j}});
            REQUIRE(lhs == rhs);
          }
}

TEST_CASE("structure constant degree identity") {
  // sum_t c[i][j][t] deg(t) = [G_n : G_k x G_l] deg(i) deg(j)
  for (auto ctx : {make_sym_context(3), make_context({4}, {{2}}, 2),
                   make_context({2, 2}, {{1, 1}}, 2)}) {
    for (int k = 1; k <= 2; ++k) {
      for (int l = 1; k + l <= std::min(3, ctx->n_max()); ++l) {
        const StructureSlab& s = ctx->slab(k, l);
        long long index = ctx->wreath(k + l).order() /
                          (ctx->wreath(k).order() * ctx->wreath(l).order());
        for (std::size_t i = 0; i < s.ni; ++i)
          for (std::size_t j = 0; j < s.nj; ++j) {
            long long lhs = 0;
            for (std::size_t t = 0; t < s.nt; ++t)
              lhs += s.at(i, j, t) * ctx->table(k + l).degree(static_cast<int>(t));
            long long rhs = index * ctx->table(k).degree(static_cast<int>(i)) *
                            ctx->table(l).degree(static_cast<int>(j));
            REQUIRE(lhs == rhs);
            for (std::size_t t = 0; t < s.nt; ++t) REQUIRE(s.at(i, j, t) >= 0);
          }
      }
    }
  }
}

TEST_CASE("degree overflow is a resource error") {
  auto ctx = make_sym_context(2);
  GradedVector a = ctx->basis_vector(2, 0);
  REQUIRE_THROWS_AS(ctx->product(a, a), BudgetError);
  REQUIRE_THROWS_AS(ctx->basis_vector(3, 0), BudgetError);
}

TEST_CASE("two contexts compute identical slabs deterministically") {
  auto ctx1 = make_context({4}, {{2}}, 2);
  auto ctx2 = make_context({4}, {{2}}, 2);
  const StructureSlab& s1 = ctx1->slab(1, 1);
  const StructureSlab& s2 = ctx2->slab(1, 1);
  REQUIRE(s1.c == s2.c);
  REQUIRE(ctx1->table(2) == ctx2->table(2));
}
