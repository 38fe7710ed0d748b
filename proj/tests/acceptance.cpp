// Acceptance suite: one pass/fail line per criterion, exact (tolerance zero)
// throughout. Run with no arguments for all criteria or with a single
// criterion number. Exit code 0 iff every requested criterion passes.

#include "rwreath/cache.hpp"
#include "rwreath/verify.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace rwreath;
namespace fs = std::filesystem;

namespace {

struct Tally {
  long long assertions = 0;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    ++assertions;
    if (!ok && failures.size() < 8) failures.push_back(what);
    if (!ok && failures.size() >= 8) failures.resize(8);
  }
  bool pass() const { return failures.empty(); }
};

fs::path g_cache_root;

TowerContextPtr make_context(std::vector<long long> factors,
                             std::vector<std::vector<long long>> gens, bool full_h, int n_max) {
  auto g = std::make_shared<FiniteAbelianGroup>(std::move(factors));
  AbelianSubgroup h;
  if (full_h) {
    h = full_subgroup(g);
  } else {
    std::vector<int> gen_idx;
    for (const auto& v : gens) gen_idx.push_back(g->encode(v));
    h = subgroup_from_generators(g, gen_idx);
  }
  TowerOptions opt;
  opt.n_max = n_max;
  opt.cache = std::make_shared<CacheStore>(g_cache_root);
  return std::make_shared<TowerContext>(g, h, opt);
}

// the four towers the criteria instantiate
TowerContextPtr tower_g42(int n_max) { return make_context({4}, {{2}}, false, n_max); }
TowerContextPtr tower_klein(int n_max) { return make_context({2, 2}, {{1, 1}}, false, n_max); }
TowerContextPtr tower_b(int n_max) { return make_context({2}, {}, true, n_max); }
TowerContextPtr tower_d(int n_max) { return make_context({2}, {}, false, n_max); }

void tally_report(Tally& t, const TowerMapReport& report, const std::string& tag) {
  for (const auto& c : report.checks) {
    t.assertions += c.checked;
    if (!c.pass)
      t.expect(false, tag + " " + c.id + " " +
                          (c.witnesses.empty() ? "" : c.witnesses[0].dump()));
  }
}

// Criterion 1: the tensor-power norm identity, |lambda|,|mu| <= 2, index-2 towers.
bool criterion1(Tally& t) {
  for (auto ctx : {tower_g42(2), tower_klein(2)}) {
    TowerMaps maps(ctx);
    long long index = ctx->subgroup().index();
    t.expect(index == 2, "tower index is 2");
    struct Labeled {
      LambdaTuple lambda;
      std::vector<int> factors;
    };
    std::vector<Labeled> tuples;
    for (int n = 0; n <= 2; ++n)
      for (const auto& lambda : lambda_tuples(maps.hstar_size(), n))
        for (const auto& factors : maps.factor_tuples(lambda))
          tuples.push_back({lambda, factors});
    for (const auto& x : tuples)
      for (const auto& y : tuples) {
        long long got = ctx->pairing(maps.big_phi_basis(x.lambda, x.factors),
                                     maps.big_phi_basis(y.lambda, y.factors));
        long long want = 0;
        if (x.lambda == y.lambda && x.factors == y.factors) {
          want = 1;
          for (int i = 1; i < lambda_parts(x.lambda); ++i) want *= index;
        }
        std::ostringstream what;
        what << "norm formula at lambda=" << Json(x.lambda).dump() << " mu="
             << Json(y.lambda).dump() << ": got " << got << " want " << want;
        t.expect(got == want, what.str());
      }
  }
  return t.pass();
}

// Criterion 2: diagonal double-coset counts match 2^(l(lambda)-1).
bool criterion2(Tally& t) {
  TowerMaps maps(tower_g42(2));
  for (int n = 1; n <= 2; ++n)
    for (const auto& lambda : lambda_tuples(maps.hstar_size(), n)) {
      auto count = maps.count_diagonal_double_cosets(lambda, lambda);
      long long want = 1;
      for (int i = 1; i < lambda_parts(lambda); ++i) want *= 2;
      std::ostringstream what;
      what << "diagonal cosets at lambda=" << Json(lambda).dump() << ": got "
           << count.with_diagonal << " want " << want;
      t.expect(count.with_diagonal == want, what.str());
    }
  return t.pass();
}

// Criterion 3: full-wreath basis bijection for (Z/2,Z/2), n_max = 3.
bool criterion3(Tally& t) {
  TowerMaps maps(tower_b(3));
  const std::size_t hs = maps.hstar_size();
  t.expect(hs == 2, "H* has two characters");

  // independent count of pairs of partitions with |a|+|b| = 2
  std::vector<int> partitions{1, 1, 2, 3};  // p(0..3)
  int pairs2 = 0;
  for (int a = 0; a <= 2; ++a) pairs2 += partitions[a] * partitions[2 - a];
  t.expect(pairs2 == 5, "5 pairs of partitions of total size 2");
  t.expect(maps.target().basis_size(2) == 5, "5 irreducibles of the order-8 group");
  t.expect(maps.target().wreath(2).order() == 8, "order-8 group at degree 2");

  for (int n = 0; n <= 3; ++n) {
    std::set<BasisKey> hits;
    long long tuples = 0;
    for (const auto& lambda : lambda_tuples(hs, n)) {
      for (const auto& factors : maps.factor_tuples(lambda)) {
        ++tuples;
        const GradedVector& image = maps.big_phi_basis(lambda, factors);
        bool single = image.coeffs().size() == 1 && image.coeffs().begin()->second == 1;
        t.expect(single, "Phi sends a basis tuple to a single irreducible at degree " +
                             std::to_string(n));
        if (!single) continue;
        hits.insert(image.coeffs().begin()->first);
        // Psi . Phi = identity on the tuple
        auto psi = maps.big_psi(image);
        std::vector<BasisKey> want(hs);
        for (std::size_t l = 0; l < hs; ++l) want[l] = BasisKey{lambda[l], factors[l]};
        t.expect(psi.size() == 1 && psi.begin()->first == want && psi.begin()->second == 1,
                 "Psi inverts Phi at degree " + std::to_string(n));
      }
    }
    t.expect(static_cast<long long>(hits.size()) == tuples, "Phi basis images distinct");
    t.expect(tuples == maps.target().basis_size(n),
             "Phi is onto the basis at degree " + std::to_string(n));
    // Phi . Psi = identity on every basis element
    for (int i = 0; i < maps.target().basis_size(n); ++i) {
      GradedVector pi = maps.target().basis_vector(n, i);
      auto psi = maps.big_psi(pi);
      bool single = psi.size() == 1 && psi.begin()->second == 1;
      t.expect(single, "Psi sends a basis element to a single tuple");
      if (!single) continue;
      LambdaTuple lambda(hs);
      std::vector<int> factors(hs);
      for (std::size_t l = 0; l < hs; ++l) {
        lambda[l] = psi.begin()->first[l].degree;
        factors[l] = psi.begin()->first[l].index;
      }
      t.expect(maps.big_phi_basis(lambda, factors) == pi, "Phi inverts Psi");
    }
  }
  return t.pass();
}

// Criterion 4: weak surjectivity for G_n(Z/4,<2>), n <= 2, and
// G_n(Z/2,{0}), n <= 4.
bool criterion4(Tally& t) {
  {
    TowerMaps maps(tower_g42(2));
    for (int n = 0; n <= 2; ++n) {
      auto report = maps.weak_surjectivity_scan(n);
      for (std::size_t i = 0; i < report.witness.size(); ++i)
        t.expect(report.witness[i].has_value(),
                 "G(4,2," + std::to_string(n) + ") irreducible " + std::to_string(i) +
                     " witnessed");
    }
  }
  {
    TowerMaps maps(tower_d(4));
    t.expect(maps.target().wreath(4).order() == 192, "degree-4 group has order 192");
    for (int n = 0; n <= 4; ++n) {
      auto report = maps.weak_surjectivity_scan(n);
      for (std::size_t i = 0; i < report.witness.size(); ++i)
        t.expect(report.witness[i].has_value(),
                 "G_" + std::to_string(n) + "(Z/2,{0}) irreducible " + std::to_string(i) +
                     " witnessed");
    }
  }
  return t.pass();
}

// Criterion 5: exact character-table identities for every instantiated
// group, and the degree multiset of G_3(Z/2,{0}).
bool criterion5(Tally& t) {
  std::vector<std::pair<std::string, TowerContextPtr>> towers = {
      {"G(4,2,n)", tower_g42(2)},
      {"klein-diagonal", tower_klein(2)},
      {"B_n", tower_b(3)},
      {"D_n", tower_d(4)},
  };
  for (auto& [name, ctx] : towers) {
    TowerMaps maps(ctx);
    Verifier v(maps);
    v.begin();
    v.tables();
    tally_report(t, v.take(), name);
  }
  // degree multiset {1,1,2,3,3} for G_3(Z/2,{0})
  auto ctx = tower_d(3);
  std::multiset<long long> degs;
  for (int i = 0; i < ctx->basis_size(3); ++i) degs.insert(ctx->table(3).degree(i));
  t.expect(degs == std::multiset<long long>{1, 1, 2, 3, 3},
           "degree multiset of the order-24 group");
  return t.pass();
}

// Criterion 6: bialgebra suite, exhaustive for total degree <= 3, in every
// instantiated tower (quotient towers included via the source side).
bool criterion6(Tally& t) {
  std::vector<std::pair<std::string, TowerContextPtr>> towers = {
      {"G(4,2,n)", tower_g42(3)},
      {"klein-diagonal", tower_klein(3)},
      {"B_n", tower_b(3)},
      {"D_n", tower_d(3)},
  };
  for (auto& [name, ctx] : towers) {
    TowerMaps maps(ctx);
    Verifier v(maps);
    v.begin();
    v.bialgebra();
    tally_report(t, v.take(), name);
  }
  return t.pass();
}

// Criterion 7: the Phi_l/Psi_l operator laws and tau action laws, all towers.
bool criterion7(Tally& t) {
  std::vector<std::pair<std::string, TowerContextPtr>> towers = {
      {"G(4,2,n)", tower_g42(2)},
      {"klein-diagonal", tower_klein(2)},
      {"B_n", tower_b(3)},
      {"D_n", tower_d(4)},
  };
  for (auto& [name, ctx] : towers) {
    TowerMaps maps(ctx);
    Verifier v(maps);
    v.begin();
    v.operator_laws();
    tally_report(t, v.take(), name);
  }
  return t.pass();
}

// Criterion 8: cache coherence, JSON round-trips, deterministic re-runs.
bool criterion8(Tally& t) {
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::mt19937_64 rng(std::random_device{}());
  fs::path dir1 = fs::temp_directory_path() / ("rwreath_acc8a_" + std::to_string(rng()));
  fs::path dir2 = fs::temp_directory_path() / ("rwreath_acc8b_" + std::to_string(rng()));
  fs::create_directories(dir1);
  fs::create_directories(dir2);

  auto build = [&](std::shared_ptr<CacheStore> cache) {
    auto g = std::make_shared<FiniteAbelianGroup>(std::vector<long long>{4});
    TowerOptions opt;
    opt.n_max = 2;
    opt.cache = std::move(cache);
    return std::make_shared<TowerContext>(g, subgroup_from_generators(g, {g->encode({2})}), opt);
  };

  // cold run writes, warm run reads; results identical
  auto cold = build(std::make_shared<CacheStore>(dir1));
  const CharacterTable& t_cold = cold->table(2);
  StructureSlab s_cold = cold->slab(1, 1);
  auto warm = build(std::make_shared<CacheStore>(dir1));
  t.expect(warm->table(2) == t_cold, "warm table equals cold table");
  t.expect(warm->slab(1, 1).c == s_cold.c, "warm slab equals cold slab");
  auto plain = build(nullptr);
  t.expect(plain->table(2) == t_cold, "uncached computation equals cached");

  // deterministic re-runs: a second cold run writes byte-identical files
  auto cold2 = build(std::make_shared<CacheStore>(dir2));
  cold2->table(2);
  cold2->slab(1, 1);
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(dir1)) {
    fs::path other = dir2 / entry.path().filename();
    t.expect(fs::exists(other), "second cold run created " + entry.path().filename().string());
    if (fs::exists(other))
      t.expect(slurp(entry.path()) == slurp(other),
               "byte-identical cache file " + entry.path().filename().string());
    ++compared;
  }
  t.expect(compared >= 2, "cache files were written");

  // JSON round-trip bit-exactness
  {
    auto g = cold->group_ptr();
    const RestrictedWreathGroup& w = cold->wreath(2);
    Json j = character_table_to_json(*g, cold->subgroup(), 2, w, t_cold);
    CharacterTable back = character_table_from_json(j);
    t.expect(back == t_cold, "table survives a JSON round trip");
    Json j2 = character_table_to_json(*g, cold->subgroup(), 2, w, back);
    t.expect(j.dump(1) == j2.dump(1), "round-tripped JSON is byte-identical");
  }

  fs::remove_all(dir1);
  fs::remove_all(dir2);
  return t.pass();
}

struct Criterion {
  int number;
  std::string title;
  std::function<bool(Tally&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = -1;
  if (argc > 1) only = std::atoi(argv[1]);

  std::mt19937_64 rng(std::random_device{}());
  g_cache_root = fs::temp_directory_path() / ("rwreath_acceptance_" + std::to_string(rng()));
  fs::create_directories(g_cache_root);

  std::vector<Criterion> criteria = {
      {1, "tensor-power norm identity, |lambda|,|mu| <= 2, both index-2 towers", criterion1},
      {2, "diagonal double-coset counts equal 2^(l(lambda)-1)", criterion2},
      {3, "Phi and Psi are mutually inverse basis bijections for (Z/2,Z/2)", criterion3},
      {4, "weak surjectivity up to degree 2 (G(4,2,n)) and degree 4 (D_n)", criterion4},
      {5, "exact character-table identities for every instantiated group", criterion5},
      {6, "bialgebra suite, exhaustive to total degree 3, every tower", criterion6},
      {7, "Phi_l/Psi_l operator laws and tau action laws, every tower", criterion7},
      {8, "cache coherence, JSON round-trips, deterministic re-runs", criterion8},
  };

  bool all_pass = true;
  for (const auto& c : criteria) {
    if (only > 0 && c.number != only) continue;
    Tally tally;
    auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string error;
    try {
      pass = c.run(tally);
    } catch (const std::exception& e) {
      error = e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.title
              << " [" << tally.assertions << " exact assertions, " << ms << " ms]\n";
    if (!error.empty()) std::cout << "     error: " << error << "\n";
    for (const auto& f : tally.failures) std::cout << "     " << f << "\n";
    all_pass = all_pass && pass;
  }

  fs::remove_all(g_cache_root);
  return all_pass ? 0 : 1;
}
