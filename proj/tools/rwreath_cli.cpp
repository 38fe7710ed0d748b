// rwreath: calculator and verifier for the induction/restriction bialgebras
// of restricted wreath product towers G_n(G,H).
//
// Subcommands: describe | char-table | product | coproduct | verify.
// Exit codes: 0 success, 1 verification/internal failure, 2 usage error,
// 3 resource budget exceeded.

#include <CLI11.hpp>

#include "rwreath/cache.hpp"
#include "rwreath/verify.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace rwreath;

struct JobConfig {
  std::string group;             // invariant factors, e.g. "4" or "2,2"
  std::string subgroup = "full"; // generators "a,b;c,d", or "full" / "none"
  int nmax = -1;                 // -1: default by |G|
  long long budget = 100000;
  std::string cache_dir;
  std::string format = "table-text";
  int jobs = 1;
  bool timing = false;
};

std::vector<long long> parse_factor_list(const std::string& s) {
  std::vector<long long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw UsageError("cannot parse integer list: " + s);
    }
  }
  return out;
}

struct TowerSetup {
  FiniteAbelianGroupPtr g;
  AbelianSubgroup h;
  TowerContextPtr ctx;
  std::shared_ptr<CacheStore> cache;
};

TowerSetup build_tower(const JobConfig& cfg, bool with_cache) {
  if (cfg.group.empty()) throw UsageError("--group is required (invariant factors, e.g. 4 or 2,2)");
  auto g = std::make_shared<FiniteAbelianGroup>(parse_factor_list(cfg.group));

  AbelianSubgroup h;
  if (cfg.subgroup == "full") {
    h = full_subgroup(g);
  } else if (cfg.subgroup == "none" || cfg.subgroup.empty()) {
    h = subgroup_from_generators(g, {});
  } else {
    std::vector<int> gens;
    std::stringstream ss(cfg.subgroup);
    std::string gen;
    while (std::getline(ss, gen, ';')) {
      if (gen.empty()) continue;
      gens.push_back(g->encode(parse_factor_list(gen)));
    }
    h = subgroup_from_generators(g, gens);
  }

  TowerSetup setup;
  setup.g = g;
  setup.h = h;
  if (with_cache) {
    std::string dir = cfg.cache_dir.empty() ? std::string(".rwreath-cache") : cfg.cache_dir;
    setup.cache = std::make_shared<CacheStore>(dir, true);
  }
  TowerOptions opt;
  opt.n_max = cfg.nmax;
  opt.budget = cfg.budget;
  opt.jobs = cfg.jobs;
  opt.cache = setup.cache;
  setup.ctx = std::make_shared<TowerContext>(g, h, opt);
  return setup;
}

std::string cyclotomic_text(const Cyclotomic& z) {
  if (auto q = z.as_rational()) return format_rational(*q);
  std::string out = "[";
  for (std::size_t i = 0; i < z.coeffs().size(); ++i) {
    if (i) out += ",";
    out += format_rational(z.coeffs()[i]);
  }
  return out + "]";
}

int cmd_describe(const JobConfig& cfg) {
  TowerSetup setup = build_tower(cfg, false);
  const FiniteAbelianGroup& g = *setup.g;
  const AbelianSubgroup& h = setup.h;
  int nmax = setup.ctx->n_max();

  Json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "describe";
  j["group"] = setup.ctx->descriptor_json();
  j["group_order"] = g.order();
  j["group_exponent"] = g.exponent();
  j["subgroup_order"] = h.order();
  j["subgroup_invariant_factors"] = h.invariant_factors();
  j["index"] = h.index();
  QuotientMap q = quotient(setup.g, h);
  j["quotient_invariant_factors"] = q.target().factors();
  j["full_wreath"] = h.is_full();
  if (g.is_cyclic() && g.order() > 1) {
    // G(m,p,n) = G_n(Z/m, pZ/m): check H = <p> for p = [G:H]
    long long m = g.order();
    long long p = h.index();
    AbelianSubgroup generated = subgroup_from_generators(setup.g, {g.encode({p % m})});
    if (generated.elements() == h.elements()) {
      j["reflection_family"] = "G(" + std::to_string(m) + "," + std::to_string(p) + ",n)";
    }
  }
  Json levels = Json::array();
  for (int n = 0; n <= nmax; ++n) {
    const RestrictedWreathGroup& w = setup.ctx->wreath(n);
    levels.push_back(Json{{"degree", n},
                          {"order", w.order()},
                          {"classes", w.class_count()},
                          {"exponent", w.exponent()}});
  }
  j["levels"] = std::move(levels);

  if (cfg.format == "json") {
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << "G: invariant factors " << Json(g.factors()).dump() << ", order " << g.order()
              << "\n";
    std::cout << "H: order " << h.order() << ", invariant factors "
              << Json(h.invariant_factors()).dump() << ", index [G:H] = " << h.index() << "\n";
    std::cout << "G/H: invariant factors " << Json(q.target().factors()).dump() << "\n";
    if (j.contains("reflection_family"))
      std::cout << "complex reflection family: " << j["reflection_family"].get<std::string>()
                << "\n";
    if (h.is_full()) std::cout << "full wreath tower S_n[G]\n";
    for (const auto& level : j["levels"])
      std::cout << "G_" << level["degree"].get<int>() << ": order " << level["order"].get<long long>()
                << ", " << level["classes"].get<int>() << " conjugacy classes\n";
  }
  return 0;
}

int cmd_char_table(const JobConfig& cfg, int degree) {
  TowerSetup setup = build_tower(cfg, true);
  int n = degree < 0 ? setup.ctx->n_max() : degree;
  const CharacterTable& t = setup.ctx->table(n);
  const RestrictedWreathGroup& w = setup.ctx->wreath(n);
  Json j = character_table_to_json(*setup.g, setup.h, n, w, t);
  if (cfg.format == "json") {
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << "group order " << t.group_order() << ", " << t.class_count()
              << " classes, conductor " << t.conductor() << "\n";
    for (int c = 0; c < t.class_count(); ++c) {
      const WreathElement& rep = w.class_rep(c);
      std::cout << "class " << c << " (size " << t.class_size(c) << "): perm "
                << Json(rep.perm).dump() << " colors ";
      Json colors = Json::array();
      for (int col : rep.colors) colors.push_back(setup.g->decode(col));
      std::cout << colors.dump() << "\n";
    }
    for (int i = 0; i < t.row_count(); ++i) {
      std::cout << "chi_" << i << " (degree " << t.degree(i) << "):";
      for (int c = 0; c < t.class_count(); ++c) std::cout << " " << cyclotomic_text(t.value(i, c));
      std::cout << "\n";
    }
  }
  return 0;
}

void require_valid_label(TowerContext& ctx, const BasisKey& k) {
  if (k.degree < 0 || k.degree > ctx.n_max() || k.index < 0 || k.index >= ctx.basis_size(k.degree))
    throw UsageError("unknown basis label " + format_basis_label(k));
}

int cmd_product(const JobConfig& cfg, const std::string& a, const std::string& b) {
  TowerSetup setup = build_tower(cfg, true);
  BasisKey ka = parse_basis_label(a), kb = parse_basis_label(b);
  require_valid_label(*setup.ctx, ka);
  require_valid_label(*setup.ctx, kb);
  GradedVector prod = setup.ctx->product(GradedVector::basis(ka.degree, ka.index),
                                         GradedVector::basis(kb.degree, kb.index));
  Json terms = Json::array();
  for (const auto& [key, v] : prod.coeffs())
    terms.push_back(Json{{"basis", format_basis_label(key)},
                         {"coefficient", v},
                         {"char_degree", setup.ctx->basis_char_degree(key)}});
  if (cfg.format == "json") {
    Json j{{"format_version", kFormatVersion}, {"kind", "product_decomposition"},
           {"left", a}, {"right", b}, {"terms", terms}};
    std::cout << j.dump(1) << "\n";
  } else {
    for (const auto& term : terms)
      std::cout << term["coefficient"].get<long long>() << " * "
                << term["basis"].get<std::string>() << " (character degree "
                << term["char_degree"].get<long long>() << ")\n";
  }
  return 0;
}

int cmd_coproduct(const JobConfig& cfg, const std::string& a) {
  TowerSetup setup = build_tower(cfg, true);
  BasisKey ka = parse_basis_label(a);
  require_valid_label(*setup.ctx, ka);
  TensorVector cop = setup.ctx->coproduct(GradedVector::basis(ka.degree, ka.index));
  Json terms = Json::array();
  for (const auto& [key, v] : cop.coeffs())
    terms.push_back(Json{{"left", format_basis_label(key.first)},
                         {"right", format_basis_label(key.second)},
                         {"coefficient", v}});
  if (cfg.format == "json") {
    Json j{{"format_version", kFormatVersion}, {"kind", "coproduct_decomposition"},
           {"input", a}, {"terms", terms}};
    std::cout << j.dump(1) << "\n";
  } else {
    for (const auto& term : terms)
      std::cout << term["coefficient"].get<long long>() << " * "
                << term["left"].get<std::string>() << " (x) "
                << term["right"].get<std::string>() << "\n";
  }
  return 0;
}

int cmd_verify(const JobConfig& cfg, const std::string& report_path) {
  TowerSetup setup = build_tower(cfg, true);
  TowerMaps maps(setup.ctx);
  // build both towers up front so resource-budget overruns exit with code 3
  // instead of surfacing as check failures
  for (int n = 0; n <= setup.ctx->n_max(); ++n) {
    maps.target().wreath(n);
    maps.source().wreath(n);
  }
  TowerMapReport report = full_verification(maps);
  Json j = report.to_json();
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::trunc);
    if (!out) throw UsageError("cannot write report file: " + report_path);
    out << j.dump(1) << "\n";
  }
  if (cfg.format == "json") {
    report.print_summary(std::cerr);
    std::cout << j.dump(1) << "\n";
  } else {
    report.print_summary(std::cout);
    std::cout << (report.all_pass() ? "ALL CHECKS PASSED" : "CHECK FAILURES FOUND") << " ("
              << report.total_assertions() << " assertions)\n";
  }
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact calculator/verifier for restricted wreath product towers G_n(G,H)"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config");

  JobConfig cfg;
  app.add_option("--group", cfg.group, "invariant factors of G, e.g. 4 or 2,2");
  app.add_option("--subgroup", cfg.subgroup,
                 "generators of H as residue vectors 'a,b;c,d'; 'full' or 'none'");
  app.add_option("--nmax", cfg.nmax, "largest tower degree (default depends on |G|)");
  app.add_option("--budget", cfg.budget, "enumeration budget for n!*|G|^n");
  app.add_option("--cache-dir", cfg.cache_dir, "cache directory")
      ->envname("RWREATH_CACHE_DIR");
  app.add_option("--format", cfg.format, "output format: json | table-text")
      ->check(CLI::IsMember({"json", "table-text"}));
  app.add_option("--jobs", cfg.jobs, "worker threads for table/slab computation");
  app.add_flag("--timing", cfg.timing, "print elapsed wall time to stderr");

  auto* describe = app.add_subcommand("describe", "group, subgroup, quotient and level data");
  auto* chartab = app.add_subcommand("char-table", "exact character table of G_n(G,H)");
  int degree = -1;
  chartab->add_option("-n,--degree", degree, "tower degree (default: nmax)");
  auto* product = app.add_subcommand("product", "induction product of two basis elements");
  std::string label_a, label_b;
  product->add_option("left", label_a, "basis label <degree>:<index>")->required();
  product->add_option("right", label_b, "basis label <degree>:<index>")->required();
  auto* coproduct = app.add_subcommand("coproduct", "restriction coproduct of a basis element");
  std::string label_c;
  coproduct->add_option("input", label_c, "basis label <degree>:<index>")->required();
  auto* verify = app.add_subcommand("verify", "run the full verification suite");
  std::string report_path;
  verify->add_option("--report", report_path, "write the JSON report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  auto started = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    if (describe->parsed()) rc = cmd_describe(cfg);
    else if (chartab->parsed()) rc = cmd_char_table(cfg, degree);
    else if (product->parsed()) rc = cmd_product(cfg, label_a, label_b);
    else if (coproduct->parsed()) rc = cmd_coproduct(cfg, label_c);
    else if (verify->parsed()) rc = cmd_verify(cfg, report_path);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    rc = 2;
  } catch (const BudgetError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    rc = 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = 1;
  }
  if (cfg.timing) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - started)
                  .count();
    std::cerr << "[time] " << ms << " ms\n";
  }
  return rc;
}
