#include <catch2/catch_amalgamated.hpp>

#include "rwreath/bialgebra.hpp"
#include "rwreath/cache.hpp"
#include "rwreath/verify.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

using namespace rwreath;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  fs::path p = fs::temp_directory_path() /
               ("rwreath_" + tag + "_" + std::to_string(rng()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

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

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

#ifdef RWREATH_CLI_BIN
int run_cli(const std::string& args, const fs::path& dir, std::string* out = nullptr,
            std::string* err = nullptr) {
  fs::path out_file = dir / "stdout.txt";
  fs::path err_file = dir / "stderr.txt";
  std::string cmd = std::string(RWREATH_CLI_BIN) + " " + args + " > " + out_file.string() +
                    " 2> " + err_file.string();
  int status = std::system(cmd.c_str());
  if (out) *out = slurp(out_file);
  if (err) *err = slurp(err_file);
  return WEXITSTATUS(status);
}
#endif

}  // namespace

TEST_CASE("character table JSON round-trips bit-exactly") {
  auto g = std::make_shared<FiniteAbelianGroup>(std::vector<long long>{4});
  AbelianSubgroup h = subgroup_from_generators(g, {g->encode({2})});
  RestrictedWreathGroup w(g, h, 2);
  CharacterTable t = compute_character_table(w);
  Json j = character_table_to_json(*g, h, 2, w, t);
  CharacterTable back = character_table_from_json(j);
  REQUIRE(back == t);
  Json j2 = character_table_to_json(*g, h, 2, w, back);
  REQUIRE(j.dump(1) == j2.dump(1));
}

TEST_CASE("cache store: round trip, atomicity artifacts, unreadable entries") {
  fs::path dir = fresh_dir("store");
  CacheStore store(dir);
  Json payload{{"format_version", "1"}, {"hello", 42}};
  store.store("x.json", payload);
  auto loaded = store.load("x.json");
  REQUIRE(loaded.has_value());
  REQUIRE(*loaded == payload);
  REQUIRE(!store.load("missing.json").has_value());
  // no temp files left behind
  for (const auto& entry : fs::directory_iterator(dir))
    REQUIRE(entry.path().extension() != ".tmp");
  // unreadable payloads count as misses
  std::ofstream(dir / "bad.json") << "{ not json";
  REQUIRE(!store.load("bad.json").has_value());
  fs::remove_all(dir);
}

TEST_CASE("cold and warm cache runs produce identical results") {
  fs::path dir = fresh_dir("coldwarm");
  auto cache = std::make_shared<CacheStore>(dir);

  auto cold = make_context({4}, {{2}}, 2, cache);
  const CharacterTable& t_cold = cold->table(2);
  StructureSlab s_cold = cold->slab(1, 1);

  auto warm = make_context({4}, {{2}}, 2, std::make_shared<CacheStore>(dir));
  const CharacterTable& t_warm = warm->table(2);
  StructureSlab s_warm = warm->slab(1, 1);

  REQUIRE(t_cold == t_warm);
  REQUIRE(s_cold.c == s_warm.c);

  // and identical to an uncached computation
  auto plain = make_context({4}, {{2}}, 2);
  REQUIRE(plain->table(2) == t_warm);
  REQUIRE(plain->slab(1, 1).c == s_warm.c);
  fs::remove_all(dir);
}

TEST_CASE("two cold runs write byte-identical cache files") {
  fs::path dir1 = fresh_dir("cold1");
  fs::path dir2 = fresh_dir("cold2");
  for (const fs::path& dir : {dir1, dir2}) {
    auto ctx = make_context({2, 2}, {{1, 1}}, 2, std::make_shared<CacheStore>(dir));
    ctx->table(2);
    ctx->slab(1, 1);
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(dir1)) {
    fs::path other = dir2 / entry.path().filename();
    REQUIRE(fs::exists(other));
    REQUIRE(slurp(entry.path()) == slurp(other));
    ++compared;
  }
  REQUIRE(compared >= 2);
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("a corrupted cached table is caught by the verification suite") {
  fs::path dir = fresh_dir("corrupt");
  {
    auto ctx = make_context({2}, {{1}}, 2, std::make_shared<CacheStore>(dir));
    ctx->table(2);
  }
  // corrupt one character value inside the cached level-2 table
  bool corrupted = false;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().filename().string().find("_n2_") == std::string::npos) continue;
    Json j = Json::parse(slurp(entry.path()));
    j["irreducibles"][0]["values"][1][0] = "7";
    std::ofstream(entry.path(), std::ios::trunc) << j.dump(1) << "\n";
    corrupted = true;
  }
  REQUIRE(corrupted);

  auto ctx = make_context({2}, {{1}}, 2, std::make_shared<CacheStore>(dir));
  TowerMaps maps(ctx);
  TowerMapReport report = full_verification(maps);
  REQUIRE(!report.all_pass());
  bool orthogonality_failed = false;
  for (const auto& c : report.checks)
    if (c.id == "chartab.row_orthogonality" && !c.pass) orthogonality_failed = true;
  REQUIRE(orthogonality_failed);
  fs::remove_all(dir);
}

#ifdef RWREATH_CLI_BIN

TEST_CASE("cli: describe reports the reflection family and exit codes hold") {
  fs::path dir = fresh_dir("cli_describe");
  std::string out;
  REQUIRE(run_cli("describe --group 4 --subgroup 2 --nmax 2", dir, &out) == 0);
  REQUIRE(out.find("G(4,2,n)") != std::string::npos);
  REQUIRE(out.find("order 16") != std::string::npos);

  REQUIRE(run_cli("describe --group 3 --subgroup none --nmax 3", dir, &out) == 0);
  REQUIRE(out.find("G(3,3,n)") != std::string::npos);
  REQUIRE(out.find("order 54") != std::string::npos);

  REQUIRE(run_cli("describe --group 2 --nmax 2", dir, &out) == 0);
  REQUIRE(out.find("full wreath") != std::string::npos);

  REQUIRE(run_cli("describe --group 0", dir) == 2);
  REQUIRE(run_cli("describe --group 4 --subgroup 7,1", dir) == 2);
  REQUIRE(run_cli("describe --group 4 --subgroup 2 --nmax 6 --budget 100", dir) == 3);
  fs::remove_all(dir);
}

TEST_CASE("cli: char-table caches and re-parses to the same table") {
  fs::path dir = fresh_dir("cli_chartab");
  fs::path cache = dir / "cache";
  std::string args = "char-table --group 4 --subgroup 2 --nmax 2 -n 2 --format json --cache-dir " +
                     cache.string();
  std::string out1, err1, out2, err2;
  REQUIRE(run_cli(args, dir, &out1, &err1) == 0);
  REQUIRE(err1.find("[cache] store") != std::string::npos);
  REQUIRE(run_cli(args, dir, &out2, &err2) == 0);
  REQUIRE(err2.find("[cache] hit") != std::string::npos);
  REQUIRE(out1 == out2);  // determinism, warm vs cold

  // output re-parses to the in-memory table
  CharacterTable parsed = character_table_from_json(Json::parse(out1));
  auto ctx = make_context({4}, {{2}}, 2);
  REQUIRE(parsed == ctx->table(2));
  fs::remove_all(dir);
}

TEST_CASE("cli: product and coproduct listings") {
  fs::path dir = fresh_dir("cli_prod");
  std::string out;
  std::string common = " --group 2 --subgroup none --nmax 2 --cache-dir " +
                       (dir / "cache").string();
  REQUIRE(run_cli("product 0:0 1:0" + common, dir, &out) == 0);
  REQUIRE(out.find("1 * 1:0") != std::string::npos);  // unit acts as identity
  REQUIRE(run_cli("product 1:0 1:0" + common, dir, &out) == 0);
  REQUIRE(run_cli("product 3:0 1:0" + common, dir) == 2);
  REQUIRE(run_cli("coproduct 2:1" + common + " --format json", dir, &out) == 0);
  Json j = Json::parse(out);
  REQUIRE(j["kind"] == "coproduct_decomposition");
  // swap symmetry of the printed tensor coefficients
  for (const auto& term : j["terms"]) {
    bool found = false;
    for (const auto& other : j["terms"])
      if (other["left"] == term["right"] && other["right"] == term["left"] &&
          other["coefficient"] == term["coefficient"])
        found = true;
    REQUIRE(found);
  }
  fs::remove_all(dir);
}

TEST_CASE("cli: verify exit codes, report file, corrupted cache") {
  fs::path dir = fresh_dir("cli_verify");
  fs::path cache = dir / "cache";
  fs::path report = dir / "report.json";
  std::string common = " --group 2 --nmax 2 --cache-dir " + cache.string();
  REQUIRE(run_cli("verify --report " + report.string() + common, dir) == 0);
  Json j = Json::parse(slurp(report));
  REQUIRE(j["kind"] == "verification_report");
  REQUIRE(j["all_pass"] == true);

  // deliberately corrupt a cached table value: verify must fail with an
  // orthogonality witness
  bool corrupted = false;
  for (const auto& entry : fs::directory_iterator(cache)) {
    std::string name = entry.path().filename().string();
    if (name.rfind("chartab_", 0) == 0 && name.find("_n2_") != std::string::npos) {
      Json table = Json::parse(slurp(entry.path()));
      table["irreducibles"][0]["values"][1][0] = "5";
      std::ofstream(entry.path(), std::ios::trunc) << table.dump(1) << "\n";
      corrupted = true;
    }
  }
  REQUIRE(corrupted);
  std::string out;
  REQUIRE(run_cli("verify --report " + report.string() + common, dir, &out) == 1);
  REQUIRE(out.find("FAIL chartab.row_orthogonality") != std::string::npos);
  Json failed = Json::parse(slurp(report));
  REQUIRE(failed["all_pass"] == false);
  fs::remove_all(dir);
}

TEST_CASE("cli: verify maps budget overruns to exit code 3") {
  fs::path dir = fresh_dir("cli_budget");
  std::string err;
  REQUIRE(run_cli("verify --group 4 --subgroup 2 --nmax 3 --budget 100 --cache-dir " +
                      (dir / "cache").string(),
                  dir, nullptr, &err) == 3);
  REQUIRE(err.find("resource error") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("cli: config file supplies flags, command line wins") {
  fs::path dir = fresh_dir("cli_config");
  std::ofstream(dir / "job.toml") << "group=\"4\"\nsubgroup=\"2\"\nnmax=1\n";
  std::string out;
  REQUIRE(run_cli("describe --config " + (dir / "job.toml").string(), dir, &out) == 0);
  REQUIRE(out.find("G(4,2,n)") != std::string::npos);
  REQUIRE(out.find("G_1:") != std::string::npos);
  REQUIRE(out.find("G_2:") == std::string::npos);  // nmax 1 from config
  // command line overrides the config value
  REQUIRE(run_cli("describe --nmax 2 --config " + (dir / "job.toml").string(), dir, &out) == 0);
  REQUIRE(out.find("G_2: order 16") != std::string::npos);
  fs::remove_all(dir);
}

#endif  // RWREATH_CLI_BIN
