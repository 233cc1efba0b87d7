#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ams/cli/commands.hpp"
#include "ams/committor_grid.hpp"
#include "ams/error.hpp"
#include "ams/io/output.hpp"

using namespace ams;
using io::Json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("amsctl_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json run_config(Json user, const fs::path& out) {
  user["output"] = out.string();
  return io::resolve_config(user);
}

// Rows of a CSV written by CsvTable, header first, comment line dropped.
std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string column(const std::vector<std::vector<std::string>>& rows, std::size_t row, const std::string& name) {
  const auto& h = rows.at(0);
  const auto k = static_cast<std::size_t>(std::find(h.begin(), h.end(), name) - h.begin());
  return rows.at(row).at(k);
}

}  // namespace

TEST_CASE("git blob hashes match git hash-object") {
  CHECK(io::git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(io::git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("config hash ignores threads and output only") {
  const Json a = io::resolve_config({{"threads", 1}, {"output", "x"}});
  const Json b = io::resolve_config({{"threads", 4}, {"output", "y"}});
  const Json c = io::resolve_config({{"masterSeed", 1}});
  CHECK(io::config_hash(a) == io::config_hash(b));
  CHECK(io::config_hash(a) != io::config_hash(c));
}

TEST_CASE("configuration validation") {
  const Json d = io::resolve_config(Json::object());
  CHECK(d["ams"]["N"] == 100);
  CHECK(d["model"]["name"] == "drift");
  CHECK(d["reference"]["alpha"].is_null());

  auto rejects = [](const Json& j) {
    try {
      io::resolve_config(j);
    } catch (const Error& e) {
      return e.kind() == ErrorKind::ConfigError;
    }
    return false;
  };
  CHECK(rejects({{"bogus", 1}}));
  CHECK(rejects({{"ams", {{"NN", 3}}}}));
  CHECK(rejects({{"ams", 3}}));
  CHECK(rejects({{"ams", {{"N", 2.5}}}}));
  CHECK(rejects({{"ams", {{"N", 10}, {"n", 10}}}}));
  CHECK(rejects({{"model", {{"name", "quadruple_well"}}}}));
  CHECK(rejects({{"model", {{"beta", -1.0}}}}));
  CHECK(rejects({{"scheme", {{"dt", 0.0}}}}));
  CHECK(rejects({{"threads", 0}}));
  CHECK(rejects({{"committor", {{"domain", {0.0, 1.0}}}}}));
  CHECK(rejects(Json::array()));
  CHECK_FALSE(rejects({{"reference", {{"alpha", 0.5}}}}));
}

TEST_CASE("typed view of the configuration") {
  const auto c = io::to_experiment(io::resolve_config(
      {{"model", {{"name", "double_well"}, {"beta", 3.0}}}, {"scheme", {{"kind", "order15"}}}, {"sweep", {{"N", {100, 200}}}}}));
  CHECK(c.model.kind == ModelKind::DoubleWell);
  CHECK(c.model.beta == 3.0);
  CHECK(c.scheme.kind == SchemeKind::Order15);
  CHECK(c.sweep.N == std::vector<int>{100, 200});
  CHECK_FALSE(c.referenceAlpha);
}

TEST_CASE("the committed reference page is current") {
  const std::string committed = slurp(fs::path(AMS_SOURCE_DIR) / "docs" / "config-reference.md");
  CHECK(committed == io::config_reference_markdown());
}

TEST_CASE("run-ams smoke run writes one record per realization") {
  const fs::path dir = scratch("smoke");
  std::ostringstream log;
  const Json cfg = run_config({{"ams", {{"N", 50}, {"realizations", 1}}}, {"scheme", {{"dt", 1e-3}}}}, dir);
  CHECK(cli::cmd_run_ams(cfg, log) == cli::kExitOk);
  std::istringstream in(slurp(dir / "records.jsonl"));
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    const Json r = Json::parse(line);
    for (const char* key : {"alphaHat", "K", "r", "levels", "durations", "seed", "configHash"}) CHECK(r.contains(key));
    CHECK(r["levels"].size() == r["K"].get<std::size_t>());
    ++count;
  }
  CHECK(count == 1);
  const Json manifest = Json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["command"] == "run-ams");
  CHECK(manifest["config"] == cfg);
  CHECK(manifest["outputs"]["records.jsonl"] == io::git_blob_hash(slurp(dir / "records.jsonl")));
  const auto rows = read_csv(dir / "summary.csv");
  CHECK(column(rows, 1, "alphaRefSource") == "closed_form");
  CHECK(slurp(dir / "summary.csv").rfind("# config-hash " + io::config_hash(cfg), 0) == 0);
}

TEST_CASE("reruns are byte-identical, across thread counts and from the manifest") {
  const fs::path a = scratch("rerun_a"), b = scratch("rerun_b"), c = scratch("rerun_c");
  std::ostringstream log;
  const Json user = {{"ams", {{"N", 40}, {"realizations", 6}}}, {"scheme", {{"dt", 1e-3}}}, {"masterSeed", 11}};
  Json ua = user, ub = user;
  ua["threads"] = 1;
  ub["threads"] = 3;
  cli::cmd_run_ams(run_config(ua, a), log);
  cli::cmd_run_ams(run_config(ub, b), log);
  CHECK(slurp(a / "records.jsonl") == slurp(b / "records.jsonl"));
  CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));

  cli::Overrides o;
  o.configPath = (a / "manifest.json").string();
  o.out = c.string();
  cli::cmd_run_ams(cli::prepare_config(o), log);
  CHECK(slurp(a / "records.jsonl") == slurp(c / "records.jsonl"));

  o.seed = 12;
  const fs::path d = scratch("rerun_d");
  o.out = d.string();
  cli::cmd_run_ams(cli::prepare_config(o), log);
  CHECK(slurp(a / "records.jsonl") != slurp(d / "records.jsonl"));
}

TEST_CASE("a missing committor grid is FileNotFound") {
  const fs::path dir = scratch("missing");
  std::ostringstream log;
  const Json named = run_config(
      {{"model", {{"name", "triple_well"}}}, {"problem", {{"coordinate", "committor"}, {"committorGrid", "absent.grid"}}}},
      dir);
  const Json unnamed = run_config({{"model", {{"name", "triple_well"}}}, {"problem", {{"coordinate", "committor"}}}}, dir);
  for (const Json& cfg : {named, unnamed}) {
    try {
      cli::cmd_run_ams(cfg, log);
      FAIL("expected FileNotFound");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::FileNotFound);
    }
  }
}

TEST_CASE("committor command on the triple well round-trips its grid") {
  const fs::path dir = scratch("grid");
  std::ostringstream log;
  CHECK(cli::cmd_committor(run_config({{"model", {{"name", "triple_well"}, {"beta", 10.0}}}}, dir), log) == 0);
  const CommittorGrid g = load_committor_grid((dir / "committor.grid").string());
  CHECK(g.beta == 10.0);
  REQUIRE(g.dirichletA.size() == 1);
  REQUIRE(g.dirichletB.size() == 1);
  const auto node = [&g](Eigen::Index k) { return Eigen::Vector2d(g.x_at(k % g.nx()), g.y_at(k / g.nx())); };
  CHECK(committor_interpolate(g, node(g.dirichletA[0])) == 0.0);
  CHECK(committor_interpolate(g, node(g.dirichletB[0])) == 1.0);
  CHECK(g.values.minCoeff() >= 0.0);
  CHECK(g.values.maxCoeff() <= 1.0);

  // The grid then drives the committor coordinate, and a beta mismatch is refused.
  const fs::path run = scratch("grid_run");
  const std::string path = (dir / "committor.grid").string();
  Json cfg = run_config({{"model", {{"name", "triple_well"}, {"beta", 10.0}}},
                         {"problem", {{"coordinate", "committor"}, {"committorGrid", path}}},
                         {"ams", {{"N", 20}, {"realizations", 2}}},
                         {"scheme", {{"dt", 1e-3}}}},
                        run);
  CHECK(cli::cmd_run_ams(cfg, log) == 0);
  const Json manifest = Json::parse(slurp(run / "manifest.json"));
  CHECK(manifest["inputs"][path] == io::git_blob_hash(slurp(path)));
  cfg["model"]["beta"] = 5.0;
  CHECK_THROWS_AS(cli::cmd_run_ams(cfg, log), Error);
}

TEST_CASE("committor command on 1-D models writes a table") {
  const fs::path dir = scratch("table");
  std::ostringstream log;
  cli::cmd_committor(run_config({{"model", {{"name", "double_well"}, {"beta", 5.0}}}, {"committor", {{"points1d", 11}}}}, dir),
                     log);
  const auto rows = read_csv(dir / "committor_1d.csv");
  REQUIRE(rows.size() == 12);
  CHECK(std::stod(column(rows, 1, "q_quadrature")) == 0.0);
  CHECK(std::stod(column(rows, 6, "q_quadrature")) == doctest::Approx(0.5));
  CHECK(std::stod(column(rows, 11, "q_quadrature")) == 1.0);
}

TEST_CASE("three-level command reports the inflexion temperature") {
  const fs::path dir = scratch("three");
  std::ostringstream log;
  cli::cmd_three_level(run_config({{"threeLevel", {{"cutoffs", {100.0}}}}}, dir), log);
  const auto rows = read_csv(dir / "peaks.csv");
  REQUIRE(rows.size() == 2);
  CHECK(std::stod(column(rows, 1, "inflexionBetaLin")) == doctest::Approx(9.903).epsilon(1e-4));
  const auto sweep = read_csv(dir / "tau_sweep.csv");
  CHECK(sweep.size() == 1 + 1851);
}

TEST_CASE("run-dns and a small ensemble sweep") {
  std::ostringstream log;
  const fs::path d = scratch("dns");
  cli::cmd_run_dns(run_config({{"dns", {{"M", 2000}}}, {"scheme", {{"dt", 1e-3}}}}, d), log);
  const auto rows = read_csv(d / "summary.csv");
  const double alpha = std::stod(column(rows, 1, "alphaDns"));
  const double se = std::stod(column(rows, 1, "stdErr"));
  CHECK(std::abs(alpha - 0.42556) < 4 * se + 0.02);

  const fs::path s = scratch("sweep");
  cli::cmd_ensemble_sweep(
      run_config({{"sweep", {{"N", {10, 20, 40, 80}}, {"dt", {1e-2, 1e-3}}, {"realizations", 5}}}}, s), log);
  CHECK(read_csv(s / "summary.csv").size() == 1 + 8);
  CHECK(read_csv(s / "dt_fit.csv").size() == 1 + 4);
  CHECK(read_csv(s / "plot_kn_bias_vs_n.csv").size() == 1 + 8);
  CHECK(read_csv(s / "n_fit.csv").size() >= 1 + 2);
}
