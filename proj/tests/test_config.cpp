#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cavkin/config.hpp"
#include "cavkin/errors.hpp"
#include "cavkin/scenario.hpp"
#include "cavkin/units.hpp"

using namespace cavkin;
using doctest::Approx;

namespace {

bool mentions(const std::vector<std::string>& v, const std::string& text) {
  for (const auto& s : v) {
    if (s.find(text) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("default configuration is valid") {
  const RunConfig cfg;
  CHECK(validate_config(cfg).empty());
  const ModelParams p = cfg.model();
  CHECK(units.to_wavenumber(p.omega_c()) == Approx(1039.0));
  CHECK(p.eta() == 0.0);
  CHECK(cfg.crp_settings().solver == CrpSolver::dense);
}

TEST_CASE("violations name the offending keys") {
  RunConfig cfg;
  cfg.set("well.A4", "-1");
  CHECK(mentions(validate_config(cfg), "well.A4 must be positive"));
  cfg = RunConfig();
  cfg.set("cap.xcm", "300");
  const auto v = validate_config(cfg);
  CHECK(mentions(v, "cap.xcm"));
  CHECK(mentions(v, "crp.xc_max"));
  cfg = RunConfig();
  cfg.set("coupling.eta", "-0.1");
  CHECK(mentions(validate_config(cfg), "coupling.eta"));
  cfg = RunConfig();
  cfg.set("crp.solver", "qr");
  CHECK(mentions(validate_config(cfg), "crp.solver"));
}

TEST_CASE("parsing and unknown keys") {
  const RunConfig cfg = RunConfig::from_string("# comment\ncoupling.eta = 0.1\n\n  crp.n_q=41  # trailing\n");
  CHECK(cfg.number("coupling.eta") == 0.1);
  CHECK(cfg.integer("crp.n_q") == 41);
  CHECK_THROWS_AS((void)RunConfig::from_string("coupling.etta = 1\n"), ConfigError);
  CHECK_THROWS_AS((void)RunConfig::from_string("coupling.eta\n"), ConfigError);
  CHECK_THROWS_AS((void)RunConfig::from_file("/nonexistent/cfg.txt"), ConfigError);
  CHECK(cfg.numbers("table2.etas") == std::vector<double>{0.0, 0.05, 0.1, 0.2});
}

TEST_CASE("snapshot reproduces the configuration") {
  RunConfig cfg;
  cfg.set("coupling.eta", "0.07");
  cfg.set("fig6.etas", "0.01,0.02");
  const RunConfig back = RunConfig::from_string(cfg.snapshot());
  CHECK(back.snapshot() == cfg.snapshot());
  CHECK(back.values() == cfg.values());
}

TEST_CASE("environment overrides") {
  CHECK(RunConfig::environment_name("coupling.eta") == "APP_COUPLING_ETA");
  RunConfig cfg;
  cfg.apply_environment({{"APP_COUPLING_ETA", "0.15"}, {"APP_CRP_N_Q", "31"}, {"HOME", "/root"}});
  CHECK(cfg.number("coupling.eta") == 0.15);
  CHECK(cfg.integer("crp.n_q") == 31);
}

TEST_CASE("scenario run, manifest and cache") {
  const auto dir = std::filesystem::temp_directory_path() / "cavkin_test_scenario";
  std::filesystem::remove_all(dir);
  ScenarioOptions opt;
  opt.out_dir = dir.string();
  RunConfig cfg;
  cfg.set("mep.n", "41");
  const auto first = run_scenario("mep", cfg, opt);
  CHECK(first.ok());
  CHECK_FALSE(first.cache_hit);
  REQUIRE(first.artifacts.size() == 2);
  for (const auto& a : first.artifacts) {
    CHECK(std::filesystem::exists(dir / "mep" / a.file));
    CHECK(sha256_file((dir / "mep" / a.file).string()) == a.sha256);
  }
  CHECK(std::filesystem::exists(dir / "mep" / "manifest.json"));
  const RunConfig replay = RunConfig::from_file((dir / "mep" / "config.txt").string());
  CHECK(replay.snapshot() == cfg.snapshot());

  const auto second = run_scenario("mep", replay, opt);
  CHECK(second.cache_hit);
  CHECK(second.artifacts.size() == first.artifacts.size());
  CHECK(second.artifacts[1].sha256 == first.artifacts[1].sha256);

  opt.use_cache = false;
  CHECK_FALSE(run_scenario("mep", cfg, opt).cache_hit);

  CHECK_THROWS_AS((void)run_scenario("fig9", cfg, opt), ConfigError);
  cfg.set("well.A4", "-1");
  CHECK_THROWS_AS((void)run_scenario("mep", cfg, opt), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("failures are recorded in the manifest") {
  const auto dir = std::filesystem::temp_directory_path() / "cavkin_test_failure";
  std::filesystem::remove_all(dir);
  ScenarioOptions opt;
  opt.out_dir = dir.string();
  RunConfig cfg;
  cfg.set("dyn.q_i", "-1.95");
  const auto m = run_scenario("dynamics", cfg, opt);
  CHECK_FALSE(m.ok());
  CHECK(m.failures.size() == 1);
  CHECK(m.to_json().find("\"ok\": false") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
