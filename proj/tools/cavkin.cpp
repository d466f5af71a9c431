#include <omp.h>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavkin/config.hpp"
#include "cavkin/errors.hpp"
#include "cavkin/log.hpp"
#include "cavkin/rates.hpp"
#include "cavkin/scenario.hpp"
#include "cavkin/topology.hpp"
#include "cavkin/units.hpp"

namespace {

using namespace cavkin;

struct Global {
  std::string config_path;
  std::string out_dir = "results";
  int threads = 0;
  bool no_cache = false;
  std::string log_level = "info";
};

RunConfig load(const Global& g) {
  RunConfig cfg = g.config_path.empty() ? RunConfig() : RunConfig::from_file(g.config_path);
  cfg.apply_environment();
  return cfg;
}

template <class T>
void override_key(RunConfig& cfg, const std::string& key, const std::optional<T>& v) {
  if (!v) return;
  std::ostringstream s;
  s.precision(17);
  s << *v;
  cfg.set(key, s.str());
}

int run_names(const std::vector<std::string>& names, const RunConfig& cfg, const Global& g) {
  ScenarioOptions opt;
  opt.out_dir = g.out_dir;
  opt.use_cache = !g.no_cache;
  int status = 0;
  for (const auto& n : names) {
    const auto m = run_scenario(n, cfg, opt);
    std::printf("%s: %s%s -> %s/%s\n", n.c_str(), m.ok() ? "ok" : "FAILED", m.cache_hit ? " (cached)" : "",
                g.out_dir.c_str(), n.c_str());
    for (const auto& f : m.failures) std::printf("  failure: %s\n", f.c_str());
    if (!m.ok()) status = 1;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cavkin: cavity-modified proton transfer rates and dynamics"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--config", g.config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
  app.add_flag("--no-cache", g.no_cache, "recompute even when a cached result exists");
  app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error or off")->capture_default_str();

  std::vector<std::string> scenarios;
  auto* run = app.add_subcommand("run", "run one or more scenarios");
  run->add_option("scenario", scenarios, "scenario names (see `cavkin list`)")->required();

  app.add_subcommand("list", "list scenario names");
  app.add_subcommand("config", "print the effective configuration");
  app.add_subcommand("validate", "check the configuration and list violations");

  std::optional<double> eta, omega_c, emax_factor, tf, dt, omega_rel, beta_min, beta_max, temperature;
  std::optional<long> ne, n_beta;

  auto* crp = app.add_subcommand("crp", "cumulative reaction probability curve");
  crp->add_option("--eta", eta, "coupling strength");
  crp->add_option("--omega-c", omega_c, "cavity frequency (cm^-1)");
  crp->add_option("--emax-factor", emax_factor, "energy range in units of the barrier height");
  crp->add_option("--ne", ne, "number of energy intervals");

  auto* rates = app.add_subcommand("rates", "CRP, TST and Wigner-corrected Arrhenius table");
  rates->add_option("--eta", eta, "coupling strength");
  rates->add_option("--omega-c", omega_c, "cavity frequency (cm^-1)");
  rates->add_option("--beta-min", beta_min, "smallest 1/kT (cm)");
  rates->add_option("--beta-max", beta_max, "largest 1/kT (cm)");
  rates->add_option("--n-beta", n_beta, "number of temperatures");

  auto* tst = app.add_subcommand("tst", "Eyring and Wigner rates at one temperature");
  tst->add_option("--eta", eta, "coupling strength");
  tst->add_option("--omega-c", omega_c, "cavity frequency (cm^-1)");
  tst->add_option("--temperature", temperature, "temperature (K)");

  app.add_subcommand("average", "barrier-averaged CRP rates (Table II layout)");

  auto* dyn = app.add_subcommand("dynamics", "wavepacket propagation from the left well");
  dyn->add_option("--eta", eta, "coupling strength");
  dyn->add_option("--omega-c-rel", omega_rel, "cavity frequency relative to the reactant frequency");
  dyn->add_option("--tf-fs", tf, "final time (fs)");
  dyn->add_option("--dt-fs", dt, "time step (fs)");

  CLI11_PARSE(app, argc, argv);

  try {
    init_logging(g.log_level);
    if (g.threads > 0) omp_set_num_threads(g.threads);
    RunConfig cfg = load(g);

    if (app.got_subcommand("list")) {
      for (const auto& n : scenario_names()) std::printf("%s\n", n.c_str());
      return 0;
    }
    if (app.got_subcommand("config")) {
      std::cout << cfg.snapshot();
      return 0;
    }
    if (app.got_subcommand("validate")) {
      const auto v = validate_config(cfg);
      for (const auto& s : v) std::printf("violation: %s\n", s.c_str());
      if (v.empty()) std::printf("ok\n");
      return v.empty() ? 0 : 1;
    }
    if (app.got_subcommand("run")) return run_names(scenarios, cfg, g);
    if (app.got_subcommand("crp")) {
      override_key(cfg, "coupling.eta", eta);
      override_key(cfg, "cavity.omega_c_cm", omega_c);
      override_key(cfg, "crp.emax_factor", emax_factor);
      override_key(cfg, "crp.ne", ne);
      return run_names({"crp"}, cfg, g);
    }
    if (app.got_subcommand("rates")) {
      override_key(cfg, "coupling.eta", eta);
      override_key(cfg, "cavity.omega_c_cm", omega_c);
      override_key(cfg, "rates.beta_min_cm", beta_min);
      override_key(cfg, "rates.beta_max_cm", beta_max);
      override_key(cfg, "rates.n_beta", n_beta);
      return run_names({"rates"}, cfg, g);
    }
    if (app.got_subcommand("average")) return run_names({"table2"}, cfg, g);
    if (app.got_subcommand("dynamics")) {
      override_key(cfg, "dyn.eta", eta);
      override_key(cfg, "dyn.omega_c_rel", omega_rel);
      override_key(cfg, "dyn.tf_fs", tf);
      override_key(cfg, "dyn.dt_fs", dt);
      return run_names({"dynamics"}, cfg, g);
    }
    if (app.got_subcommand("tst")) {
      override_key(cfg, "coupling.eta", eta);
      override_key(cfg, "cavity.omega_c_cm", omega_c);
      override_key(cfg, "rates.temperature_k", temperature);
      const auto v = validate_config(cfg);
      if (!v.empty()) throw ConfigError(v.front());
      const ModelParams p = cfg.model();
      const double t = cfg.number("rates.temperature_k");
      const double beta = units.beta_from_kelvin(t);
      const auto cts = cts_frequencies(p);
      const double k = eyring_tst(beta, p);
      std::printf("eta,omega_c_cm,temperature_k,barrier_freq_cm,valley_freq_cm,k_tst_s,k_tst_wigner_s,kappa_w,delta_g_cm\n");
      std::printf("%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", p.eta(), units.to_wavenumber(p.omega_c()), t,
                  units.to_wavenumber(std::abs(cts.barrier)), units.to_wavenumber(cts.valley),
                  units.rate_to_per_second(k), units.rate_to_per_second(eyring_tst_wigner(beta, p)),
                  wigner_factor(beta, p), units.to_wavenumber(delta_g_extract(k, beta)));
      return 0;
    }
  } catch (const std::exception& e) {
    spdlog::error("event=fatal error=\"{}\"", e.what());
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
