// Acceptance checks. Prints one PASS/FAIL line per criterion and exits 0 once
// every check has been evaluated; the verdicts are in the output.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavkin/crp.hpp"
#include "cavkin/dvr.hpp"
#include "cavkin/dynamics.hpp"
#include "cavkin/log.hpp"
#include "cavkin/rates.hpp"
#include "cavkin/scenario.hpp"
#include "cavkin/topology.hpp"
#include "cavkin/units.hpp"

using namespace cavkin;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Columns of a CSV file keyed by header name.
std::map<std::string, std::vector<double>> read_csv(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("missing " + path.string());
  std::string line;
  std::getline(f, line);
  std::vector<std::string> names;
  std::stringstream hs(line);
  for (std::string c; std::getline(hs, c, ',');) names.push_back(c);
  std::map<std::string, std::vector<double>> cols;
  while (std::getline(f, line)) {
    std::stringstream ls(line);
    std::string c;
    for (std::size_t i = 0; std::getline(ls, c, ','); ++i) cols[names.at(i)].push_back(std::stod(c));
  }
  return cols;
}

// First energy where N crosses `level`, by linear interpolation.
double crossing(const std::vector<double>& e, const std::vector<double>& n, double level) {
  for (std::size_t k = 1; k < e.size(); ++k) {
    if (n[k - 1] < level && n[k] >= level) return e[k - 1] + (level - n[k - 1]) * (e[k] - e[k - 1]) / (n[k] - n[k - 1]);
  }
  return NAN;
}

Verdict splitting() {
  const auto t0 = Clock::now();
  const ModelParams p;
  const auto s = eigensolve_1d(p.well(), p.dipole(), Grid1D(-1.6, 1.6, 201, p.mu()));
  const double t = seconds_since(t0);
  const double v = units.to_wavenumber(s.splitting);
  return {std::abs(v - 0.92) <= 0.02 && t < 5.0, fmt("splitting %.4f cm-1 (0.92 +- 0.02), %.2f s", v, t)};
}

Verdict bright_transition() {
  const auto t0 = Clock::now();
  const ModelParams p;
  const auto s = eigensolve_1d(p.well(), p.dipole(), Grid1D(-1.6, 1.6, 201, p.mu()));
  const double t = seconds_since(t0);
  const double w = units.to_wavenumber(s.bright_transition);
  const double d = std::abs(s.transition_dipole);
  return {std::abs(w - 1039.0) <= 2.0 && std::abs(d - 0.027) <= 0.001 && t < 5.0,
          fmt("transition %.2f cm-1 (1039 +- 2), |d| %.5f (0.027 +- 0.001), %.2f s", w, d, t)};
}

Verdict harmonic_saddle() {
  const auto f0 = cts_frequencies(ModelParams());
  const auto f2 = cts_frequencies(ModelParams().with_eta(0.2));
  const double b0 = units.to_wavenumber(std::abs(f0.barrier)), v0 = units.to_wavenumber(f0.valley);
  const double b2 = units.to_wavenumber(std::abs(f2.barrier)), v2 = units.to_wavenumber(f2.valley);
  const bool ok = f0.barrier < 0 && f2.barrier < 0 && std::abs(b0 - 836.0) < 0.5 && std::abs(v0 - 1039.0) < 0.5 &&
                  std::abs(b2 - 284.0) <= 5.0 && std::abs(v2 - 3062.0) <= 10.0;
  return {ok, fmt("eta=0: %.2f / %.2f (836 / 1039); eta=0.2: %.2f / %.2f (284 +- 5 / 3062 +- 10)", b0, v0, b2, v2)};
}

Verdict reactant_frequency() {
  double lo = INFINITY, hi = -INFINITY;
  for (const double eta : {0.0, 0.05, 0.1, 0.2}) {
    const double w = units.to_wavenumber(reactant_frequencies(ModelParams().with_eta(eta)).molecular);
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  return {std::abs(lo - 1182.0) <= 1.0 && std::abs(hi - 1182.0) <= 1.0,
          fmt("omega_R1 in [%.4f, %.4f] cm-1 over eta 0..0.2 (1182 +- 1)", lo, hi)};
}

Verdict barrier_invariance() {
  const auto t0 = Clock::now();
  const double target = 2030.0;
  double worst = 0.0, lo = INFINITY, hi = -INFINITY;
  for (const double eta : {0.0, 0.05, 0.1, 0.2}) {
    const ModelParams p = ModelParams().with_eta(eta);
    const double qm = 1.5 * std::sqrt(p.mu());
    const auto c = arc_length(p, -qm, qm, 301);
    const double h = units.to_wavenumber(c.V[c.V.size() / 2] - *std::min_element(c.V.begin(), c.V.end()));
    lo = std::min(lo, h);
    hi = std::max(hi, h);
    worst = std::max(worst, std::abs(h - target) / target);
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-6 && t < 1.0,
          fmt("cMEP barrier %.6f..%.6f cm-1, eta spread %.1e, max rel. deviation from 2030 %.2e (1e-6), %.2f s", lo, hi,
              (hi - lo) / lo, worst, t)};
}

struct Table2Ref {
  double eta, beta, ln_k_ave, ln_k;
};

const std::vector<Table2Ref> table2_reference{
    {0.0, 0.001, 28.27, 28.32},  {0.05, 0.001, 28.16, 28.20}, {0.1, 0.001, 27.63, 27.65}, {0.2, 0.001, 26.82, 26.82},
    {0.0, 0.002, 26.68, 26.66},  {0.05, 0.002, 26.64, 26.64}, {0.1, 0.002, 25.32, 25.32}, {0.2, 0.002, 24.35, 24.34},
    {0.0, 0.005, 25.75, 25.72},  {0.05, 0.005, 25.76, 25.74}, {0.1, 0.005, 24.10, 24.10}, {0.2, 0.005, 23.35, 23.35},
};

Verdict table2(const fs::path& dir, double seconds) {
  const auto t = read_csv(dir / "table2.csv");
  int within = 0;
  double worst = 0.0;
  std::string rows;
  for (const auto& r : table2_reference) {
    for (std::size_t i = 0; i < t.at("eta").size(); ++i) {
      if (std::abs(t.at("eta")[i] - r.eta) > 1e-12 || std::abs(t.at("beta_cm")[i] - r.beta) > 1e-12) continue;
      const double da = t.at("ln_k_ave")[i] - r.ln_k_ave, dk = t.at("ln_k")[i] - r.ln_k;
      within += (std::abs(da) <= 0.1) + (std::abs(dk) <= 0.1);
      worst = std::max({worst, std::abs(da), std::abs(dk)});
      rows += fmt("\n    eta=%.2f beta=%.3f ln_k_ave %.3f (%.2f) ln_k %.3f (%.2f)", r.eta, r.beta, t.at("ln_k_ave")[i],
                  r.ln_k_ave, t.at("ln_k")[i], r.ln_k);
    }
  }
  return {within == 24 && seconds <= 7200.0,
          fmt("%d/24 values within 0.1, worst deviation %.3f, CRP time %.0f s", within, worst, seconds) + rows};
}

Verdict staircase(const fs::path& dir) {
  std::string detail;
  bool ok = true;
  for (const auto& [eta, tag] : {std::pair{0.0, "0"}, std::pair{0.2, "0.2"}}) {
    const auto c = read_csv(dir / (std::string("crp_eta") + tag + ".csv"));
    const double e1 = crossing(c.at("E_cm"), c.at("N"), 0.5), e2 = crossing(c.at("E_cm"), c.at("N"), 1.5);
    const double valley = units.to_wavenumber(cts_frequencies(ModelParams().with_eta(eta)).valley);
    const double gap = e2 - e1;
    ok = ok && std::isfinite(gap) && std::abs(gap - valley) <= 0.15 * valley;
    detail += fmt("eta=%.1f: step gap %.0f cm-1 (valley %.0f +- 15%%) ", eta, gap, valley);
  }
  return {ok, detail};
}

Verdict resonance(const fs::path& dir) {
  double p[3];
  const double rel[3] = {0.8, 1.0, 1.5};
  for (int i = 0; i < 3; ++i) {
    std::ostringstream name;
    name << "trajectory_eta0.06_w" << rel[i] << ".csv";
    p[i] = read_csv(dir / name.str()).at("P_inv").back();
  }
  return {p[1] <= 0.05 && p[0] >= 0.25 && p[2] >= 0.25,
          fmt("P_inv(1000 fs) = %.4f at omega_R (<= 0.05), %.4f at 0.8 omega_R, %.4f at 1.5 omega_R (>= 0.25)", p[1],
              p[0], p[2])};
}

Verdict localization(const fs::path& dir) {
  const auto s = read_csv(dir / "scan.csv");
  double best = INFINITY, best_w = NAN;
  std::vector<double> omegas;
  for (std::size_t i = 0; i < s.at("eta").size(); ++i) {
    if (std::abs(s.at("eta")[i] - 0.06) > 1e-9) continue;
    omegas.push_back(s.at("omega_c_cm")[i]);
    if (s.at("q_bar")[i] < best) {
      best = s.at("q_bar")[i];
      best_w = s.at("omega_c_cm")[i];
    }
  }
  if (omegas.size() < 2) return {false, "no eta=0.06 row in the scan"};
  const double step = omegas[1] - omegas[0];
  const double wr = units.to_wavenumber(reactant_frequencies(ModelParams()).molecular);
  return {std::abs(best_w - wr) <= step + 1e-6 && std::abs(best + 0.7) <= 0.05,
          fmt("arg-min %.1f cm-1 (%.1f +- %.1f), q_bar min %.4f (-0.7 +- 0.05)", best_w, wr, step, best)};
}

Verdict properties(const RunConfig& cfg) {
  std::string detail;
  bool ok = true;

  const ModelParams base;
  const ModelParams p = base.with_eta(0.06).with_omega_c(reactant_frequencies(base).molecular);
  const ScanOptions opt = cfg.dynamics_options();
  const Grid2D g = dynamics_grid(p, opt.n_q, opt.n_c, opt.xi, opt.q_max);
  Wavepacket psi = initial_state(opt.q_i, p, g);
  double closure = 0.0;
  const auto t0 = Clock::now();
  const auto rec = propagate(psi, p, opt.propagation, [&](const Wavepacket&, const Observables& o) {
    closure = std::max(closure, std::abs(o.h_s + o.h_c + o.dh_sc + o.h_dse - o.h) / std::abs(o.h));
  });
  const double t_prop = seconds_since(t0);
  ok = ok && rec.max_norm_drift < 1e-8 && rec.max_energy_drift < 1e-6 && closure < 1e-8 && t_prop <= 600.0;
  detail += fmt("norm drift %.1e, energy drift %.1e, closure %.1e, 1000 fs in %.1f s; ", rec.max_norm_drift,
                rec.max_energy_drift, closure, t_prop);

  double fd = 0.0;
  const ModelParams pc = base.with_eta(0.15);
  for (int i = 0; i < 20; ++i) {
    const double q = -1.4 + 0.14 * i, x = -150.0 + 15.0 * i, hq = 1e-4, hx = 1e-2;
    const Eigen::Matrix2d h = cpes_hessian(q, x, pc);
    Eigen::Matrix2d f;
    f(0, 0) = (cpes(q + hq, x, pc) - 2 * cpes(q, x, pc) + cpes(q - hq, x, pc)) / (hq * hq);
    f(1, 1) = (cpes(q, x + hx, pc) - 2 * cpes(q, x, pc) + cpes(q, x - hx, pc)) / (hx * hx);
    f(0, 1) = f(1, 0) = (cpes_grad(q, x + hx, pc)[0] - cpes_grad(q, x - hx, pc)[0]) / (2 * hx);
    fd = std::max(fd, (h - f).cwiseAbs().maxCoeff() / h.cwiseAbs().maxCoeff());
  }
  ok = ok && fd < 1e-6;
  detail += fmt("Hessian vs FD %.1e; ", fd);

  const ModelParams pr = base.with_eta(0.1);
  const Grid2D small{Grid1D(-1.6, 1.6, 31, pr.mu()), Grid1D(-250.0, 250.0, 21, 1.0)};
  CrpSettings s, sw;
  sw.swap_sides = true;
  const CrpProblem a(pr, small, s), b(pr, small, sw);
  double swap = 0.0;
  for (const double e : {0.002, 0.01, 0.03}) swap = std::max(swap, std::abs(a.evaluate(e) - b.evaluate(e)));
  ok = ok && swap < 1e-8;
  detail += fmt("CAP swap %.1e; ", swap);

  const Grid2D g61{Grid1D(-1.6, 1.6, 61, pr.mu()), Grid1D(-250.0, 250.0, 41, 1.0)};
  CrpSettings it;
  it.solver = CrpSolver::iterative;
  const CrpProblem d(pr, g61, s), i(pr, g61, it);
  double gf = 0.0;
  for (const double e : {0.003, 0.02}) gf = std::max(gf, std::abs(d.evaluate(e) - i.evaluate(e)));
  ok = ok && gf < 1e-6;
  detail += fmt("dense vs iterative 61x41 %.1e; ", gf);

  double kw = INFINITY;
  for (const double eta : {0.0, 0.1, 0.2}) {
    for (const double bcm : {0.001, 0.005, 0.02}) {
      kw = std::min(kw, wigner_factor(units.beta_from_cm(bcm), base.with_eta(eta)));
    }
  }
  ok = ok && kw >= 1.0;
  detail += fmt("min kappa_W %.4f; ", kw);

  double rt = 0.0;
  for (const double bcm : {0.001, 0.002, 0.005}) {
    const double beta = units.beta_from_cm(bcm);
    const double k = eyring_tst(beta, pr);
    rt = std::max(rt, std::abs(rate_from_delta_g(delta_g_extract(k, beta), beta) - k) / k);
  }
  ok = ok && rt <= 1e-12;
  detail += fmt("Delta G round trip %.1e", rt);
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string out = "acceptance";
  std::string log_level = "warn";
  app.add_option("--out", out, "scenario output and cache directory");
  app.add_option("--log-level", log_level);
  CLI11_PARSE(app, argc, argv);
  init_logging(log_level);

  const RunConfig cfg;
  ScenarioOptions opt;
  opt.out_dir = out;

  std::vector<std::pair<std::string, std::function<Verdict()>>> checks;
  checks.emplace_back("1 tunneling splitting", splitting);
  checks.emplace_back("2 bright transition", bright_transition);
  checks.emplace_back("3 saddle frequencies", harmonic_saddle);
  checks.emplace_back("4 reactant frequency", reactant_frequency);
  checks.emplace_back("5 barrier invariance", barrier_invariance);

  ResultManifest t2, f5;
  const auto scenario = [&](const std::string& name, ResultManifest& m) {
    if (m.scenario.empty()) m = run_scenario(name, cfg, opt);
    if (!m.ok()) throw std::runtime_error(name + " failed: " + m.failures.front());
    return fs::path(out) / name;
  };
  checks.emplace_back("6 rate table", [&] {
    const auto dir = scenario("table2", t2);
    return table2(dir, t2.timings_s.at("total"));
  });
  checks.emplace_back("7 CRP staircase", [&] { return staircase(scenario("table2", t2)); });
  checks.emplace_back("8 dynamical resonance", [&] { return resonance(scenario("fig5", f5)); });
  checks.emplace_back("9 localization contour", [&] { return localization(scenario("fig5", f5)); });
  checks.emplace_back("10 property suite", [&] { return properties(cfg); });

  int passed = 0;
  for (const auto& [name, check] : checks) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    passed += v.pass;
    std::printf("%s criterion %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", passed, checks.size());
  return 0;
}
