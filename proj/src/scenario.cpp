#include "cavkin/scenario.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "cavkin/dvr.hpp"
#include "cavkin/dynamics.hpp"
#include "cavkin/errors.hpp"
#include "cavkin/log.hpp"
#include "cavkin/rates.hpp"
#include "cavkin/topology.hpp"
#include "cavkin/units.hpp"

namespace fs = std::filesystem;

namespace cavkin {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 digest failed");
  }
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return s.str();
}

std::string sha256_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return sha256_hex(ss.str());
}

std::string ResultManifest::to_json() const {
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["version"] = version;
  j["config_hash"] = config_hash;
  j["cache_hit"] = cache_hit;
  j["ok"] = ok();
  auto& arts = j["artifacts"] = nlohmann::ordered_json::array();
  for (const auto& a : artifacts) arts.push_back({{"file", a.file}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  j["failures"] = failures;
  j["timings_s"] = timings_s;
  j["config"] = config_snapshot;
  return j.dump(2) + "\n";
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> n{"fig2", "fig3", "fig4",  "fig5", "fig6", "table2",
                                          "crp",  "rates", "dynamics", "mep", "freqs", "eigen"};
  return n;
}

namespace {

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}

  void row(const std::vector<double>& values) {
    if (values.size() != header_.size()) throw Error("CSV row width mismatch");
    rows_.push_back(values);
  }

  [[nodiscard]] std::string str() const {
    std::ostringstream s;
    for (std::size_t i = 0; i < header_.size(); ++i) s << (i ? "," : "") << header_[i];
    s << "\n";
    char buf[64];
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g", r[i]);
        s << (i ? "," : "") << buf;
      }
      s << "\n";
    }
    return s.str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

std::string tag(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

double omega_r(const ModelParams& p) { return reactant_frequencies(p).molecular; }

// Collects the files of one scenario run.
class Writer {
 public:
  explicit Writer(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (dir_ / name).string());
    f << content;
    files_.push_back(name);
  }
  void write(const std::string& name, const Csv& csv) { write(name, csv.str()); }

  [[nodiscard]] const std::vector<std::string>& files() const { return files_; }
  [[nodiscard]] const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

Csv mep_csv(const ModelParams& p, const RunConfig& cfg) {
  const double qmax = cfg.number("mep.q_max") * std::sqrt(p.mu());
  const auto c = arc_length(p, -qmax, qmax, static_cast<std::size_t>(cfg.integer("mep.n")));
  Csv csv({"Q", "x_c", "s", "V_cm"});
  for (std::size_t i = 0; i < c.Q.size(); ++i) csv.row({c.Q[i], c.xc[i], c.s[i], units.to_wavenumber(c.V[i])});
  return csv;
}

void scenario_mep(const RunConfig& cfg, Writer& w) { w.write("mep.csv", mep_csv(cfg.model(), cfg)); }

void scenario_fig2(const RunConfig& cfg, Writer& w) {
  const ModelParams base = cfg.model();
  for (const double eta : cfg.numbers("fig2.etas")) {
    const ModelParams p = base.with_eta(eta);
    w.write("mep_eta" + tag(eta) + ".csv", mep_csv(p, cfg));
    const Grid2D g{Grid1D(-1.6, 1.6, 81, p.mu()), Grid1D(-60.0, 60.0, 81, 1.0)};
    Csv surf({"q", "x_c", "V_cm"});
    for (std::size_t i = 0; i < g.q.size(); ++i) {
      for (std::size_t j = 0; j < g.xc.size(); ++j) {
        surf.row({g.q.point(i), g.xc.point(j), units.to_wavenumber(cpes(g.q.point(i), g.xc.point(j), p))});
      }
    }
    w.write("cpes_eta" + tag(eta) + ".csv", surf);
  }
}

void scenario_freqs(const RunConfig& cfg, Writer& w) {
  const ModelParams base = cfg.model();
  const Grid2D bounds{Grid1D(-1.6, 1.6, 3, base.mu()), Grid1D(-347.61, 347.61, 3, 1.0)};
  const auto etas = linspace(0.0, cfg.number("freqs.eta_max"), static_cast<std::size_t>(cfg.integer("freqs.n_eta")));
  Csv by_eta({"eta", "barrier_cm", "valley_cm", "valley_anharmonic_cm", "reactant_q_cm", "reactant_c_cm"});
  for (const auto& row : frequency_scan(base, ScanAxis::eta, etas)) {
    const ModelParams p = base.with_eta(row.eta);
    const auto r = reactant_frequencies(p);
    const double anh = valley_cut_states(p, 10.0 / std::sqrt(row.valley), 241, bounds).fundamental;
    by_eta.row({row.eta, units.to_wavenumber(row.barrier_abs), units.to_wavenumber(row.valley),
                units.to_wavenumber(anh), units.to_wavenumber(r.molecular), units.to_wavenumber(r.cavity)});
  }
  w.write("freqs_vs_eta.csv", by_eta);

  std::vector<double> omegas;
  for (const double cm : linspace(cfg.number("freqs.omega_min_cm"), cfg.number("freqs.omega_max_cm"),
                                  static_cast<std::size_t>(cfg.integer("freqs.n_omega")))) {
    omegas.push_back(units.to_hartree(cm));
  }
  Csv by_omega({"eta", "omega_c_cm", "barrier_cm", "valley_cm"});
  for (const double eta : cfg.numbers("freqs.omega_etas")) {
    for (const auto& row : frequency_scan(base.with_eta(eta), ScanAxis::omega_c, omegas)) {
      by_omega.row({row.eta, units.to_wavenumber(row.omega_c), units.to_wavenumber(row.barrier_abs),
                    units.to_wavenumber(row.valley)});
    }
  }
  w.write("freqs_vs_omegac.csv", by_omega);
}

void scenario_eigen(const RunConfig& cfg, Writer& w) {
  const ModelParams p = cfg.model();
  const auto spec = eigensolve_1d(p.well(), p.dipole(), cfg.eigen_grid(p),
                                  static_cast<std::size_t>(cfg.integer("eigen.n_states")));
  Csv csv({"index", "energy_cm", "parity"});
  for (std::size_t k = 0; k < spec.bound.size(); ++k) {
    csv.row({static_cast<double>(k), units.to_wavenumber(spec.bound.energies[static_cast<Eigen::Index>(k)]),
             static_cast<double>(spec.bound.parity[k])});
  }
  w.write("eigen_1d.csv", csv);
  Csv obs({"splitting_cm", "bright_transition_cm", "transition_dipole"});
  obs.row({units.to_wavenumber(spec.splitting), units.to_wavenumber(spec.bright_transition), spec.transition_dipole});
  w.write("system_observables.csv", obs);
}

Csv crp_csv(const CrpCurve& c) {
  Csv csv({"E_cm", "N"});
  for (std::size_t k = 0; k < c.energies.size(); ++k) csv.row({units.to_wavenumber(c.energies[k]), c.values[k]});
  return csv;
}

void scenario_crp(const RunConfig& cfg, Writer& w) {
  const auto curve = compute_crp_curve(cfg, cfg.model());
  w.write("crp_curve.csv", crp_csv(curve));
}

std::vector<double> beta_grid(const RunConfig& cfg) {
  return linspace(cfg.number("rates.beta_min_cm"), cfg.number("rates.beta_max_cm"),
                  static_cast<std::size_t>(cfg.integer("rates.n_beta")));
}

void scenario_rates(const RunConfig& cfg, Writer& w) {
  const ModelParams p = cfg.model();
  const auto curve = compute_crp_curve(cfg, p);
  w.write("crp_curve.csv", crp_csv(curve));
  Csv csv({"beta_cm", "ln_k_crp", "ln_k_tst", "ln_k_tst_wigner"});
  for (const auto& r : arrhenius_table(p, curve, beta_grid(cfg))) {
    csv.row({r.beta_cm, std::log(r.k_crp), std::log(r.k_tst), std::log(r.k_tst_wigner)});
  }
  w.write("arrhenius.csv", csv);
}

void scenario_fig4(const RunConfig& cfg, Writer& w) {
  const ModelParams base = cfg.model();
  const double wr = omega_r(base);
  const CrpCurve none;
  Csv csv({"eta", "omega_c_cm", "beta_cm", "ln_k_tst", "ln_k_tst_wigner", "delta_g_cm"});
  for (const double eta : cfg.numbers("fig4.etas")) {
    for (const double rel : cfg.numbers("fig4.omega_rel")) {
      const ModelParams p = base.with_eta(eta).with_omega_c(rel * wr);
      for (const auto& r : arrhenius_table(p, none, beta_grid(cfg))) {
        csv.row({eta, units.to_wavenumber(p.omega_c()), r.beta_cm, std::log(r.k_tst), std::log(r.k_tst_wigner),
                 r.delta_g.value_or(std::nan(""))});
      }
    }
  }
  w.write("fig4_tst.csv", csv);
  Csv dg({"eta", "temperature_k", "delta_g_cm"});
  const double beta = units.beta_from_kelvin(cfg.number("rates.temperature_k"));
  for (const double eta : cfg.numbers("fig4.etas")) {
    const ModelParams p = base.with_eta(eta);
    dg.row({eta, cfg.number("rates.temperature_k"), units.to_wavenumber(delta_g_extract(eyring_tst(beta, p), beta))});
  }
  w.write("delta_g.csv", dg);
}

void scenario_table2(const RunConfig& cfg, Writer& w) {
  std::vector<CrpCurve> curves;
  Csv csv({"eta", "beta_cm", "ln_k_ave", "ln_k"});
  for (const auto& r : compute_table2(cfg, &curves)) csv.row({r.eta, r.beta_cm, r.ln_k_ave, r.ln_k});
  w.write("table2.csv", csv);
  const auto etas = cfg.numbers("table2.etas");
  for (std::size_t i = 0; i < curves.size(); ++i) w.write("crp_eta" + tag(etas[i]) + ".csv", crp_csv(curves[i]));
}

Csv trajectory_csv(const TrajectoryRecord& t) {
  Csv csv({"t_fs", "P_inv", "q_exp", "xc_exp", "H_S_cm", "H_C_cm", "H_DSE_cm", "dH_SC_cm", "H_cm"});
  for (const auto& o : t.samples) {
    csv.row({o.time_fs, o.p_inv, o.q, o.xc, units.to_wavenumber(o.h_s), units.to_wavenumber(o.h_c),
             units.to_wavenumber(o.h_dse), units.to_wavenumber(o.dh_sc), units.to_wavenumber(o.h)});
  }
  return csv;
}

void scenario_dynamics(const RunConfig& cfg, Writer& w) {
  const ModelParams base = cfg.model();
  const ModelParams p = base.with_eta(cfg.number("dyn.eta")).with_omega_c(cfg.number("dyn.omega_c_rel") * omega_r(base));
  w.write("trajectory.csv", trajectory_csv(run_localization(p, cfg.dynamics_options())));
}

std::vector<ScanRow> scan_rows(const RunConfig& cfg) {
  const ModelParams base = cfg.model();
  const double wr = omega_r(base);
  const auto etas = linspace(cfg.number("scan.eta_min"), cfg.number("scan.eta_max"),
                             static_cast<std::size_t>(cfg.integer("scan.n_eta")));
  std::vector<double> omegas;
  for (const double rel : linspace(cfg.number("scan.omega_rel_min"), cfg.number("scan.omega_rel_max"),
                                   static_cast<std::size_t>(cfg.integer("scan.n_omega")))) {
    omegas.push_back(rel * wr);
  }
  return resonance_scan(etas, omegas, base, cfg.dynamics_options());
}

void scenario_fig5(const RunConfig& cfg, Writer& w, std::vector<std::string>& failures) {
  const ModelParams base = cfg.model();
  const double wr = omega_r(base);
  const double eta = cfg.number("dyn.eta");
  for (const double rel : {0.8, 1.0, 1.5}) {
    const ModelParams p = base.with_eta(eta).with_omega_c(rel * wr);
    w.write("trajectory_eta" + tag(eta) + "_w" + tag(rel) + ".csv",
            trajectory_csv(run_localization(p, cfg.dynamics_options())));
  }
  Csv csv({"eta", "omega_c_cm", "q_bar", "P_inv_tf"});
  for (const auto& r : scan_rows(cfg)) {
    csv.row({r.eta, units.to_wavenumber(r.omega_c), r.q_bar, r.p_inv_tf});
    if (!r.error.empty()) failures.push_back("scan eta=" + tag(r.eta) + " omega_c=" + tag(r.omega_c) + ": " + r.error);
  }
  w.write("scan.csv", csv);
}

void scenario_fig6(const RunConfig& cfg, Writer& w) {
  const ModelParams base = cfg.model();
  const double wr = omega_r(base);
  for (const double eta : cfg.numbers("fig6.etas")) {
    const ModelParams p = base.with_eta(eta).with_omega_c(wr);
    w.write("trajectory_eta" + tag(eta) + ".csv", trajectory_csv(run_localization(p, cfg.dynamics_options())));
  }
}

std::string cache_key(const std::string& name, const RunConfig& cfg) {
  return sha256_hex(name + "\n" + version_string + "\n" + cfg.snapshot());
}

bool restore_from_cache(const fs::path& cache, const fs::path& out, ResultManifest& m) {
  const fs::path src = cache / "manifest.json";
  if (!fs::exists(src)) return false;
  try {
    std::ifstream f(src);
    const auto j = nlohmann::json::parse(f);
    if (!j.value("ok", false)) return false;
    std::vector<ArtifactEntry> arts;
    for (const auto& a : j.at("artifacts")) {
      const std::string file = a.at("file");
      if (sha256_file((cache / file).string()) != a.at("sha256").get<std::string>()) return false;
      arts.push_back({file, a.at("sha256"), a.at("bytes")});
    }
    fs::create_directories(out);
    for (const auto& a : arts) fs::copy_file(cache / a.file, out / a.file, fs::copy_options::overwrite_existing);
    m.artifacts = arts;
    for (const auto& [k, v] : j.at("timings_s").items()) m.timings_s[k] = v;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

CrpCurve compute_crp_curve(const RunConfig& cfg, const ModelParams& p) {
  const CrpProblem problem(p, cfg.crp_grid(p), cfg.crp_settings());
  const auto energies =
      energy_grid(cfg.number("crp.emax_factor") * classical_barrier(p), static_cast<std::size_t>(cfg.integer("crp.ne")));
  const auto t0 = std::chrono::steady_clock::now();
  auto curve = crp_curve(problem, energies);
  spdlog::info("event=crp_curve eta={} omega_c_cm={:.2f} A0_cm={:.2f} points={} seconds={:.2f}", p.eta(),
               units.to_wavenumber(p.omega_c()), units.to_wavenumber(p.well().A0), energies.size(),
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return curve;
}

std::vector<Table2Row> compute_table2(const RunConfig& cfg, std::vector<CrpCurve>* curves) {
  const ModelParams base = cfg.model();
  const auto heights_cm = cfg.numbers("average.heights_cm");
  const double center = units.to_hartree(cfg.number("average.center_cm"));
  const double sigma = units.to_hartree(cfg.number("average.sigma_cm"));
  const auto betas = cfg.numbers("table2.betas_cm");
  std::vector<double> heights;
  for (const double h : heights_cm) heights.push_back(units.to_hartree(h));

  std::vector<Table2Row> rows;
  for (const double eta : cfg.numbers("table2.etas")) {
    const ModelParams p = base.with_eta(eta);
    const CrpCurve standard = compute_crp_curve(cfg, p);
    if (curves) curves->push_back(standard);
    std::vector<CrpCurve> per_height;
    for (const double h : heights) {
      DoubleWell wh = p.well();
      wh.A0 = h;
      per_height.push_back(compute_crp_curve(cfg, p.with_well(wh)));
    }
    for (const double b_cm : betas) {
      const double b = units.beta_from_cm(b_cm);
      std::size_t idx = 0;
      const double k_ave = barrier_averaged_rate(heights, center, sigma, [&](double h) {
        DoubleWell wh = p.well();
        wh.A0 = h;
        return thermal_rate_crp(b, p.with_well(wh), per_height[idx++]);
      });
      rows.push_back({eta, b_cm, std::log(units.rate_to_per_second(k_ave)),
                      std::log(units.rate_to_per_second(thermal_rate_crp(b, p, standard)))});
    }
  }
  return rows;
}

ResultManifest run_scenario(const std::string& name, const RunConfig& cfg, const ScenarioOptions& opt) {
  static const std::map<std::string, std::function<void(const RunConfig&, Writer&, std::vector<std::string>&)>> table{
      {"mep", [](const auto& c, auto& w, auto&) { scenario_mep(c, w); }},
      {"fig2", [](const auto& c, auto& w, auto&) { scenario_fig2(c, w); }},
      {"freqs", [](const auto& c, auto& w, auto&) { scenario_freqs(c, w); }},
      {"fig3", [](const auto& c, auto& w, auto&) { scenario_freqs(c, w); }},
      {"eigen", [](const auto& c, auto& w, auto&) { scenario_eigen(c, w); }},
      {"crp", [](const auto& c, auto& w, auto&) { scenario_crp(c, w); }},
      {"rates", [](const auto& c, auto& w, auto&) { scenario_rates(c, w); }},
      {"fig4", [](const auto& c, auto& w, auto&) { scenario_fig4(c, w); }},
      {"table2", [](const auto& c, auto& w, auto&) { scenario_table2(c, w); }},
      {"dynamics", [](const auto& c, auto& w, auto&) { scenario_dynamics(c, w); }},
      {"fig5", [](const auto& c, auto& w, auto& f) { scenario_fig5(c, w, f); }},
      {"fig6", [](const auto& c, auto& w, auto&) { scenario_fig6(c, w); }},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown scenario '" + name + "'");
  const auto violations = validate_config(cfg);
  if (!violations.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ConfigError(msg);
  }

  ResultManifest m;
  m.scenario = name;
  m.version = version_string;
  m.config_snapshot = cfg.snapshot();
  m.config_hash = sha256_hex(m.config_snapshot);
  const fs::path out = fs::path(opt.out_dir) / name;
  const fs::path cache = fs::path(opt.cache_dir.empty() ? (fs::path(opt.out_dir) / ".cache").string() : opt.cache_dir) /
                         cache_key(name, cfg);

  if (opt.use_cache && restore_from_cache(cache, out, m)) {
    m.cache_hit = true;
    spdlog::info("event=cache_hit scenario={} key={}", name, cache.filename().string());
  } else {
    Writer w(out);
    w.write("config.txt", m.config_snapshot);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      it->second(cfg, w, m.failures);
    } catch (const std::exception& e) {
      m.failures.push_back(e.what());
      spdlog::error("event=scenario_failed scenario={} error=\"{}\"", name, e.what());
    }
    m.timings_s["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& f : w.files()) {
      m.artifacts.push_back({f, sha256_file((out / f).string()), static_cast<std::size_t>(fs::file_size(out / f))});
    }
    if (opt.use_cache && m.ok()) {
      fs::create_directories(cache);
      for (const auto& a : m.artifacts) fs::copy_file(out / a.file, cache / a.file, fs::copy_options::overwrite_existing);
      std::ofstream(cache / "manifest.json") << m.to_json();
    }
  }
  fs::create_directories(out);
  std::ofstream(out / "manifest.json") << m.to_json();
  spdlog::info("event=scenario_done scenario={} ok={} cache_hit={} artifacts={}", name, m.ok(), m.cache_hit,
               m.artifacts.size());
  return m;
}

}  // namespace cavkin
