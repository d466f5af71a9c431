#include "cavkin/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "cavkin/errors.hpp"
#include "cavkin/units.hpp"

namespace cavkin {

namespace {

const std::map<std::string, std::string>& defaults() {
  static const std::map<std::string, std::string> d{
      {"well.A0_cm", "2029.91995287"},
      {"well.A2", "-3.289e-2"},
      {"well.A4", "2.923e-2"},
      {"well.mu", "4533.52"},
      {"dipole.gamma", "1.271"},
      {"dipole.delta", "0.8887"},
      {"cavity.omega_c_cm", "1039"},
      {"coupling.eta", "0"},
      {"coupling.d_fi", "0.027"},

      {"eigen.n_q", "201"},
      {"eigen.q_max", "1.6"},
      {"eigen.n_states", "6"},

      {"cap.k0", "0.08"},
      {"cap.k1", "0.1"},
      {"cap.q_m", "0.75"},
      {"cap.gamma_c0", "0.09"},
      {"cap.n", "4"},
      {"cap.xc0", "0"},
      {"cap.xcm", "200"},

      {"crp.n_q", "61"},
      {"crp.n_c", "61"},
      {"crp.q_max", "1.6"},
      {"crp.xc_max", "250"},
      {"crp.solver", "dense"},
      {"crp.channels", "61"},
      {"crp.tolerance", "1e-10"},
      {"crp.ne", "30"},
      {"crp.emax_factor", "5"},

      {"rates.beta_min_cm", "0.001"},
      {"rates.beta_max_cm", "0.02"},
      {"rates.n_beta", "20"},
      {"rates.temperature_k", "298"},

      {"average.heights_cm", "1830,1930,2030,2130,2230"},
      {"average.center_cm", "2030"},
      {"average.sigma_cm", "200"},

      {"table2.etas", "0,0.05,0.1,0.2"},
      {"table2.betas_cm", "0.001,0.002,0.005"},

      {"fig2.etas", "0,0.1,0.2"},
      {"fig4.etas", "0,0.05,0.1,0.2"},
      {"fig4.omega_rel", "0.5,0.75,1,1.5,2"},

      {"mep.q_max", "1.5"},
      {"mep.n", "301"},

      {"freqs.eta_max", "0.2"},
      {"freqs.n_eta", "41"},
      {"freqs.omega_min_cm", "100"},
      {"freqs.omega_max_cm", "3000"},
      {"freqs.n_omega", "59"},
      {"freqs.omega_etas", "0,0.05,0.1,0.2"},

      {"dyn.eta", "0.06"},
      {"dyn.omega_c_rel", "1"},
      {"dyn.tf_fs", "1000"},
      {"dyn.dt_fs", "0.25"},
      {"dyn.output_fs", "1"},
      {"dyn.q_i", "-0.9"},
      {"dyn.n_q", "64"},
      {"dyn.n_c", "64"},
      {"dyn.xi", "14"},
      {"dyn.q_max", "2.0"},

      {"scan.eta_min", "0"},
      {"scan.eta_max", "0.16"},
      {"scan.n_eta", "9"},
      {"scan.omega_rel_min", "0.5"},
      {"scan.omega_rel_max", "2"},
      {"scan.n_omega", "9"},
      {"fig6.etas", "0.02,0.06,0.1"},
  };
  return d;
}

const std::set<std::string>& list_keys() {
  static const std::set<std::string> k{"average.heights_cm", "table2.etas", "table2.betas_cm", "fig2.etas",
                                       "fig4.etas", "fig4.omega_rel", "freqs.omega_etas", "fig6.etas"};
  return k;
}

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (*first == '+') ++first;
  const auto r = std::from_chars(first, last, out);
  return r.ec == std::errc() && r.ptr == last && std::isfinite(out);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

RunConfig::RunConfig() : values_(defaults()) {}

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_string(ss.str());
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!defaults().count(key)) throw ConfigError("unknown config key '" + key + "'");
  values_[key] = value;
}

std::string RunConfig::environment_name(const std::string& key) {
  std::string name = "APP_";
  for (const char c : key) name += (c == '.') ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

void RunConfig::apply_environment() {
  std::map<std::string, std::string> env;
  for (const auto& [key, _] : values_) {
    if (const char* v = std::getenv(environment_name(key).c_str())) env[environment_name(key)] = v;
  }
  apply_environment(env);
}

void RunConfig::apply_environment(const std::map<std::string, std::string>& env) {
  for (auto& [key, value] : values_) {
    const auto it = env.find(environment_name(key));
    if (it != env.end()) value = trim(it->second);
  }
}

const std::string& RunConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

double RunConfig::number(const std::string& key) const {
  double v = 0.0;
  if (!parse_double(raw(key), v)) throw ConfigError(key + ": '" + raw(key) + "' is not a number");
  return v;
}

long RunConfig::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v)) throw ConfigError(key + ": '" + raw(key) + "' is not an integer");
  return static_cast<long>(v);
}

bool RunConfig::flag(const std::string& key) const {
  const std::string& v = raw(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": '" + v + "' is not a boolean");
}

std::vector<double> RunConfig::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(raw(key))) {
    double v = 0.0;
    if (!parse_double(item, v)) throw ConfigError(key + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::string RunConfig::snapshot() const {
  std::string s;
  for (const auto& [k, v] : values_) s += k + " = " + v + "\n";
  return s;
}

ModelParams RunConfig::model() const {
  DoubleWell w{units.to_hartree(number("well.A0_cm")), number("well.A2"), number("well.A4"), number("well.mu")};
  w.validate();
  const DipoleModel d{number("dipole.gamma"), number("dipole.delta")};
  return {w, d, CavityMode::from_wavenumber(number("cavity.omega_c_cm")), number("coupling.eta"),
          number("coupling.d_fi")};
}

CapConfig RunConfig::cap() const {
  CapConfig c;
  c.k0 = number("cap.k0");
  c.k1 = number("cap.k1");
  c.q_m = number("cap.q_m");
  c.gamma_c0 = number("cap.gamma_c0");
  c.n = static_cast<int>(integer("cap.n"));
  c.xc0 = number("cap.xc0");
  c.xcm = number("cap.xcm");
  return c;
}

CrpSettings RunConfig::crp_settings() const {
  CrpSettings s;
  s.cap = cap();
  s.solver = crp_solver_from_string(raw("crp.solver"));
  s.channels = static_cast<std::size_t>(integer("crp.channels"));
  s.tolerance = number("crp.tolerance");
  return s;
}

Grid2D RunConfig::crp_grid(const ModelParams& p) const {
  const double qm = number("crp.q_max");
  const double xm = number("crp.xc_max");
  return {Grid1D(-qm, qm, static_cast<std::size_t>(integer("crp.n_q")), p.mu()),
          Grid1D(-xm, xm, static_cast<std::size_t>(integer("crp.n_c")), 1.0)};
}

Grid1D RunConfig::eigen_grid(const ModelParams& p) const {
  const double qm = number("eigen.q_max");
  return {-qm, qm, static_cast<std::size_t>(integer("eigen.n_q")), p.mu()};
}

ScanOptions RunConfig::dynamics_options() const {
  ScanOptions o;
  o.propagation.dt_fs = number("dyn.dt_fs");
  o.propagation.tf_fs = number("dyn.tf_fs");
  o.propagation.output_every_fs = number("dyn.output_fs");
  o.n_q = static_cast<std::size_t>(integer("dyn.n_q"));
  o.n_c = static_cast<std::size_t>(integer("dyn.n_c"));
  o.xi = number("dyn.xi");
  o.q_max = number("dyn.q_max");
  o.q_i = number("dyn.q_i");
  return o;
}

std::vector<std::string> validate_config(const RunConfig& cfg) {
  std::vector<std::string> v;
  std::map<std::string, double> num;
  for (const auto& [key, value] : cfg.values()) {
    if (key == "crp.solver") continue;
    if (list_keys().count(key)) {
      for (const auto& item : split_list(value)) {
        double x = 0.0;
        if (!parse_double(item, x)) v.push_back(key + ": '" + item + "' is not a number");
      }
      continue;
    }
    double x = 0.0;
    if (!parse_double(value, x)) {
      v.push_back(key + ": '" + value + "' is not a number");
    } else {
      num[key] = x;
    }
  }
  const auto have = [&](const std::string& k) { return num.count(k) != 0; };
  const auto positive = [&](const std::string& k) {
    if (have(k) && !(num[k] > 0.0)) v.push_back(k + " must be positive");
  };
  const auto non_negative = [&](const std::string& k) {
    if (have(k) && num[k] < 0.0) v.push_back(k + " must be non-negative");
  };
  const auto count = [&](const std::string& k, double min) {
    if (have(k) && (num[k] < min || num[k] != std::floor(num[k]))) {
      v.push_back(k + " must be an integer >= " + std::to_string(static_cast<long>(min)));
    }
  };

  if (have("well.A2") && !(num["well.A2"] < 0.0)) v.push_back("well.A2 must be negative");
  positive("well.A4");
  positive("well.mu");
  positive("dipole.delta");
  positive("cavity.omega_c_cm");
  non_negative("coupling.eta");
  if (have("coupling.d_fi") && num["coupling.d_fi"] == 0.0) v.push_back("coupling.d_fi must be non-zero");

  count("eigen.n_q", 3);
  positive("eigen.q_max");
  count("eigen.n_states", 4);
  if (have("eigen.q_max") && num["eigen.q_max"] < 1.6) v.push_back("eigen.q_max must be at least 1.6");

  non_negative("cap.k0");
  positive("cap.k1");
  non_negative("cap.gamma_c0");
  if (have("cap.n") && (num["cap.n"] <= 0 || std::fmod(num["cap.n"], 2.0) != 0.0)) {
    v.push_back("cap.n must be a positive even integer");
  }
  if (have("cap.xcm") && have("cap.xc0") && !(num["cap.xcm"] > num["cap.xc0"])) {
    v.push_back("cap.xcm must exceed cap.xc0");
  }
  if (have("cap.xcm") && have("crp.xc_max") && num["cap.xcm"] > num["crp.xc_max"]) {
    v.push_back("cap.xcm (" + cfg.raw("cap.xcm") + ") lies beyond the CRP grid edge crp.xc_max (" +
                cfg.raw("crp.xc_max") + ")");
  }
  if (have("cap.q_m") && have("crp.q_max") && std::abs(num["cap.q_m"]) >= num["crp.q_max"]) {
    v.push_back("cap.q_m (" + cfg.raw("cap.q_m") + ") lies beyond the CRP grid edge crp.q_max (" +
                cfg.raw("crp.q_max") + ")");
  }

  count("crp.n_q", 3);
  count("crp.n_c", 3);
  positive("crp.q_max");
  positive("crp.xc_max");
  count("crp.channels", 1);
  positive("crp.tolerance");
  count("crp.ne", 1);
  positive("crp.emax_factor");
  {
    const std::string& s = cfg.raw("crp.solver");
    if (s != "dense" && s != "iterative" && s != "contracted") {
      v.push_back("crp.solver must be one of dense, iterative, contracted");
    }
  }

  positive("rates.beta_min_cm");
  positive("rates.beta_max_cm");
  count("rates.n_beta", 2);
  if (have("rates.beta_min_cm") && have("rates.beta_max_cm") &&
      !(num["rates.beta_max_cm"] > num["rates.beta_min_cm"])) {
    v.push_back("rates.beta_max_cm must exceed rates.beta_min_cm");
  }
  positive("rates.temperature_k");
  positive("average.sigma_cm");

  positive("mep.q_max");
  count("mep.n", 2);
  positive("freqs.eta_max");
  count("freqs.n_eta", 2);
  positive("freqs.omega_min_cm");
  count("freqs.n_omega", 2);
  if (have("freqs.omega_min_cm") && have("freqs.omega_max_cm") &&
      !(num["freqs.omega_max_cm"] > num["freqs.omega_min_cm"])) {
    v.push_back("freqs.omega_max_cm must exceed freqs.omega_min_cm");
  }

  non_negative("dyn.eta");
  positive("dyn.omega_c_rel");
  positive("dyn.tf_fs");
  positive("dyn.dt_fs");
  positive("dyn.output_fs");
  count("dyn.n_q", 3);
  count("dyn.n_c", 3);
  positive("dyn.xi");
  positive("dyn.q_max");
  if (have("dyn.dt_fs") && have("dyn.output_fs") && num["dyn.dt_fs"] > num["dyn.output_fs"]) {
    v.push_back("dyn.dt_fs must not exceed dyn.output_fs");
  }
  if (have("dyn.q_i") && have("dyn.q_max") && std::abs(num["dyn.q_i"]) >= num["dyn.q_max"]) {
    v.push_back("dyn.q_i must lie inside (-dyn.q_max, dyn.q_max)");
  }

  non_negative("scan.eta_min");
  count("scan.n_eta", 1);
  count("scan.n_omega", 1);
  positive("scan.omega_rel_min");
  if (have("scan.eta_min") && have("scan.eta_max") && num["scan.eta_max"] < num["scan.eta_min"]) {
    v.push_back("scan.eta_max must not be below scan.eta_min");
  }
  if (have("scan.omega_rel_min") && have("scan.omega_rel_max") &&
      num["scan.omega_rel_max"] < num["scan.omega_rel_min"]) {
    v.push_back("scan.omega_rel_max must not be below scan.omega_rel_min");
  }
  return v;
}

}  // namespace cavkin
