#include "cavkin/rates.hpp"

#include <cmath>
#include <numbers>

#include "cavkin/errors.hpp"
#include "cavkin/topology.hpp"
#include "cavkin/units.hpp"

namespace cavkin {

namespace {

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidParameter("temperature must be positive and finite");
}

double oscillator_partition(double beta, double omega) { return 1.0 / (1.0 - std::exp(-beta * omega)); }

}  // namespace

double reactant_partition(double beta, const ModelParams& p) {
  require_beta(beta);
  const auto f = reactant_frequencies(p);
  return oscillator_partition(beta, f.molecular) * oscillator_partition(beta, f.cavity);
}

double thermal_rate_crp(double beta, const ModelParams& p, const CrpCurve& curve) {
  require_beta(beta);
  const auto& e = curve.energies;
  const auto& n = curve.values;
  if (e.size() != n.size() || e.size() < 2) throw InvalidParameter("CRP curve needs at least two samples");
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < e.size(); ++k) {
    if (!(e[k + 1] > e[k])) throw InvalidParameter("CRP curve energies must be ascending");
    integral += 0.5 * (e[k + 1] - e[k]) * (std::exp(-beta * e[k]) * n[k] + std::exp(-beta * e[k + 1]) * n[k + 1]);
  }
  return integral / (2.0 * std::numbers::pi * reactant_partition(beta, p));
}

double eyring_tst(double beta, const ModelParams& p) {
  require_beta(beta);
  const auto r = reactant_frequencies(p);
  const auto ts = cts_frequencies(p);
  const double q_ts = oscillator_partition(beta, ts.valley);
  const double zpe_shift = 0.5 * ts.valley - 0.5 * (r.molecular + r.cavity);
  return q_ts / (2.0 * std::numbers::pi * beta * reactant_partition(beta, p)) *
         std::exp(-beta * (classical_barrier(p) + zpe_shift));
}

double wigner_factor(double beta, const ModelParams& p) {
  require_beta(beta);
  const double x = beta * std::abs(cts_frequencies(p).barrier);
  return 1.0 + x * x / 24.0;
}

double eyring_tst_wigner(double beta, const ModelParams& p) { return wigner_factor(beta, p) * eyring_tst(beta, p); }

double delta_g_extract(double k, double beta) {
  require_beta(beta);
  if (!(k > 0.0)) throw InvalidParameter("rate must be positive to extract a free energy");
  return -std::log(2.0 * std::numbers::pi * beta * k) / beta;
}

double rate_from_delta_g(double delta_g, double beta) {
  require_beta(beta);
  return std::exp(-beta * delta_g) / (2.0 * std::numbers::pi * beta);
}

std::vector<double> barrier_weights(const std::vector<double>& heights, double center, double sigma) {
  if (heights.empty()) throw InvalidParameter("barrier averaging needs at least one height");
  if (!(sigma > 0.0)) throw InvalidParameter("barrier averaging width must be positive");
  std::vector<double> w(heights.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < heights.size(); ++i) {
    const double u = (heights[i] - center) / sigma;
    w[i] = std::exp(-0.5 * u * u);
    sum += w[i];
  }
  for (auto& x : w) x /= sum;
  return w;
}

double barrier_averaged_rate(const std::vector<double>& heights, double center, double sigma,
                             const std::function<double(double)>& rate_at_height) {
  const auto w = barrier_weights(heights, center, sigma);
  double k = 0.0;
  for (std::size_t i = 0; i < heights.size(); ++i) k += w[i] * rate_at_height(heights[i]);
  return k;
}

std::vector<RateRecord> arrhenius_table(const ModelParams& p, const CrpCurve& curve, const std::vector<double>& beta_cm) {
  std::vector<RateRecord> out;
  out.reserve(beta_cm.size());
  for (const double b_cm : beta_cm) {
    const double b = units.beta_from_cm(b_cm);
    RateRecord r;
    r.beta_cm = b_cm;
    r.temperature = units.kelvin_from_beta_cm(b_cm);
    r.eta = p.eta();
    r.omega_c = p.omega_c();
    const double k_tst = eyring_tst(b, p);
    r.k_tst = units.rate_to_per_second(k_tst);
    r.k_tst_wigner = units.rate_to_per_second(wigner_factor(b, p) * k_tst);
    r.delta_g = units.to_wavenumber(delta_g_extract(k_tst, b));
    if (!curve.values.empty()) r.k_crp = units.rate_to_per_second(thermal_rate_crp(b, p, curve));
    out.push_back(r);
  }
  return out;
}

}  // namespace cavkin
