#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cavkin/crp.hpp"
#include "cavkin/model.hpp"

namespace cavkin {

// All rates are in inverse atomic time and beta = 1/(k_B T) in 1/E_h unless a
// name says otherwise; see UnitSystem for conversions.

// Classical activation energy used by TST and by the default CRP energy window.
[[nodiscard]] inline double classical_barrier(const ModelParams& p) { return p.well().A0; }

// Q_R = prod_i (1 - exp(-beta omega_R_i))^-1 over both reactant modes.
[[nodiscard]] double reactant_partition(double beta, const ModelParams& p);

// k = 1/(2 pi Q_R) * integral exp(-beta E) N(E) dE, composite trapezoid on the
// stored energy grid.
[[nodiscard]] double thermal_rate_crp(double beta, const ModelParams& p, const CrpCurve& curve);

// Harmonic Eyring TST with zero-point corrections.
[[nodiscard]] double eyring_tst(double beta, const ModelParams& p);
// 1 + (beta |omega_TS|)^2 / 24
[[nodiscard]] double wigner_factor(double beta, const ModelParams& p);
[[nodiscard]] double eyring_tst_wigner(double beta, const ModelParams& p);

// Delta G = -ln(2 pi beta k) / beta and its inverse.
[[nodiscard]] double delta_g_extract(double k, double beta);
[[nodiscard]] double rate_from_delta_g(double delta_g, double beta);

// Normalized Gaussian weights over the sampled heights (discrete normalization).
[[nodiscard]] std::vector<double> barrier_weights(const std::vector<double>& heights, double center, double sigma);

// sum_i w_i k(h_i) with the weights above.
[[nodiscard]] double barrier_averaged_rate(const std::vector<double>& heights, double center, double sigma,
                                           const std::function<double(double)>& rate_at_height);

struct RateRecord {
  double beta_cm = 0.0;
  double temperature = 0.0;  // K
  double eta = 0.0;
  double omega_c = 0.0;      // E_h
  double k_crp = 0.0;        // s^-1
  double k_tst = 0.0;
  double k_tst_wigner = 0.0;
  std::optional<double> delta_g;  // cm^-1
};

// Table of rates over beta values (cm). The CRP curve may be empty, in which
// case k_crp stays zero.
[[nodiscard]] std::vector<RateRecord> arrhenius_table(const ModelParams& p, const CrpCurve& curve,
                                                      const std::vector<double>& beta_cm);

}  // namespace cavkin
