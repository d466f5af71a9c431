#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "cavkin/model.hpp"

namespace cavkin {

// Relaxed cavity coordinate x_c0 = -sqrt(2/omega_c^3) g d(q). Along it the
// cPES equals V(q). The Q overloads take the mass-weighted coordinate sqrt(mu) q.
[[nodiscard]] double relaxed_xc(double q, const ModelParams& p);
[[nodiscard]] double cmep_xc(double Q, const ModelParams& p);
[[nodiscard]] double cmep_xc_derivative(double Q, const ModelParams& p);

struct MepCurve {
  std::vector<double> Q;
  std::vector<double> xc;
  std::vector<double> s;
  std::vector<double> V;
};

// Samples the path at n_samples equidistant Q in [Q_begin, Q_end]; s is the
// geodesic length from the first sample (adaptive Simpson, absolute tolerance tol).
[[nodiscard]] MepCurve arc_length(const ModelParams& p, double Q_begin, double Q_end, std::size_t n_samples,
                                  double tol = 1e-10);

// cPES at the saddle minus cPES at the reactant minimum, both on the path.
[[nodiscard]] double mep_barrier_height(const ModelParams& p);

// Frequencies are sign(lambda) sqrt(|lambda|) of the mass-weighted Hessian
// eigenvalues in ascending order, so a negative entry is an imaginary frequency
// of that magnitude. Eigenvectors are the matching columns.
struct StationaryAnalysis {
  Eigen::Vector2d location = Eigen::Vector2d::Zero();  // (q, x_c)
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
  Eigen::Vector2d frequencies = Eigen::Vector2d::Zero();
  Eigen::Matrix2d eigenvectors = Eigen::Matrix2d::Identity();
};

[[nodiscard]] StationaryAnalysis analyze_hessian(const Eigen::Vector2d& location, const Eigen::Matrix2d& w);

struct ReactantFrequencies {
  double molecular = 0.0;  // omega_R1
  double cavity = 0.0;     // omega_R2 = omega_c
};

// Harmonic frequencies of the diagonal reactant Hessian W0.
[[nodiscard]] ReactantFrequencies reactant_frequencies(const ModelParams& p);
[[nodiscard]] StationaryAnalysis reactant_analysis(const ModelParams& p);

// Analytic mass-weighted Hessian W at the saddle (0, 0).
[[nodiscard]] Eigen::Matrix2d cts_hessian(const ModelParams& p);

struct CtsFrequencies {
  double barrier = 0.0;  // signed; negative means imaginary with magnitude |barrier|
  double valley = 0.0;
};

[[nodiscard]] CtsFrequencies cts_frequencies(const ModelParams& p);
[[nodiscard]] StationaryAnalysis cts_analysis(const ModelParams& p);

enum class ScanAxis { eta, omega_c };

struct FrequencyRow {
  double eta = 0.0;
  double omega_c = 0.0;
  double barrier_abs = 0.0;  // |omega_TS|
  double valley = 0.0;
};

// One row per value. For the omega_c axis g is re-derived at fixed eta.
[[nodiscard]] std::vector<FrequencyRow> frequency_scan(const ModelParams& p, ScanAxis axis,
                                                       const std::vector<double>& values);

}  // namespace cavkin
