#include "cavkin/topology.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "cavkin/errors.hpp"

namespace cavkin {

namespace {

double path_prefactor(const ModelParams& p) {
  const double w = p.omega_c();
  return -std::sqrt(2.0 / (w * w * w)) * p.g();
}

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double relaxed_xc(double q, const ModelParams& p) { return path_prefactor(p) * dipole(q, p.dipole()); }

double cmep_xc(double Q, const ModelParams& p) { return relaxed_xc(Q / std::sqrt(p.mu()), p); }

double cmep_xc_derivative(double Q, const ModelParams& p) {
  const double sm = std::sqrt(p.mu());
  return path_prefactor(p) * dipole_d1(Q / sm, p.dipole()) / sm;
}

MepCurve arc_length(const ModelParams& p, double Q_begin, double Q_end, std::size_t n_samples, double tol) {
  if (n_samples < 2) throw InvalidParameter("arc_length needs at least 2 samples");
  if (!(Q_end > Q_begin)) throw InvalidParameter("arc_length needs Q_end > Q_begin");
  const auto speed = [&](double Q) {
    const double dx = cmep_xc_derivative(Q, p);
    return std::sqrt(1.0 + dx * dx);
  };
  const double sm = std::sqrt(p.mu());
  const double step = (Q_end - Q_begin) / static_cast<double>(n_samples - 1);
  const double seg_tol = tol / static_cast<double>(n_samples - 1);

  MepCurve c;
  c.Q.resize(n_samples);
  c.xc.resize(n_samples);
  c.s.resize(n_samples);
  c.V.resize(n_samples);
  double s = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double Q = (i + 1 == n_samples) ? Q_end : Q_begin + static_cast<double>(i) * step;
    if (i > 0) s += adaptive_simpson(speed, c.Q[i - 1], Q, seg_tol);
    c.Q[i] = Q;
    c.xc[i] = cmep_xc(Q, p);
    c.s[i] = s;
    c.V[i] = cpes(Q / sm, c.xc[i], p);
  }
  return c;
}

double mep_barrier_height(const ModelParams& p) {
  const double q0 = -p.well().minimum_q();
  return cpes(0.0, relaxed_xc(0.0, p), p) - cpes(q0, relaxed_xc(q0, p), p);
}

StationaryAnalysis analyze_hessian(const Eigen::Vector2d& location, const Eigen::Matrix2d& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(w);
  StationaryAnalysis a;
  a.location = location;
  a.hessian = w;
  a.eigenvectors = es.eigenvectors();
  for (int i = 0; i < 2; ++i) {
    const double l = es.eigenvalues()[i];
    a.frequencies[i] = std::copysign(std::sqrt(std::abs(l)), l);
  }
  return a;
}

ReactantFrequencies reactant_frequencies(const ModelParams& p) {
  const auto& w = p.well();
  const double mu = p.mu();
  const double Q0 = std::sqrt(mu) * w.minimum_q();
  return {std::sqrt(2.0 * (6.0 * w.A4 * Q0 * Q0 + w.A2 * mu) / (mu * mu)), p.omega_c()};
}

StationaryAnalysis reactant_analysis(const ModelParams& p) {
  const auto f = reactant_frequencies(p);
  Eigen::Matrix2d w = Eigen::Matrix2d::Zero();
  w(0, 0) = f.molecular * f.molecular;
  w(1, 1) = f.cavity * f.cavity;
  const double q0 = -p.well().minimum_q();
  return analyze_hessian({q0, relaxed_xc(q0, p)}, w);
}

Eigen::Matrix2d cts_hessian(const ModelParams& p) {
  const double mu = p.mu();
  const double w = p.omega_c();
  const double g = p.g();
  const double gamma = p.dipole().gamma;
  Eigen::Matrix2d h;
  h(0, 0) = 2.0 / mu * (g * g * gamma * gamma / w + p.well().A2);
  h(0, 1) = -std::sqrt(2.0 * w / mu) * g * gamma;
  h(1, 0) = h(0, 1);
  h(1, 1) = w * w;
  return h;
}

CtsFrequencies cts_frequencies(const ModelParams& p) {
  const Eigen::Matrix2d h = cts_hessian(p);
  const double mean = 0.5 * (h(0, 0) + h(1, 1));
  const double half = 0.5 * (h(0, 0) - h(1, 1));
  const double r = std::hypot(half, h(0, 1));
  const double lo = mean - r;
  const double hi = mean + r;
  return {std::copysign(std::sqrt(std::abs(lo)), lo), std::copysign(std::sqrt(std::abs(hi)), hi)};
}

StationaryAnalysis cts_analysis(const ModelParams& p) { return analyze_hessian({0.0, 0.0}, cts_hessian(p)); }

std::vector<FrequencyRow> frequency_scan(const ModelParams& p, ScanAxis axis, const std::vector<double>& values) {
  std::vector<FrequencyRow> rows(values.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < values.size(); ++i) {
    const ModelParams pi = axis == ScanAxis::eta ? p.with_eta(values[i]) : p.with_omega_c(values[i]);
    const auto f = cts_frequencies(pi);
    rows[i] = {pi.eta(), pi.omega_c(), std::abs(f.barrier), f.valley};
  }
  return rows;
}

}  // namespace cavkin
