#include "cavkin/dynamics.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cavkin/errors.hpp"
#include "cavkin/topology.hpp"
#include "cavkin/units.hpp"

namespace cavkin {

using cplx = std::complex<double>;
using RowBlock = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Grid2D dynamics_grid(const ModelParams& p, std::size_t n_q, std::size_t n_c, double xi, double q_max) {
  const double xr = xi / std::sqrt(p.omega_c());
  return {Grid1D(-q_max, q_max, n_q, p.mu()), Grid1D(-xr, xr, n_c, 1.0)};
}

namespace {

// Continuous norm of a centred Gaussian |psi|^2 ~ exp(-a (y - c)^2) outside [lo, hi].
double gaussian_tail(double a, double c, double lo, double hi) {
  const double s = std::sqrt(a);
  return 0.5 * std::erfc((c - lo) * s) + 0.5 * std::erfc((hi - c) * s);
}

}  // namespace

Wavepacket initial_state(double q_i, const ModelParams& p, const Grid2D& grid, double omega_q) {
  if (!grid.q.contains(q_i)) throw RangeError("initial state centre lies outside the q grid");
  const double aq = p.mu() * omega_q;
  const double ac = p.omega_c();
  const double tail_q = gaussian_tail(aq, q_i, grid.q.start(), grid.q.end());
  const double tail_c = gaussian_tail(ac, 0.0, grid.xc.start(), grid.xc.end());
  const double lost = 1.0 - (1.0 - tail_q) * (1.0 - tail_c);
  if (lost > 1e-10) {
    std::ostringstream msg;
    msg << "grid too small for the initial state: " << lost << " of the norm lies outside";
    throw RangeError(msg.str());
  }
  Wavepacket w{grid, Eigen::VectorXcd(static_cast<Eigen::Index>(grid.size())), 0.0};
  for (std::size_t i = 0; i < grid.q.size(); ++i) {
    const double dq = grid.q.point(i) - q_i;
    const double fq = std::exp(-0.5 * aq * dq * dq);
    for (std::size_t j = 0; j < grid.xc.size(); ++j) {
      const double x = grid.xc.point(j);
      w.amplitudes[static_cast<Eigen::Index>(grid.index(i, j))] = fq * std::exp(-0.5 * ac * x * x);
    }
  }
  w.amplitudes.normalize();
  return w;
}

Wavepacket initial_state(double q_i, const ModelParams& p, const Grid2D& grid) {
  return initial_state(q_i, p, grid, reactant_frequencies(p).molecular);
}

double inversion_probability(const Wavepacket& psi) {
  const auto nc = static_cast<Eigen::Index>(psi.grid.xc.size());
  double s = 0.0;
  for (std::size_t i = 0; i < psi.grid.q.size(); ++i) {
    if (psi.grid.q.point(i) >= 0.0) s += psi.amplitudes.segment(static_cast<Eigen::Index>(i) * nc, nc).squaredNorm();
  }
  return s;
}

Observables measure(const Wavepacket& psi, const ModelParams& p, const OperatorRep& h) {
  const auto& g = psi.grid;
  const auto nq = static_cast<Eigen::Index>(g.q.size());
  const auto nc = static_cast<Eigen::Index>(g.xc.size());
  Eigen::Map<const RowBlock> a(psi.amplitudes.data(), nq, nc);
  const RowBlock tq_a = h.t_q() * a;
  const RowBlock a_tc = a * h.t_c();

  const double w = p.omega_c();
  const double kappa = p.bilinear_strength();
  const double lambda = p.self_energy_strength();
  Observables o;
  o.time_fs = psi.time_fs;
  o.norm2 = psi.norm2();
  double kin_q = 0.0;
  double kin_c = 0.0;
  for (Eigen::Index i = 0; i < nq; ++i) {
    const double q = g.q.point(static_cast<std::size_t>(i));
    const double v = potential(q, p.well());
    const double d = dipole(q, p.dipole());
    for (Eigen::Index j = 0; j < nc; ++j) {
      const double x = g.xc.point(static_cast<std::size_t>(j));
      const double rho = std::norm(a(i, j));
      kin_q += std::real(std::conj(a(i, j)) * tq_a(i, j));
      kin_c += std::real(std::conj(a(i, j)) * a_tc(i, j));
      if (q >= 0.0) o.p_inv += rho;
      o.q += rho * q;
      o.xc += rho * x;
      o.h_s += rho * v;
      o.h_c += rho * 0.5 * w * w * x * x;
      o.h_dse += rho * lambda * d * d;
      o.dh_sc += rho * kappa * x * d;
    }
  }
  o.h_s += kin_q;
  o.h_c += kin_c;
  Eigen::VectorXcd hpsi;
  h.apply(psi.amplitudes, hpsi);
  o.h = std::real(psi.amplitudes.dot(hpsi));

  const double n = o.norm2;
  for (double* f : {&o.p_inv, &o.q, &o.xc, &o.h_s, &o.h_c, &o.h_dse, &o.dh_sc, &o.h}) *f /= n;
  return o;
}

double time_averaged_q(const TrajectoryRecord& traj) {
  const auto& s = traj.samples;
  if (s.size() < 2) throw InvalidParameter("time average needs at least two samples");
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    integral += 0.5 * (s[k + 1].time_fs - s[k].time_fs) * (s[k].q + s[k + 1].q);
  }
  return integral / (s.back().time_fs - s.front().time_fs);
}

namespace {

struct SpectralWindow {
  double centre = 0.0;
  double half_width = 0.0;
};

SpectralWindow spectral_window(const OperatorRep& h) {
  const Eigen::VectorXd lq = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h.t_q(), Eigen::EigenvaluesOnly).eigenvalues();
  const Eigen::VectorXd lc = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h.t_c(), Eigen::EigenvaluesOnly).eigenvalues();
  const double lo = h.v_diag().minCoeff() + lq.minCoeff() + lc.minCoeff();
  const double hi = h.v_diag().maxCoeff() + lq.maxCoeff() + lc.maxCoeff();
  const double pad = 1e-3 * (hi - lo);
  return {0.5 * (hi + lo), 0.5 * (hi - lo) + pad};
}

std::vector<cplx> chebyshev_coefficients(double r, double tol) {
  std::vector<cplx> c;
  const cplx minus_i(0.0, -1.0);
  cplx phase(1.0, 0.0);
  for (int k = 0;; ++k) {
    const double j = std::cyl_bessel_j(static_cast<double>(k), r);
    c.push_back((k == 0 ? 1.0 : 2.0) * phase * j);
    phase *= minus_i;
    if (k > r && std::abs(j) < tol) break;
    if (k > 100000) throw NumericalFailure("Chebyshev series did not converge");
  }
  return c;
}

template <class Apply>
void chebyshev_series(Eigen::VectorXcd& psi, const Apply& apply, const SpectralWindow& win, double dt,
                      const std::vector<cplx>& coef) {
  const Eigen::Index n = psi.size();
  const double inv_b = 1.0 / win.half_width;
  const double a = win.centre;
  Eigen::VectorXcd prev = psi;
  Eigen::VectorXcd cur(n), next(n), hv(n);
  apply(prev, hv);
  cur = (hv - a * prev) * inv_b;
  Eigen::VectorXcd acc = coef[0] * prev + coef[1] * cur;
  for (std::size_t k = 2; k < coef.size(); ++k) {
    apply(cur, hv);
    next = 2.0 * inv_b * (hv - a * cur) - prev;
    acc += coef[k] * next;
    prev.swap(cur);
    cur.swap(next);
  }
  psi = std::exp(cplx(0.0, -a * dt)) * acc;
}

}  // namespace

void chebyshev_step(Wavepacket& psi, const OperatorRep& h, double dt_fs, double tolerance) {
  const auto win = spectral_window(h);
  const double dt = units.to_atomic_time(dt_fs);
  const auto coef = chebyshev_coefficients(win.half_width * dt, tolerance);
  chebyshev_series(psi.amplitudes, [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { h.apply(x, y); }, win, dt,
                   coef);
  psi.time_fs += dt_fs;
}

void chebyshev_step_serial(Wavepacket& psi, const OperatorRep& h, double dt_fs, double tolerance) {
  const auto win = spectral_window(h);
  const double dt = units.to_atomic_time(dt_fs);
  const auto coef = chebyshev_coefficients(win.half_width * dt, tolerance);
  chebyshev_series(psi.amplitudes, [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { h.apply_serial(x, y); },
                   win, dt, coef);
  psi.time_fs += dt_fs;
}

TrajectoryRecord propagate(Wavepacket& psi, const ModelParams& p, const PropagationOptions& opt,
                           const Observer& observer) {
  if (!(opt.dt_fs > 0.0) || !(opt.tf_fs > 0.0) || !(opt.output_every_fs > 0.0)) {
    throw InvalidParameter("propagation times must be positive");
  }
  const double sub = opt.output_every_fs / opt.dt_fs;
  const auto n_sub = static_cast<long>(std::llround(sub));
  const double outs = opt.tf_fs / opt.output_every_fs;
  const auto n_out = static_cast<long>(std::llround(outs));
  if (n_sub < 1 || std::abs(sub - static_cast<double>(n_sub)) > 1e-9 * sub ||
      std::abs(outs - static_cast<double>(n_out)) > 1e-9 * outs) {
    throw InvalidParameter("output interval must be a multiple of dt and divide t_f");
  }

  const OperatorRep h = assemble_h2d(p, psi.grid);
  const auto win = spectral_window(h);
  const double dt = units.to_atomic_time(opt.dt_fs);
  const auto coef = chebyshev_coefficients(win.half_width * dt, opt.series_tolerance);
  const auto apply = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { h.apply(x, y); };

  TrajectoryRecord rec;
  rec.chebyshev_terms = coef.size();
  const double t0 = psi.time_fs;
  auto first = measure(psi, p, h);
  rec.samples.push_back(first);
  if (observer) observer(psi, first);
  const double e0 = first.h;
  const double n0 = first.norm2;

  for (long k = 1; k <= n_out; ++k) {
    for (long s = 0; s < n_sub; ++s) chebyshev_series(psi.amplitudes, apply, win, dt, coef);
    psi.time_fs = t0 + static_cast<double>(k) * opt.output_every_fs;
    const auto o = measure(psi, p, h);
    rec.samples.push_back(o);
    if (observer) observer(psi, o);
    const double dn = std::abs(o.norm2 - n0);
    const double de = std::abs(o.h - e0) / std::abs(e0);
    rec.max_norm_drift = std::max(rec.max_norm_drift, dn);
    rec.max_energy_drift = std::max(rec.max_energy_drift, de);
    if (dn > opt.norm_tolerance || de > opt.energy_tolerance) {
      std::ostringstream msg;
      msg << "propagation drift at t=" << o.time_fs << " fs: norm drift " << dn << ", relative energy drift " << de
          << " (series terms " << coef.size() << ", dt " << opt.dt_fs << " fs)";
      throw NumericalFailure(msg.str());
    }
  }
  return rec;
}

TrajectoryRecord run_localization(const ModelParams& p, const ScanOptions& opt) {
  const Grid2D grid = dynamics_grid(p, opt.n_q, opt.n_c, opt.xi, opt.q_max);
  Wavepacket psi = initial_state(opt.q_i, p, grid);
  return propagate(psi, p, opt.propagation);
}

std::vector<ScanRow> resonance_scan(const std::vector<double>& etas, const std::vector<double>& omegas,
                                    const ModelParams& p, const ScanOptions& opt) {
  const std::size_t n = etas.size() * omegas.size();
  std::vector<ScanRow> rows(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t k = 0; k < n; ++k) {
    ScanRow& r = rows[k];
    r.eta = etas[k / omegas.size()];
    r.omega_c = omegas[k % omegas.size()];
    try {
      const ModelParams pk = p.with_eta(r.eta).with_omega_c(r.omega_c);
      const auto traj = run_localization(pk, opt);
      r.q_bar = time_averaged_q(traj);
      r.p_inv_tf = traj.samples.back().p_inv;
    } catch (const std::exception& e) {
      r.error = e.what();
      r.q_bar = std::nan("");
      r.p_inv_tf = std::nan("");
    }
  }
  return rows;
}

}  // namespace cavkin
