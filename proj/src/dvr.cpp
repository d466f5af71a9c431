#include "cavkin/dvr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cavkin/errors.hpp"
#include "cavkin/separable.hpp"

namespace cavkin {

Eigen::MatrixXd colbert_miller_kinetic(const Grid1D& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double dx = grid.spacing();
  const double pre = 1.0 / (2.0 * grid.mass() * dx * dx);
  Eigen::MatrixXd t(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t(i, i) = pre * std::numbers::pi * std::numbers::pi / 3.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const auto k = static_cast<double>(i - j);
      const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
      t(i, j) = pre * sign * 2.0 / (k * k);
      t(j, i) = t(i, j);
    }
  }
  return t;
}

int grid_parity(const Eigen::VectorXd& v, double tol) {
  const double n2 = v.squaredNorm();
  if (n2 == 0.0) return 0;
  const double overlap = v.dot(v.reverse()) / n2;
  if (std::abs(overlap - 1.0) < tol) return 1;
  if (std::abs(overlap + 1.0) < tol) return -1;
  return 0;
}

namespace {

bool symmetric_grid(const Grid1D& g) { return std::abs(g.start() + g.end()) <= 1e-12 * std::abs(g.end()); }

void assign_parity(BoundStates& bs, bool symmetric) {
  bs.parity.assign(bs.size(), 0);
  if (!symmetric) return;
  for (std::size_t k = 0; k < bs.size(); ++k) bs.parity[k] = grid_parity(bs.states.col(static_cast<Eigen::Index>(k)));
}

BoundStates dense_lowest(const Eigen::MatrixXd& h, std::size_t n_states, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) {
    throw NumericalFailure(std::string(what) + ": dense symmetric eigensolve did not converge (n=" +
                           std::to_string(h.rows()) + ")");
  }
  const auto k = static_cast<Eigen::Index>(std::min<std::size_t>(n_states, static_cast<std::size_t>(h.rows())));
  BoundStates bs;
  bs.energies = es.eigenvalues().head(k);
  bs.states = es.eigenvectors().leftCols(k);
  return bs;
}

}  // namespace

SystemSpectrum eigensolve_1d(const DoubleWell& well, const DipoleModel& dip, const Grid1D& grid, std::size_t n_states) {
  well.validate();
  if (n_states < 4) throw InvalidParameter("eigensolve_1d needs at least 4 states");
  if (grid.start() > -1.6 || grid.end() < 1.6) throw RangeError("eigensolve_1d: grid must cover [-1.6, 1.6] a0");

  Eigen::MatrixXd h = colbert_miller_kinetic(grid);
  Eigen::VectorXd d(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double q = grid.point(i);
    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += potential(q, well);
    d[static_cast<Eigen::Index>(i)] = dipole(q, dip);
  }

  SystemSpectrum out;
  out.bound = dense_lowest(h, n_states, "eigensolve_1d");
  assign_parity(out.bound, symmetric_grid(grid));
  const auto& e = out.bound.energies;
  const auto& s = out.bound.states;
  out.splitting = e[1] - e[0];
  out.bright_transition = e[3] - e[0];
  out.transition_dipole = std::abs(s.col(0).dot(d.cwiseProduct(s.col(3))));
  return out;
}

OperatorRep::OperatorRep(Grid2D grid, Eigen::MatrixXd t_q, Eigen::MatrixXd t_c, Eigen::VectorXd v_diag)
    : grid_(grid), t_q_(std::move(t_q)), t_c_(std::move(t_c)), v_diag_(std::move(v_diag)) {
  if (t_q_.rows() != static_cast<Eigen::Index>(grid_.q.size()) ||
      t_c_.rows() != static_cast<Eigen::Index>(grid_.xc.size()) ||
      v_diag_.size() != static_cast<Eigen::Index>(grid_.size())) {
    throw InvalidParameter("OperatorRep: operator pieces do not match the grid");
  }
}

OperatorRep OperatorRep::with_cap(Eigen::VectorXd gamma) const {
  if (gamma.size() != size()) throw InvalidParameter("OperatorRep: CAP length does not match the grid");
  OperatorRep out = *this;
  out.cap_ = std::move(gamma);
  return out;
}

kernels::SeparableOperator OperatorRep::kernel() const {
  return {&t_q_, &t_c_, &v_diag_, cap_ ? &*cap_ : nullptr};
}

void OperatorRep::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  auto op = kernel();
  op.gamma = nullptr;
  kernels::apply(op, x, y);
}

void OperatorRep::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const { kernels::apply(kernel(), x, y); }

void OperatorRep::apply_serial(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  auto op = kernel();
  op.gamma = nullptr;
  kernels::apply_serial(op, x, y);
}

void OperatorRep::apply_serial(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  kernels::apply_serial(kernel(), x, y);
}

Eigen::MatrixXd OperatorRep::dense() const {
  const auto n = static_cast<std::size_t>(size());
  if (n > dense_limit) {
    throw SizeError("OperatorRep: dense matrix of size " + std::to_string(n) + " exceeds limit " +
                    std::to_string(dense_limit));
  }
  const Eigen::Index nq = t_q_.rows();
  const Eigen::Index nc = t_c_.rows();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size(), size());
  for (Eigen::Index i = 0; i < nq; ++i) {
    for (Eigen::Index k = 0; k < nq; ++k) {
      const double t = t_q_(i, k);
      for (Eigen::Index j = 0; j < nc; ++j) h(i * nc + j, k * nc + j) += t;
    }
    h.block(i * nc, i * nc, nc, nc) += t_c_;
  }
  h.diagonal() += v_diag_;
  return h;
}

Eigen::MatrixXcd OperatorRep::dense_complex() const {
  Eigen::MatrixXcd h = dense().cast<std::complex<double>>();
  if (cap_) h.diagonal() -= std::complex<double>(0.0, 0.5) * cap_->cast<std::complex<double>>();
  return h;
}

Eigen::VectorXd cpes_on_grid(const ModelParams& p, const Grid2D& grid) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.q.size(); ++i) {
    for (std::size_t j = 0; j < grid.xc.size(); ++j) {
      v[static_cast<Eigen::Index>(grid.index(i, j))] = cpes(grid.q.point(i), grid.xc.point(j), p);
    }
  }
  return v;
}

OperatorRep assemble_h2d(const ModelParams& p, const Grid2D& grid) {
  return {grid, colbert_miller_kinetic(grid.q), colbert_miller_kinetic(grid.xc), cpes_on_grid(p, grid)};
}

namespace {

// Shift-invert operator (H - sigma)^{-1} applied with preconditioned CG. The
// preconditioner is the exact inverse of H with the bilinear coupling removed
// from the potential along x_c.
class ShiftInvert {
 public:
  explicit ShiftInvert(const OperatorRep& h) : h_(h) {
    const auto& g = h.grid();
    const auto nq = static_cast<Eigen::Index>(g.q.size());
    const auto nc = static_cast<Eigen::Index>(g.xc.size());
    // Separable part of v: v(q, x_c) ~ v(q, x*) + v(q*, x_c) - v(q*, x*) on the
    // nodes closest to the minimum of the diagonal.
    Eigen::Index imin = 0;
    h.v_diag().minCoeff(&imin);
    const Eigen::Index i0 = imin / nc;
    const Eigen::Index j0 = imin % nc;
    const double v00 = h.v_diag()[imin];
    Eigen::MatrixXd hq = h.t_q();
    Eigen::MatrixXd hc = h.t_c();
    for (Eigen::Index i = 0; i < nq; ++i) hq(i, i) += h.v_diag()[i * nc + j0] - v00;
    for (Eigen::Index j = 0; j < nc; ++j) hc(j, j) += h.v_diag()[i0 * nc + j];
    pre_ = SeparableResolvent<double>(hq, hc);
    // both H and the preconditioner must sit above the shift
    sigma_ = std::min(v00, pre_.lambda_q().minCoeff() + pre_.lambda_c().minCoeff()) - 1e-3;
  }

  // Returns false if CG missed the tolerance.
  bool solve(const Eigen::VectorXd& b, Eigen::VectorXd& x, double rtol, int max_iter, double& rel_res) const {
    const Eigen::Index n = b.size();
    x.setZero(n);
    Eigen::VectorXd r = b;
    Eigen::VectorXd z(n), p(n), ap(n);
    precondition(r, z);
    p = z;
    double rz = r.dot(z);
    const double bnorm = b.norm();
    rel_res = 1.0;
    if (bnorm == 0.0) return true;
    for (int it = 0; it < max_iter; ++it) {
      h_.apply(p, ap);
      ap -= sigma_ * p;
      const double alpha = rz / p.dot(ap);
      x += alpha * p;
      r -= alpha * ap;
      rel_res = r.norm() / bnorm;
      if (rel_res < rtol) return true;
      precondition(r, z);
      const double rz_new = r.dot(z);
      p = z + (rz_new / rz) * p;
      rz = rz_new;
    }
    return false;
  }

 private:
  void precondition(const Eigen::VectorXd& r, Eigen::VectorXd& z) const {
    z.resize(r.size());
    pre_.solve(sigma_, r.data(), z.data());
    z = -z;
  }

  const OperatorRep& h_;
  double sigma_ = 0.0;
  SeparableResolvent<double> pre_;
};

BoundStates lanczos_lowest(const OperatorRep& h, std::size_t n_states, const EigenSolveOptions& opt) {
  const Eigen::Index n = h.size();
  const auto k = static_cast<Eigen::Index>(n_states);
  ShiftInvert si(h);

  const auto m_max = static_cast<Eigen::Index>(std::min<std::size_t>(opt.max_lanczos, static_cast<std::size_t>(n)));
  Eigen::MatrixXd basis(n, m_max + 1);
  Eigen::VectorXd alpha(m_max), beta(m_max);

  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  basis.col(0) = v.normalized();

  Eigen::VectorXd w(n), hy(n);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < m_max; ++j) {
    double rel = 0.0;
    if (!si.solve(basis.col(j), w, 1e-13, 2000, rel) && rel > 1e-10) {
      std::ostringstream msg;
      msg << "eigensolve_2d: inner CG stalled at relative residual " << rel << " (step " << j << ")";
      throw NumericalFailure(msg.str());
    }
    alpha[j] = basis.col(j).dot(w);
    for (int pass = 0; pass < 2; ++pass) {
      w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
    }
    beta[j] = w.norm();
    const bool breakdown = beta[j] < 1e-14 * std::abs(alpha[j]);
    if (!breakdown) basis.col(j + 1) = w / beta[j];

    const Eigen::Index m = j + 1;
    const bool check = breakdown || m == m_max || (m >= k + 5 && m % 5 == 0);
    if (!check) continue;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(alpha.head(m), beta.head(m - 1), Eigen::ComputeEigenvectors);
    // largest Ritz values of the inverse are the lowest levels of H
    const Eigen::Index kk = std::min(k, m);
    BoundStates bs;
    bs.energies.resize(kk);
    bs.states.resize(n, kk);
    worst = 0.0;
    for (Eigen::Index c = 0; c < kk; ++c) {
      Eigen::VectorXd y = basis.leftCols(m) * tri.eigenvectors().col(m - 1 - c);
      y.normalize();
      h.apply(y, hy);
      const double e = y.dot(hy);
      worst = std::max(worst, (hy - e * y).norm());
      bs.energies[c] = e;
      bs.states.col(c) = y;
    }
    if (kk == k && (worst < opt.tolerance || breakdown)) {
      std::vector<Eigen::Index> order(static_cast<std::size_t>(kk));
      for (Eigen::Index c = 0; c < kk; ++c) order[static_cast<std::size_t>(c)] = c;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return bs.energies[a] < bs.energies[b]; });
      BoundStates sorted;
      sorted.energies.resize(kk);
      sorted.states.resize(n, kk);
      for (Eigen::Index c = 0; c < kk; ++c) {
        sorted.energies[c] = bs.energies[order[static_cast<std::size_t>(c)]];
        sorted.states.col(c) = bs.states.col(order[static_cast<std::size_t>(c)]);
      }
      return sorted;
    }
    if (breakdown) break;
  }
  std::ostringstream msg;
  msg << "eigensolve_2d: Lanczos did not reach residual " << opt.tolerance << " after " << m_max
      << " steps (worst residual " << worst << ")";
  throw NumericalFailure(msg.str());
}

}  // namespace

BoundStates eigensolve_2d(const OperatorRep& h, std::size_t n_states, const EigenSolveOptions& opt) {
  if (n_states == 0) throw InvalidParameter("eigensolve_2d: n_states must be positive");
  if (n_states > static_cast<std::size_t>(h.size())) throw InvalidParameter("eigensolve_2d: too many states requested");
  BoundStates bs = static_cast<std::size_t>(h.size()) <= opt.dense_limit ? dense_lowest(h.dense(), n_states, "eigensolve_2d")
                                                                          : lanczos_lowest(h, n_states, opt);
  assign_parity(bs, symmetric_grid(h.grid().q) && symmetric_grid(h.grid().xc));
  return bs;
}

ValleyCut valley_cut_states(const ModelParams& p, double displacement_range, std::size_t n_points,
                            const Grid2D& bounds) {
  if (!(displacement_range > 0.0)) throw InvalidParameter("valley cut: displacement range must be positive");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cpes_hessian(0.0, 0.0, p, true));
  const Eigen::Vector2d mode = es.eigenvectors().col(1);
  const double sq = std::sqrt(p.mu());

  for (double s : {-displacement_range, displacement_range}) {
    const double q = s * mode[0] / sq;
    const double x = s * mode[1];
    if (!bounds.q.contains(q) || !bounds.xc.contains(x)) {
      std::ostringstream msg;
      msg << "valley cut leaves the grid at s=" << s << " (q=" << q << ", x_c=" << x << ")";
      throw RangeError(msg.str());
    }
  }

  const Grid1D sgrid(-displacement_range, displacement_range, n_points, 1.0);
  Eigen::MatrixXd h = colbert_miller_kinetic(sgrid);
  ValleyCut cut;
  cut.s.resize(static_cast<Eigen::Index>(n_points));
  cut.potential.resize(static_cast<Eigen::Index>(n_points));
  for (std::size_t i = 0; i < n_points; ++i) {
    const double s = sgrid.point(i);
    const auto ii = static_cast<Eigen::Index>(i);
    cut.s[ii] = s;
    cut.potential[ii] = cpes(s * mode[0] / sq, s * mode[1], p);
    h(ii, ii) += cut.potential[ii];
  }
  const BoundStates bs = dense_lowest(h, 4, "valley_cut_states");
  cut.levels = bs.energies;
  cut.fundamental = bs.energies[1] - bs.energies[0];
  return cut;
}

}  // namespace cavkin
