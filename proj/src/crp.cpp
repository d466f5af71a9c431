#include "cavkin/crp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "cavkin/dvr.hpp"
#include "cavkin/errors.hpp"
#include "cavkin/separable.hpp"

namespace cavkin {

using cplx = std::complex<double>;

std::string to_string(CrpSolver s) {
  switch (s) {
    case CrpSolver::dense: return "dense";
    case CrpSolver::iterative: return "iterative";
    case CrpSolver::contracted: return "contracted";
  }
  return "unknown";
}

CrpSolver crp_solver_from_string(const std::string& s) {
  if (s == "dense") return CrpSolver::dense;
  if (s == "iterative") return CrpSolver::iterative;
  if (s == "contracted") return CrpSolver::contracted;
  throw ConfigError("unknown CRP solver '" + s + "' (expected dense, iterative or contracted)");
}

struct CrpProblem::Backend {
  virtual ~Backend() = default;
  // z is the absolute energy E + V_min
  [[nodiscard]] virtual double evaluate(double z) const = 0;
};

namespace {

std::vector<Eigen::Index> support(const Eigen::VectorXd& g) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g[i] > 0.0) idx.push_back(i);
  }
  return idx;
}

// Basis vector of one C2 sector: (e_first + sign * e_second) / sqrt(2), or e_first alone.
struct SectorVector {
  Eigen::Index first;
  Eigen::Index second;
  double sign;
};

std::vector<SectorVector> sector_basis(Eigen::Index n, double sign) {
  std::vector<SectorVector> basis;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index partner = n - 1 - k;
    if (k < partner) basis.push_back({k, partner, sign});
    if (k == partner && sign > 0.0) basis.push_back({k, k, 1.0});
  }
  return basis;
}

bool c2_symmetric(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  const double scale = a.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(a(i, j) - a(n - 1 - i, n - 1 - j)) > 1e-12 * scale) return false;
    }
  }
  return true;
}

// Dense LU on the full grid. When the absorbing Hamiltonian commutes with the
// inversion (q, x) -> (-q, -x) the LU is done per symmetry sector.
class DenseBackend final : public CrpProblem::Backend {
 public:
  DenseBackend(const OperatorRep& h, Eigen::VectorXd reactant, Eigen::VectorXd product)
      : reactant_(std::move(reactant)), product_(std::move(product)), cols_(support(product_)) {
    Eigen::MatrixXcd full = h.dense_complex();
    if (c2_symmetric(full)) {
      for (const double sign : {1.0, -1.0}) sectors_.push_back(project(full, sector_basis(full.rows(), sign)));
    } else {
      h_ = std::move(full);
    }
  }

  [[nodiscard]] double evaluate(double z) const override {
    const Eigen::Index n = reactant_.size();
    const auto m = static_cast<Eigen::Index>(cols_.size());
    Eigen::MatrixXcd y;
    if (sectors_.empty()) {
      Eigen::MatrixXcd a = -h_;
      a.diagonal().array() += z;
      Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, m);
      for (Eigen::Index c = 0; c < m; ++c) rhs(cols_[c], c) = std::sqrt(product_[cols_[c]]);
      y = Eigen::PartialPivLU<Eigen::MatrixXcd>(a).solve(rhs);
    } else {
      y = Eigen::MatrixXcd::Zero(n, m);
      for (const auto& s : sectors_) {
        Eigen::MatrixXcd a = -s.h;
        a.diagonal().array() += z;
        const auto dim = static_cast<Eigen::Index>(s.basis.size());
        Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(dim, m);
        for (Eigen::Index c = 0; c < m; ++c) {
          const Eigen::Index k = cols_[c];
          const Eigen::Index a_idx = s.position[k];
          if (a_idx >= 0) rhs(a_idx, c) = std::sqrt(product_[k]) * s.coefficient[k];
        }
        const Eigen::MatrixXcd ys = Eigen::PartialPivLU<Eigen::MatrixXcd>(a).solve(rhs);
        for (Eigen::Index b = 0; b < dim; ++b) {
          const auto& v = s.basis[b];
          if (v.first == v.second) {
            y.row(v.first) += ys.row(b);
          } else {
            y.row(v.first) += ys.row(b) * M_SQRT1_2;
            y.row(v.second) += ys.row(b) * (v.sign * M_SQRT1_2);
          }
        }
      }
    }
    return (reactant_.array() * y.rowwise().squaredNorm().array()).sum();
  }

 private:
  struct Sector {
    std::vector<SectorVector> basis;
    Eigen::MatrixXcd h;
    // position[k] is the sector vector containing grid point k (or -1), coefficient its weight
    std::vector<Eigen::Index> position;
    std::vector<double> coefficient;
  };

  static Sector project(const Eigen::MatrixXcd& full, std::vector<SectorVector> basis) {
    const Eigen::Index n = full.rows();
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Sector s;
    s.position.assign(static_cast<std::size_t>(n), -1);
    s.coefficient.assign(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto& v = basis[b];
      s.position[v.first] = b;
      s.position[v.second] = b;
      s.coefficient[v.first] = v.first == v.second ? 1.0 : M_SQRT1_2;
      if (v.first != v.second) s.coefficient[v.second] = v.sign * M_SQRT1_2;
    }
    s.h.resize(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto& vb = basis[b];
      for (Eigen::Index a = 0; a < dim; ++a) {
        const auto& va = basis[a];
        cplx sum = full(va.first, vb.first) * s.coefficient[va.first] * s.coefficient[vb.first];
        if (vb.second != vb.first) sum += full(va.first, vb.second) * s.coefficient[va.first] * s.coefficient[vb.second];
        if (va.second != va.first) {
          sum += full(va.second, vb.first) * s.coefficient[va.second] * s.coefficient[vb.first];
          if (vb.second != vb.first) {
            sum += full(va.second, vb.second) * s.coefficient[va.second] * s.coefficient[vb.second];
          }
        }
        s.h(a, b) = sum;
      }
    }
    s.basis = std::move(basis);
    return s;
  }

  Eigen::MatrixXcd h_;
  std::vector<Sector> sectors_;
  Eigen::VectorXd reactant_;
  Eigen::VectorXd product_;
  std::vector<Eigen::Index> cols_;
};

// Restarted GMRES with right preconditioning. Returns the relative residual.
template <class ApplyA, class ApplyM>
double gmres(const ApplyA& apply_a, const ApplyM& apply_m, const Eigen::VectorXcd& b, Eigen::VectorXcd& x,
             double tol, Eigen::Index restart, std::size_t max_iterations, std::size_t& iterations) {
  const Eigen::Index n = b.size();
  const double bnorm = b.norm();
  x.setZero(n);
  iterations = 0;
  if (bnorm == 0.0) return 0.0;

  Eigen::MatrixXcd v(n, restart + 1);
  Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(restart + 1, restart);
  Eigen::VectorXcd cs(restart), sn(restart), g(restart + 1);
  Eigen::VectorXcd w(n), t(n), r = b;
  double rel = 1.0;

  while (iterations < max_iterations) {
    const double beta = r.norm();
    rel = beta / bnorm;
    if (rel < tol) break;
    v.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    hess.setZero();
    Eigen::Index k = 0;
    for (; k < restart && iterations < max_iterations; ++k, ++iterations) {
      apply_m(v.col(k), t);
      apply_a(t, w);
      for (Eigen::Index i = 0; i <= k; ++i) {
        hess(i, k) = v.col(i).dot(w);
        w -= hess(i, k) * v.col(i);
      }
      const double hn = w.norm();
      hess(k + 1, k) = hn;
      if (hn > 0.0) v.col(k + 1) = w / hn;
      for (Eigen::Index i = 0; i < k; ++i) {
        const cplx t1 = cs[i] * hess(i, k) + sn[i] * hess(i + 1, k);
        const cplx t2 = -std::conj(sn[i]) * hess(i, k) + cs[i] * hess(i + 1, k);
        hess(i, k) = t1;
        hess(i + 1, k) = t2;
      }
      const cplx a = hess(k, k);
      const double bb = std::abs(hess(k + 1, k));
      const double d = std::hypot(std::abs(a), bb);
      const cplx phase = std::abs(a) > 0.0 ? a / std::abs(a) : cplx(1.0, 0.0);
      cs[k] = std::abs(a) / d;
      sn[k] = phase * std::conj(hess(k + 1, k)) / d;
      hess(k, k) = phase * d;
      hess(k + 1, k) = 0.0;
      g[k + 1] = -std::conj(sn[k]) * g[k];
      g[k] = cs[k] * g[k];
      rel = std::abs(g[k + 1]) / bnorm;
      if (rel < tol || hn == 0.0) {
        ++k;
        ++iterations;
        break;
      }
    }
    const Eigen::VectorXcd y =
        hess.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    apply_m(v.leftCols(k) * y, t);
    x += t;
    apply_a(x, w);
    r = b - w;
    rel = r.norm() / bnorm;
    if (rel < tol) break;
  }
  return rel;
}

class IterativeBackend final : public CrpProblem::Backend {
 public:
  IterativeBackend(const ModelParams& p, const OperatorRep& h, const CapConfig& cap, Eigen::VectorXd reactant,
                   Eigen::VectorXd product, const CrpSettings& s)
      : h_(h), reactant_(std::move(reactant)), product_(std::move(product)), cols_(support(product_)), settings_(s) {
    const auto& g = h.grid();
    const auto nq = static_cast<Eigen::Index>(g.q.size());
    const auto nc = static_cast<Eigen::Index>(g.xc.size());
    const double w = p.omega_c();
    Eigen::MatrixXcd hq = h.t_q().cast<cplx>();
    Eigen::MatrixXcd hc = h.t_c().cast<cplx>();
    for (Eigen::Index i = 0; i < nq; ++i) {
      const double q = g.q.point(static_cast<std::size_t>(i));
      const double d = dipole(q, p.dipole());
      hq(i, i) += cplx(potential(q, p.well()) + p.self_energy_strength() * d * d, -0.5 * cap_molecular(q, cap));
    }
    for (Eigen::Index j = 0; j < nc; ++j) {
      const double x = g.xc.point(static_cast<std::size_t>(j));
      hc(j, j) += cplx(0.5 * w * w * x * x, -0.5 * cap_cavity(x, cap));
    }
    pre_ = SeparableResolvent<cplx>(hq, hc);
  }

  [[nodiscard]] double evaluate(double z) const override {
    const Eigen::Index n = h_.size();
    const auto apply_a = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
      h_.apply(in, out);
      out = z * in - out;
    };
    const auto apply_m = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
      out.resize(in.size());
      pre_.solve(z, in.data(), out.data());
    };
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd x(n);
    double sum = 0.0;
    for (const Eigen::Index j : cols_) {
      b.setZero();
      b[j] = std::sqrt(product_[j]);
      std::size_t iters = 0;
      const double rel = gmres(apply_a, apply_m, b, x, settings_.tolerance,
                               static_cast<Eigen::Index>(settings_.restart), settings_.max_iterations, iters);
      if (!(rel < settings_.tolerance)) {
        std::ostringstream msg;
        msg << "CRP GMRES did not converge at E=" << z << " E_h, column " << j << ": relative residual " << rel
            << " after " << iters << " iterations";
        throw NumericalFailure(msg.str());
      }
      sum += (reactant_.array() * x.array().abs2()).sum();
    }
    return sum;
  }

 private:
  OperatorRep h_;
  Eigen::VectorXd reactant_;
  Eigen::VectorXd product_;
  std::vector<Eigen::Index> cols_;
  CrpSettings settings_;
  SeparableResolvent<cplx> pre_;
};

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
}

class ContractedBackend final : public CrpProblem::Backend {
 public:
  ContractedBackend(const ModelParams& p, const Grid2D& grid, const CapConfig& cap, std::size_t channels, bool swap) {
    const auto nq = static_cast<Eigen::Index>(grid.q.size());
    const auto nc = static_cast<Eigen::Index>(grid.xc.size());
    const Eigen::Index m = std::min<Eigen::Index>(static_cast<Eigen::Index>(channels), nc);
    const Eigen::Index n = nq * m;
    m_ = m;

    const Eigen::MatrixXd tq = colbert_miller_kinetic(grid.q);
    const Eigen::MatrixXd tc = colbert_miller_kinetic(grid.xc);
    const double w = p.omega_c();
    const double kappa = p.bilinear_strength();

    Eigen::VectorXd gc(nc);
    Eigen::VectorXd xs(nc);
    for (Eigen::Index j = 0; j < nc; ++j) {
      xs[j] = grid.xc.point(static_cast<std::size_t>(j));
      gc[j] = cap_cavity(xs[j], cap);
    }

    std::vector<Eigen::MatrixXd> phi(static_cast<std::size_t>(nq));
    h_ = Eigen::MatrixXd::Zero(n, n);
    gamma_ = Eigen::MatrixXd::Zero(n, n);
    product_block_.assign(static_cast<std::size_t>(nq), false);
    for (Eigen::Index i = 0; i < nq; ++i) {
      const double q = grid.q.point(static_cast<std::size_t>(i));
      const double d = dipole(q, p.dipole());
      Eigen::MatrixXd hc = tc;
      hc.diagonal().array() += 0.5 * w * w * xs.array().square() + kappa * d * xs.array();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hc);
      if (es.info() != Eigen::Success) throw NumericalFailure("contracted CRP: channel eigensolve failed");
      phi[static_cast<std::size_t>(i)] = es.eigenvectors().leftCols(m);
      const double vq = potential(q, p.well()) + p.self_energy_strength() * d * d;
      h_.block(i * m, i * m, m, m).diagonal() = es.eigenvalues().head(m).array() + vq;
      const auto& f = phi[static_cast<std::size_t>(i)];
      gamma_.block(i * m, i * m, m, m) = f.transpose() * gc.asDiagonal() * f;
      gamma_.block(i * m, i * m, m, m).diagonal().array() += cap_molecular(q, cap);
      product_block_[static_cast<std::size_t>(i)] = (product_side(q) > 0.0) != swap;
    }
    for (Eigen::Index i = 0; i < nq; ++i) {
      for (Eigen::Index k = 0; k < nq; ++k) {
        h_.block(i * m, k * m, m, m) +=
            tq(i, k) * (phi[static_cast<std::size_t>(i)].transpose() * phi[static_cast<std::size_t>(k)]);
      }
    }

    // square roots of the block-diagonal absorbers, split by side
    sqrt_product_ = Eigen::MatrixXd::Zero(n, 0);
    std::vector<Eigen::Index> prod_blocks;
    for (Eigen::Index i = 0; i < nq; ++i) {
      if (product_block_[static_cast<std::size_t>(i)]) prod_blocks.push_back(i);
    }
    if (prod_blocks.empty() || static_cast<Eigen::Index>(prod_blocks.size()) == nq) {
      throw ConfigError("contracted CRP: reactant or product absorber has empty support on the grid");
    }
    sqrt_product_ = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(prod_blocks.size()) * m);
    for (std::size_t b = 0; b < prod_blocks.size(); ++b) {
      const Eigen::Index i = prod_blocks[b];
      sqrt_product_.block(i * m, static_cast<Eigen::Index>(b) * m, m, m) = psd_sqrt(gamma_.block(i * m, i * m, m, m));
    }
    sqrt_reactant_.resize(static_cast<std::size_t>(nq));
    for (Eigen::Index i = 0; i < nq; ++i) {
      if (!product_block_[static_cast<std::size_t>(i)]) {
        sqrt_reactant_[static_cast<std::size_t>(i)] = psd_sqrt(gamma_.block(i * m, i * m, m, m));
      }
    }
  }

  [[nodiscard]] double evaluate(double z) const override {
    const Eigen::Index n = h_.rows();
    Eigen::MatrixXcd a = (-h_).cast<cplx>();
    a += cplx(0.0, 0.5) * gamma_;
    a.diagonal().array() += z;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const Eigen::MatrixXcd y = lu.solve(sqrt_product_.cast<cplx>());
    double sum = 0.0;
    for (std::size_t i = 0; i < sqrt_reactant_.size(); ++i) {
      if (product_block_[i]) continue;
      const auto row = static_cast<Eigen::Index>(i) * m_;
      sum += (sqrt_reactant_[i].cast<cplx>() * y.middleRows(row, m_)).squaredNorm();
    }
    (void)n;
    return sum;
  }

 private:
  Eigen::Index m_ = 0;
  Eigen::MatrixXd h_;
  Eigen::MatrixXd gamma_;
  Eigen::MatrixXd sqrt_product_;
  std::vector<Eigen::MatrixXd> sqrt_reactant_;
  std::vector<bool> product_block_;
};

}  // namespace

CrpProblem::CrpProblem(const ModelParams& p, const Grid2D& grid, const CrpSettings& settings)
    : grid_(grid), settings_(settings), v_min_(p.well().minimum_energy()) {
  settings.cap.validate();
  if (settings_.solver == CrpSolver::contracted) {
    backend_ = std::make_unique<ContractedBackend>(p, grid, settings.cap, settings.channels, settings.swap_sides);
    return;
  }
  const CapSplit cap = cap_on_grid(grid, settings.cap);
  Eigen::VectorXd reactant = settings.swap_sides ? cap.product : cap.reactant;
  Eigen::VectorXd product = settings.swap_sides ? cap.reactant : cap.product;
  if (!(reactant.maxCoeff() > 0.0) || !(product.maxCoeff() > 0.0)) {
    throw ConfigError("CRP: reactant or product absorber has empty support on the grid");
  }
  const OperatorRep h = assemble_h2d(p, grid).with_cap(cap.total);
  if (settings_.solver == CrpSolver::dense) {
    backend_ = std::make_unique<DenseBackend>(h, std::move(reactant), std::move(product));
  } else {
    backend_ = std::make_unique<IterativeBackend>(p, h, settings.cap, std::move(reactant), std::move(product), settings);
  }
}

CrpProblem::~CrpProblem() = default;
CrpProblem::CrpProblem(CrpProblem&&) noexcept = default;
CrpProblem& CrpProblem::operator=(CrpProblem&&) noexcept = default;

double CrpProblem::evaluate(double energy) const {
  if (energy < 0.0) throw InvalidParameter("CRP energy must be >= 0 (measured from the reactant minimum)");
  return backend_->evaluate(energy + v_min_);
}

std::map<std::string, std::string> CrpProblem::describe() const {
  const auto num = [](double v) {
    std::ostringstream s;
    s.precision(12);
    s << v;
    return s.str();
  };
  const auto& c = settings_.cap;
  std::map<std::string, std::string> m{
      {"solver", to_string(settings_.solver)},
      {"grid.q", num(grid_.q.start()) + ":" + num(grid_.q.end()) + ":" + std::to_string(grid_.q.size())},
      {"grid.xc", num(grid_.xc.start()) + ":" + num(grid_.xc.end()) + ":" + std::to_string(grid_.xc.size())},
      {"cap.k0", num(c.k0)},
      {"cap.k1", num(c.k1)},
      {"cap.q_m", num(c.q_m)},
      {"cap.gamma_c0", num(c.gamma_c0)},
      {"cap.n", std::to_string(c.n)},
      {"cap.xc0", num(c.xc0)},
      {"cap.xcm", num(c.xcm)},
  };
  if (settings_.solver == CrpSolver::contracted) {
    m["channels"] = std::to_string(std::min(settings_.channels, grid_.xc.size()));
  }
  if (settings_.solver == CrpSolver::iterative) m["tolerance"] = num(settings_.tolerance);
  return m;
}

double crp(double energy, const ModelParams& p, const Grid2D& grid, const CrpSettings& settings) {
  return CrpProblem(p, grid, settings).evaluate(energy);
}

std::vector<double> energy_grid(double e_max, std::size_t n_intervals) {
  if (n_intervals == 0 || !(e_max > 0.0)) throw InvalidParameter("energy grid needs e_max > 0 and n_intervals > 0");
  std::vector<double> e(n_intervals + 1);
  for (std::size_t k = 0; k <= n_intervals; ++k) e[k] = e_max * static_cast<double>(k) / static_cast<double>(n_intervals);
  return e;
}

CrpCurve crp_curve_serial(const CrpProblem& problem, const std::vector<double>& energies) {
  CrpCurve c{energies, std::vector<double>(energies.size()), problem.describe()};
  for (std::size_t k = 0; k < energies.size(); ++k) c.values[k] = problem.evaluate(energies[k]);
  return c;
}

CrpCurve crp_curve(const CrpProblem& problem, const std::vector<double>& energies) {
  CrpCurve c{energies, std::vector<double>(energies.size()), problem.describe()};
  std::vector<std::string> errors(energies.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t k = 0; k < energies.size(); ++k) {
    try {
      c.values[k] = problem.evaluate(energies[k]);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw NumericalFailure(e);
  }
  return c;
}

}  // namespace cavkin
