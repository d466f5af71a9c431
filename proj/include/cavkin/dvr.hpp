#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "cavkin/grid.hpp"
#include "cavkin/kernels.hpp"
#include "cavkin/model.hpp"

namespace cavkin {

// Colbert-Miller sinc-DVR kinetic energy on an equidistant grid:
//   T_ii' = (-1)^(i-i') / (2 m dx^2) * { pi^2/3      i == i'
//                                        2/(i-i')^2  otherwise }
[[nodiscard]] Eigen::MatrixXd colbert_miller_kinetic(const Grid1D& grid);

// Eigenpairs in ascending order. Columns of `states` are grid vectors
// normalized as plain Euclidean vectors. Parity under inversion of all
// coordinates is +1, -1, or 0 when the state has no definite parity.
struct BoundStates {
  Eigen::VectorXd energies;
  Eigen::MatrixXd states;
  std::vector<int> parity;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(energies.size()); }
};

struct SystemSpectrum {
  BoundStates bound;
  double splitting = 0.0;           // E(0-) - E(0+)
  double bright_transition = 0.0;   // E(1-) - E(0+)
  double transition_dipole = 0.0;   // <0+|d|1->
};

// Lowest n_states of -1/(2 mu) d^2/dq^2 + V(q). n_states >= 4 so that the
// bright 1- level is available.
[[nodiscard]] SystemSpectrum eigensolve_1d(const DoubleWell& well, const DipoleModel& dipole, const Grid1D& grid,
                                           std::size_t n_states = 6);

// Grid Hamiltonian T_q (x) 1 + 1 (x) T_c + diag(v), with an optional absorbing
// diagonal entering as -i gamma/2.
class OperatorRep {
 public:
  static constexpr std::size_t dense_limit = 20000;

  OperatorRep() = default;
  OperatorRep(Grid2D grid, Eigen::MatrixXd t_q, Eigen::MatrixXd t_c, Eigen::VectorXd v_diag);

  [[nodiscard]] const Grid2D& grid() const { return grid_; }
  [[nodiscard]] const Eigen::MatrixXd& t_q() const { return t_q_; }
  [[nodiscard]] const Eigen::MatrixXd& t_c() const { return t_c_; }
  [[nodiscard]] const Eigen::VectorXd& v_diag() const { return v_diag_; }
  [[nodiscard]] const std::optional<Eigen::VectorXd>& cap() const { return cap_; }
  [[nodiscard]] Eigen::Index size() const { return v_diag_.size(); }

  [[nodiscard]] OperatorRep with_cap(Eigen::VectorXd gamma) const;

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
  void apply_serial(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  void apply_serial(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;

  // Hermitian part only; throws SizeError above dense_limit.
  [[nodiscard]] Eigen::MatrixXd dense() const;
  [[nodiscard]] Eigen::MatrixXcd dense_complex() const;

  [[nodiscard]] kernels::SeparableOperator kernel() const;

 private:
  Grid2D grid_;
  Eigen::MatrixXd t_q_;
  Eigen::MatrixXd t_c_;
  Eigen::VectorXd v_diag_;
  std::optional<Eigen::VectorXd> cap_;
};

// Potential sampled on the grid, row-major.
[[nodiscard]] Eigen::VectorXd cpes_on_grid(const ModelParams& p, const Grid2D& grid);

[[nodiscard]] OperatorRep assemble_h2d(const ModelParams& p, const Grid2D& grid);

struct EigenSolveOptions {
  double tolerance = 1e-10;        // on ||H v - E v||
  std::size_t dense_limit = 2000;  // use a dense solver at or below this size
  std::size_t max_lanczos = 400;
};

// Lowest n_states of the (CAP-free) operator. Above the dense limit this runs
// shift-invert Lanczos with preconditioned CG inner solves.
[[nodiscard]] BoundStates eigensolve_2d(const OperatorRep& h, std::size_t n_states, const EigenSolveOptions& opt = {});

// Parity of a grid vector on a grid symmetric about the origin.
[[nodiscard]] int grid_parity(const Eigen::VectorXd& v, double tol = 1e-6);

struct ValleyCut {
  Eigen::VectorXd s;          // displacement along the bound mode (mass weighted)
  Eigen::VectorXd potential;  // cPES along the cut
  Eigen::VectorXd levels;     // lowest levels of the 1D problem
  double fundamental = 0.0;   // levels[1] - levels[0]
};

// One-dimensional cut through the saddle along the bound normal mode of the
// mass-weighted Hessian, R = s v (R_q = sqrt(mu) q), solved with unit mass.
// Throws RangeError if the cut leaves `bounds`.
[[nodiscard]] ValleyCut valley_cut_states(const ModelParams& p, double displacement_range, std::size_t n_points,
                                          const Grid2D& bounds);

}  // namespace cavkin
