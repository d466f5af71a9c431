#pragma once

// Grid kernels for operators of the form (T_q (x) 1 + 1 (x) T_c + diag(v)).
// A grid vector is a row-major N_q x N_c block (cavity index fastest).
//
// Every kernel has a plain serial reference next to the OpenMP version; the
// tests check them against each other and bench/ compares their speed.

#include <complex>

#include <Eigen/Core>

namespace cavkin::kernels {

using cplx = std::complex<double>;

struct SeparableOperator {
  const Eigen::MatrixXd* t_q = nullptr;
  const Eigen::MatrixXd* t_c = nullptr;
  const Eigen::VectorXd* diagonal = nullptr;
  // optional absorbing strength; applied as -i/2 * gamma (complex vectors only)
  const Eigen::VectorXd* gamma = nullptr;
};

void apply_serial(const SeparableOperator& op, const Eigen::VectorXd& x, Eigen::VectorXd& y);
void apply_serial(const SeparableOperator& op, const Eigen::VectorXcd& x, Eigen::VectorXcd& y);

void apply(const SeparableOperator& op, const Eigen::VectorXd& x, Eigen::VectorXd& y);
void apply(const SeparableOperator& op, const Eigen::VectorXcd& x, Eigen::VectorXcd& y);

// Several right-hand sides at once (columns of x).
void apply(const SeparableOperator& op, const Eigen::MatrixXd& x, Eigen::MatrixXd& y);

// sum_i w_i |x_i|^2
double weighted_norm2_serial(const Eigen::VectorXd& w, const Eigen::VectorXcd& x);
double weighted_norm2(const Eigen::VectorXd& w, const Eigen::VectorXcd& x);

}  // namespace cavkin::kernels
