#pragma once

#include <complex>
#include <type_traits>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "cavkin/errors.hpp"

namespace cavkin {

// Exact resolvent (z - h_q (x) 1 - 1 (x) h_c)^{-1} of a sum of two
// one-dimensional operators, applied through their eigendecompositions.
// Vectors are row-major N_q x N_c blocks as in Grid2D. Real symmetric factors
// use an orthogonal basis; complex-symmetric ones use a general
// eigendecomposition and an explicit inverse of the eigenvector matrix.
template <class Scalar>
class SeparableResolvent {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using RowBlock = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  SeparableResolvent() = default;
  SeparableResolvent(const Matrix& h_q, const Matrix& h_c) {
    decompose(h_q, u_q_, v_q_, lambda_q_);
    decompose(h_c, u_c_, v_c_, lambda_c_);
  }

  [[nodiscard]] Eigen::Index rows() const { return lambda_q_.size(); }
  [[nodiscard]] Eigen::Index cols() const { return lambda_c_.size(); }
  [[nodiscard]] const Vector& lambda_q() const { return lambda_q_; }
  [[nodiscard]] const Vector& lambda_c() const { return lambda_c_; }

  // y = (z - A)^{-1} b
  template <class Z>
  void solve(Z z, const Scalar* b, Scalar* y) const {
    const Eigen::Index nq = rows();
    const Eigen::Index nc = cols();
    Eigen::Map<const RowBlock> in(b, nq, nc);
    Eigen::Map<RowBlock> out(y, nq, nc);
    RowBlock t = v_q_ * in * v_c_.transpose();
    for (Eigen::Index i = 0; i < nq; ++i) {
      for (Eigen::Index j = 0; j < nc; ++j) t(i, j) /= Scalar(z) - lambda_q_[i] - lambda_c_[j];
    }
    out.noalias() = u_q_ * t * u_c_.transpose();
  }

 private:
  static void decompose(const Matrix& h, Matrix& u, Matrix& v, Vector& lambda) {
    if constexpr (std::is_same_v<Scalar, double>) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(h);
      if (es.info() != Eigen::Success) throw NumericalFailure("separable resolvent: symmetric eigensolve failed");
      u = es.eigenvectors();
      v = u.transpose();
      lambda = es.eigenvalues();
    } else {
      Eigen::ComplexEigenSolver<Matrix> es(h);
      if (es.info() != Eigen::Success) throw NumericalFailure("separable resolvent: complex eigensolve failed");
      u = es.eigenvectors();
      v = u.inverse();
      lambda = es.eigenvalues();
    }
  }

  Matrix u_q_, v_q_, u_c_, v_c_;
  Vector lambda_q_, lambda_c_;
};

}  // namespace cavkin
