#include "cavkin/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cassert>

namespace cavkin::kernels {

namespace {

template <class Scalar>
using RowBlock = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class Scalar>
void apply_serial_impl(const SeparableOperator& op, const Scalar* x, Scalar* y) {
  const Eigen::MatrixXd& tq = *op.t_q;
  const Eigen::MatrixXd& tc = *op.t_c;
  const Eigen::VectorXd& v = *op.diagonal;
  const Eigen::Index nq = tq.rows();
  const Eigen::Index nc = tc.rows();

  for (Eigen::Index i = 0; i < nq; ++i) {
    for (Eigen::Index j = 0; j < nc; ++j) {
      Scalar acc = v[i * nc + j] * x[i * nc + j];
      for (Eigen::Index k = 0; k < nq; ++k) acc += tq(i, k) * x[k * nc + j];
      for (Eigen::Index k = 0; k < nc; ++k) acc += tc(j, k) * x[i * nc + k];
      y[i * nc + j] = acc;
    }
  }
}

template <class Scalar>
void apply_parallel_impl(const SeparableOperator& op, const Scalar* x, Scalar* y) {
  const Eigen::MatrixXd& tq = *op.t_q;
  const Eigen::MatrixXd& tc = *op.t_c;
  const Eigen::VectorXd& v = *op.diagonal;
  const Eigen::Index nq = tq.rows();
  const Eigen::Index nc = tc.rows();

  Eigen::Map<const RowBlock<Scalar>> in(x, nq, nc);
  Eigen::Map<RowBlock<Scalar>> out(y, nq, nc);

#pragma omp parallel
  {
    const int nt = omp_get_num_threads();
    const int id = omp_get_thread_num();
    const Eigen::Index chunk = (nq + nt - 1) / nt;
    const Eigen::Index r0 = std::min<Eigen::Index>(nq, id * chunk);
    const Eigen::Index r1 = std::min<Eigen::Index>(nq, r0 + chunk);
    if (r1 > r0) {
      const Eigen::Index nr = r1 - r0;
      // T_c is symmetric, so x T_c == x T_c^T
      out.middleRows(r0, nr).noalias() = tq.middleRows(r0, nr) * in;
      out.middleRows(r0, nr).noalias() += in.middleRows(r0, nr) * tc;
      for (Eigen::Index i = r0; i < r1; ++i) {
        for (Eigen::Index j = 0; j < nc; ++j) out(i, j) += v[i * nc + j] * in(i, j);
      }
    }
  }
}

void add_absorber(const SeparableOperator& op, const cplx* x, cplx* y, Eigen::Index n) {
  if (op.gamma == nullptr) return;
  const Eigen::VectorXd& g = *op.gamma;
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) y[i] -= cplx(0.0, 0.5 * g[i]) * x[i];
}

}  // namespace

void apply_serial(const SeparableOperator& op, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  y.resize(x.size());
  apply_serial_impl(op, x.data(), y.data());
}

void apply_serial(const SeparableOperator& op, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
  y.resize(x.size());
  apply_serial_impl(op, x.data(), y.data());
  if (op.gamma != nullptr) {
    for (Eigen::Index i = 0; i < x.size(); ++i) y[i] -= cplx(0.0, 0.5 * (*op.gamma)[i]) * x[i];
  }
}

void apply(const SeparableOperator& op, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  y.resize(x.size());
  apply_parallel_impl(op, x.data(), y.data());
}

void apply(const SeparableOperator& op, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
  y.resize(x.size());
  apply_parallel_impl(op, x.data(), y.data());
  add_absorber(op, x.data(), y.data(), x.size());
}

void apply(const SeparableOperator& op, const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
  y.resize(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) apply_parallel_impl(op, x.col(c).data(), y.col(c).data());
}

double weighted_norm2_serial(const Eigen::VectorXd& w, const Eigen::VectorXcd& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += w[i] * std::norm(x[i]);
  return s;
}

double weighted_norm2(const Eigen::VectorXd& w, const Eigen::VectorXcd& x) {
  double s = 0.0;
#pragma omp parallel for reduction(+ : s) schedule(static)
  for (Eigen::Index i = 0; i < x.size(); ++i) s += w[i] * std::norm(x[i]);
  return s;
}

}  // namespace cavkin::kernels
