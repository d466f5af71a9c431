#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cavkin/topology.hpp"
#include "cavkin/units.hpp"

using namespace cavkin;
using doctest::Approx;

TEST_CASE("path coordinate forms agree") {
  const ModelParams p = ModelParams().with_eta(0.1);
  for (const double q : {-1.2, -0.75, 0.0, 0.4}) {
    CHECK(cmep_xc(q * std::sqrt(p.mu()), p) == Approx(relaxed_xc(q, p)));
  }
  const double Q = -0.6 * std::sqrt(p.mu()), h = 1e-4;
  CHECK(cmep_xc_derivative(Q, p) == Approx((cmep_xc(Q + h, p) - cmep_xc(Q - h, p)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("uncoupled path stays on the molecular axis") {
  const ModelParams p;
  const double qm = 1.5 * std::sqrt(p.mu());
  const auto c = arc_length(p, -qm, qm, 61);
  for (std::size_t i = 0; i < c.Q.size(); ++i) {
    CHECK(c.xc[i] == 0.0);
    CHECK(c.s[i] == Approx(c.Q[i] + qm).scale(qm));
  }
}

TEST_CASE("arc length grows with coupling and the barrier does not move") {
  const ModelParams base;
  const double qm = 1.5 * std::sqrt(base.mu());
  double previous = 0.0;
  for (const double eta : {0.0, 0.05, 0.1, 0.2}) {
    const ModelParams p = base.with_eta(eta);
    const auto c = arc_length(p, -qm, qm, 301);
    CHECK(c.s.back() >= previous);
    previous = c.s.back();
    for (std::size_t i = 1; i < c.s.size(); ++i) CHECK(c.s[i] > c.s[i - 1]);
    const double top = c.V[c.V.size() / 2];
    CHECK(c.Q[c.Q.size() / 2] == Approx(0.0).scale(1.0));
    CHECK(top == p.well().A0);
    CHECK(top - *std::min_element(c.V.begin(), c.V.end()) == Approx(p.well().barrier_height()).epsilon(1e-6));
    CHECK(mep_barrier_height(p) == Approx(p.well().barrier_height()).epsilon(1e-10));
  }
}

TEST_CASE("reactant frequencies") {
  for (const double eta : {0.0, 0.1, 0.2}) {
    const auto r = reactant_frequencies(ModelParams().with_eta(eta));
    CHECK(units.to_wavenumber(r.molecular) == Approx(1182.3).epsilon(1e-4));
    CHECK(units.to_wavenumber(r.cavity) == Approx(1039.0).epsilon(1e-12));
  }
}

TEST_CASE("saddle frequencies") {
  const auto f0 = cts_frequencies(ModelParams());
  CHECK(f0.barrier < 0.0);
  CHECK(units.to_wavenumber(-f0.barrier) == Approx(836.0).epsilon(0.5 / 836.0));
  CHECK(units.to_wavenumber(f0.valley) == Approx(1039.0).epsilon(1e-12));
  const auto f2 = cts_frequencies(ModelParams().with_eta(0.2));
  CHECK(std::abs(units.to_wavenumber(-f2.barrier) - 284.0) < 5.0);
  CHECK(std::abs(units.to_wavenumber(f2.valley) - 3062.0) < 10.0);
}

TEST_CASE("analytic saddle Hessian matches the general Hessian") {
  const ModelParams p = ModelParams().with_eta(0.13);
  CHECK((cts_hessian(p) - cpes_hessian(0.0, 0.0, p, true)).cwiseAbs().maxCoeff() < 1e-15);
  const auto a = cts_analysis(p);
  CHECK(a.frequencies[0] < 0.0);
  CHECK(a.frequencies[1] > 0.0);
  CHECK((a.eigenvectors.transpose() * a.eigenvectors - Eigen::Matrix2d::Identity()).norm() < 1e-12);
}

TEST_CASE("frequency scans") {
  const ModelParams p;
  std::vector<double> etas;
  for (int i = 0; i <= 20; ++i) etas.push_back(0.01 * i);
  const auto rows = frequency_scan(p, ScanAxis::eta, etas);
  REQUIRE(rows.size() == etas.size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].barrier_abs < rows[i - 1].barrier_abs);
    CHECK(rows[i].valley > rows[i - 1].valley);
  }
  std::vector<double> omegas;
  for (int i = 1; i <= 30; ++i) omegas.push_back(units.to_hartree(100.0 * i));
  const auto by_omega = frequency_scan(p.with_eta(0.1), ScanAxis::omega_c, omegas);
  for (std::size_t i = 0; i < by_omega.size(); ++i) {
    CHECK(by_omega[i].omega_c == omegas[i]);
    CHECK(by_omega[i].eta == 0.1);
    CHECK(by_omega[i].barrier_abs > 0.0);
  }
}
