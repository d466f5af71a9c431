#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "cavkin/dynamics.hpp"
#include "cavkin/errors.hpp"
#include "cavkin/topology.hpp"
#include "cavkin/units.hpp"

using namespace cavkin;
using doctest::Approx;

namespace {

ModelParams resonant(double eta) {
  const ModelParams p;
  return p.with_eta(eta).with_omega_c(reactant_frequencies(p).molecular);
}

}  // namespace

TEST_CASE("initial wavepacket") {
  const ModelParams p = resonant(0.06);
  const Grid2D g = dynamics_grid(p);
  const Wavepacket w = initial_state(-0.9, p, g);
  CHECK(w.norm2() == Approx(1.0).epsilon(1e-14));
  const auto o = measure(w, p, assemble_h2d(p, g));
  CHECK(std::abs(units.to_wavenumber(o.h_s) - 1186.0) < 3.0);
  CHECK(std::abs(o.xc) < 1e-12);
  CHECK(o.h_c == Approx(0.5 * p.omega_c()).epsilon(1e-8));
  CHECK(o.p_inv < 1e-6);
  const auto centred = measure(initial_state(-0.75, p, g), p, assemble_h2d(p, g));
  CHECK(centred.q == Approx(-0.75).epsilon(1e-10));
}

TEST_CASE("initial state outside or clipped by the grid") {
  const ModelParams p = resonant(0.06);
  const Grid2D narrow{Grid1D(-1.2, 1.2, 48, p.mu()), Grid1D(-150, 150, 48, 1.0)};
  CHECK_THROWS_AS((void)initial_state(-0.9, p, narrow), RangeError);
  CHECK_THROWS_AS((void)initial_state(-3.0, p, dynamics_grid(p)), RangeError);
}

TEST_CASE("energy decomposition closes") {
  const ModelParams p = resonant(0.1);
  const Grid2D g = dynamics_grid(p, 40, 40);
  Wavepacket w = initial_state(-0.9, p, g);
  PropagationOptions opt;
  opt.tf_fs = 40.0;
  const auto rec = propagate(w, p, opt);
  for (const auto& o : rec.samples) {
    CHECK(std::abs(o.h_s + o.h_c + o.dh_sc + o.h_dse - o.h) < 1e-8 * std::abs(o.h));
  }
  CHECK(rec.max_norm_drift < 1e-8);
  CHECK(rec.max_energy_drift < 1e-6);
  CHECK(rec.samples.size() == 41);
  CHECK(rec.samples.back().time_fs == Approx(40.0));
}

TEST_CASE("uncoupled ground state is stationary") {
  const ModelParams p;
  const Grid2D g = dynamics_grid(p, 40, 32);
  const OperatorRep h = assemble_h2d(p, g);
  const auto b = eigensolve_2d(h, 1);
  Wavepacket w{g, b.states.col(0).cast<std::complex<double>>(), 0.0};
  PropagationOptions opt;
  opt.tf_fs = 100.0;
  opt.output_every_fs = 10.0;
  const auto rec = propagate(w, p, opt);
  const auto& first = rec.samples.front();
  for (const auto& o : rec.samples) {
    CHECK(std::abs(o.p_inv - first.p_inv) < 1e-8);
    CHECK(std::abs(o.q - first.q) < 1e-8);
    CHECK(std::abs(o.h - first.h) < 1e-8 * std::abs(first.h));
  }
}

TEST_CASE("Chebyshev propagation matches the eigen-expansion") {
  const ModelParams p = resonant(0.08);
  const Grid2D g = dynamics_grid(p, 24, 20);
  const OperatorRep h = assemble_h2d(p, g);
  Wavepacket w = initial_state(-0.9, p, g);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
  const double t = units.to_atomic_time(10.0);
  const Eigen::VectorXcd c = es.eigenvectors().transpose().cast<std::complex<double>>() * w.amplitudes;
  Eigen::VectorXcd phase(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) phase[k] = std::exp(std::complex<double>(0.0, -es.eigenvalues()[k] * t));
  const Eigen::VectorXcd exact = es.eigenvectors().cast<std::complex<double>>() * phase.cwiseProduct(c);
  for (int s = 0; s < 40; ++s) chebyshev_step(w, h, 0.25);
  CHECK((w.amplitudes - exact).norm() < 1e-9);
  CHECK(w.time_fs == Approx(10.0));
}

TEST_CASE("serial and parallel Chebyshev steps agree") {
  const ModelParams p = resonant(0.06);
  const Grid2D g = dynamics_grid(p, 32, 32);
  const OperatorRep h = assemble_h2d(p, g);
  Wavepacket a = initial_state(-0.9, p, g), b = a;
  for (int s = 0; s < 4; ++s) {
    chebyshev_step(a, h, 0.25);
    chebyshev_step_serial(b, h, 0.25);
  }
  CHECK((a.amplitudes - b.amplitudes).norm() < 1e-12);
}

TEST_CASE("propagation rejects inconsistent times") {
  const ModelParams p = resonant(0.06);
  Wavepacket w = initial_state(-0.9, p, dynamics_grid(p, 24, 24));
  PropagationOptions opt;
  opt.output_every_fs = 0.3;
  CHECK_THROWS_AS((void)propagate(w, p, opt), InvalidParameter);
}

TEST_CASE("drift beyond tolerance aborts") {
  const ModelParams p = resonant(0.06);
  Wavepacket w = initial_state(-0.9, p, dynamics_grid(p, 24, 24));
  PropagationOptions opt;
  opt.tf_fs = 5.0;
  opt.series_tolerance = 1e-2;
  opt.energy_tolerance = 1e-14;
  opt.norm_tolerance = 1e-14;
  CHECK_THROWS_AS((void)propagate(w, p, opt), NumericalFailure);
}

TEST_CASE("time average of a constant") {
  TrajectoryRecord r;
  for (int k = 0; k <= 10; ++k) {
    Observables o;
    o.time_fs = k;
    o.q = -0.5;
    r.samples.push_back(o);
  }
  CHECK(time_averaged_q(r) == Approx(-0.5));
}

TEST_CASE("small resonance scan") {
  const ModelParams p;
  ScanOptions opt;
  opt.n_q = 24;
  opt.n_c = 24;
  opt.propagation.tf_fs = 10.0;
  const double wr = reactant_frequencies(p).molecular;
  const auto rows = resonance_scan({0.0, 0.06}, {0.8 * wr, wr}, p, opt);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].eta == 0.0);
  CHECK(rows[3].eta == 0.06);
  CHECK(rows[3].omega_c == wr);
  for (const auto& r : rows) {
    CHECK(r.error.empty());
    CHECK(r.q_bar < 0.0);
  }
}
