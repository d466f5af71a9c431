#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cavkin/crp.hpp"
#include "cavkin/errors.hpp"
#include "cavkin/rates.hpp"
#include "cavkin/topology.hpp"
#include "cavkin/units.hpp"

using namespace cavkin;
using doctest::Approx;

namespace {

Grid2D crp_grid(const ModelParams& p, std::size_t nq, std::size_t nc) {
  return {Grid1D(-1.6, 1.6, nq, p.mu()), Grid1D(-250.0, 250.0, nc, 1.0)};
}

}  // namespace

TEST_CASE("absorbing potentials") {
  const CapConfig c;
  CHECK(cap_molecular(0.3, c) == Approx(cap_molecular(-0.3, c)));
  CHECK(cap_cavity(-40.0, c) == cap_cavity(40.0, c));
  CHECK(cap_cavity(c.xcm, c) == Approx(c.gamma_c0));
  CHECK(product_side(0.0) == 1.0);
  CHECK(product_side(-1e-12) == 0.0);
  const ModelParams p;
  const auto s = cap_on_grid(crp_grid(p, 11, 9), c);
  CHECK((s.reactant + s.product - s.total).cwiseAbs().maxCoeff() == 0.0);
  CapConfig bad;
  bad.xcm = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
}

TEST_CASE("energy grid") {
  const auto e = energy_grid(1.0, 4);
  REQUIRE(e.size() == 5);
  CHECK(e.front() == 0.0);
  CHECK(e.back() == 1.0);
}

TEST_CASE("CRP solvers agree") {
  const ModelParams p = ModelParams().with_eta(0.1);
  const Grid2D g = crp_grid(p, 31, 21);
  CrpSettings dense, iterative, contracted;
  iterative.solver = CrpSolver::iterative;
  contracted.solver = CrpSolver::contracted;
  contracted.channels = 21;
  const CrpProblem a(p, g, dense), b(p, g, iterative), c(p, g, contracted);
  for (const double e : {0.0, 0.004, 0.012, 0.03}) {
    const double n = a.evaluate(e);
    CHECK(b.evaluate(e) == Approx(n).epsilon(1e-8));
    CHECK(c.evaluate(e) == Approx(n).epsilon(1e-8));
  }
}

TEST_CASE("dense and iterative Green's functions agree on 61x41") {
  const ModelParams p = ModelParams().with_eta(0.05);
  const Grid2D g = crp_grid(p, 61, 41);
  CrpSettings dense, iterative;
  iterative.solver = CrpSolver::iterative;
  const CrpProblem a(p, g, dense), b(p, g, iterative);
  for (const double e : {0.002, 0.015}) {
    const double n = a.evaluate(e);
    CHECK(std::abs(b.evaluate(e) - n) <= 1e-6 * std::max(1.0, n));
  }
}

TEST_CASE("exchanging the absorbers leaves N unchanged") {
  for (const double eta : {0.0, 0.1}) {
    const ModelParams p = ModelParams().with_eta(eta);
    const Grid2D g = crp_grid(p, 31, 21);
    CrpSettings s, swapped;
    swapped.swap_sides = true;
    const CrpProblem a(p, g, s), b(p, g, swapped);
    for (const double e : {0.001, 0.01, 0.025}) CHECK(std::abs(a.evaluate(e) - b.evaluate(e)) < 1e-8);
  }
}

TEST_CASE("CRP curve is parallel safe and physical") {
  const ModelParams p = ModelParams().with_eta(0.1);
  const CrpProblem pr(p, crp_grid(p, 25, 17), CrpSettings{});
  const auto e = energy_grid(5 * classical_barrier(p), 10);
  const auto a = crp_curve(pr, e);
  const auto b = crp_curve_serial(pr, e);
  CHECK(a.values == b.values);
  CHECK(a.settings.at("solver") == "dense");
  for (const double v : a.values) CHECK(v >= 0.0);
  CHECK_THROWS_AS((void)pr.evaluate(-1e-3), InvalidParameter);
}

TEST_CASE("solver names") {
  for (const auto s : {CrpSolver::dense, CrpSolver::iterative, CrpSolver::contracted}) {
    CHECK(crp_solver_from_string(to_string(s)) == s);
  }
  CHECK_THROWS_AS((void)crp_solver_from_string("lu"), ConfigError);
}

TEST_CASE("reactant partition function") {
  const ModelParams p;
  const double b = units.beta_from_cm(0.002);
  const auto r = reactant_frequencies(p);
  CHECK(reactant_partition(b, p) ==
        Approx(1.0 / ((1.0 - std::exp(-b * r.molecular)) * (1.0 - std::exp(-b * r.cavity)))));
}

TEST_CASE("thermal rate of a step function") {
  const ModelParams p;
  CrpCurve c;
  c.energies = energy_grid(0.2, 4000);
  for (const double e : c.energies) c.values.push_back(e >= 0.01 ? 1.0 : 0.0);
  const double b = units.beta_from_cm(0.002);
  const double exact = std::exp(-b * 0.01) / b / (2 * M_PI * reactant_partition(b, p));
  CHECK(thermal_rate_crp(b, p, c) == Approx(exact).epsilon(0.02));
}

TEST_CASE("Wigner factor") {
  for (const double eta : {0.0, 0.1, 0.2}) {
    const ModelParams p = ModelParams().with_eta(eta);
    for (const double bcm : {0.001, 0.005, 0.02}) {
      const double b = units.beta_from_cm(bcm);
      const double w = std::abs(cts_frequencies(p).barrier);
      CHECK(wigner_factor(b, p) >= 1.0);
      CHECK(wigner_factor(b, p) == Approx(1.0 + b * b * w * w / 24.0));
      CHECK(eyring_tst_wigner(b, p) == Approx(wigner_factor(b, p) * eyring_tst(b, p)));
    }
  }
}

TEST_CASE("TST rate decreases with coupling and temperature") {
  const double b = units.beta_from_kelvin(298.0);
  double previous = INFINITY;
  for (const double eta : {0.0, 0.05, 0.1, 0.2}) {
    const double k = eyring_tst(b, ModelParams().with_eta(eta));
    CHECK(k < previous);
    previous = k;
  }
  const ModelParams p;
  CHECK(eyring_tst(units.beta_from_cm(0.001), p) > eyring_tst(units.beta_from_cm(0.002), p));
}

TEST_CASE("free energy round trip") {
  for (const double bcm : {0.001, 0.004, 0.02}) {
    const double b = units.beta_from_cm(bcm);
    for (const double k : {1e-12, 3e-9, 1e-5}) CHECK(rate_from_delta_g(delta_g_extract(k, b), b) == Approx(k).epsilon(1e-12));
  }
}

TEST_CASE("barrier weights") {
  const std::vector<double> h{1.0, 2.0, 3.0, 4.0, 5.0};
  const auto w = barrier_weights(h, 3.0, 1.0);
  CHECK(std::accumulate(w.begin(), w.end(), 0.0) == Approx(1.0).epsilon(1e-15));
  CHECK(w[0] == Approx(w[4]));
  CHECK(w[2] > w[1]);
  CHECK(barrier_averaged_rate(h, 3.0, 1.0, [](double) { return 7.0; }) == Approx(7.0));
  CHECK_THROWS_AS((void)barrier_weights(h, 3.0, 0.0), InvalidParameter);
}

TEST_CASE("Arrhenius table") {
  const ModelParams p = ModelParams().with_eta(0.1);
  const auto t = arrhenius_table(p, CrpCurve{}, {0.001, 0.002});
  REQUIRE(t.size() == 2);
  CHECK(t[0].k_crp == 0.0);
  CHECK(t[0].k_tst == Approx(units.rate_to_per_second(eyring_tst(units.beta_from_cm(0.001), p))));
  CHECK(t[1].temperature == Approx(units.kelvin_from_beta_cm(0.002)));
  REQUIRE(t[0].delta_g.has_value());
}
