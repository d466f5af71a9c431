#pragma once

#include <Eigen/Core>

#include "cavkin/grid.hpp"

namespace cavkin {

// Absorbing potentials (E_h). Molecular: two logistic walls at +-q_m.
// Cavity: power law in |x_c| reaching gamma_c0 at x_cm.
struct CapConfig {
  double k0 = 0.08;
  double k1 = 0.1;
  double q_m = 0.75;
  double gamma_c0 = 0.09;
  int n = 4;
  double xc0 = 0.0;
  double xcm = 200.0;

  void validate() const;
};

[[nodiscard]] double cap_molecular(double q, const CapConfig& cfg);
[[nodiscard]] double cap_cavity(double x_c, const CapConfig& cfg);

// Product side indicator; q = 0 counts as product.
[[nodiscard]] inline double product_side(double q) { return q >= 0.0 ? 1.0 : 0.0; }

struct CapSplit {
  Eigen::VectorXd total;     // Gamma_m(q) + Gamma_c(x_c)
  Eigen::VectorXd reactant;  // (1 - theta) Gamma
  Eigen::VectorXd product;   // theta Gamma
};

[[nodiscard]] CapSplit cap_on_grid(const Grid2D& grid, const CapConfig& cfg);

}  // namespace cavkin
