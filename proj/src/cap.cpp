#include "cavkin/cap.hpp"

#include <cmath>

#include "cavkin/errors.hpp"

namespace cavkin {

void CapConfig::validate() const {
  if (k0 < 0.0) throw InvalidParameter("cap.k0 must be non-negative");
  if (!(k1 > 0.0)) throw InvalidParameter("cap.k1 must be positive");
  if (gamma_c0 < 0.0) throw InvalidParameter("cap.gamma_c0 must be non-negative");
  if (n <= 0 || n % 2 != 0) throw InvalidParameter("cap.n must be a positive even integer");
  if (!(xcm > xc0)) throw InvalidParameter("cap.xcm must exceed cap.xc0");
}

double cap_molecular(double q, const CapConfig& c) {
  return 4.0 * c.k0 / (1.0 + std::exp((c.q_m - q) / c.k1)) + 4.0 * c.k0 / (1.0 + std::exp((c.q_m + q) / c.k1));
}

double cap_cavity(double x_c, const CapConfig& c) {
  const double u = std::abs(x_c) - c.xc0;
  if (u <= 0.0) return 0.0;
  return c.gamma_c0 * std::pow(u / (c.xcm - c.xc0), c.n);
}

CapSplit cap_on_grid(const Grid2D& grid, const CapConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  CapSplit s{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (std::size_t i = 0; i < grid.q.size(); ++i) {
    const double q = grid.q.point(i);
    const double gm = cap_molecular(q, cfg);
    const double th = product_side(q);
    for (std::size_t j = 0; j < grid.xc.size(); ++j) {
      const auto k = static_cast<Eigen::Index>(grid.index(i, j));
      s.total[k] = gm + cap_cavity(grid.xc.point(j), cfg);
      s.product[k] = th * s.total[k];
      s.reactant[k] = (1.0 - th) * s.total[k];
    }
  }
  return s;
}

}  // namespace cavkin
