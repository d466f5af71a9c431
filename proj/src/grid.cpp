#include "cavkin/grid.hpp"

#include <string>

#include "cavkin/errors.hpp"

namespace cavkin {

Grid1D::Grid1D(double start, double end, std::size_t n_points, double mass)
    : start_(start), end_(end), n_(n_points), mass_(mass) {
  if (n_points < 3) throw InvalidParameter("grid needs at least 3 points, got " + std::to_string(n_points));
  if (!(end > start)) throw InvalidParameter("grid end must exceed start");
  if (!(mass > 0.0)) throw InvalidParameter("grid mass must be positive");
}

std::vector<double> Grid1D::points() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = point(i);
  return out;
}

}  // namespace cavkin
