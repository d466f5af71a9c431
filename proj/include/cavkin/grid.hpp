#pragma once

#include <cstddef>
#include <vector>

namespace cavkin {

// Equidistant grid; the cavity coordinate uses unit mass.
class Grid1D {
 public:
  Grid1D() = default;
  Grid1D(double start, double end, std::size_t n_points, double mass);

  [[nodiscard]] double start() const { return start_; }
  [[nodiscard]] double end() const { return end_; }
  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] double mass() const { return mass_; }
  [[nodiscard]] double spacing() const { return (end_ - start_) / static_cast<double>(n_ - 1); }
  [[nodiscard]] double point(std::size_t i) const { return start_ + static_cast<double>(i) * spacing(); }
  [[nodiscard]] std::vector<double> points() const;
  [[nodiscard]] bool contains(double x) const { return x >= start_ && x <= end_; }

 private:
  double start_ = -1.0;
  double end_ = 1.0;
  std::size_t n_ = 3;
  double mass_ = 1.0;
};

// Direct-product grid. Flattened index = i_q * N_c + j_c (row-major, cavity fastest).
struct Grid2D {
  Grid1D q;
  Grid1D xc;

  [[nodiscard]] std::size_t size() const { return q.size() * xc.size(); }
  [[nodiscard]] std::size_t index(std::size_t iq, std::size_t jc) const { return iq * xc.size() + jc; }
};

}  // namespace cavkin
