#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cavkin/cap.hpp"
#include "cavkin/grid.hpp"
#include "cavkin/model.hpp"

namespace cavkin {

enum class CrpSolver {
  dense,       // complex LU of the full grid matrix
  iterative,   // preconditioned GMRES, one solve per product-side grid point
  contracted,  // dense LU in a basis of adiabatic cavity channels per q node
};

[[nodiscard]] std::string to_string(CrpSolver s);
[[nodiscard]] CrpSolver crp_solver_from_string(const std::string& s);

struct CrpSettings {
  CapConfig cap;
  CrpSolver solver = CrpSolver::dense;
  std::size_t channels = 16;  // contracted: channels kept per q node (clamped to N_c)
  double tolerance = 1e-10;   // iterative: relative residual
  std::size_t restart = 40;
  std::size_t max_iterations = 4000;
  bool swap_sides = false;  // exchange reactant and product absorbers
};

// Cumulative reaction probability
//   N(E) = tr[Gamma_R G Gamma_P G^+],  G = (E + V_min - H + i Gamma/2)^{-1},
// with E measured from the classical reactant-well minimum V_min.
class CrpProblem {
 public:
  CrpProblem(const ModelParams& p, const Grid2D& grid, const CrpSettings& settings);
  ~CrpProblem();
  CrpProblem(CrpProblem&&) noexcept;
  CrpProblem& operator=(CrpProblem&&) noexcept;

  [[nodiscard]] double evaluate(double energy) const;
  [[nodiscard]] const CrpSettings& settings() const { return settings_; }
  [[nodiscard]] const Grid2D& grid() const { return grid_; }
  [[nodiscard]] double reference_energy() const { return v_min_; }
  [[nodiscard]] std::map<std::string, std::string> describe() const;

  struct Backend;

 private:
  Grid2D grid_;
  CrpSettings settings_;
  double v_min_ = 0.0;
  std::unique_ptr<Backend> backend_;
};

[[nodiscard]] double crp(double energy, const ModelParams& p, const Grid2D& grid, const CrpSettings& settings);

struct CrpCurve {
  std::vector<double> energies;  // E_h above the reactant-well minimum, ascending
  std::vector<double> values;
  std::map<std::string, std::string> settings;
};

// Evaluates all energies in parallel; each solve is sequential.
[[nodiscard]] CrpCurve crp_curve(const CrpProblem& problem, const std::vector<double>& energies);
[[nodiscard]] CrpCurve crp_curve_serial(const CrpProblem& problem, const std::vector<double>& energies);

// n_intervals + 1 equidistant energies on [0, e_max].
[[nodiscard]] std::vector<double> energy_grid(double e_max, std::size_t n_intervals);

}  // namespace cavkin
