#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cavkin/dvr.hpp"
#include "cavkin/grid.hpp"
#include "cavkin/model.hpp"

namespace cavkin {

struct Wavepacket {
  Grid2D grid;
  Eigen::VectorXcd amplitudes;  // row-major over Grid2D, Euclidean norm 1
  double time_fs = 0.0;

  [[nodiscard]] double norm2() const { return amplitudes.squaredNorm(); }
};

// Dynamics grid: q in [-q_max, q_max] and x_c in +-xi/sqrt(omega_c), so that the
// cavity extent follows the oscillator length of the mode.
[[nodiscard]] Grid2D dynamics_grid(const ModelParams& p, std::size_t n_q = 64, std::size_t n_c = 64, double xi = 14.0,
                                   double q_max = 2.0);

// Harmonic ground state of frequency omega_q and mass mu centred at q_i, times
// the cavity vacuum. Throws RangeError if more than 1e-10 of the continuous
// norm falls outside the grid.
[[nodiscard]] Wavepacket initial_state(double q_i, const ModelParams& p, const Grid2D& grid, double omega_q);
[[nodiscard]] Wavepacket initial_state(double q_i, const ModelParams& p, const Grid2D& grid);

struct Observables {
  double time_fs = 0.0;
  double norm2 = 0.0;
  double p_inv = 0.0;
  double q = 0.0;
  double xc = 0.0;
  double h_s = 0.0;    // <T_q + V(q)>
  double h_c = 0.0;    // <T_c + omega_c^2 x_c^2 / 2>
  double h_dse = 0.0;  // <g^2 d^2 / omega_c>
  double dh_sc = 0.0;  // <sqrt(2 omega_c) g x_c d>
  double h = 0.0;      // <H> from a full operator application
};

// Energies in E_h; expectation values are normalized by the current norm.
[[nodiscard]] Observables measure(const Wavepacket& psi, const ModelParams& p, const OperatorRep& h);

// Probability on q >= 0.
[[nodiscard]] double inversion_probability(const Wavepacket& psi);

struct TrajectoryRecord {
  std::vector<Observables> samples;
  std::size_t chebyshev_terms = 0;  // per step
  double max_norm_drift = 0.0;
  double max_energy_drift = 0.0;  // relative
};

// Time average (1/t_f) int <q> dt by the trapezoid rule over stored samples.
[[nodiscard]] double time_averaged_q(const TrajectoryRecord& traj);

struct PropagationOptions {
  double dt_fs = 0.25;
  double tf_fs = 1000.0;
  double output_every_fs = 1.0;
  double norm_tolerance = 1e-8;
  double energy_tolerance = 1e-6;
  double series_tolerance = 1e-16;  // truncation of the Chebyshev series
};

using Observer = std::function<void(const Wavepacket&, const Observables&)>;

// Chebyshev expansion of exp(-i H dt). psi is advanced in place. Aborts with
// NumericalFailure when norm or energy drift leaves the tolerances.
TrajectoryRecord propagate(Wavepacket& psi, const ModelParams& p, const PropagationOptions& opt,
                           const Observer& observer = {});

// Same series applied with the serial reference kernel; used for testing.
void chebyshev_step_serial(Wavepacket& psi, const OperatorRep& h, double dt_fs, double tolerance = 1e-16);
void chebyshev_step(Wavepacket& psi, const OperatorRep& h, double dt_fs, double tolerance = 1e-16);

struct ScanRow {
  double eta = 0.0;
  double omega_c = 0.0;  // E_h
  double q_bar = 0.0;
  double p_inv_tf = 0.0;
  std::string error;  // empty on success
};

struct ScanOptions {
  PropagationOptions propagation;
  std::size_t n_q = 64;
  std::size_t n_c = 64;
  double xi = 14.0;
  double q_max = 2.0;
  double q_i = -0.9;
};

// One propagation per (eta, omega_c) pair; failures are recorded per row.
[[nodiscard]] std::vector<ScanRow> resonance_scan(const std::vector<double>& etas, const std::vector<double>& omegas,
                                                  const ModelParams& p, const ScanOptions& opt);

// Single propagation as used by the scan.
[[nodiscard]] TrajectoryRecord run_localization(const ModelParams& p, const ScanOptions& opt);

}  // namespace cavkin
