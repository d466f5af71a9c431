#pragma once

#include <Eigen/Core>

#include "cavkin/units.hpp"

namespace cavkin {

// Symmetric quartic double well V(q) = A0 + A2 q^2 + A4 q^4 (E_h, a0).
struct DoubleWell {
  double A0 = 9.249e-3;
  double A2 = -3.289e-2;
  double A4 = 2.923e-2;
  double mu = 4533.52;  // reduced mass of the inversion mode, m_e

  void validate() const;
  // q of the product well; the reactant well sits at -minimum_q().
  [[nodiscard]] double minimum_q() const;
  [[nodiscard]] double minimum_energy() const;
  // Barrier measured from the well bottom, A2^2/(4 A4).
  [[nodiscard]] double barrier_height() const;
};

// d(q) = -gamma q exp(-delta q^2) in e a0.
struct DipoleModel {
  double gamma = 1.271;
  double delta = 0.8887;
};

class CavityMode {
 public:
  CavityMode() = default;
  explicit CavityMode(double omega_c);
  static CavityMode from_wavenumber(double omega_cm) { return CavityMode(units.to_hartree(omega_cm)); }

  [[nodiscard]] double omega() const { return omega_; }
  [[nodiscard]] double wavenumber() const { return units.to_wavenumber(omega_); }

 private:
  double omega_ = 1039.0 / 219474.63;
};

// Light-matter coupling. g is always derived from eta (or eta from g) through
// g = hbar omega_c eta / |d_fi|, so the two never drift apart.
class Coupling {
 public:
  Coupling() = default;
  static Coupling from_eta(double eta, double omega_c, double d_fi);
  static Coupling from_g(double g, double omega_c, double d_fi);

  [[nodiscard]] double eta() const { return eta_; }
  [[nodiscard]] double g() const { return g_; }
  [[nodiscard]] double d_fi() const { return d_fi_; }

 private:
  Coupling(double eta, double g, double d_fi) : eta_(eta), g_(g), d_fi_(d_fi) {}
  double eta_ = 0.0;
  double g_ = 0.0;
  double d_fi_ = 0.027;
};

class ModelParams {
 public:
  ModelParams() = default;
  ModelParams(DoubleWell well, DipoleModel dipole, CavityMode cavity, double eta, double d_fi = 0.027);

  [[nodiscard]] const DoubleWell& well() const { return well_; }
  [[nodiscard]] const DipoleModel& dipole() const { return dipole_; }
  [[nodiscard]] const CavityMode& cavity() const { return cavity_; }
  [[nodiscard]] const Coupling& coupling() const { return coupling_; }

  [[nodiscard]] double omega_c() const { return cavity_.omega(); }
  [[nodiscard]] double eta() const { return coupling_.eta(); }
  [[nodiscard]] double g() const { return coupling_.g(); }
  [[nodiscard]] double mu() const { return well_.mu; }

  // sqrt(2 omega_c / hbar) g, prefactor of x_c d(q)
  [[nodiscard]] double bilinear_strength() const;
  // g^2 / (hbar omega_c), prefactor of d(q)^2
  [[nodiscard]] double self_energy_strength() const;

  // Copies with one parameter changed. Changing omega_c or d_fi keeps eta fixed
  // and re-derives g.
  [[nodiscard]] ModelParams with_eta(double eta) const;
  [[nodiscard]] ModelParams with_omega_c(double omega_c) const;
  [[nodiscard]] ModelParams with_d_fi(double d_fi) const;
  [[nodiscard]] ModelParams with_well(const DoubleWell& well) const;
  [[nodiscard]] ModelParams with_dipole(const DipoleModel& dipole) const;

 private:
  DoubleWell well_{};
  DipoleModel dipole_{};
  CavityMode cavity_{};
  Coupling coupling_ = Coupling::from_eta(0.0, CavityMode{}.omega(), 0.027);
};

[[nodiscard]] double potential(double q, const DoubleWell& well);
[[nodiscard]] double potential_d1(double q, const DoubleWell& well);
[[nodiscard]] double potential_d2(double q, const DoubleWell& well);

[[nodiscard]] double dipole(double q, const DipoleModel& d);
[[nodiscard]] double dipole_d1(double q, const DipoleModel& d);
[[nodiscard]] double dipole_d2(double q, const DipoleModel& d);

[[nodiscard]] double eta_to_g(double eta, double omega_c, double d_fi);
[[nodiscard]] double g_to_eta(double g, double omega_c, double d_fi);

// Cavity Born-Oppenheimer surface
//   V(q) + omega_c^2 x_c^2 / 2 + sqrt(2 omega_c) g x_c d(q) + g^2 d(q)^2 / omega_c
[[nodiscard]] double cpes(double q, double x_c, const ModelParams& p);
[[nodiscard]] Eigen::Vector2d cpes_grad(double q, double x_c, const ModelParams& p);
// Ordering (q, x_c). The mass-weighted form divides by sqrt(m_i m_j) with
// m_q = mu and m_c = 1.
[[nodiscard]] Eigen::Matrix2d cpes_hessian(double q, double x_c, const ModelParams& p, bool mass_weighted = false);

}  // namespace cavkin
