#include "cavkin/model.hpp"

#include <cmath>
#include <string>

#include "cavkin/errors.hpp"

namespace cavkin {

void DoubleWell::validate() const {
  if (!(A2 < 0.0)) throw InvalidParameter("double well needs A2 < 0, got " + std::to_string(A2));
  if (!(A4 > 0.0)) throw InvalidParameter("double well needs A4 > 0, got " + std::to_string(A4));
  if (!(mu > 0.0)) throw InvalidParameter("reduced mass must be positive");
}

double DoubleWell::minimum_q() const { return std::sqrt(-A2 / (2.0 * A4)); }

double DoubleWell::minimum_energy() const { return A0 - A2 * A2 / (4.0 * A4); }

double DoubleWell::barrier_height() const { return A2 * A2 / (4.0 * A4); }

CavityMode::CavityMode(double omega_c) : omega_(omega_c) {
  if (!(omega_c > 0.0)) throw InvalidParameter("cavity frequency must be positive");
}

Coupling Coupling::from_eta(double eta, double omega_c, double d_fi) {
  if (eta < 0.0) throw InvalidParameter("coupling eta must be non-negative");
  return Coupling(eta, eta_to_g(eta, omega_c, d_fi), d_fi);
}

Coupling Coupling::from_g(double g, double omega_c, double d_fi) {
  const double eta = g_to_eta(g, omega_c, d_fi);
  if (eta < 0.0) throw InvalidParameter("coupling g must be non-negative");
  return Coupling(eta, g, d_fi);
}

ModelParams::ModelParams(DoubleWell well, DipoleModel dipole, CavityMode cavity, double eta, double d_fi)
    : well_(well), dipole_(dipole), cavity_(cavity), coupling_(Coupling::from_eta(eta, cavity.omega(), d_fi)) {}

double ModelParams::bilinear_strength() const { return std::sqrt(2.0 * omega_c()) * g(); }

double ModelParams::self_energy_strength() const { return g() * g() / omega_c(); }

ModelParams ModelParams::with_eta(double eta) const {
  ModelParams p = *this;
  p.coupling_ = Coupling::from_eta(eta, omega_c(), coupling_.d_fi());
  return p;
}

ModelParams ModelParams::with_omega_c(double omega_c) const {
  ModelParams p = *this;
  p.cavity_ = CavityMode(omega_c);
  p.coupling_ = Coupling::from_eta(eta(), omega_c, coupling_.d_fi());
  return p;
}

ModelParams ModelParams::with_d_fi(double d_fi) const {
  ModelParams p = *this;
  p.coupling_ = Coupling::from_eta(eta(), omega_c(), d_fi);
  return p;
}

ModelParams ModelParams::with_well(const DoubleWell& well) const {
  ModelParams p = *this;
  p.well_ = well;
  return p;
}

ModelParams ModelParams::with_dipole(const DipoleModel& dipole) const {
  ModelParams p = *this;
  p.dipole_ = dipole;
  return p;
}

double potential(double q, const DoubleWell& w) {
  const double q2 = q * q;
  return w.A0 + w.A2 * q2 + w.A4 * q2 * q2;
}

double potential_d1(double q, const DoubleWell& w) { return 2.0 * w.A2 * q + 4.0 * w.A4 * q * q * q; }

double potential_d2(double q, const DoubleWell& w) { return 2.0 * w.A2 + 12.0 * w.A4 * q * q; }

double dipole(double q, const DipoleModel& d) { return -d.gamma * q * std::exp(-d.delta * q * q); }

double dipole_d1(double q, const DipoleModel& d) {
  return -d.gamma * std::exp(-d.delta * q * q) * (1.0 - 2.0 * d.delta * q * q);
}

double dipole_d2(double q, const DipoleModel& d) {
  const double q2 = q * q;
  return 2.0 * d.gamma * d.delta * q * std::exp(-d.delta * q2) * (3.0 - 2.0 * d.delta * q2);
}

double eta_to_g(double eta, double omega_c, double d_fi) {
  if (d_fi == 0.0) throw InvalidParameter("transition dipole d_fi must be non-zero");
  if (!(omega_c > 0.0)) throw InvalidParameter("cavity frequency must be positive");
  return omega_c * eta / std::abs(d_fi);
}

double g_to_eta(double g, double omega_c, double d_fi) {
  if (d_fi == 0.0) throw InvalidParameter("transition dipole d_fi must be non-zero");
  if (!(omega_c > 0.0)) throw InvalidParameter("cavity frequency must be positive");
  return g * std::abs(d_fi) / omega_c;
}

double cpes(double q, double x_c, const ModelParams& p) {
  const double w = p.omega_c();
  const double d = dipole(q, p.dipole());
  return potential(q, p.well()) + 0.5 * w * w * x_c * x_c + p.bilinear_strength() * x_c * d +
         p.self_energy_strength() * d * d;
}

Eigen::Vector2d cpes_grad(double q, double x_c, const ModelParams& p) {
  const double w = p.omega_c();
  const double d = dipole(q, p.dipole());
  const double d1 = dipole_d1(q, p.dipole());
  const double kappa = p.bilinear_strength();
  const double lambda = p.self_energy_strength();
  return {potential_d1(q, p.well()) + kappa * x_c * d1 + 2.0 * lambda * d * d1, w * w * x_c + kappa * d};
}

Eigen::Matrix2d cpes_hessian(double q, double x_c, const ModelParams& p, bool mass_weighted) {
  const double w = p.omega_c();
  const double d = dipole(q, p.dipole());
  const double d1 = dipole_d1(q, p.dipole());
  const double d2 = dipole_d2(q, p.dipole());
  const double kappa = p.bilinear_strength();
  const double lambda = p.self_energy_strength();

  Eigen::Matrix2d h;
  h(0, 0) = potential_d2(q, p.well()) + kappa * x_c * d2 + 2.0 * lambda * (d1 * d1 + d * d2);
  h(0, 1) = kappa * d1;
  h(1, 0) = h(0, 1);
  h(1, 1) = w * w;
  if (mass_weighted) {
    const double sm = std::sqrt(p.mu());
    h(0, 0) /= p.mu();
    h(0, 1) /= sm;
    h(1, 0) /= sm;
  }
  return h;
}

}  // namespace cavkin
