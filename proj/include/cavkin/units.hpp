#pragma once

// Hartree atomic units are used everywhere inside the library (hbar = m_e = e = a0 = 1).
// The conversions below are the only place where wavenumbers, femtoseconds, kelvin or
// s^-1 enter.

namespace cavkin {

struct UnitSystem {
  double wavenumber_per_hartree = 219474.63;  // cm^-1 per E_h
  double fs_per_atomic_time = 0.02418884;     // fs per hbar/E_h
  double kelvin_wavenumber = 0.69503476;      // k_B in cm^-1 / K

  [[nodiscard]] constexpr double hartree_per_wavenumber() const { return 1.0 / wavenumber_per_hartree; }

  [[nodiscard]] constexpr double to_hartree(double wavenumber) const { return wavenumber / wavenumber_per_hartree; }
  [[nodiscard]] constexpr double to_wavenumber(double hartree) const { return hartree * wavenumber_per_hartree; }

  [[nodiscard]] constexpr double to_atomic_time(double fs) const { return fs / fs_per_atomic_time; }
  [[nodiscard]] constexpr double to_fs(double atomic_time) const { return atomic_time * fs_per_atomic_time; }

  // beta given as 1/(k_B T) in cm (i.e. inverse wavenumbers)
  [[nodiscard]] constexpr double beta_from_cm(double beta_cm) const { return beta_cm * wavenumber_per_hartree; }
  [[nodiscard]] constexpr double beta_to_cm(double beta_au) const { return beta_au / wavenumber_per_hartree; }
  [[nodiscard]] constexpr double beta_from_kelvin(double temperature) const {
    return beta_from_cm(1.0 / (kelvin_wavenumber * temperature));
  }
  [[nodiscard]] constexpr double kelvin_from_beta_cm(double beta_cm) const { return 1.0 / (kelvin_wavenumber * beta_cm); }

  // a rate in inverse atomic time to s^-1
  [[nodiscard]] constexpr double rate_to_per_second(double rate_au) const { return rate_au / (fs_per_atomic_time * 1e-15); }
};

inline constexpr UnitSystem units{};

}  // namespace cavkin
