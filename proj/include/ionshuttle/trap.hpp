#pragma once

#include "ionshuttle/constants.hpp"

namespace ionshuttle {

/// Physical parameters of the transport problem. SI units throughout.
/// For two ions M = 2m; the N-ion module uses M = N*m.
struct TrapParams {
  double m = 0.0;      // single-ion mass [kg]
  double M = 0.0;      // total (= CM) mass [kg]
  double omega = 0.0;  // angular trap frequency [rad/s]
  double beta = 0.0;   // quartic anharmonicity [m^-2]
  double d = 0.0;      // transport distance [m]
  double Cc = constants::coulomb_coupling;  // e^2/(4 pi eps0) [N m^2]
  double hbar = constants::hbar;            // [J s]

  static TrapParams two_ion(double single_mass, double omega, double beta,
                            double distance);

  /// Throws std::invalid_argument when a field is outside its domain.
  void validate() const;

  double trap_period() const { return 2.0 * constants::pi / omega; }
};

/// Equilibrium half-separation and the anharmonicity-shifted CM frequency.
struct EquilibriumInfo {
  double r_e = 0.0;          // [m]
  double omega_tilde = 0.0;  // [rad/s]
};

/// V_r(r) = 1/2 M w^2 (r^2 + beta r^4) + C_c/(2r), the relative-motion
/// potential; r is the half-separation of the pair.
double relative_potential(const TrapParams& p, double r);
double relative_potential_derivative(const TrapParams& p, double r);

/// Stationary point of V_r on r > 0, found by bracketed bisection starting
/// from the beta = 0 closed form (C_c/(2 M w^2))^(1/3).
double equilibrium_distance(const TrapParams& p);

/// omega * sqrt(1 + 6 beta r_e^2).
double effective_frequency(const TrapParams& p, double r_e);

EquilibriumInfo equilibrium_info(const TrapParams& p);

/// Full two-ion potential in CM/relative coordinates, with q_rel = Q - Q0:
///   1/2 M w^2 [q_rel^2 + beta q_rel^4]              (CM part)
/// + 1/2 M w^2 (r^2 + beta r^4) + C_c/(2r)           (relative part)
/// + 3 M w^2 beta q_rel^2 r^2                        (coupling)
/// Throws std::domain_error for r <= 0.
double potential_2d(const TrapParams& p, double q_rel, double r);

/// Frozen-r effective CM potential:
///   1/2 M w^2 [(6 beta r_e^2 + 1) q_rel^2 + beta q_rel^4].
double potential_1d_effective(const TrapParams& p, double r_e, double q_rel);

/// Local curvature frequency of V_r at r_e: sqrt(V_r''(r_e)/M).
double relative_mode_frequency(const TrapParams& p, double r_e);

}  // namespace ionshuttle
