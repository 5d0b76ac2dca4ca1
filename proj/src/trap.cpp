#include "ionshuttle/trap.hpp"

#include <cmath>
#include <stdexcept>

namespace ionshuttle {

TrapParams TrapParams::two_ion(double single_mass, double omega, double beta,
                               double distance) {
  TrapParams p;
  p.m = single_mass;
  p.M = 2.0 * single_mass;
  p.omega = omega;
  p.beta = beta;
  p.d = distance;
  p.validate();
  return p;
}

void TrapParams::validate() const {
  if (!(m > 0.0)) throw std::invalid_argument("TrapParams: m must be > 0");
  if (!(M > 0.0)) throw std::invalid_argument("TrapParams: M must be > 0");
  if (!(omega > 0.0)) throw std::invalid_argument("TrapParams: omega must be > 0");
  if (!(beta >= 0.0)) throw std::invalid_argument("TrapParams: beta must be >= 0");
  if (!(d >= 0.0)) throw std::invalid_argument("TrapParams: d must be >= 0");
  if (!(Cc > 0.0)) throw std::invalid_argument("TrapParams: Cc must be > 0");
  if (!(hbar > 0.0)) throw std::invalid_argument("TrapParams: hbar must be > 0");
}

double relative_potential(const TrapParams& p, double r) {
  if (!(r > 0.0)) throw std::domain_error("relative_potential: r must be > 0");
  const double r2 = r * r;
  return 0.5 * p.M * p.omega * p.omega * (r2 + p.beta * r2 * r2) +
         p.Cc / (2.0 * r);
}

double relative_potential_derivative(const TrapParams& p, double r) {
  if (!(r > 0.0))
    throw std::domain_error("relative_potential_derivative: r must be > 0");
  return p.M * p.omega * p.omega * (r + 2.0 * p.beta * r * r * r) -
         p.Cc / (2.0 * r * r);
}

double equilibrium_distance(const TrapParams& p) {
  p.validate();
  const double r_harm = std::cbrt(p.Cc / (2.0 * p.M * p.omega * p.omega));
  double lo = 0.1 * r_harm;
  double hi = 10.0 * r_harm;
  double flo = relative_potential_derivative(p, lo);
  double fhi = relative_potential_derivative(p, hi);
  if (!(flo < 0.0 && fhi > 0.0))
    throw std::runtime_error(
        "equilibrium_distance: bracket [0.1, 10] r_harm does not straddle the "
        "root; pathological parameters");
  // dV_r/dr is monotone on the bracket, bisect to 1e-14 relative.
  while (hi - lo > 1e-14 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (relative_potential_derivative(p, mid) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double effective_frequency(const TrapParams& p, double r_e) {
  if (!(r_e > 0.0)) throw std::domain_error("effective_frequency: r_e must be > 0");
  return p.omega * std::sqrt(1.0 + 6.0 * p.beta * r_e * r_e);
}

EquilibriumInfo equilibrium_info(const TrapParams& p) {
  EquilibriumInfo info;
  info.r_e = equilibrium_distance(p);
  info.omega_tilde = effective_frequency(p, info.r_e);
  return info;
}

double potential_2d(const TrapParams& p, double q_rel, double r) {
  if (!(r > 0.0)) throw std::domain_error("potential_2d: r must be > 0");
  const double w2 = p.omega * p.omega;
  const double q2 = q_rel * q_rel;
  const double r2 = r * r;
  const double cm = 0.5 * p.M * w2 * (q2 + p.beta * q2 * q2);
  const double rel = 0.5 * p.M * w2 * (r2 + p.beta * r2 * r2) + p.Cc / (2.0 * r);
  const double coupling = 3.0 * p.M * w2 * p.beta * q2 * r2;
  return cm + rel + coupling;
}

double potential_1d_effective(const TrapParams& p, double r_e, double q_rel) {
  const double w2 = p.omega * p.omega;
  const double q2 = q_rel * q_rel;
  return 0.5 * p.M * w2 *
         ((6.0 * p.beta * r_e * r_e + 1.0) * q2 + p.beta * q2 * q2);
}

double relative_mode_frequency(const TrapParams& p, double r_e) {
  const double w2 = p.omega * p.omega;
  const double vpp =
      p.M * w2 * (1.0 + 6.0 * p.beta * r_e * r_e) + p.Cc / (r_e * r_e * r_e);
  return std::sqrt(vpp / p.M);
}

}  // namespace ionshuttle
