#pragma once

#include <cstddef>
#include <vector>

#include "ionshuttle/trajectory.hpp"
#include "ionshuttle/trap.hpp"

namespace ionshuttle {

/// Phase-space point of one or more particles. Multi-ion configurations keep
/// the strict ordering q1 > q2 > ... enforced by the Coulomb repulsion.
struct ClassicalState {
  std::vector<double> positions;   // [m]
  std::vector<double> velocities;  // [m/s]
  double t = 0.0;                  // [s]
};

enum class ExcitationMethod { Analytic, Ode };

struct ExcitationResult {
  double energy = 0.0;  // [J]
  double quanta = 0.0;  // energy / (hbar * omega used for conversion)
  ExcitationMethod method = ExcitationMethod::Analytic;
};

struct CmTrajectory {
  std::vector<double> t, q, v;
  ExcitationResult final_excitation;
  double richardson_error = 0.0;  // |q_h - q_{h/2}| at t_f, step-halving check
};

/// Integrates d^2Q/dt^2 + omega_eff^2 (Q - Q0(t)) = 0 from rest with
/// fixed-step RK4 (default 1000 steps per 2 pi/omega_eff period) and
/// evaluates the final excitation energy
///   E = 1/2 M dQ^2 + 1/2 M omega_eff^2 (Q - Q0(t_f))^2.
CmTrajectory integrate_effective_cm(const TrapParams& params,
                                    const TransportPlan& plan,
                                    double omega_eff,
                                    std::size_t steps_per_period = 1000);

/// Closed-form final excitation for the polynomial trajectory designed with
/// `omega` when the true oscillation frequency is `omega_tilde`:
///   E_ex = 7200 d^2 M (w^2-wt^2)^2 / (t_f^10 w^4 wt^8)
///          * [6 x cos(x/2) + (x^2 - 12) sin(x/2)]^2,  x = t_f wt.
/// Quanta are reported in units hbar*omega_tilde.
ExcitationResult excitation_energy_analytic(const TrapParams& params,
                                            double t_f, double omega,
                                            double omega_tilde);

/// g(x) = 6 x cos(x/2) + (x^2 - 12) sin(x/2); its positive roots mark
/// excitation-free transport times x = t_f * omega_eff.
double excitation_bracket(double x);

/// All t_f in [t_min, t_max] with g(t_f * omega_eff) = 0, bracketed by a
/// 0.05 rad scan in x and bisected to 1e-12 relative.
std::vector<double> excitation_zeros(double omega_eff, double t_min,
                                     double t_max);

/// t_f^cr = 16.5 beta^{1/4} d^{1/2} / omega. Returns +infinity when
/// beta == 0 (no quartic scale, no critical time).
double critical_time(const TrapParams& params);

struct TwoIonResult {
  ClassicalState final_state;
  double cm_energy = 0.0;          // CM excess above the resting trap [J]
  double rel_energy_excess = 0.0;  // relative-motion energy above V_r(r_e) [J]
  double total_energy = 0.0;       // lab-frame H at final time [J]
};

/// Two-ion Newton dynamics in the lab frame with the quartic trap and the
/// exact Coulomb force. A Compensated plan adds the uniform force m*ddQ0 per
/// ion. Integrates to max(t_end, plan.t_f()); the trap is frozen at d beyond
/// t_f. Throws on ion crossing q1 <= q2.
TwoIonResult integrate_two_ion_classical(const TrapParams& params,
                                         const TransportPlan& plan,
                                         const ClassicalState& initial,
                                         std::size_t steps_per_period = 1000,
                                         double t_end = -1.0);

/// Ions at +/- r_e around the trap center, at rest.
ClassicalState two_ion_equilibrium_state(const TrapParams& params);

}  // namespace ionshuttle
