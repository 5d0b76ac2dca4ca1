#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ionshuttle/classical.hpp"
#include "ionshuttle/trajectory.hpp"
#include "ionshuttle/trap.hpp"

namespace ionshuttle::nion {

/// N equal ions in one trap; params.M is the total mass N*m.
struct ChainConfig {
  std::size_t n_ions = 2;
  TrapParams params;

  static ChainConfig make(std::size_t n, double single_mass, double omega,
                          double beta, double distance);
};

struct CmRelative {
  double Q = 0.0;                // (1/N) sum q_i
  double P = 0.0;                // sum p_i
  std::vector<double> r;         // r_i = (q_i - q_{i+1})/N, N-1 entries
  std::vector<double> p;         // p_i - p_{i+1}, N-1 entries
};

/// Forward transform; requires strict ordering q_1 > q_2 > ... > q_N.
CmRelative to_cm_relative(const ChainConfig& cfg,
                          const std::vector<double>& positions,
                          const std::vector<double>& momenta);

/// Inverse transform:
///   q_i = Q + sum_{j=1}^{N-i} j r_{N-j} - sum_{k=1}^{i-1} k r_k
///   p_i = P/N + (1/N)(sum_{j=1}^{N-i} j p_{N-j} - sum_{k=1}^{i-1} k p_k)
void from_cm_relative(const ChainConfig& cfg, const CmRelative& cr,
                      std::vector<double>& positions,
                      std::vector<double>& momenta);

/// Original-coordinate Hamiltonian (harmonic trap at Q0 plus Coulomb).
double hamiltonian_original(const ChainConfig& cfg, double q0,
                            const std::vector<double>& positions,
                            const std::vector<double>& momenta);

/// H_cm + H_r evaluated in transformed coordinates (H_r carries the
/// triple-sum kinetic and potential relative terms and the Coulomb sums;
/// it does not depend on q0).
double hamiltonian_cm(const ChainConfig& cfg, double q0, const CmRelative& cr);
double hamiltonian_relative(const ChainConfig& cfg, const CmRelative& cr);

struct SeparabilityResult {
  double max_abs_residual = 0.0;  // max |H_orig - (H_cm + H_r)| [J]
  double energy_scale = 0.0;      // typical |H| across the samples [J]
};

/// Samples random phase-space configurations around the equilibrium chain
/// (harmonic trap) and verifies H = H_cm + H_r numerically.
SeparabilityResult hamiltonian_separability_check(const ChainConfig& cfg,
                                                  double q0,
                                                  std::size_t samples,
                                                  std::uint64_t seed);

/// Classical equilibrium chain positions (trap centered at 0) by damped
/// relaxation; strict descending order.
std::vector<double> equilibrium_chain(const ChainConfig& cfg);

struct ChainTransportResult {
  double cm_excitation = 0.0;   // [J], against the trap resting at d
  double rel_excitation = 0.0;  // [J], internal modes above the chain minimum
  ClassicalState final_state;
};

/// Integrates the N-ion Newton equations along the plan (quartic trap term
/// included when params.beta > 0; Compensated plans add the uniform force
/// m ddQ0 per ion). Starts from the equilibrium chain at rest.
ChainTransportResult transport_chain_classical(const ChainConfig& cfg,
                                               const TransportPlan& plan,
                                               std::size_t steps_per_period = 1000);

}  // namespace ionshuttle::nion
