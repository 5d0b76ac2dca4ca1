#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ionshuttle/trap.hpp"

namespace ionshuttle {

enum class Variant { Unshifted, Shifted, Compensated };

const char* variant_name(Variant v);

struct PlanSample {
  double t, q0, dq0, ddq0, qc, dqc, ddqc;
};

/// Invariant-engineered trap trajectory.
///
/// Q_c(s) = d (10 s^3 - 15 s^4 + 6 s^5), s = t/t_f, and for the
/// Unshifted/Shifted variants Q_0 = Q_c + Q_c''/w^2 with w the design
/// frequency, so Q_c'' + w^2 (Q_c - Q_0) = 0 holds identically.
/// The Compensated variant drives the trap along Q_0 = Q_c itself; the
/// inertial force is cancelled by the applied linear potential instead, and
/// Q_0'' then vanishes at both endpoints.
///
/// Outside [0, t_f] the plan freezes at its endpoint values. All evaluation
/// is analytic; sample() exists for export only.
class TransportPlan {
 public:
  TransportPlan(const TrapParams& params, Variant variant, double t_f,
                double design_omega);

  const TrapParams& params() const { return params_; }
  Variant variant() const { return variant_; }
  double t_f() const { return t_f_; }
  double design_omega() const { return design_omega_; }

  double qc(double t) const;
  double dqc(double t) const;
  double ddqc(double t) const;
  double d3qc(double t) const;

  double q0(double t) const;
  double dq0(double t) const;
  double ddq0(double t) const;

  /// Q_c(t) - Q_0(t); the argument shift of the perturbation H_1.
  double displacement(double t) const;

  std::vector<PlanSample> sample(std::size_t n = 10000) const;
  void write_csv(std::ostream& os, std::size_t n = 10000) const;
  void write_csv(const std::string& path, std::size_t n = 10000) const;

 private:
  TrapParams params_;
  Variant variant_;
  double t_f_;
  double design_omega_;
  bool trap_follows_qc_;  // Compensated: Q0 == Qc
};

/// Fifth-order polynomial design for a given design frequency.
TransportPlan design_polynomial(const TrapParams& params, double t_f,
                                double design_omega);

/// Same design with the frequency shifted to omega_tilde from the
/// equilibrium solve; suppresses the quadratic perturbation.
TransportPlan design_shifted(const TrapParams& params, double t_f);

/// Trap driven along Q_c directly; pair with the compensating force.
TransportPlan design_compensated(const TrapParams& params, double t_f);

struct ForceProfile {
  std::vector<double> t;      // [s]
  std::vector<double> force;  // M * Q0'' [N]
  double max_abs_acceleration = 0.0;   // max |Q0''| [m/s^2]
  double acceleration_lower_bound = 0.0;  // 2 d / t_f^2
};

/// Lab-frame compensating force profile F(t) = M Q0''(t).
ForceProfile compensating_force(const TransportPlan& plan,
                                std::size_t n = 10000);

}  // namespace ionshuttle
