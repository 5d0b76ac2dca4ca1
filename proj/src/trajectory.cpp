#include "ionshuttle/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "ionshuttle/csv.hpp"

namespace ionshuttle {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Unshifted: return "unshifted";
    case Variant::Shifted: return "shifted";
    case Variant::Compensated: return "compensated";
  }
  return "?";
}

TransportPlan::TransportPlan(const TrapParams& params, Variant variant,
                             double t_f, double design_omega)
    : params_(params),
      variant_(variant),
      t_f_(t_f),
      design_omega_(design_omega),
      trap_follows_qc_(variant == Variant::Compensated) {
  params_.validate();
  if (!(t_f > 0.0)) throw std::invalid_argument("TransportPlan: t_f must be > 0");
  if (!(design_omega > 0.0))
    throw std::invalid_argument("TransportPlan: design_omega must be > 0");
}

double TransportPlan::qc(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= t_f_) return params_.d;
  const double s = t / t_f_;
  const double s3 = s * s * s;
  return params_.d * s3 * (10.0 + s * (-15.0 + 6.0 * s));
}

double TransportPlan::dqc(double t) const {
  if (t <= 0.0 || t >= t_f_) return 0.0;
  const double s = t / t_f_;
  const double s2 = s * s;
  return params_.d * s2 * (30.0 + s * (-60.0 + 30.0 * s)) / t_f_;
}

double TransportPlan::ddqc(double t) const {
  if (t <= 0.0 || t >= t_f_) return 0.0;
  const double s = t / t_f_;
  return params_.d * s * (60.0 + s * (-180.0 + 120.0 * s)) / (t_f_ * t_f_);
}

double TransportPlan::d3qc(double t) const {
  if (t < 0.0 || t > t_f_) return 0.0;
  const double s = t / t_f_;
  return params_.d * (60.0 + s * (-360.0 + 360.0 * s)) / (t_f_ * t_f_ * t_f_);
}

double TransportPlan::q0(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= t_f_) return params_.d;
  if (trap_follows_qc_) return qc(t);
  return qc(t) + ddqc(t) / (design_omega_ * design_omega_);
}

double TransportPlan::dq0(double t) const {
  if (t < 0.0 || t > t_f_) return 0.0;
  if (trap_follows_qc_) return dqc(t);
  return dqc(t) + d3qc(t) / (design_omega_ * design_omega_);
}

double TransportPlan::ddq0(double t) const {
  if (t < 0.0 || t > t_f_) return 0.0;
  if (trap_follows_qc_) return ddqc(t);
  const double s = t / t_f_;
  const double d4qc =
      params_.d * (-360.0 + 720.0 * s) / (t_f_ * t_f_ * t_f_ * t_f_);
  return ddqc(t) + d4qc / (design_omega_ * design_omega_);
}

double TransportPlan::displacement(double t) const { return qc(t) - q0(t); }

std::vector<PlanSample> TransportPlan::sample(std::size_t n) const {
  if (n < 2) throw std::invalid_argument("TransportPlan::sample: n < 2");
  std::vector<PlanSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t_f_ * static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = {t, q0(t), dq0(t), ddq0(t), qc(t), dqc(t), ddqc(t)};
  }
  return out;
}

void TransportPlan::write_csv(std::ostream& os, std::size_t n) const {
  csv::Writer w(os);
  w.row({"t_s", "Q0_m", "dQ0_m_per_s", "ddQ0_m_per_s2", "Qc_m", "dQc_m_per_s",
         "ddQc_m_per_s2"});
  for (const auto& r : sample(n))
    w.row(r.t, r.q0, r.dq0, r.ddq0, r.qc, r.dqc, r.ddqc);
}

void TransportPlan::write_csv(const std::string& path, std::size_t n) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_csv(os, n);
}

TransportPlan design_polynomial(const TrapParams& params, double t_f,
                                double design_omega) {
  return TransportPlan(params, Variant::Unshifted, t_f, design_omega);
}

TransportPlan design_shifted(const TrapParams& params, double t_f) {
  const EquilibriumInfo eq = equilibrium_info(params);
  return TransportPlan(params, Variant::Shifted, t_f, eq.omega_tilde);
}

TransportPlan design_compensated(const TrapParams& params, double t_f) {
  return TransportPlan(params, Variant::Compensated, t_f, params.omega);
}

ForceProfile compensating_force(const TransportPlan& plan, std::size_t n) {
  ForceProfile fp;
  fp.t.resize(n);
  fp.force.resize(n);
  const double t_f = plan.t_f();
  const double M = plan.params().M;
  double amax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t_f * static_cast<double>(i) / static_cast<double>(n - 1);
    const double a = plan.ddq0(t);
    fp.t[i] = t;
    fp.force[i] = M * a;
    amax = std::max(amax, std::abs(a));
  }
  fp.max_abs_acceleration = amax;
  fp.acceleration_lower_bound = 2.0 * plan.params().d / (t_f * t_f);
  return fp;
}

}  // namespace ionshuttle
