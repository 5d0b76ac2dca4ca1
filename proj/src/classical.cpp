#include "ionshuttle/classical.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ionshuttle {

namespace {

// Fixed-step classic RK4 for small state vectors.
template <std::size_t N, typename Deriv>
std::array<double, N> rk4_step(const std::array<double, N>& y, double t,
                               double h, Deriv&& f) {
  std::array<double, N> k1 = f(t, y);
  std::array<double, N> yt;
  for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + 0.5 * h * k1[i];
  std::array<double, N> k2 = f(t + 0.5 * h, yt);
  for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + 0.5 * h * k2[i];
  std::array<double, N> k3 = f(t + 0.5 * h, yt);
  for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * k3[i];
  std::array<double, N> k4 = f(t + h, yt);
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace

CmTrajectory integrate_effective_cm(const TrapParams& params,
                                    const TransportPlan& plan,
                                    double omega_eff,
                                    std::size_t steps_per_period) {
  if (!(omega_eff > 0.0))
    throw std::invalid_argument("integrate_effective_cm: omega_eff must be > 0");
  const double t_f = plan.t_f();
  const double period = 2.0 * constants::pi / omega_eff;
  const double h_target = period / static_cast<double>(steps_per_period);
  const std::size_t n_steps =
      static_cast<std::size_t>(std::ceil(t_f / h_target));
  if (n_steps == 0 || n_steps > 500000000)
    throw std::runtime_error("integrate_effective_cm: step-size underflow");
  const double h = t_f / static_cast<double>(n_steps);

  const double w2 = omega_eff * omega_eff;
  auto rhs = [&](double t, const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], -w2 * (y[0] - plan.q0(t))};
  };

  CmTrajectory traj;
  traj.t.reserve(n_steps + 1);
  traj.q.reserve(n_steps + 1);
  traj.v.reserve(n_steps + 1);

  std::array<double, 2> y{0.0, 0.0};
  traj.t.push_back(0.0);
  traj.q.push_back(y[0]);
  traj.v.push_back(y[1]);
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double t = h * static_cast<double>(i);
    y = rk4_step(y, t, h, rhs);
    traj.t.push_back(t + h);
    traj.q.push_back(y[0]);
    traj.v.push_back(y[1]);
  }

  // Richardson check: redo the last portion at half step and compare.
  std::array<double, 2> yh{0.0, 0.0};
  const double h2 = 0.5 * h;
  for (std::size_t i = 0; i < 2 * n_steps; ++i)
    yh = rk4_step(yh, h2 * static_cast<double>(i), h2, rhs);
  traj.richardson_error = std::abs(y[0] - yh[0]);

  const double dq = y[0] - plan.q0(t_f);
  const double e = 0.5 * params.M * y[1] * y[1] +
                   0.5 * params.M * w2 * dq * dq;
  traj.final_excitation = {e, e / (params.hbar * omega_eff),
                           ExcitationMethod::Ode};
  return traj;
}

ExcitationResult excitation_energy_analytic(const TrapParams& params,
                                            double t_f, double omega,
                                            double omega_tilde) {
  if (!(t_f > 0.0))
    throw std::invalid_argument("excitation_energy_analytic: t_f must be > 0");
  const double x = t_f * omega_tilde;
  const double b = excitation_bracket(x);
  const double dw2 = omega * omega - omega_tilde * omega_tilde;
  const double num = 7200.0 * params.d * params.d * params.M * dw2 * dw2;
  const double den = std::pow(t_f, 10) * std::pow(omega, 4) *
                     std::pow(omega_tilde, 8);
  const double e = num / den * b * b;
  return {e, e / (params.hbar * omega_tilde), ExcitationMethod::Analytic};
}

double excitation_bracket(double x) {
  return 6.0 * x * std::cos(0.5 * x) + (x * x - 12.0) * std::sin(0.5 * x);
}

std::vector<double> excitation_zeros(double omega_eff, double t_min,
                                     double t_max) {
  if (!(omega_eff > 0.0) || !(t_min > 0.0) || !(t_max > t_min))
    throw std::invalid_argument("excitation_zeros: empty or invalid window");
  const double x_lo = t_min * omega_eff;
  const double x_hi = t_max * omega_eff;
  const double dx = 0.05;  // root spacing is ~2 pi, scan is safely finer
  std::vector<double> roots;
  double a = x_lo;
  double fa = excitation_bracket(a);
  while (a < x_hi) {
    double b = std::min(a + dx, x_hi);
    double fb = excitation_bracket(b);
    if (fa == 0.0) roots.push_back(a / omega_eff);
    if (fa * fb < 0.0) {
      double lo = a, hi = b;
      while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (excitation_bracket(lo) * excitation_bracket(mid) <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      roots.push_back(0.5 * (lo + hi) / omega_eff);
    }
    a = b;
    fa = fb;
  }
  return roots;
}

double critical_time(const TrapParams& params) {
  if (params.beta == 0.0) return std::numeric_limits<double>::infinity();
  return 16.5 * std::pow(params.beta, 0.25) * std::sqrt(params.d) /
         params.omega;
}

ClassicalState two_ion_equilibrium_state(const TrapParams& params) {
  const double r_e = equilibrium_distance(params);
  return {{r_e, -r_e}, {0.0, 0.0}, 0.0};
}

TwoIonResult integrate_two_ion_classical(const TrapParams& params,
                                         const TransportPlan& plan,
                                         const ClassicalState& initial,
                                         std::size_t steps_per_period,
                                         double t_end) {
  if (initial.positions.size() != 2 || initial.velocities.size() != 2)
    throw std::invalid_argument("integrate_two_ion_classical: need 2 ions");
  if (!(initial.positions[0] > initial.positions[1]))
    throw std::invalid_argument("integrate_two_ion_classical: require q1 > q2");

  const double r_e = equilibrium_distance(params);
  const double w_rel = relative_mode_frequency(params, r_e);
  const double w_cm = effective_frequency(params, r_e);
  const double period =
      2.0 * constants::pi / std::max(w_rel, w_cm);
  const double total = (t_end > 0.0) ? t_end : plan.t_f();
  const double h_target = period / static_cast<double>(steps_per_period);
  const std::size_t n_steps =
      static_cast<std::size_t>(std::ceil(total / h_target));
  if (n_steps == 0 || n_steps > 500000000)
    throw std::runtime_error("integrate_two_ion_classical: step-size underflow");
  const double h = total / static_cast<double>(n_steps);

  const double m = params.m;
  const double w2 = params.omega * params.omega;
  const bool compensated = plan.variant() == Variant::Compensated;

  auto rhs = [&](double t, const std::array<double, 4>& y) {
    const double q1 = y[0], q2 = y[1];
    if (!(q1 > q2))
      throw std::runtime_error(
          "integrate_two_ion_classical: ion crossing (q1 <= q2)");
    const double q0t = plan.q0(t);
    const double u1 = q1 - q0t, u2 = q2 - q0t;
    const double fc = params.Cc / ((q1 - q2) * (q1 - q2));
    double a1 = -w2 * (u1 + 2.0 * params.beta * u1 * u1 * u1) + fc / m;
    double a2 = -w2 * (u2 + 2.0 * params.beta * u2 * u2 * u2) - fc / m;
    if (compensated) {
      const double acc = plan.ddq0(t);
      a1 += acc;
      a2 += acc;
    }
    return std::array<double, 4>{y[2], y[3], a1, a2};
  };

  std::array<double, 4> y{initial.positions[0], initial.positions[1],
                          initial.velocities[0], initial.velocities[1]};
  for (std::size_t i = 0; i < n_steps; ++i)
    y = rk4_step(y, h * static_cast<double>(i), h, rhs);

  TwoIonResult res;
  res.final_state = {{y[0], y[1]}, {y[2], y[3]}, total};

  const double q0_end = plan.q0(total);
  const double Q = 0.5 * (y[0] + y[1]);
  const double Qdot = 0.5 * (y[2] + y[3]);
  const double r = 0.5 * (y[0] - y[1]);
  const double rdot = 0.5 * (y[2] - y[3]);
  const double uq = Q - q0_end;
  res.cm_energy = 0.5 * params.M * Qdot * Qdot +
                  0.5 * params.M * w2 *
                      (uq * uq + params.beta * uq * uq * uq * uq);
  res.rel_energy_excess = 0.5 * params.M * rdot * rdot +
                          relative_potential(params, r) -
                          relative_potential(params, r_e);
  res.total_energy = res.cm_energy + res.rel_energy_excess +
                     relative_potential(params, r_e) +
                     3.0 * params.M * w2 * params.beta * uq * uq * r * r;
  return res;
}

}  // namespace ionshuttle
