#include "ionshuttle/perturbation.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ionshuttle/classical.hpp"

namespace ionshuttle {

const char* selector_name(Selector s) {
  switch (s) {
    case Selector::Full: return "full";
    case Selector::QuadraticOnly: return "quadratic";
    case Selector::QuarticOnly: return "quartic";
  }
  return "?";
}

namespace {

// Applies (x + delta) k times to the basis vector |n> in the number basis;
// x = lambda (a + a^dag). Returns coefficients for levels 0..n+k.
std::vector<double> apply_displaced_power(int k, int n, double delta,
                                          double lambda) {
  std::vector<double> vec(static_cast<std::size_t>(n + k + 1), 0.0);
  vec[static_cast<std::size_t>(n)] = 1.0;
  std::vector<double> out(vec.size(), 0.0);
  for (int pass = 0; pass < k; ++pass) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t m = 0; m < vec.size(); ++m) {
      const double c = vec[m];
      if (c == 0.0) continue;
      out[m] += delta * c;
      if (m + 1 < vec.size())
        out[m + 1] += lambda * std::sqrt(static_cast<double>(m + 1)) * c;
      if (m > 0) out[m - 1] += lambda * std::sqrt(static_cast<double>(m)) * c;
    }
    std::swap(vec, out);
  }
  return vec;
}

struct PerturbationCoefficients {
  double c2 = 0.0;  // multiplies (Q-Q0)^2, includes beta
  double c4 = 0.0;  // multiplies (Q-Q0)^4, includes beta
};

// beta * H_1 relative to the plan's design oscillator:
//   c2 = 1/2 M (omega_tilde^2 - design^2), c4 = 1/2 M omega^2 beta.
// For the Unshifted design this is the paper's beta*H_1; for the Shifted
// design the quadratic piece is absorbed and only the quartic remains.
PerturbationCoefficients plan_coefficients(const TransportPlan& plan,
                                           double r_e, Selector sel) {
  const TrapParams& p = plan.params();
  const double w2 = p.omega * p.omega;
  const double wd2 = plan.design_omega() * plan.design_omega();
  PerturbationCoefficients c;
  if (sel != Selector::QuarticOnly) {
    // omega_tilde^2 - design^2 = 6 beta r_e^2 w^2 + (w^2 - design^2)
    c.c2 = 0.5 * p.M * (6.0 * p.beta * r_e * r_e * w2 + (w2 - wd2));
  }
  if (sel != Selector::QuadraticOnly) c.c4 = 0.5 * p.M * w2 * p.beta;
  return c;
}

}  // namespace

double displaced_power_matrix_element(int k, int j, int n, double delta,
                                      double lambda) {
  if (k < 0 || j < 0 || n < 0)
    throw std::invalid_argument("displaced_power_matrix_element: bad indices");
  const auto vec = apply_displaced_power(k, n, delta, lambda);
  if (static_cast<std::size_t>(j) >= vec.size()) return 0.0;
  return vec[static_cast<std::size_t>(j)];
}

std::complex<double> matrix_element_h1(int j, int n, double t,
                                       const TransportPlan& plan, double r_e,
                                       Selector sel) {
  if (j < 0 || n < 0)
    throw std::invalid_argument("matrix_element_h1: bad indices");
  const TrapParams& p = plan.params();
  const double wd = plan.design_omega();
  const double lambda = std::sqrt(p.hbar / (2.0 * p.M * wd));
  const double delta = plan.displacement(t);
  const double w2 = p.omega * p.omega;
  double me = 0.0;
  if (sel != Selector::QuarticOnly)
    me += 3.0 * p.M * w2 * r_e * r_e *
          displaced_power_matrix_element(2, j, n, delta, lambda);
  if (sel != Selector::QuadraticOnly)
    me += 0.5 * p.M * w2 * displaced_power_matrix_element(4, j, n, delta, lambda);
  const double phase = static_cast<double>(j - n) * wd * t;
  return me * std::complex<double>(std::cos(phase), std::sin(phase));
}

std::complex<double> AmplitudeTable::get(int j) const {
  const int off = j - n;
  if (off < -4 || off > 4 || j < 0) return {0.0, 0.0};
  return band[static_cast<std::size_t>(off + 4)];
}

double AmplitudeTable::sum_squared() const {
  double s = 0.0;
  for (int off = -4; off <= 4; ++off) {
    if (off == 0) continue;
    s += std::norm(band[static_cast<std::size_t>(off + 4)]);
  }
  return s;
}

AmplitudeTable first_order_amplitudes(int n, double t_f,
                                      const TransportPlan& plan, double r_e,
                                      Selector sel,
                                      std::size_t panels_per_period) {
  if (n < 0) throw std::invalid_argument("first_order_amplitudes: n < 0");
  if (!(t_f > 0.0))
    throw std::invalid_argument("first_order_amplitudes: t_f must be > 0");
  const TrapParams& p = plan.params();
  const double wd = plan.design_omega();
  const double lambda = std::sqrt(p.hbar / (2.0 * p.M * wd));
  const auto coeff = plan_coefficients(plan, r_e, sel);

  const double period = 2.0 * constants::pi / wd;
  const std::size_t panels = std::max<std::size_t>(
      64, static_cast<std::size_t>(
              std::ceil(t_f / period * static_cast<double>(panels_per_period))));
  const std::size_t n_nodes = 2 * panels + 1;  // composite Simpson
  const double h = t_f / static_cast<double>(n_nodes - 1);

  const int j_lo = std::max(0, n - 4);
  const int j_hi = n + 4;
  std::array<std::complex<double>, 9> acc{};

  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double t = h * static_cast<double>(i);
    const double delta = plan.displacement(t);
    const auto v2 = apply_displaced_power(2, n, delta, lambda);
    const auto v4 = apply_displaced_power(4, n, delta, lambda);
    double weight = (i == 0 || i + 1 == n_nodes) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    weight *= h / 3.0;
    for (int j = j_lo; j <= j_hi; ++j) {
      double me = 0.0;
      if (static_cast<std::size_t>(j) < v2.size())
        me += coeff.c2 * v2[static_cast<std::size_t>(j)];
      if (static_cast<std::size_t>(j) < v4.size())
        me += coeff.c4 * v4[static_cast<std::size_t>(j)];
      if (me == 0.0) continue;
      const double phase = static_cast<double>(j - n) * wd * t;
      acc[static_cast<std::size_t>(j - n + 4)] +=
          weight * me * std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }

  AmplitudeTable table;
  table.n = n;
  table.t_f = t_f;
  table.selector = sel;
  const std::complex<double> pref(0.0, -1.0 / p.hbar);
  for (auto& a : acc) a *= pref;
  table.band = acc;
  table.band[4] = {0.0, 0.0};  // diagonal term not part of the table
  return table;
}

std::complex<double> amplitude_one_quantum_closed_form(int n, double t_f,
                                                       const TrapParams& p,
                                                       double r_e, int sign) {
  if (n < 0)
    throw std::invalid_argument("amplitude_one_quantum_closed_form: n < 0");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("amplitude_one_quantum_closed_form: sign");
  const double w = p.omega;
  const double x = w * t_f;
  const double bracket = excitation_bracket(x);
  const double scale = (sign > 0) ? std::sqrt(2.0 * (n + 1) * p.M / p.hbar)
                                  : std::sqrt(2.0 * n * p.M / p.hbar);
  const double mag = 360.0 * p.d * p.beta * r_e * r_e * scale * bracket /
                     (std::pow(t_f, 5) * std::pow(w, 4.5));
  const double half = 0.5 * x;
  if (sign > 0)
    return -mag * std::complex<double>(std::cos(half), std::sin(half));
  return mag * std::complex<double>(std::cos(half), -std::sin(half));
}

FidelityEstimate fidelity_second_order(int n, double t_f,
                                       const TransportPlan& plan, double r_e,
                                       Selector sel,
                                       std::size_t panels_per_period) {
  const auto table =
      first_order_amplitudes(n, t_f, plan, r_e, sel, panels_per_period);
  FidelityEstimate est;
  est.sum_squared = table.sum_squared();
  if (est.sum_squared > 1.0) {
    est.perturbative_valid = false;
    est.fidelity = 0.0;
    return est;
  }
  est.fidelity = std::sqrt(1.0 - est.sum_squared);
  return est;
}

}  // namespace ionshuttle
