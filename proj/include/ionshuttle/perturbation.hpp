#pragma once

#include <array>
#include <complex>
#include <cstddef>

#include "ionshuttle/trajectory.hpp"
#include "ionshuttle/trap.hpp"

namespace ionshuttle {

/// Which part of the frozen-mode perturbation
///   H_1 = 1/2 M w^2 [6 r_e^2 (Q-Q0)^2 + (Q-Q0)^4]
/// is active. The quadratic piece couples |j-n| <= 2, the quartic piece
/// |j-n| <= 4.
enum class Selector { Full, QuadraticOnly, QuarticOnly };

const char* selector_name(Selector s);

/// <j|(x + delta)^k|n> for oscillator eigenstates with length scale
/// lambda = sqrt(hbar/(2 M w)); exact ladder-operator evaluation.
double displaced_power_matrix_element(int k, int j, int n, double delta,
                                      double lambda);

/// <Psi_j(t)|H_1(t)|Psi_n(t)> between transport modes of the plan's design
/// frequency, including the e^{i (E_j-E_n) t / hbar} mode phases. The
/// Q_c-dependent phase factors are common to bra and ket and cancel.
std::complex<double> matrix_element_h1(int j, int n, double t,
                                       const TransportPlan& plan, double r_e,
                                       Selector sel);

/// First-order transition amplitudes f_{j,n} = (-i beta/hbar) Int_0^{t_f}
/// <Psi_j|H_1|Psi_n> dt for |j-n| <= 4, j >= 0.
///
/// For a Shifted plan the quadratic piece of the perturbation is what is
/// left after the design absorbs the frequency shift, i.e. it vanishes;
/// the quartic piece is unchanged.
struct AmplitudeTable {
  int n = 0;
  double t_f = 0.0;
  Selector selector = Selector::Full;
  // amplitude for j = n + offset, offset in [-4, 4]; index = offset + 4
  std::array<std::complex<double>, 9> band{};

  std::complex<double> get(int j) const;

  /// Sum_{j != n} |f_{j,n}|^2 over the stored band.
  double sum_squared() const;
};

AmplitudeTable first_order_amplitudes(int n, double t_f,
                                      const TransportPlan& plan, double r_e,
                                      Selector sel,
                                      std::size_t panels_per_period = 2000);

/// Closed form of the dominant one-quantum amplitude for the Unshifted
/// polynomial design:
///   f_{n+1,n} = -360 d beta r_e^2 sqrt(2(n+1) M / hbar) e^{+i x/2}
///               [6 x cos(x/2) + (x^2-12) sin(x/2)] / (t_f^5 w^{9/2})
/// with x = w t_f, and the n-1 amplitude the conjugate-phase partner with
/// sqrt(2n) in place of sqrt(2(n+1)). |f| scales as sqrt(M) and the upward
/// amplitude as sqrt(n+1).
std::complex<double> amplitude_one_quantum_closed_form(int n, double t_f,
                                                       const TrapParams& p,
                                                       double r_e, int sign);

struct FidelityEstimate {
  double fidelity = 0.0;      // sqrt(1 - sum), valid only when
  double sum_squared = 0.0;   // sum_{j != n} |f^(1)_{j,n}|^2
  bool perturbative_valid = true;  // false when sum_squared > 1
};

/// Second-order fidelity F = sqrt(1 - Sum_{j!=n} |f_{j,n}|^2). When the sum
/// exceeds one the estimate is flagged as a perturbative breakdown and the
/// raw sum is still reported.
FidelityEstimate fidelity_second_order(int n, double t_f,
                                       const TransportPlan& plan, double r_e,
                                       Selector sel,
                                       std::size_t panels_per_period = 2000);

}  // namespace ionshuttle
