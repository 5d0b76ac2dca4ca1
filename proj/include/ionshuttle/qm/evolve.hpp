#pragma once

#include <functional>
#include <memory>
#include <stdexcept>

#include "ionshuttle/qm/fft.hpp"
#include "ionshuttle/qm/wavefunction.hpp"

namespace ionshuttle::qm {

struct LeakageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NormDriftError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Potential1D = std::function<double(double)>;
using Potential2D = std::function<double(double, double)>;
using TimeFunction = std::function<double(double)>;

/// Strang split-operator stepper for
///   H(t) = p^2/2M + V(x + shift(t)) + M x acc(t),
/// kinetic part applied spectrally, potential phases with the
/// time-dependent coefficients evaluated at the step midpoint. A purely
/// time-dependent offset of V is removed before exponentiation (it only
/// contributes a global phase).
class SplitOperator1D {
 public:
  SplitOperator1D(const Grid1D& grid, Potential1D potential, double mass,
                  double hbar, double dt, TimeFunction shift = nullptr,
                  TimeFunction acc = nullptr);

  void set_state(const WaveFunction1D& psi);
  const WaveFunction1D& state() const { return psi_; }
  WaveFunction1D& state() { return psi_; }

  void step();
  void advance(std::size_t n_steps);

  double t() const { return psi_.t; }
  double dt() const { return dt_; }

  /// Leakage and unitarity guards, checked every `stride` steps during
  /// advance(); throws LeakageError / NormDriftError.
  void set_guards(double edge_threshold, double norm_tolerance,
                  std::size_t stride);

 private:
  void check_guards();

  Grid1D grid_;
  Potential1D potential_;
  TimeFunction shift_, acc_;
  double mass_, hbar_, dt_;
  WaveFunction1D psi_;
  Fft fft_;
  std::vector<cplx> kinetic_phase_;
  std::vector<double> xs_;
  double edge_threshold_ = 1e-6;
  double norm_tolerance_ = 1e-6;
  std::size_t guard_stride_ = 64;
  std::size_t steps_since_guard_ = 0;
  double norm0_ = -1.0;
};

/// 2D analogue; shift/acc act on the q axis only:
///   H(t) = (pq^2 + pr^2)/2M + V(q + shift(t), r) + M q acc(t).
class SplitOperator2D {
 public:
  SplitOperator2D(const Grid2D& grid, Potential2D potential, double mass,
                  double hbar, double dt, TimeFunction shift = nullptr,
                  TimeFunction acc = nullptr);

  void set_state(const WaveFunction2D& psi);
  const WaveFunction2D& state() const { return psi_; }
  WaveFunction2D& state() { return psi_; }

  void step();
  void advance(std::size_t n_steps);

  double t() const { return psi_.t; }
  double dt() const { return dt_; }

  void set_guards(double edge_threshold, double norm_tolerance,
                  std::size_t stride);

 private:
  void check_guards();

  Grid2D grid_;
  Potential2D potential_;
  TimeFunction shift_, acc_;
  double mass_, hbar_, dt_;
  WaveFunction2D psi_;
  Fft fft_;
  std::vector<cplx> kinetic_phase_;
  std::vector<double> qs_, rs_, static_r_part_;
  double edge_threshold_ = 1e-6;
  double norm_tolerance_ = 1e-6;
  std::size_t guard_stride_ = 64;
  std::size_t steps_since_guard_ = 0;
  double norm0_ = -1.0;
};

/// Normalized oscillator ground state centered at `center`.
WaveFunction1D gaussian_state(const Grid1D& grid, double mass, double omega,
                              double hbar, double center);

/// Multiplies by exp(i * momentum * x / hbar) (used for frame changes whose
/// reference velocity does not vanish at a boundary time).
void apply_momentum_kick(WaveFunction1D& psi, double momentum, double hbar);
void apply_momentum_kick_q(WaveFunction2D& psi, double momentum, double hbar);

/// <T> + <V> with the kinetic part evaluated spectrally.
double energy_1d(const WaveFunction1D& psi, const Potential1D& potential,
                 double mass, double hbar);
double energy_2d(const WaveFunction2D& psi, const Potential2D& potential,
                 double mass, double hbar);

/// Energy variance <H^2> - <H>^2 of a (normalized) state.
double energy_variance_1d(const WaveFunction1D& psi,
                          const Potential1D& potential, double mass,
                          double hbar);
double energy_variance_2d(const WaveFunction2D& psi,
                          const Potential2D& potential, double mass,
                          double hbar);

struct GroundState1D {
  WaveFunction1D psi;
  double energy = 0.0;
  double variance = 0.0;
  std::size_t iterations = 0;
};
struct GroundState2D {
  WaveFunction2D psi;
  double energy = 0.0;
  double variance = 0.0;
  std::size_t iterations = 0;
};

/// Imaginary-time split-operator relaxation with renormalization after each
/// step. Starts from dtau0 = 0.02/omega_ref and tightens the step until the
/// energy variance falls below (variance_tol * hbar * omega_ref)^2; the
/// finite-step Trotter bias would otherwise dominate the variance.
/// Throws on non-convergence within the iteration cap.
GroundState1D ground_state_imaginary_time(const Grid1D& grid,
                                          const Potential1D& potential,
                                          double mass, double hbar,
                                          double omega_ref,
                                          double variance_tol = 1e-6,
                                          std::size_t max_iterations = 200000);

GroundState2D ground_state_imaginary_time(const Grid2D& grid,
                                          const Potential2D& potential,
                                          double mass, double hbar,
                                          double omega_ref,
                                          double variance_tol = 1e-6,
                                          std::size_t max_iterations = 400000);

}  // namespace ionshuttle::qm
