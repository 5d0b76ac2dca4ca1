#include "ionshuttle/qm/evolve.hpp"

#include <algorithm>
#include <cmath>

namespace ionshuttle::qm {

namespace {

inline cplx phase(double phi) { return {std::cos(phi), std::sin(phi)}; }

}  // namespace

SplitOperator1D::SplitOperator1D(const Grid1D& grid, Potential1D potential,
                                 double mass, double hbar, double dt,
                                 TimeFunction shift, TimeFunction acc)
    : grid_(grid),
      potential_(std::move(potential)),
      shift_(std::move(shift)),
      acc_(std::move(acc)),
      mass_(mass),
      hbar_(hbar),
      dt_(dt),
      psi_(grid),
      fft_(grid.n) {
  if (!(dt > 0.0)) throw std::invalid_argument("SplitOperator1D: dt <= 0");
  kinetic_phase_.resize(grid.n);
  xs_.resize(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double k = grid.k(i);
    kinetic_phase_[i] = phase(-hbar * k * k / (2.0 * mass) * dt);
    xs_[i] = grid.x(i);
  }
}

void SplitOperator1D::set_state(const WaveFunction1D& psi) {
  if (!(psi.grid == grid_))
    throw std::invalid_argument("SplitOperator1D: state grid mismatch");
  psi_ = psi;
  norm0_ = psi_.norm();
  steps_since_guard_ = 0;
}

void SplitOperator1D::set_guards(double edge_threshold, double norm_tolerance,
                                 std::size_t stride) {
  edge_threshold_ = edge_threshold;
  norm_tolerance_ = norm_tolerance;
  guard_stride_ = std::max<std::size_t>(1, stride);
}

void SplitOperator1D::check_guards() {
  if (psi_.edge_fraction() > edge_threshold_)
    throw LeakageError("split-operator: wavepacket reached the box edge");
  if (norm0_ > 0.0 && std::abs(psi_.norm() - norm0_) > norm_tolerance_)
    throw NormDriftError("split-operator: norm drift exceeded tolerance");
}

void SplitOperator1D::step() {
  const double tm = psi_.t + 0.5 * dt_;
  const double sh = shift_ ? shift_(tm) : 0.0;
  const double ac = acc_ ? acc_(tm) : 0.0;
  const double vref = potential_(sh);  // global-phase offset, conditioning
  const double c = -0.5 * dt_ / hbar_;
  const std::size_t n = grid_.n;

  std::vector<cplx> half(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = potential_(xs_[i] + sh) - vref + mass_ * xs_[i] * ac;
    half[i] = phase(c * v);
  }

  for (std::size_t i = 0; i < n; ++i) psi_.amp[i] *= half[i];
  fft_.forward(psi_.amp.data());
  for (std::size_t i = 0; i < n; ++i) psi_.amp[i] *= kinetic_phase_[i];
  fft_.inverse(psi_.amp.data());
  for (std::size_t i = 0; i < n; ++i) psi_.amp[i] *= half[i];
  psi_.t += dt_;
}

void SplitOperator1D::advance(std::size_t n_steps) {
  for (std::size_t i = 0; i < n_steps; ++i) {
    step();
    if (++steps_since_guard_ >= guard_stride_) {
      steps_since_guard_ = 0;
      check_guards();
    }
  }
  check_guards();
}

SplitOperator2D::SplitOperator2D(const Grid2D& grid, Potential2D potential,
                                 double mass, double hbar, double dt,
                                 TimeFunction shift, TimeFunction acc)
    : grid_(grid),
      potential_(std::move(potential)),
      shift_(std::move(shift)),
      acc_(std::move(acc)),
      mass_(mass),
      hbar_(hbar),
      dt_(dt),
      psi_(grid),
      fft_(grid.q.n, grid.r.n) {
  if (!(dt > 0.0)) throw std::invalid_argument("SplitOperator2D: dt <= 0");
  const std::size_t nq = grid.q.n, nr = grid.r.n;
  kinetic_phase_.resize(nq * nr);
  for (std::size_t iq = 0; iq < nq; ++iq) {
    const double kq = grid.q.k(iq);
    for (std::size_t ir = 0; ir < nr; ++ir) {
      const double kr = grid.r.k(ir);
      kinetic_phase_[iq * nr + ir] =
          phase(-hbar * (kq * kq + kr * kr) / (2.0 * mass) * dt);
    }
  }
  qs_.resize(nq);
  for (std::size_t iq = 0; iq < nq; ++iq) qs_[iq] = grid.q.x(iq);
  rs_.resize(nr);
  for (std::size_t ir = 0; ir < nr; ++ir) rs_[ir] = grid.r.x(ir);
}

void SplitOperator2D::set_state(const WaveFunction2D& psi) {
  if (!(psi.grid == grid_))
    throw std::invalid_argument("SplitOperator2D: state grid mismatch");
  psi_ = psi;
  norm0_ = psi_.norm();
  steps_since_guard_ = 0;
}

void SplitOperator2D::set_guards(double edge_threshold, double norm_tolerance,
                                 std::size_t stride) {
  edge_threshold_ = edge_threshold;
  norm_tolerance_ = norm_tolerance;
  guard_stride_ = std::max<std::size_t>(1, stride);
}

void SplitOperator2D::check_guards() {
  if (psi_.edge_fraction() > edge_threshold_)
    throw LeakageError("split-operator 2d: wavepacket reached the box edge");
  if (norm0_ > 0.0 && std::abs(psi_.norm() - norm0_) > norm_tolerance_)
    throw NormDriftError("split-operator 2d: norm drift exceeded tolerance");
}

void SplitOperator2D::step() {
  const double tm = psi_.t + 0.5 * dt_;
  const double sh = shift_ ? shift_(tm) : 0.0;
  const double ac = acc_ ? acc_(tm) : 0.0;
  const std::size_t nq = grid_.q.n, nr = grid_.r.n;
  const double c = -0.5 * dt_ / hbar_;
  const double vref = potential_(sh, rs_[nr / 2]);

  std::vector<cplx> half(nq * nr);
  for (std::size_t iq = 0; iq < nq; ++iq) {
    const double q = qs_[iq] + sh;
    const double lin = mass_ * qs_[iq] * ac;
    for (std::size_t ir = 0; ir < nr; ++ir)
      half[iq * nr + ir] = phase(c * (potential_(q, rs_[ir]) - vref + lin));
  }

  const std::size_t total = nq * nr;
  for (std::size_t i = 0; i < total; ++i) psi_.amp[i] *= half[i];
  fft_.forward(psi_.amp.data());
  for (std::size_t i = 0; i < total; ++i) psi_.amp[i] *= kinetic_phase_[i];
  fft_.inverse(psi_.amp.data());
  for (std::size_t i = 0; i < total; ++i) psi_.amp[i] *= half[i];
  psi_.t += dt_;
}

void SplitOperator2D::advance(std::size_t n_steps) {
  for (std::size_t i = 0; i < n_steps; ++i) {
    step();
    if (++steps_since_guard_ >= guard_stride_) {
      steps_since_guard_ = 0;
      check_guards();
    }
  }
  check_guards();
}

WaveFunction1D gaussian_state(const Grid1D& grid, double mass, double omega,
                              double hbar, double center) {
  WaveFunction1D psi(grid);
  const double a = mass * omega / (2.0 * hbar);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double u = grid.x(i) - center;
    psi.amp[i] = std::exp(-a * u * u);
  }
  psi.normalize();
  return psi;
}

void apply_momentum_kick(WaveFunction1D& psi, double momentum, double hbar) {
  if (momentum == 0.0) return;
  const double c = momentum / hbar;
  for (std::size_t i = 0; i < psi.grid.n; ++i)
    psi.amp[i] *= phase(c * psi.grid.x(i));
}

void apply_momentum_kick_q(WaveFunction2D& psi, double momentum, double hbar) {
  if (momentum == 0.0) return;
  const double c = momentum / hbar;
  const std::size_t nr = psi.grid.r.n;
  for (std::size_t iq = 0; iq < psi.grid.q.n; ++iq) {
    const cplx f = phase(c * psi.grid.q.x(iq));
    for (std::size_t ir = 0; ir < nr; ++ir) psi.at(iq, ir) *= f;
  }
}

namespace {

// H psi with spectral kinetic term; shared by energy and variance.
std::vector<cplx> apply_h_1d(const WaveFunction1D& psi,
                             const Potential1D& potential, double mass,
                             double hbar) {
  const std::size_t n = psi.grid.n;
  std::vector<cplx> hpsi = psi.amp;
  Fft fft(n);
  fft.forward(hpsi.data());
  for (std::size_t i = 0; i < n; ++i) {
    const double k = psi.grid.k(i);
    hpsi[i] *= hbar * hbar * k * k / (2.0 * mass);
  }
  fft.inverse(hpsi.data());
  for (std::size_t i = 0; i < n; ++i)
    hpsi[i] += potential(psi.grid.x(i)) * psi.amp[i];
  return hpsi;
}

std::vector<cplx> apply_h_2d(const WaveFunction2D& psi,
                             const Potential2D& potential, double mass,
                             double hbar) {
  const std::size_t nq = psi.grid.q.n, nr = psi.grid.r.n;
  std::vector<cplx> hpsi = psi.amp;
  Fft fft(nq, nr);
  fft.forward(hpsi.data());
  for (std::size_t iq = 0; iq < nq; ++iq) {
    const double kq = psi.grid.q.k(iq);
    for (std::size_t ir = 0; ir < nr; ++ir) {
      const double kr = psi.grid.r.k(ir);
      hpsi[iq * nr + ir] *=
          hbar * hbar * (kq * kq + kr * kr) / (2.0 * mass);
    }
  }
  fft.inverse(hpsi.data());
  for (std::size_t iq = 0; iq < nq; ++iq)
    for (std::size_t ir = 0; ir < nr; ++ir)
      hpsi[iq * nr + ir] +=
          potential(psi.grid.q.x(iq), psi.grid.r.x(ir)) * psi.at(iq, ir);
  return hpsi;
}

}  // namespace

double energy_1d(const WaveFunction1D& psi, const Potential1D& potential,
                 double mass, double hbar) {
  const auto hpsi = apply_h_1d(psi, potential, mass, hbar);
  cplx e{0.0, 0.0};
  double nrm = 0.0;
  for (std::size_t i = 0; i < psi.amp.size(); ++i) {
    e += std::conj(psi.amp[i]) * hpsi[i];
    nrm += std::norm(psi.amp[i]);
  }
  return e.real() / nrm;
}

double energy_2d(const WaveFunction2D& psi, const Potential2D& potential,
                 double mass, double hbar) {
  const auto hpsi = apply_h_2d(psi, potential, mass, hbar);
  cplx e{0.0, 0.0};
  double nrm = 0.0;
  for (std::size_t i = 0; i < psi.amp.size(); ++i) {
    e += std::conj(psi.amp[i]) * hpsi[i];
    nrm += std::norm(psi.amp[i]);
  }
  return e.real() / nrm;
}

double energy_variance_1d(const WaveFunction1D& psi,
                          const Potential1D& potential, double mass,
                          double hbar) {
  const auto hpsi = apply_h_1d(psi, potential, mass, hbar);
  cplx e{0.0, 0.0};
  double h2 = 0.0, nrm = 0.0;
  for (std::size_t i = 0; i < psi.amp.size(); ++i) {
    e += std::conj(psi.amp[i]) * hpsi[i];
    h2 += std::norm(hpsi[i]);
    nrm += std::norm(psi.amp[i]);
  }
  const double mean = e.real() / nrm;
  return h2 / nrm - mean * mean;
}

double energy_variance_2d(const WaveFunction2D& psi,
                          const Potential2D& potential, double mass,
                          double hbar) {
  const auto hpsi = apply_h_2d(psi, potential, mass, hbar);
  cplx e{0.0, 0.0};
  double h2 = 0.0, nrm = 0.0;
  for (std::size_t i = 0; i < psi.amp.size(); ++i) {
    e += std::conj(psi.amp[i]) * hpsi[i];
    h2 += std::norm(hpsi[i]);
    nrm += std::norm(psi.amp[i]);
  }
  const double mean = e.real() / nrm;
  return h2 / nrm - mean * mean;
}

}  // namespace ionshuttle::qm
