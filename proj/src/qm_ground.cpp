#include <cmath>

#include "ionshuttle/qm/evolve.hpp"

namespace ionshuttle::qm {

namespace {

// One relaxation stage at fixed dtau; converges on the norm-decay energy
// estimate. do_step applies the Trotterized e^{-H dtau}, renormalize returns
// the pre-normalization norm.
template <typename StepFn, typename NormFn>
std::size_t relax_stage(StepFn&& do_step, NormFn&& renormalize, double dtau,
                        double hbar, std::size_t max_iter, double rel_tol) {
  double prev = 0.0;
  bool have_prev = false;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    do_step();
    const double nrm = renormalize();
    const double e = -hbar * std::log(nrm) / dtau;
    if (have_prev &&
        std::abs(e - prev) <= rel_tol * std::max(std::abs(e), std::abs(prev)))
      return it;
    prev = e;
    have_prev = true;
  }
  return max_iter;
}

}  // namespace

GroundState1D ground_state_imaginary_time(const Grid1D& grid,
                                          const Potential1D& potential,
                                          double mass, double hbar,
                                          double omega_ref,
                                          double variance_tol,
                                          std::size_t max_iterations) {
  const std::size_t n = grid.n;
  std::vector<double> vgrid(n);
  std::size_t imin = 0;
  for (std::size_t i = 0; i < n; ++i) {
    vgrid[i] = potential(grid.x(i));
    if (vgrid[i] < vgrid[imin]) imin = i;
  }
  // Work with V - min(V): large static offsets (the Coulomb floor on the
  // r axis) would otherwise underflow the decay factors and wreck the
  // conditioning of the variance.
  const double vmin = vgrid[imin];
  for (auto& v : vgrid) v -= vmin;
  Potential1D shifted = [&potential, vmin](double x) {
    return potential(x) - vmin;
  };

  GroundState1D gs;
  gs.psi = gaussian_state(grid, mass, omega_ref, hbar, grid.x(imin));

  const double target = variance_tol * hbar * omega_ref;
  double dtau = 0.02 / omega_ref;
  Fft fft(n);

  for (int stage = 0; stage < 8; ++stage) {
    std::vector<double> kin(n), vhalf(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double k = grid.k(i);
      kin[i] = std::exp(-hbar * k * k / (2.0 * mass) * dtau);
      vhalf[i] = std::exp(-vgrid[i] * dtau / (2.0 * hbar));
    }
    auto do_step = [&]() {
      auto& a = gs.psi.amp;
      for (std::size_t i = 0; i < n; ++i) a[i] *= vhalf[i];
      fft.forward(a.data());
      for (std::size_t i = 0; i < n; ++i) a[i] *= kin[i];
      fft.inverse(a.data());
      for (std::size_t i = 0; i < n; ++i) a[i] *= vhalf[i];
    };
    auto renorm = [&]() {
      const double nrm = gs.psi.norm();
      for (auto& a : gs.psi.amp) a /= nrm;
      return nrm;
    };
    gs.iterations +=
        relax_stage(do_step, renorm, dtau, hbar, max_iterations / 8, 1e-13);
    gs.variance = energy_variance_1d(gs.psi, shifted, mass, hbar);
    if (gs.variance < target * target) break;
    dtau *= 0.25;
  }
  gs.energy = energy_1d(gs.psi, shifted, mass, hbar) + vmin;
  if (!(gs.variance < target * target))
    throw std::runtime_error(
        "ground_state_imaginary_time: variance target not reached");
  return gs;
}

GroundState2D ground_state_imaginary_time(const Grid2D& grid,
                                          const Potential2D& potential,
                                          double mass, double hbar,
                                          double omega_ref,
                                          double variance_tol,
                                          std::size_t max_iterations) {
  const std::size_t nq = grid.q.n, nr = grid.r.n;
  std::vector<double> vgrid(nq * nr);
  std::size_t iq0 = 0, ir0 = 0;
  double vmin = potential(grid.q.x(0), grid.r.x(0));
  for (std::size_t iq = 0; iq < nq; ++iq)
    for (std::size_t ir = 0; ir < nr; ++ir) {
      const double v = potential(grid.q.x(iq), grid.r.x(ir));
      vgrid[iq * nr + ir] = v;
      if (v < vmin) {
        vmin = v;
        iq0 = iq;
        ir0 = ir;
      }
    }
  for (auto& v : vgrid) v -= vmin;
  Potential2D shifted = [&potential, vmin](double q, double r) {
    return potential(q, r) - vmin;
  };

  GroundState2D gs;
  gs.psi = WaveFunction2D(grid);
  const double aq = mass * omega_ref / (2.0 * hbar);
  for (std::size_t iq = 0; iq < nq; ++iq) {
    const double uq = grid.q.x(iq) - grid.q.x(iq0);
    for (std::size_t ir = 0; ir < nr; ++ir) {
      const double ur = grid.r.x(ir) - grid.r.x(ir0);
      gs.psi.at(iq, ir) = std::exp(-aq * (uq * uq + ur * ur));
    }
  }
  gs.psi.normalize();

  const double target = variance_tol * hbar * omega_ref;
  double dtau = 0.02 / omega_ref;
  Fft fft(nq, nr);
  const std::size_t total = nq * nr;

  for (int stage = 0; stage < 8; ++stage) {
    std::vector<double> kin(total), vhalf(total);
    for (std::size_t iq = 0; iq < nq; ++iq) {
      const double kq = grid.q.k(iq);
      for (std::size_t ir = 0; ir < nr; ++ir) {
        const double kr = grid.r.k(ir);
        kin[iq * nr + ir] =
            std::exp(-hbar * (kq * kq + kr * kr) / (2.0 * mass) * dtau);
        vhalf[iq * nr + ir] =
            std::exp(-vgrid[iq * nr + ir] * dtau / (2.0 * hbar));
      }
    }
    auto do_step = [&]() {
      auto& a = gs.psi.amp;
      for (std::size_t i = 0; i < total; ++i) a[i] *= vhalf[i];
      fft.forward(a.data());
      for (std::size_t i = 0; i < total; ++i) a[i] *= kin[i];
      fft.inverse(a.data());
      for (std::size_t i = 0; i < total; ++i) a[i] *= vhalf[i];
    };
    auto renorm = [&]() {
      const double nrm = gs.psi.norm();
      for (auto& a : gs.psi.amp) a /= nrm;
      return nrm;
    };
    gs.iterations +=
        relax_stage(do_step, renorm, dtau, hbar, max_iterations / 8, 1e-13);
    gs.variance = energy_variance_2d(gs.psi, shifted, mass, hbar);
    if (gs.variance < target * target) break;
    dtau *= 0.25;
  }
  gs.energy = energy_2d(gs.psi, shifted, mass, hbar) + vmin;
  if (!(gs.variance < target * target))
    throw std::runtime_error(
        "ground_state_imaginary_time 2d: variance target not reached");
  return gs;
}

}  // namespace ionshuttle::qm
