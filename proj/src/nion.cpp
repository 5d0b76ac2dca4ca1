#include "ionshuttle/nion.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ionshuttle::nion {

ChainConfig ChainConfig::make(std::size_t n, double single_mass, double omega,
                              double beta, double distance) {
  if (n < 2) throw std::invalid_argument("ChainConfig: need N >= 2");
  ChainConfig cfg;
  cfg.n_ions = n;
  cfg.params.m = single_mass;
  cfg.params.M = static_cast<double>(n) * single_mass;
  cfg.params.omega = omega;
  cfg.params.beta = beta;
  cfg.params.d = distance;
  cfg.params.validate();
  return cfg;
}

namespace {

void require_ordered(const std::vector<double>& q) {
  for (std::size_t i = 0; i + 1 < q.size(); ++i)
    if (!(q[i] > q[i + 1]))
      throw std::invalid_argument("ion ordering violated (q_i <= q_{i+1})");
}

}  // namespace

CmRelative to_cm_relative(const ChainConfig& cfg,
                          const std::vector<double>& positions,
                          const std::vector<double>& momenta) {
  const std::size_t n = cfg.n_ions;
  if (positions.size() != n || momenta.size() != n)
    throw std::invalid_argument("to_cm_relative: size mismatch");
  require_ordered(positions);
  CmRelative cr;
  for (std::size_t i = 0; i < n; ++i) {
    cr.Q += positions[i];
    cr.P += momenta[i];
  }
  cr.Q /= static_cast<double>(n);
  cr.r.resize(n - 1);
  cr.p.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cr.r[i] = (positions[i] - positions[i + 1]) / static_cast<double>(n);
    cr.p[i] = momenta[i] - momenta[i + 1];
  }
  return cr;
}

void from_cm_relative(const ChainConfig& cfg, const CmRelative& cr,
                      std::vector<double>& positions,
                      std::vector<double>& momenta) {
  const std::size_t n = cfg.n_ions;
  if (cr.r.size() != n - 1 || cr.p.size() != n - 1)
    throw std::invalid_argument("from_cm_relative: size mismatch");
  positions.assign(n, 0.0);
  momenta.assign(n, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    double qsum = 0.0, psum = 0.0;
    for (std::size_t j = 1; j <= n - i; ++j) {
      qsum += static_cast<double>(j) * cr.r[n - j - 1];
      psum += static_cast<double>(j) * cr.p[n - j - 1];
    }
    for (std::size_t k = 1; k + 1 <= i; ++k) {
      qsum -= static_cast<double>(k) * cr.r[k - 1];
      psum -= static_cast<double>(k) * cr.p[k - 1];
    }
    positions[i - 1] = cr.Q + qsum;
    momenta[i - 1] = (cr.P + psum) / static_cast<double>(n);
  }
}

double hamiltonian_original(const ChainConfig& cfg, double q0,
                            const std::vector<double>& positions,
                            const std::vector<double>& momenta) {
  const std::size_t n = cfg.n_ions;
  const TrapParams& p = cfg.params;
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    h += momenta[i] * momenta[i] / (2.0 * p.m);
    const double u = positions[i] - q0;
    h += 0.5 * p.m * p.omega * p.omega * u * u;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      h += p.Cc / (positions[i] - positions[j]);
  return h;
}

double hamiltonian_cm(const ChainConfig& cfg, double q0, const CmRelative& cr) {
  const TrapParams& p = cfg.params;
  const double u = cr.Q - q0;
  return cr.P * cr.P / (2.0 * p.M) + 0.5 * p.M * p.omega * p.omega * u * u;
}

double hamiltonian_relative(const ChainConfig& cfg, const CmRelative& cr) {
  const std::size_t n = cfg.n_ions;
  const TrapParams& p = cfg.params;
  const double N = static_cast<double>(n);

  double kin = 0.0, pot = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    double ap = 0.0, aq = 0.0, bp = 0.0, bq = 0.0;
    for (std::size_t j = 1; j <= n - i; ++j) {
      ap += static_cast<double>(j) * cr.p[n - j - 1];
      aq += static_cast<double>(j) * cr.r[n - j - 1];
    }
    for (std::size_t k = 1; k + 1 <= i; ++k) {
      bp += static_cast<double>(k) * cr.p[k - 1];
      bq += static_cast<double>(k) * cr.r[k - 1];
    }
    kin += ap * ap + bp * bp - 2.0 * ap * bp;
    pot += aq * aq + bq * bq - 2.0 * aq * bq;
  }
  kin /= 2.0 * N * p.M;
  pot *= 0.5 * p.M * p.omega * p.omega / N;

  double coul = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) coul += 1.0 / cr.r[i];
  for (std::size_t i = 0; i + 2 < n; ++i)
    for (std::size_t j = i + 1; j + 1 < n; ++j) {
      double span = 0.0;
      for (std::size_t k = i; k <= j; ++k) span += cr.r[k];
      coul += 1.0 / span;
    }
  coul *= p.Cc / N;

  return kin + pot + coul;
}

SeparabilityResult hamiltonian_separability_check(const ChainConfig& cfg,
                                                  double q0,
                                                  std::size_t samples,
                                                  std::uint64_t seed) {
  const std::size_t n = cfg.n_ions;
  const TrapParams& p = cfg.params;
  const auto chain = equilibrium_chain(cfg);
  const double spacing = chain[0] - chain[1];
  const double vscale = p.m * p.omega * spacing;  // ~ one trap period swing

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  SeparabilityResult res;
  std::vector<double> q(n), mom(n);
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      q[i] = chain[i] + 0.2 * spacing * unit(rng);
      mom[i] = vscale * unit(rng);
    }
    bool ordered = true;
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!(q[i] > q[i + 1])) ordered = false;
    if (!ordered) continue;

    const double h_orig = hamiltonian_original(cfg, q0, q, mom);
    const auto cr = to_cm_relative(cfg, q, mom);
    const double h_split =
        hamiltonian_cm(cfg, q0, cr) + hamiltonian_relative(cfg, cr);
    res.max_abs_residual =
        std::max(res.max_abs_residual, std::abs(h_orig - h_split));
    res.energy_scale = std::max(res.energy_scale, std::abs(h_orig));
  }
  return res;
}

std::vector<double> equilibrium_chain(const ChainConfig& cfg) {
  const std::size_t n = cfg.n_ions;
  const TrapParams& p = cfg.params;
  const double r_harm = std::cbrt(p.Cc / (p.m * p.omega * p.omega));

  std::vector<double> q(n), v(n, 0.0), g(n);
  for (std::size_t i = 0; i < n; ++i)
    q[i] = (0.5 * static_cast<double>(n - 1) - static_cast<double>(i)) * r_harm;

  const double k_trap = p.m * p.omega * p.omega;
  auto gradient = [&](const std::vector<double>& x, std::vector<double>& out) {
    double gmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) out[i] = k_trap * x[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = x[i] - x[j];
        const double f = p.Cc / (d * d);
        out[i] -= f;
        out[j] += f;
      }
    for (std::size_t i = 0; i < n; ++i) gmax = std::max(gmax, std::abs(out[i]));
    return gmax;
  };

  // gradient descent with momentum; step scaled by the trap stiffness
  const double eta = 0.05 / k_trap;
  const double mu = 0.9;
  const double gtol = 1e-12 * k_trap * r_harm;
  for (std::size_t it = 0; it < 2000000; ++it) {
    const double gmax = gradient(q, g);
    if (gmax < gtol) {
      for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(q[i] > q[i + 1]))
          throw std::runtime_error("equilibrium_chain: ordering lost");
      return q;
    }
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = mu * v[i] - eta * g[i];
      q[i] += v[i];
    }
  }
  throw std::runtime_error("equilibrium_chain: no convergence");
}

ChainTransportResult transport_chain_classical(const ChainConfig& cfg,
                                               const TransportPlan& plan,
                                               std::size_t steps_per_period) {
  const std::size_t n = cfg.n_ions;
  const TrapParams& p = cfg.params;
  const auto chain = equilibrium_chain(cfg);
  const bool compensated = plan.variant() == Variant::Compensated;

  // highest chain mode is a few times omega; 5x covers N <= 8 comfortably
  const double period = 2.0 * constants::pi / (5.0 * p.omega);
  const double t_f = plan.t_f();
  const std::size_t n_steps = std::max<std::size_t>(
      100, static_cast<std::size_t>(
               std::ceil(t_f * static_cast<double>(steps_per_period) / period)));
  const double h = t_f / static_cast<double>(n_steps);

  std::vector<double> q(chain), v(n, 0.0);
  std::vector<double> aq(n), av(n), bq(n), bv(n), cq(n), cv(n), dq(n), dv(n),
      tq(n), tv(n);

  auto accel = [&](double t, const std::vector<double>& x,
                   std::vector<double>& out) {
    const double q0t = plan.q0(t);
    const double w2 = p.omega * p.omega;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = x[i] - q0t;
      out[i] = -w2 * (u + 2.0 * p.beta * u * u * u);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = x[i] - x[j];
        if (!(d > 0.0))
          throw std::runtime_error("transport_chain_classical: ion crossing");
        const double f = p.Cc / (d * d) / p.m;
        out[i] += f;
        out[j] -= f;
      }
    if (compensated) {
      const double a0 = plan.ddq0(t);
      for (std::size_t i = 0; i < n; ++i) out[i] += a0;
    }
  };

  for (std::size_t step = 0; step < n_steps; ++step) {
    const double t = h * static_cast<double>(step);
    accel(t, q, av);
    for (std::size_t i = 0; i < n; ++i) {
      aq[i] = v[i];
      tq[i] = q[i] + 0.5 * h * aq[i];
      tv[i] = v[i] + 0.5 * h * av[i];
    }
    accel(t + 0.5 * h, tq, bv);
    for (std::size_t i = 0; i < n; ++i) {
      bq[i] = tv[i];
      tq[i] = q[i] + 0.5 * h * bq[i];
      tv[i] = v[i] + 0.5 * h * bv[i];
    }
    accel(t + 0.5 * h, tq, cv);
    for (std::size_t i = 0; i < n; ++i) {
      cq[i] = tv[i];
      tq[i] = q[i] + h * cq[i];
      tv[i] = v[i] + h * cv[i];
    }
    accel(t + h, tq, dv);
    for (std::size_t i = 0; i < n; ++i) {
      dq[i] = tv[i];
      q[i] += h / 6.0 * (aq[i] + 2.0 * bq[i] + 2.0 * cq[i] + dq[i]);
      v[i] += h / 6.0 * (av[i] + 2.0 * bv[i] + 2.0 * cv[i] + dv[i]);
    }
  }

  ChainTransportResult res;
  res.final_state = {q, v, t_f};

  double Q = 0.0, Qdot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Q += q[i];
    Qdot += v[i];
  }
  Q /= static_cast<double>(n);
  Qdot /= static_cast<double>(n);
  const double uq = Q - plan.q0(t_f);
  res.cm_excitation = 0.5 * p.M * Qdot * Qdot +
                      0.5 * p.M * p.omega * p.omega * uq * uq;

  // internal (relative) energy above the chain minimum
  auto internal = [&](const std::vector<double>& x,
                      const std::vector<double>& vel, double center) {
    double e = 0.0;
    double vq = 0.0;
    for (std::size_t i = 0; i < n; ++i) vq += vel[i];
    vq /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double dv_ = vel[i] - vq;
      e += 0.5 * p.m * dv_ * dv_;
      const double u = x[i] - center;
      e += 0.5 * p.m * p.omega * p.omega * u * u;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) e += p.Cc / (x[i] - x[j]);
    return e;
  };
  std::vector<double> rest(n, 0.0);
  const double e_min = internal(chain, rest, 0.0);
  // recentre the final configuration on its own CM for the internal part
  std::vector<double> rel(n);
  for (std::size_t i = 0; i < n; ++i) rel[i] = q[i] - Q;
  res.rel_excitation = internal(rel, v, 0.0) - e_min;
  return res;
}

}  // namespace ionshuttle::nion
