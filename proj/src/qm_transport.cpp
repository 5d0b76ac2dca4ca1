#include "ionshuttle/qm/transport.hpp"

#include <array>
#include <cmath>
#include <fstream>

#include "ionshuttle/csv.hpp"

namespace ionshuttle::qm {

namespace {

struct FrameFunctions {
  TimeFunction shift;   // V argument offset
  TimeFunction acc;     // inertial coefficient
  double ref_v0 = 0.0;  // R'(0+)
  double ref_vf = 0.0;  // R'(t_f-)
  double target_translation = 0.0;  // lab only: target displaced by d
};

FrameFunctions make_frame(const TransportPlan& plan, Frame frame) {
  const bool compensated = plan.variant() == Variant::Compensated;
  FrameFunctions ff;
  switch (frame) {
    case Frame::Trap:
      ff.shift = nullptr;
      ff.acc = compensated ? TimeFunction(nullptr)
                           : TimeFunction([&plan](double t) {
                               return plan.ddq0(t);
                             });
      ff.ref_v0 = plan.dq0(0.0);
      ff.ref_vf = plan.dq0(plan.t_f());
      break;
    case Frame::Comoving:
      ff.shift = [&plan](double t) { return plan.displacement(t); };
      ff.acc = compensated
                   ? TimeFunction([&plan](double t) {
                       return plan.ddqc(t) - plan.ddq0(t);
                     })
                   : TimeFunction([&plan](double t) { return plan.ddqc(t); });
      ff.ref_v0 = 0.0;
      ff.ref_vf = 0.0;
      break;
    case Frame::Lab:
      ff.shift = [&plan](double t) { return -plan.q0(t); };
      ff.acc = compensated
                   ? TimeFunction([&plan](double t) { return -plan.ddq0(t); })
                   : TimeFunction(nullptr);
      ff.ref_v0 = 0.0;
      ff.ref_vf = 0.0;
      ff.target_translation = plan.params().d;
      break;
  }
  return ff;
}

double frame_reference(const TransportPlan& plan, Frame frame, double t) {
  switch (frame) {
    case Frame::Trap: return plan.q0(t);
    case Frame::Comoving: return plan.qc(t);
    case Frame::Lab: return 0.0;
  }
  return 0.0;
}

struct Effective1D {
  TrapParams p;
  double r_e;
  double omega_tilde;
  Selector sel;

  double value(double u) const {
    const double w2 = p.omega * p.omega;
    const double u2 = u * u;
    switch (sel) {
      case Selector::Full:
        return 0.5 * p.M * w2 *
               ((1.0 + 6.0 * p.beta * r_e * r_e) * u2 + p.beta * u2 * u2);
      case Selector::QuadraticOnly:
        return 0.5 * p.M * omega_tilde * omega_tilde * u2;
      case Selector::QuarticOnly:
        return 0.5 * p.M * w2 * (u2 + p.beta * u2 * u2);
    }
    return 0.0;
  }

  double derivative(double u) const {
    const double w2 = p.omega * p.omega;
    switch (sel) {
      case Selector::Full:
        return p.M * w2 *
               ((1.0 + 6.0 * p.beta * r_e * r_e) * u +
                2.0 * p.beta * u * u * u);
      case Selector::QuadraticOnly:
        return p.M * omega_tilde * omega_tilde * u;
      case Selector::QuarticOnly:
        return p.M * w2 * (u + 2.0 * p.beta * u * u * u);
    }
    return 0.0;
  }
};

struct GridPlan {
  Grid1D grid;
  double dt;
};

std::size_t next_pow2(double x) {
  std::size_t n = 256;
  while (static_cast<double>(n) < x && n < (std::size_t{1} << 26)) n <<= 1;
  return n;
}

GridPlan size_q_axis(const TrapParams& params, const Effective1D& pot,
                     const FrameProbe& probe, double omega_tilde,
                     const TransportOptions& opts, double t_f) {
  const double losc = std::sqrt(params.hbar / (params.M * omega_tilde));
  const double w2 = params.omega * params.omega;
  // local curvature along the probe sets the fastest oscillation
  const double wloc2 =
      std::max(omega_tilde * omega_tilde,
               w2 * (1.0 + 6.0 * params.beta * probe.u_max * probe.u_max));
  const double wloc = std::sqrt(wloc2);

  const double half =
      opts.box_safety * probe.x_max + 14.0 * losc;
  const double k_need = opts.box_safety * params.M * probe.v_max / params.hbar +
                        14.0 / losc;
  const double dx = std::min(losc / 16.0, constants::pi / k_need);
  std::size_t n = opts.nq ? opts.nq : next_pow2(2.0 * half / dx);
  if (n > opts.max_nq)
    throw std::runtime_error(
        "quantum transport: auto grid exceeds max_nq; the packet excursion in "
        "this frame is too large (try Frame::Comoving)");

  GridPlan gp;
  gp.grid = Grid1D::centered(0.0, half, n);
  const double period = 2.0 * constants::pi / wloc;
  double dt = period / static_cast<double>(opts.steps_per_period);
  const std::size_t steps =
      std::max<std::size_t>(50, static_cast<std::size_t>(std::ceil(t_f / dt)));
  gp.dt = t_f / static_cast<double>(steps);
  (void)pot;
  return gp;
}

struct TraceWriter {
  std::ofstream os;
  csv::Writer* w = nullptr;
  std::unique_ptr<csv::Writer> holder;

  explicit TraceWriter(const std::string& path) {
    if (path.empty()) return;
    os.open(path);
    if (!os) throw std::runtime_error("trace: cannot open " + path);
    holder = std::make_unique<csv::Writer>(os);
    w = holder.get();
    w->row({"t_s", "norm", "q_lab_m", "energy_J", "overlap0"});
  }
  explicit operator bool() const { return w != nullptr; }
};

}  // namespace

const char* frame_name(Frame f) {
  switch (f) {
    case Frame::Trap: return "trap";
    case Frame::Comoving: return "comoving";
    case Frame::Lab: return "lab";
  }
  return "?";
}

FrameProbe probe_frame_motion(const TrapParams& params,
                              const TransportPlan& plan, Frame frame,
                              Selector sel, double r_e) {
  const Effective1D pot{params, r_e, effective_frequency(params, r_e), sel};
  const auto ff = make_frame(plan, frame);
  const double t_f = plan.t_f();
  const std::size_t n = 4000;
  const double h = t_f / static_cast<double>(n);

  auto rhs = [&](double t, const std::array<double, 2>& y) {
    const double sh = ff.shift ? ff.shift(t) : 0.0;
    const double ac = ff.acc ? ff.acc(t) : 0.0;
    return std::array<double, 2>{
        y[1], -pot.derivative(y[0] + sh) / params.M - ac};
  };

  std::array<double, 2> y{0.0, -ff.ref_v0};
  FrameProbe pr;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = h * static_cast<double>(i);
    const double sh = ff.shift ? ff.shift(t) : 0.0;
    pr.x_max = std::max(pr.x_max, std::abs(y[0]));
    pr.v_max = std::max(pr.v_max, std::abs(y[1]));
    pr.u_max = std::max(pr.u_max, std::abs(y[0] + sh));
    if (i == n) break;
    // RK4
    const auto k1 = rhs(t, y);
    std::array<double, 2> yt{y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]};
    const auto k2 = rhs(t + 0.5 * h, yt);
    yt = {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]};
    const auto k3 = rhs(t + 0.5 * h, yt);
    yt = {y[0] + h * k3[0], y[1] + h * k3[1]};
    const auto k4 = rhs(t + h, yt);
    y = {y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
         y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
  }
  return pr;
}

TransportReport transport_fidelity_1d(const TrapParams& params,
                                      const TransportPlan& plan,
                                      const TransportOptions& opts) {
  params.validate();
  const double r_e = equilibrium_distance(params);
  const double omega_tilde = effective_frequency(params, r_e);
  const Effective1D pot{params, r_e, omega_tilde, opts.selector};
  const auto ff = make_frame(plan, opts.frame);
  const double t_f = plan.t_f();

  Potential1D v = [pot](double u) { return pot.value(u); };

  TransportOptions local = opts;
  for (int attempt = 0;; ++attempt) {
    const auto probe =
        probe_frame_motion(params, plan, local.frame, local.selector, r_e);
    const auto gp = size_q_axis(params, pot, probe, omega_tilde, local, t_f);

    try {
      auto gs = ground_state_imaginary_time(gp.grid, v, params.M, params.hbar,
                                            omega_tilde, local.variance_tol);
      WaveFunction1D psi = gs.psi;
      apply_momentum_kick(psi, -params.M * ff.ref_v0, params.hbar);

      SplitOperator1D prop(gp.grid, v, params.M, params.hbar, gp.dt, ff.shift,
                           ff.acc);
      prop.set_state(psi);
      const std::size_t steps =
          static_cast<std::size_t>(std::llround(t_f / gp.dt));

      TraceWriter trace(local.trace_path);
      if (trace) {
        std::size_t done = 0;
        while (done < steps) {
          const std::size_t chunk = std::min(local.trace_stride, steps - done);
          prop.advance(chunk);
          done += chunk;
          const auto& cur = prop.state();
          trace.w->row(cur.t, cur.norm(),
                       position_mean(cur) +
                           frame_reference(plan, local.frame, cur.t),
                       energy_1d(cur, v, params.M, params.hbar),
                       fidelity(gs.psi, cur));
        }
      } else {
        prop.advance(steps);
      }

      WaveFunction1D out = prop.state();
      apply_momentum_kick(out, params.M * ff.ref_vf, params.hbar);

      WaveFunction1D target = gs.psi;
      if (ff.target_translation != 0.0)
        translate_spectral(target, ff.target_translation);

      Potential1D v_final = v;
      if (local.frame == Frame::Lab) {
        const double d = params.d;
        v_final = [pot, d](double u) { return pot.value(u - d); };
      }

      TransportReport rep;
      rep.t_f = t_f;
      rep.fidelity = fidelity(target, out);
      rep.e0 = gs.energy;
      rep.ef = energy_1d(out, v_final, params.M, params.hbar);
      rep.quanta_gained = (rep.ef - rep.e0) / (params.hbar * omega_tilde);
      rep.norm_final = out.norm();
      rep.variant = plan.variant();
      rep.model = "quantum1d";
      rep.frame = local.frame;
      rep.grid_nq = gp.grid.n;
      rep.steps = steps;
      rep.dt = gp.dt;
      return rep;
    } catch (const LeakageError&) {
      if (attempt >= 2) throw;
      local.box_safety *= 1.6;
      if (local.nq) local.nq <<= 1;
    }
  }
}

Grid1D relative_axis_grid(const TrapParams& params, std::size_t nr) {
  const double r_e = equilibrium_distance(params);
  const double w_r = relative_mode_frequency(params, r_e);
  const double sigma_r = std::sqrt(params.hbar / (2.0 * params.M * w_r));
  const double half = 8.0 * sigma_r;
  if (!(r_e - half > 0.0))
    throw std::runtime_error("relative_axis_grid: window reaches r <= 0");
  return Grid1D::centered(r_e, half, nr);
}

std::shared_ptr<const Quantum2DContext> make_quantum_2d_context(
    const TrapParams& params, const Grid1D& q_axis, std::size_t nr,
    double variance_tol) {
  auto ctx = std::make_shared<Quantum2DContext>();
  ctx->r_e = equilibrium_distance(params);
  ctx->omega_tilde = effective_frequency(params, ctx->r_e);
  ctx->grid.q = q_axis;
  ctx->grid.r = relative_axis_grid(params, nr);

  Potential2D v2 = [params](double q, double r) {
    return potential_2d(params, q, r);
  };
  ctx->ground = ground_state_imaginary_time(ctx->grid, v2, params.M,
                                            params.hbar, ctx->omega_tilde,
                                            variance_tol);

  Potential1D vr = [params](double r) { return relative_potential(params, r); };
  const double w_r = relative_mode_frequency(params, ctx->r_e);
  auto r_ground = ground_state_imaginary_time(ctx->grid.r, vr, params.M,
                                              params.hbar, w_r, variance_tol);
  ctx->er0_abs = r_ground.energy;
  ctx->min_v0 = relative_potential(params, ctx->r_e);
  return ctx;
}

Grid1D q_axis_for_plans(const TrapParams& params,
                        const std::vector<const TransportPlan*>& plans,
                        const TransportOptions& opts) {
  const double r_e = equilibrium_distance(params);
  const double omega_tilde = effective_frequency(params, r_e);
  const double losc = std::sqrt(params.hbar / (params.M * omega_tilde));
  double half = 0.0;
  double k_need = 0.0;
  for (const auto* plan : plans) {
    const auto probe =
        probe_frame_motion(params, *plan, opts.frame, Selector::Full, r_e);
    half = std::max(half, opts.box_safety * probe.x_max + 14.0 * losc);
    k_need = std::max(k_need,
                      opts.box_safety * params.M * probe.v_max / params.hbar +
                          14.0 / losc);
  }
  const double dx = std::min(losc / 16.0, constants::pi / k_need);
  std::size_t n = opts.nq ? opts.nq : next_pow2(2.0 * half / dx);
  if (n > opts.max_nq)
    throw std::runtime_error("q_axis_for_plans: grid exceeds max_nq");
  return Grid1D::centered(0.0, half, n);
}

TransportReport transport_fidelity_2d(
    const TrapParams& params, const TransportPlan& plan,
    const TransportOptions& opts, std::shared_ptr<const Quantum2DContext> ctx) {
  params.validate();
  if (!ctx) {
    TransportOptions sizing = opts;
    if (!sizing.nq) sizing.max_nq = std::min<std::size_t>(sizing.max_nq, 8192);
    const Grid1D q_axis = q_axis_for_plans(params, {&plan}, sizing);
    ctx = make_quantum_2d_context(params, q_axis, opts.nr, opts.variance_tol);
  }
  const auto ff = make_frame(plan, opts.frame);
  if (opts.frame == Frame::Lab)
    throw std::invalid_argument(
        "transport_fidelity_2d: lab frame would need the full transport span; "
        "use Trap or Comoving");
  const double t_f = plan.t_f();

  Potential2D v2 = [params](double q, double r) {
    return potential_2d(params, q, r);
  };

  // time step from the fastest local frequency among CM and relative modes
  const auto probe =
      probe_frame_motion(params, plan, opts.frame, Selector::Full, ctx->r_e);
  const double w2 = params.omega * params.omega;
  const double wloc_cm = std::sqrt(std::max(
      ctx->omega_tilde * ctx->omega_tilde,
      w2 * (1.0 + 6.0 * params.beta * probe.u_max * probe.u_max)));
  const double w_r = relative_mode_frequency(params, ctx->r_e);
  const double wmax = std::max(wloc_cm, w_r);
  double dt = 2.0 * constants::pi / wmax /
              static_cast<double>(opts.steps_per_period);
  const std::size_t steps =
      std::max<std::size_t>(50, static_cast<std::size_t>(std::ceil(t_f / dt)));
  dt = t_f / static_cast<double>(steps);

  WaveFunction2D psi = ctx->ground.psi;
  apply_momentum_kick_q(psi, -params.M * ff.ref_v0, params.hbar);

  SplitOperator2D prop(ctx->grid, v2, params.M, params.hbar, dt, ff.shift,
                       ff.acc);
  prop.set_state(psi);

  TraceWriter trace(opts.trace_path);
  if (trace) {
    std::size_t done = 0;
    while (done < steps) {
      const std::size_t chunk = std::min(opts.trace_stride, steps - done);
      prop.advance(chunk);
      done += chunk;
      const auto& cur = prop.state();
      // q-axis mean in lab coordinates
      double num = 0.0, den = 0.0;
      for (std::size_t iq = 0; iq < cur.grid.q.n; ++iq) {
        double rowsum = 0.0;
        for (std::size_t ir = 0; ir < cur.grid.r.n; ++ir)
          rowsum += std::norm(cur.at(iq, ir));
        num += rowsum * cur.grid.q.x(iq);
        den += rowsum;
      }
      trace.w->row(cur.t, cur.norm(),
                   num / den + frame_reference(plan, opts.frame, cur.t),
                   energy_2d(cur, v2, params.M, params.hbar),
                   fidelity(ctx->ground.psi, cur));
    }
  } else {
    prop.advance(steps);
  }

  WaveFunction2D out = prop.state();
  apply_momentum_kick_q(out, params.M * ff.ref_vf, params.hbar);

  TransportReport rep;
  rep.t_f = t_f;
  rep.fidelity = fidelity(ctx->ground.psi, out);
  rep.er0_above_min = ctx->er0_abs - ctx->min_v0;
  rep.min_v0 = ctx->min_v0;
  rep.delta = ctx->er0_abs;  // = er0_above_min + min_v0
  rep.e0 = ctx->ground.energy - rep.delta;
  rep.ef = energy_2d(out, v2, params.M, params.hbar) - rep.delta;
  rep.quanta_gained = (rep.ef - rep.e0) / (params.hbar * ctx->omega_tilde);
  rep.norm_final = out.norm();
  rep.variant = plan.variant();
  rep.model = "quantum2d";
  rep.frame = opts.frame;
  rep.grid_nq = ctx->grid.q.n;
  rep.grid_nr = ctx->grid.r.n;
  rep.steps = steps;
  rep.dt = dt;
  return rep;
}

}  // namespace ionshuttle::qm
