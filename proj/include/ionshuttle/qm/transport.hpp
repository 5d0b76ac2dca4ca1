#pragma once

#include <memory>
#include <string>

#include "ionshuttle/perturbation.hpp"
#include "ionshuttle/qm/evolve.hpp"
#include "ionshuttle/trajectory.hpp"
#include "ionshuttle/trap.hpp"

namespace ionshuttle::qm {

/// Reference frame of the propagation. The frame displacement R(t) turns the
/// lab Hamiltonian into p^2/2M + V(x + R - Q0) + M x R''(t) (plus dropped
/// time-dependent scalars); a nonzero R'(0) or R'(t_f) is handled by exact
/// momentum-kick factors at the boundaries.
///   Trap:      R = Q0  (static potential, inertial term M x Q0'')
///   Comoving:  R = Q_c (small grids for any t_f; boundary kicks vanish)
///   Lab:       R = 0   (debug path; grid must span the full transport)
enum class Frame { Trap, Comoving, Lab };

const char* frame_name(Frame f);

struct TransportOptions {
  Frame frame = Frame::Comoving;
  Selector selector = Selector::Full;  // restricts the 1D model potential
  std::size_t steps_per_period = 500;
  std::size_t nq = 0;    // 0 = auto-sized from a classical probe
  std::size_t nr = 256;  // 2D relative axis points
  double box_safety = 1.35;
  std::size_t max_nq = std::size_t{1} << 21;
  double variance_tol = 1e-6;   // ground-state variance, units hbar*w_ref
  std::string trace_path;       // observable trace CSV, empty = off
  std::size_t trace_stride = 16;
};

/// Per-transport record; for the 2D model e0/ef already have
/// delta = E_r^(0) + min V(0) subtracted so the numbers compare directly
/// with the 1D model.
struct TransportReport {
  double t_f = 0.0;
  double fidelity = 0.0;
  double e0 = 0.0, ef = 0.0;  // [J]
  double delta = 0.0;         // [J], 2D only
  double er0_above_min = 0.0, min_v0 = 0.0;  // delta components
  double quanta_gained = 0.0;  // (ef - e0) / (hbar omega_tilde)
  double norm_final = 1.0;
  Variant variant = Variant::Unshifted;
  std::string model;
  Frame frame = Frame::Comoving;
  std::size_t grid_nq = 0, grid_nr = 0, steps = 0;
  double dt = 0.0;
};

/// Frozen-relative-coordinate 1D model: ground state of the (selected)
/// effective potential, split-operator transport, fidelity against the
/// transported initial state.
TransportReport transport_fidelity_1d(const TrapParams& params,
                                      const TransportPlan& plan,
                                      const TransportOptions& opts = {});

/// Reusable pieces of a 2D run that do not depend on t_f: the grid, the
/// initial 2D ground state, and the delta-subtraction bookkeeping.
struct Quantum2DContext {
  Grid2D grid;
  GroundState2D ground;
  double er0_abs = 0.0;  // ground energy of H_r on the r axis [J]
  double min_v0 = 0.0;   // V_r(r_e) [J]
  double omega_tilde = 0.0;
  double r_e = 0.0;
};

/// Builds the r window (r_e +/- 8 sigma_r) and, given q-axis extents, the
/// shared 2D context.
Grid1D relative_axis_grid(const TrapParams& params, std::size_t nr = 256);

std::shared_ptr<const Quantum2DContext> make_quantum_2d_context(
    const TrapParams& params, const Grid1D& q_axis, std::size_t nr = 256,
    double variance_tol = 1e-6);

/// Sizes the q axis for a set of plans (the grid must hold the worst case
/// so one context serves a whole sweep).
Grid1D q_axis_for_plans(const TrapParams& params,
                        const std::vector<const TransportPlan*>& plans,
                        const TransportOptions& opts);

/// Full 2D (Q, r) transport. When ctx is null a context is built for this
/// plan alone.
TransportReport transport_fidelity_2d(
    const TrapParams& params, const TransportPlan& plan,
    const TransportOptions& opts = {},
    std::shared_ptr<const Quantum2DContext> ctx = nullptr);

/// Classical probe of the in-frame packet trajectory; drives the automatic
/// grid sizing and is exposed for tests.
struct FrameProbe {
  double x_max = 0.0;  // max |x(t)| in frame coordinates
  double v_max = 0.0;  // max |x'(t)|
  double u_max = 0.0;  // max |x(t) + shift(t)| (argument of the potential)
};
FrameProbe probe_frame_motion(const TrapParams& params,
                              const TransportPlan& plan, Frame frame,
                              Selector sel, double r_e);

}  // namespace ionshuttle::qm
