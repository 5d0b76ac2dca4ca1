#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "ionshuttle/qm/grid.hpp"

namespace ionshuttle::qm {

using cplx = std::complex<double>;

struct WaveFunction1D {
  Grid1D grid;
  std::vector<cplx> amp;
  double t = 0.0;

  explicit WaveFunction1D(const Grid1D& g = {})
      : grid(g), amp(g.n, cplx{0.0, 0.0}) {}

  double norm() const;
  void normalize();
  /// max |amp| over the outermost cells relative to the global max.
  double edge_fraction(std::size_t cells = 2) const;
};

struct WaveFunction2D {
  Grid2D grid;
  std::vector<cplx> amp;  // row-major, index = iq * grid.r.n + ir
  double t = 0.0;

  explicit WaveFunction2D(const Grid2D& g = {})
      : grid(g), amp(g.size(), cplx{0.0, 0.0}) {}

  cplx& at(std::size_t iq, std::size_t ir) { return amp[iq * grid.r.n + ir]; }
  const cplx& at(std::size_t iq, std::size_t ir) const {
    return amp[iq * grid.r.n + ir];
  }

  double norm() const;
  void normalize();
  double edge_fraction(std::size_t cells = 2) const;
};

/// |<a|b>| by grid quadrature. Throws on grid mismatch.
double fidelity(const WaveFunction1D& a, const WaveFunction1D& b);
double fidelity(const WaveFunction2D& a, const WaveFunction2D& b);

cplx overlap(const WaveFunction1D& a, const WaveFunction1D& b);

double position_mean(const WaveFunction1D& psi);

/// psi(x) -> psi(x - shift), exact for band-limited states (momentum-space
/// phase ramp).
void translate_spectral(WaveFunction1D& psi, double shift);

/// Versioned binary checkpoint: grid metadata followed by interleaved
/// re/im amplitudes.
void save_checkpoint(const WaveFunction1D& psi, const std::string& path);
void save_checkpoint(const WaveFunction2D& psi, const std::string& path);
WaveFunction1D load_checkpoint_1d(const std::string& path);
WaveFunction2D load_checkpoint_2d(const std::string& path);

}  // namespace ionshuttle::qm
