#pragma once

#include <cstddef>
#include <stdexcept>

#include "ionshuttle/constants.hpp"

namespace ionshuttle::qm {

/// Uniform spatial grid with the matching FFT momentum layout.
struct Grid1D {
  std::size_t n = 0;
  double min = 0.0;
  double dx = 0.0;

  static Grid1D centered(double center, double half_width, std::size_t n) {
    if (n < 2 || (n & (n - 1)) != 0)
      throw std::invalid_argument("Grid1D: n must be a power of two >= 2");
    if (!(half_width > 0.0))
      throw std::invalid_argument("Grid1D: half_width must be > 0");
    return {n, center - half_width, 2.0 * half_width / static_cast<double>(n)};
  }

  double x(std::size_t i) const { return min + dx * static_cast<double>(i); }

  /// FFT wavenumber for bin i (positive then negative frequencies).
  double k(std::size_t i) const {
    const double dk = 2.0 * constants::pi / (dx * static_cast<double>(n));
    const auto half = n / 2;
    return (i < half) ? dk * static_cast<double>(i)
                      : dk * (static_cast<double>(i) - static_cast<double>(n));
  }

  double length() const { return dx * static_cast<double>(n); }

  bool operator==(const Grid1D& o) const {
    return n == o.n && min == o.min && dx == o.dx;
  }
};

struct Grid2D {
  Grid1D q;  // trap-frame CM axis
  Grid1D r;  // relative coordinate, window around r_e (r > 0)

  std::size_t size() const { return q.n * r.n; }

  bool operator==(const Grid2D& o) const { return q == o.q && r == o.r; }
};

}  // namespace ionshuttle::qm
