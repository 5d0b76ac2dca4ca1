#pragma once

namespace ionshuttle::constants {

// 2018 CODATA values, frozen.
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double electron_charge = 1.602176634e-19;  // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double amu = 1.66053906660e-27;        // kg

// Coulomb coupling C_c = e^2/(4 pi eps0), precomputed so that the default
// is reproducible without touching pi at namespace scope.
inline constexpr double coulomb_coupling = 2.3070775523417355e-28;  // N m^2

inline constexpr double pi = 3.14159265358979323846;

}  // namespace ionshuttle::constants
