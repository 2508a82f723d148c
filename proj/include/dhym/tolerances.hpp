#pragma once

#include <numbers>

namespace dhym {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

// Relative Hermitian-symmetry tolerance for HermitianForm.
inline constexpr double kHermTol = 1e-12;
// Classification band for strict inequalities: |slack| <= kClassTol is "boundary".
inline constexpr double kClassTol = 1e-9;
// Non-strict predicates accept values >= -kPredicateTol.
inline constexpr double kPredicateTol = 1e-9;
// Root-finding target for boundary_solve and f0.
inline constexpr double kRootTol = 1e-13;
// Path assertions along the continuity method.
inline constexpr double kPathTol = 1e-8;

/// Lower edge (n-2)*pi/2 of the supercritical phase range.
constexpr double supercritical_floor(int n) { return (n - 2) * kHalfPi; }
/// Lower edge (n-1)*pi/2 of the hypercritical phase range.
constexpr double hypercritical_floor(int n) { return (n - 1) * kHalfPi; }
/// Upper edge n*pi/2 of the phase range.
constexpr double phase_ceiling(int n) { return n * kHalfPi; }

}  // namespace dhym
