// config.hpp - default numeric tolerances shared across the library
#pragma once

#include <cstddef>

namespace dixmier {

// Structural checks (shapes, Hermiticity, convexity of weights, ...).
inline constexpr double kStructuralTol = 1e-9;

// What iterative optimizers are expected to reach by default.
inline constexpr double kOptimizerTol = 1e-6;

// Unitarity of conjugation operators, checked at construction.
inline constexpr double kUnitaryTol = 1e-10;

// Convex-weight sums in mixing operators.
inline constexpr double kConvexityTol = 1e-12;

// Terms below this weight are dropped and the rest renormalized.
inline constexpr double kWeightPruneTol = 1e-14;

// Annihilating-state certificates: |rho(v)| at or below this passes.
inline constexpr double kCertificateTol = 1e-8;

// Hard cap on expanded term lists (central patches multiply term counts).
inline constexpr std::size_t kMaxMixingTerms = std::size_t{1} << 20;

}  // namespace dixmier
