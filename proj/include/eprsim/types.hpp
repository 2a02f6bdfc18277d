#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

namespace eprsim {

using cplx = std::complex<double>;

/// Tolerance for algebraic identities (normalization, unitarity,
/// Hermiticity, trace preservation).
inline constexpr double kAlgebraTol = 1e-10;

/// Tolerance for eigenvalue positivity of density matrices.
inline constexpr double kPositivityTol = 1e-8;

/// Constructors reject vectors whose norm deviates from 1 by more than
/// this; smaller deviations are renormalized exactly.
inline constexpr double kNormInputTol = 1e-6;

/// Minimum pairwise gap between observable eigenvalues (nondegeneracy).
inline constexpr double kEigenvalueGapTol = 1e-9;

/// Hard cap on the total dimension of any composite state (2^14).
inline constexpr std::size_t kMaxTotalDim = std::size_t{1} << 14;

} // namespace eprsim
