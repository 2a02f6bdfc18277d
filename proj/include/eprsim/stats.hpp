#pragma once

#include <cstddef>

namespace eprsim {

/// Lower regularized incomplete gamma P(a, x), a > 0, x >= 0.
/// Series expansion for x < a + 1, continued fraction otherwise.
double regularized_gamma_lower(double a, double x);

/// Upper regularized incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_upper(double a, double x);

/// Survival function of the chi-square distribution with `dof` degrees
/// of freedom: Q(dof/2, x/2).
double chi_square_survival(double statistic, std::size_t dof);

} // namespace eprsim
