#include "eprsim/stats.hpp"

#include "eprsim/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace eprsim {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kConvergence = 1e-15;

/// Series P(a,x) = x^a e^-x / Gamma(a) * sum_n x^n / (a(a+1)..(a+n)).
double gamma_p_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < kMaxIterations; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kConvergence) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw InternalError("incomplete gamma series failed to converge for a=" + std::to_string(a) +
                        ", x=" + std::to_string(x));
}

/// Continued fraction for Q(a,x), modified Lentz evaluation.
double gamma_q_continued_fraction(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / kConvergence;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kConvergence) {
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw InternalError("incomplete gamma continued fraction failed to converge for a=" +
                        std::to_string(a) + ", x=" + std::to_string(x));
}

} // namespace

double regularized_gamma_lower(double a, double x) {
    if (!(a > 0.0) || x < 0.0 || !std::isfinite(a) || !std::isfinite(x)) {
        throw ArgumentError("regularized gamma requires a > 0 and x >= 0");
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (x < a + 1.0) {
        return gamma_p_series(a, x);
    }
    return 1.0 - gamma_q_continued_fraction(a, x);
}

double regularized_gamma_upper(double a, double x) {
    if (!(a > 0.0) || x < 0.0 || !std::isfinite(a) || !std::isfinite(x)) {
        throw ArgumentError("regularized gamma requires a > 0 and x >= 0");
    }
    if (x == 0.0) {
        return 1.0;
    }
    if (x < a + 1.0) {
        return 1.0 - gamma_p_series(a, x);
    }
    return gamma_q_continued_fraction(a, x);
}

double chi_square_survival(double statistic, std::size_t dof) {
    if (dof == 0) {
        throw ArgumentError("chi-square needs at least one degree of freedom");
    }
    if (statistic < 0.0) {
        throw ArgumentError("chi-square statistic must be non-negative");
    }
    return regularized_gamma_upper(0.5 * static_cast<double>(dof), 0.5 * statistic);
}

} // namespace eprsim
