#pragma once

#include <cmath>

namespace sdlab {

// First zero of J0 and its square, the first Dirichlet eigenvalue of the unit
// disk. Frozen from bessel_j0_first_zero(); the test suite re-derives both.
inline constexpr double kJ01 = 2.404825557695773;
inline constexpr double kDirichletDisk = 5.783185962946784;

/// J0(x) by its power series sum_k (-1)^k (x/2)^{2k} / (k!)^2. For x <= 4 the
/// terms decrease monotonically after the first few, so the series alternates
/// with error below the first omitted term; *bound receives that term.
inline double bessel_j0_series(double x, double* bound = nullptr)
{
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (double(k) * double(k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) {
            if (bound)
                *bound = std::abs(term * q / (double(k + 1) * double(k + 1)));
            break;
        }
    }
    return sum;
}

/// Bisection on [2, 3] where J0 changes sign exactly once.
inline double bessel_j0_first_zero()
{
    double lo = 2.0, hi = 3.0;
    const double f_lo = bessel_j0_series(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = bessel_j0_series(mid);
        if ((f > 0.0) == (f_lo > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace sdlab
