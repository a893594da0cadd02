#pragma once

#include "sdlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sdlab {

// Envelope factors of the large-beta analysis, all functions of t = beta^{-1/3}.
// Below t = 1e-4 they are evaluated in long double to avoid cancellation.

template <typename Scalar>
Scalar beta_t(Scalar beta)
{
    return std::cbrt(Scalar(1) / beta);
}

template <typename Scalar>
Scalar lower_envelope_t(Scalar t)
{
    if (t < Scalar(1e-4)) {
        const long double x = t;
        return Scalar((1.0L - x) * (1.0L - x) / (1.0L + x));
    }
    return (Scalar(1) - t) * (Scalar(1) - t) / (Scalar(1) + t);
}

template <typename Scalar>
Scalar upper_ratio_envelope_t(Scalar t)
{
    if (t < Scalar(1e-4)) {
        const long double x = t;
        return Scalar((1.0L + x) / ((1.0L - x) * (1.0L - x)));
    }
    return (Scalar(1) + t) / ((Scalar(1) - t) * (Scalar(1) - t));
}

// 1 + 15 t + 14 t^2, the polynomial majorant of the upper ratio envelope for t < 1/2.
template <typename Scalar>
Scalar majorant_polynomial_t(Scalar t)
{
    return Scalar(1) + Scalar(15) * t + Scalar(14) * t * t;
}

/// (1+t)^{-1} (1-t)^2 with t = beta^{-1/3}: lower envelope of OD/SD.
template <typename Scalar>
Scalar lower_envelope(Scalar beta)
{
    return lower_envelope_t(beta_t(beta));
}

/// (1+t) (1-t)^{-2}: upper envelope of lambda(beta, sector) / OD.
template <typename Scalar>
Scalar upper_ratio_envelope(Scalar beta)
{
    return upper_ratio_envelope_t(beta_t(beta));
}

template <typename Scalar>
Scalar majorant_polynomial(Scalar beta)
{
    return majorant_polynomial_t(beta_t(beta));
}

/// Factor (1 - sqrt(delta / (eps beta)))^2 multiplying SD(delta + eps) in the sandwich lower bound.
template <typename Scalar>
Scalar sandwich_factor(Scalar beta, Scalar delta, Scalar eps)
{
    if (!(eps > Scalar(0)) || !(beta > Scalar(0)))
        throw ParameterError("sandwich factor needs beta > 0 and eps > 0");
    const long double s = std::sqrt(static_cast<long double>(delta) / (static_cast<long double>(eps) * beta));
    return Scalar((1.0L - s) * (1.0L - s));
}

// eps = delta beta^{-1/3}, the choice that balances the two error terms.
template <typename Scalar>
Scalar balanced_epsilon(Scalar beta, Scalar delta)
{
    return delta * beta_t(beta);
}

// Smallest beta for the sector characterization: beta > max((delta/(delta_bar - delta))^3, 1).
template <typename Scalar>
Scalar sector_beta_floor(Scalar delta, Scalar delta_bar)
{
    const Scalar q = delta / (delta_bar - delta);
    return std::max(q * q * q, Scalar(1));
}

// delta < beta^{1/3} delta_bar / (beta^{1/3} + 1), the measure condition of the ratio bound.
template <typename Scalar>
Scalar ratio_delta_ceiling(Scalar beta, Scalar delta_bar)
{
    const Scalar c = std::cbrt(beta);
    return c * delta_bar / (c + Scalar(1));
}

} // namespace sdlab
