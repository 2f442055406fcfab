#pragma once

#include <complex>

#include "wavesift/errors.hpp"

namespace wavesift::special {

/// Bessel function of the first kind, order zero, x >= 0.
double bessel_j0(double x);

/// Bessel function of the first kind, order one, x >= 0.
double bessel_j1(double x);

/// Bessel function of the second kind, order zero, x > 0.
double bessel_y0(double x);

/// Bessel function of the second kind, order one, x > 0.
double bessel_y1(double x);

/// H0^(1)(z) = J0(z) + i Y0(z). Throws DomainError for z <= 0.
std::complex<double> hankel0_first_kind(double z);

} // namespace wavesift::special
