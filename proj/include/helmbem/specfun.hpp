#pragma once

#include <complex>

namespace helmbem::specfun {

/// Euler-Mascheroni constant, 16 significant digits.
inline constexpr double kEulerGamma = 0.5772156649015329;

/// Bessel function of the first kind, J_n(z).
///
/// Valid for z >= 0 and |n| <= 60.  Orders 0 and 1 are evaluated from
/// Chebyshev fits (power-series regime for z <= 8, amplitude/phase form
/// beyond); higher orders use upward recurrence when z >= n and Miller's
/// normalised downward recurrence otherwise.  Negative orders map through
/// J_{-n} = (-1)^n J_n.
double bessel_j(int n, double z);

/// Bessel function of the second kind, Y_n(z), for z > 0, |n| <= 60.
/// Y_0, Y_1 from Chebyshev fits, higher orders by upward recurrence
/// (stable: Y is the dominant solution).  Throws std::domain_error for
/// z <= 0.  Values that exceed the double range for extreme (n, z)
/// combinations overflow to infinity.
double bessel_y(int n, double z);

/// Hankel function of the first kind, H_n^(1)(z) = J_n(z) + i Y_n(z),
/// orders 0 and 1 only.  Throws std::domain_error for z <= 0.
std::complex<double> hankel1(int n, double z);

/// H_0^(1)(z) and H_1^(1)(z) in a single call; the kernel-evaluation hot
/// path (shares one log/sincos between the four underlying functions).
void hankel1_01(double z, std::complex<double>& h0, std::complex<double>& h1);

// Low-order values, exposed so the switch-point continuity of the
// underlying approximations can be scanned directly.
double j0(double z);
double y0(double z);
double j1(double z);
double y1(double z);

}  // namespace helmbem::specfun
