#include "helmbem/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace helmbem::specfun {
namespace {

#include "specfun_coeffs.inc"

constexpr double kTwoOverPi = 0.6366197723675814;
constexpr double kPi = 3.141592653589793;

template <std::size_t N>
double cheb(const double (&c)[N], double t) {
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = N - 1; k >= 1; --k) {
        const double b0 = 2.0 * t * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

struct Cyl01 {
    double j0, y0, j1, y1;
};

// J0, Y0, J1, Y1 at once.  want_y lets pure-J callers skip the log.
Cyl01 cyl01(double z, bool want_y) {
    Cyl01 r{};
    if (z <= 8.0) {
        const double t = z * z / 32.0 - 1.0;
        r.j0 = cheb(kA0, t);
        r.j1 = z * cheb(kA1, t);
        if (want_y) {
            const double lg = kTwoOverPi * std::log(z / 2.0);
            r.y0 = lg * r.j0 + cheb(kV0, t);
            r.y1 = lg * r.j1 - kTwoOverPi / z + z * cheb(kV1, t);
        }
    } else {
        const double u = 8.0 / z;
        const double s = 2.0 * u * u - 1.0;
        const double p0 = cheb(kP0, s);
        const double q0 = u * cheb(kQ0R, s);
        const double p1 = cheb(kP1, s);
        const double q1 = u * cheb(kQ1R, s);
        const double f = std::sqrt(2.0 / (kPi * z));
        const double c = std::cos(z - kPi / 4.0);
        const double sn = std::sin(z - kPi / 4.0);
        // chi_1 = chi_0 - pi/2, so cos chi_1 = sin chi_0, sin chi_1 = -cos chi_0
        r.j0 = f * (p0 * c - q0 * sn);
        r.y0 = f * (p0 * sn + q0 * c);
        r.j1 = f * (p1 * sn + q1 * c);
        r.y1 = f * (-p1 * c + q1 * sn);
    }
    return r;
}

void check_order(int n) {
    if (n > 60 || n < -60)
        throw std::domain_error("bessel order out of supported range |n| <= 60: n = " +
                                std::to_string(n));
}

double bessel_j_nonneg(int n, double z) {
    if (z == 0.0) return n == 0 ? 1.0 : 0.0;
    const Cyl01 low = cyl01(z, false);
    if (n == 0) return low.j0;
    if (n == 1) return low.j1;
    if (static_cast<double>(n) <= z) {
        // upward recurrence; stable in the oscillatory regime n <= z
        double jm = low.j0, jc = low.j1;
        for (int k = 1; k < n; ++k) {
            const double jp = 2.0 * k / z * jc - jm;
            jm = jc;
            jc = jp;
        }
        return jc;
    }
    // Miller's normalised downward recurrence
    const int start = n + static_cast<int>(std::ceil(std::sqrt(160.0 * n))) + 16;
    double jp = 0.0;
    double jc = 1e-300;
    double sum = (start % 2 == 0) ? 2.0 * jc : 0.0;
    double jn = 0.0;
    for (int k = start; k >= 1; --k) {
        double jm = 2.0 * k / z * jc - jp;
        jp = jc;
        jc = jm;
        if (std::abs(jc) > 1e250) {
            jc *= 1e-250;
            jp *= 1e-250;
            sum *= 1e-250;
            jn *= 1e-250;
        }
        const int order = k - 1;
        if (order == n) jn = jc;
        if (order % 2 == 0) sum += (order == 0) ? jc : 2.0 * jc;
    }
    return jn / sum;  // normalisation: J_0 + 2 sum_{k>=1} J_{2k} = 1
}

}  // namespace

double j0(double z) { return cyl01(z, false).j0; }
double j1(double z) { return cyl01(z, false).j1; }
double y0(double z) { return cyl01(z, true).y0; }
double y1(double z) { return cyl01(z, true).y1; }

double bessel_j(int n, double z) {
    check_order(n);
    if (z < 0.0) throw std::domain_error("bessel_j requires z >= 0");
    if (n >= 0) return bessel_j_nonneg(n, z);
    const double v = bessel_j_nonneg(-n, z);
    return (n % 2 == 0) ? v : -v;
}

double bessel_y(int n, double z) {
    check_order(n);
    if (z <= 0.0) throw std::domain_error("bessel_y requires z > 0");
    const bool negate = (n < 0) && (n % 2 != 0);
    n = std::abs(n);
    const Cyl01 low = cyl01(z, true);
    double v;
    if (n == 0) {
        v = low.y0;
    } else if (n == 1) {
        v = low.y1;
    } else {
        double ym = low.y0, yc = low.y1;
        for (int k = 1; k < n; ++k) {
            const double yp = 2.0 * k / z * yc - ym;
            ym = yc;
            yc = yp;
        }
        v = yc;
    }
    return negate ? -v : v;
}

std::complex<double> hankel1(int n, double z) {
    if (n != 0 && n != 1)
        throw std::domain_error("hankel1 supports orders 0 and 1 only");
    if (z <= 0.0) throw std::domain_error("hankel1 requires z > 0");
    const Cyl01 v = cyl01(z, true);
    return n == 0 ? std::complex<double>{v.j0, v.y0}
                  : std::complex<double>{v.j1, v.y1};
}

void hankel1_01(double z, std::complex<double>& h0, std::complex<double>& h1) {
    const Cyl01 v = cyl01(z, true);
    h0 = {v.j0, v.y0};
    h1 = {v.j1, v.y1};
}

}  // namespace helmbem::specfun
