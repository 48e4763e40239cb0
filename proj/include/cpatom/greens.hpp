#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "cpatom/jet.hpp"
#include "cpatom/specfun.hpp"

namespace cpatom {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SpacetimePoint {
    double t = 0, x = 0, y = 0, z = 0;
};

struct AtomParams {
    double q = 1.0;
    double m = 1.0;
    double Omega = 1.0;
    double M = 1.0;
    void validate() const;
};

struct ThermalConfig {
    double beta = kInf;
    double beta_bar = kInf;
    int k_max = 64;
    double sum_tol = 1e-10;
    void validate() const;
};

// Half the squared interval, signature (-,+,+,+).
double worldfunction(const SpacetimePoint& a, const SpacetimePoint& b);
double image_worldfunction(const SpacetimePoint& a, const SpacetimePoint& b);

// Symmetric two-point function of a massless scalar in the vacuum.
double hadamard_vacuum(double dt, double r);

// Imaginary-time image sum over k in [-k_max, k_max] with an analytic tail correction.
double hadamard_thermal(double dt, double r, double beta, const ThermalConfig& cfg);

double oscillator_g_ret(double s, const AtomParams& p);
double oscillator_g_h(double s, const AtomParams& p, double beta_bar);

// Image part of the symmetric E-field correlator for two points at height z, lag s.
Eigen::Matrix3d efield_image_correlator(double z, double s, double beta, const ThermalConfig& cfg);

// Same, with the lag shifted to s - i eps and the real part taken.
Eigen::Matrix3d efield_image_correlator_regularized(double z, double s, double eps, double beta);

namespace detail {

// Jet in rho of the Hadamard function G(s, rho); vacuum when beta is infinite,
// otherwise the resummed thermal form
//   (1/(4 pi beta rho)) [coth(pi (rho+s)/beta) + coth(pi (rho-s)/beta)].
template <class T, int N>
Jet<T, N> hadamard_radial_vacuum(T s, double rho) {
    using J = Jet<T, N>;
    constexpr double pi = std::numbers::pi;
    J r = J::variable(T(rho));
    return T(1.0 / (2 * pi * pi)) / (r * r - J(s * s));
}

// Thermal minus vacuum; smooth across the light cone.
template <class T, int N>
Jet<T, N> hadamard_radial_excess(T s, double rho, double beta) {
    using J = Jet<T, N>;
    using std::abs;
    using std::real;
    constexpr double pi = std::numbers::pi;
    J r = J::variable(T(rho));
    T a(pi / beta);
    J x = (r + s) * a, y = (r - s) * a;
    J norm = r * T(4 * pi * beta);
    if (abs(x.value()) >= 1.0 && abs(y.value()) >= 1.0) {
        // Away from the light cone the 1/x parts of both coth terms equal the vacuum term.
        double sx = real(x.value()) >= 0 ? 1.0 : -1.0;
        double sy = real(y.value()) >= 0 ? 1.0 : -1.0;
        J e = coth_minus_sign(x, sx) + coth_minus_sign(y, sy) + T(sx + sy);
        return e / norm - hadamard_radial_vacuum<T, N>(s, rho);
    }
    return (coth_minus_inv(x) + coth_minus_inv(y)) / norm;
}

template <class T, int N>
Jet<T, N> hadamard_radial(T s, double rho, double beta) {
    using J = Jet<T, N>;
    using std::abs;
    using std::real;
    constexpr double pi = std::numbers::pi;
    if (std::isinf(beta)) return hadamard_radial_vacuum<T, N>(s, rho);
    J r = J::variable(T(rho));
    T a(pi / beta);
    J x = (r + s) * a, y = (r - s) * a;
    if (abs(x.value()) >= 1.0 && abs(y.value()) >= 1.0) {
        double sx = real(x.value()) >= 0 ? 1.0 : -1.0;
        double sy = real(y.value()) >= 0 ? 1.0 : -1.0;
        J e = coth_minus_sign(x, sx) + coth_minus_sign(y, sy) + T(sx + sy);
        return e / (r * T(4 * pi * beta));
    }
    return hadamard_radial_vacuum<T, N>(s, rho) + hadamard_radial_excess<T, N>(s, rho, beta);
}

// Shift a jet by one derivative; the top coefficient is left zero.
template <class T, int N>
Jet<T, N> d_dx(const Jet<T, N>& j) {
    Jet<T, N> d;
    for (int k = 0; k < N; ++k) d.c[k] = T(double(k + 1)) * j.c[k + 1];
    return d;
}

}  // namespace detail

}  // namespace cpatom
