#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "cpatom/jet.hpp"

namespace cpatom {

double sine_integral(double x);
double cosine_integral(double x);

// Auxiliary functions of the sine and cosine integrals:
//   f = Ci sin x + (pi/2 - Si) cos x,  g = -Ci cos x + (pi/2 - Si) sin x.
double aux_f(double x);
double aux_g(double x);
void aux_fg(double x, double& f, double& g);

// coth(beta_bar * Omega / 2); exactly 1 for infinite beta_bar.
double thermal_coth_factor(double beta_bar, double Omega);

namespace detail {

// Odd power series coefficients of coth(x) - 1/x, usable for |x| < 1.
const std::array<double, 48>& coth_series();

template <class S>
S coth_minus_inv(S x) {
    using std::abs;
    using std::exp;
    using std::real;
    if (abs(x) < 1.0) {
        const auto& a = coth_series();
        S r(0.0);
        for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * x + S(*it);
        return r;
    }
    double sgn = real(x) >= 0 ? 1.0 : -1.0;
    S e = exp(x * S(-2.0 * sgn));
    return S(sgn) * (S(1.0) + e) / (S(1.0) - e) - S(1.0) / x;
}

template <class T, int N>
Jet<T, N> coth_minus_inv(const Jet<T, N>& x) {
    using std::abs;
    using std::real;
    if (abs(x.value()) < 1.0) {
        const auto& a = coth_series();
        Jet<T, N> r;
        for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * x + T(*it);
        return r;
    }
    double sgn = real(x.value()) >= 0 ? 1.0 : -1.0;
    Jet<T, N> e = exp(x * T(-2.0 * sgn));
    Jet<T, N> one(T(1.0));
    return (one + e) / (one - e) * T(sgn) - one / x;
}

// coth(x) - sign(Re x), accurate when |x| is not small.
template <class X>
X coth_minus_sign(const X& x, double sgn) {
    using std::exp;
    X e = exp(x * (-2.0 * sgn));
    return e * (2.0 * sgn) / (1.0 - e);
}

}  // namespace detail

}  // namespace cpatom
