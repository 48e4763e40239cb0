#include "cpatom/specfun.hpp"

#include <boost/math/special_functions/bernoulli.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "cpatom/errors.hpp"

namespace cpatom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeam = 4.0;

double si_series(double x) {
    double x2 = x * x, term = x, sum = x;
    for (int k = 1; k < 60; ++k) {
        term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
        double add = term / (2.0 * k + 1.0);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

double ci_series(double x) {
    double x2 = x * x, term = 1.0, sum = 0.0;
    for (int k = 1; k < 60; ++k) {
        term *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
        double add = term / (2.0 * k);
        sum += add;
        if (std::abs(add) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return std::numbers::egamma + std::log(x) + sum;
}

// e^{z} E1(z) at z = ix by modified Lentz; equals g(x) - i f(x).
std::complex<double> expint_cf(double x) {
    using C = std::complex<double>;
    const double tiny = 1e-300;
    C b(1.0, x);
    C c(1.0 / tiny, 0.0);
    C d = 1.0 / b;
    C h = d;
    for (int i = 1; i < 100000; ++i) {
        double an = -double(i) * double(i);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        C del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return h;
    }
    throw NumericalError("auxiliary function continued fraction did not converge");
}

void check_positive(double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError(std::string(name) + ": argument must be positive and finite");
}

}  // namespace

double sine_integral(double x) {
    if (!std::isfinite(x)) {
        if (std::isnan(x)) throw DomainError("sine_integral: NaN argument");
        return x > 0 ? kPi / 2 : -kPi / 2;
    }
    double ax = std::abs(x);
    double s;
    if (ax <= kSeam) {
        s = si_series(ax);
    } else {
        auto h = expint_cf(ax);
        s = kPi / 2 - (-h.imag()) * std::cos(ax) - h.real() * std::sin(ax);
    }
    return x < 0 ? -s : s;
}

double cosine_integral(double x) {
    check_positive(x, "cosine_integral");
    if (x <= kSeam) return ci_series(x);
    auto h = expint_cf(x);
    return (-h.imag()) * std::sin(x) - h.real() * std::cos(x);
}

void aux_fg(double x, double& f, double& g) {
    check_positive(x, "aux_fg");
    if (x <= kSeam) {
        double ci = ci_series(x), rem = kPi / 2 - si_series(x);
        double sn = std::sin(x), cs = std::cos(x);
        f = ci * sn + rem * cs;
        g = -ci * cs + rem * sn;
        return;
    }
    auto h = expint_cf(x);
    f = -h.imag();
    g = h.real();
}

double aux_f(double x) {
    double f, g;
    aux_fg(x, f, g);
    return f;
}

double aux_g(double x) {
    double f, g;
    aux_fg(x, f, g);
    return g;
}

double thermal_coth_factor(double beta_bar, double Omega) {
    if (!(Omega > 0.0) || !std::isfinite(Omega))
        throw DomainError("thermal_coth_factor: Omega must be positive");
    if (std::isinf(beta_bar) && beta_bar > 0) return 1.0;
    if (!(beta_bar > 0.0)) throw DomainError("thermal_coth_factor: beta_bar must be positive");
    return 1.0 / std::tanh(0.5 * beta_bar * Omega);
}

namespace detail {

const std::array<double, 48>& coth_series() {
    static const std::array<double, 48> a = [] {
        std::array<double, 48> c{};
        // coth x - 1/x = sum_{n>=1} 2^{2n} B_{2n} x^{2n-1} / (2n)!
        for (int n = 1; 2 * n - 1 < 48; ++n) {
            double b = boost::math::bernoulli_b2n<double>(n);
            c[2 * n - 1] = std::ldexp(b, 2 * n) / std::tgamma(2.0 * n + 1.0);
        }
        return c;
    }();
    return a;
}

}  // namespace detail

}  // namespace cpatom
