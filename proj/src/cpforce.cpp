#include "cpatom/cpforce.hpp"

#include <boost/math/special_functions/bernoulli.hpp>
#include <cmath>
#include <numbers>

#include "cpatom/errors.hpp"
#include "cpatom/quadrature.hpp"

namespace cpatom {

namespace {

constexpr double kPi = std::numbers::pi;

void check_z(double z, const char* who) {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError(std::string(who) + ": z must be positive");
}

// Bracket B(x) = 4x + 6(1 - x^2/2) f + 6x g - x^3 g and B'(x) = x^2 - 2 - x^3 f.
// Above x = 60 the leading terms cancel and the asymptotic series is used.
constexpr double kBracketSeam = 60.0;

double bracket(double x) {
    if (x < kBracketSeam) {
        double f, g;
        aux_fg(x, f, g);
        return 4 * x + 6 * (1 - 0.5 * x * x) * f + 6 * x * g - x * x * x * g;
    }
    // sum_{k>=2} (-1)^k (2k)! / ((2k-3) x^{2k-3})
    double x2 = x * x, fact = 24.0, pw = x, sum = 0.0, last = 1e300;
    for (int k = 2; k < 40; ++k) {
        double term = (k % 2 ? -1.0 : 1.0) * fact / ((2 * k - 3) * pw);
        if (std::abs(term) > last) break;
        sum += term;
        last = std::abs(term);
        if (last < 1e-18 * std::abs(sum)) break;
        fact *= (2.0 * k + 1) * (2.0 * k + 2);
        pw *= x2;
    }
    return sum;
}

double bracket_prime(double x) {
    if (x < kBracketSeam) return x * x - 2 - x * x * x * aux_f(x);
    // sum_{k>=2} (-1)^{k+1} (2k)! / x^{2k-2}
    double x2 = x * x, fact = 24.0, pw = x2, sum = 0.0, last = 1e300;
    for (int k = 2; k < 40; ++k) {
        double term = (k % 2 ? 1.0 : -1.0) * fact / pw;
        if (std::abs(term) > last) break;
        sum += term;
        last = std::abs(term);
        if (last < 1e-18 * std::abs(sum)) break;
        fact *= (2.0 * k + 1) * (2.0 * k + 2);
        pw *= x2;
    }
    return sum;
}

// d^n/drho^n [exp(-a rho)/rho]
template <class T>
T exp_over_rho_deriv(const T& a, double rho, int n) {
    using std::exp;
    T poly(0.0);
    double nf = std::tgamma(n + 1.0);
    T apow(1.0);
    double jf = 1.0;
    for (int j = 0; j <= n; ++j) {
        if (j > 0) {
            apow = apow * a;
            jf *= j;
        }
        poly = poly + apow * (nf / jf / std::pow(rho, n - j + 1));
    }
    T e = exp(a * (-rho));
    return e * poly * (n % 2 ? -1.0 : 1.0);
}

double matsubara_sum(double z, const AtomParams& p, double beta, int n) {
    const double rho = 2 * z, W2 = p.Omega * p.Omega;
    const double delta = 2 * kPi / beta;
    auto h = [&](double xi) { return exp_over_rho_deriv(xi, rho, n) / (W2 + xi * xi); };

    const double needed = std::ceil(50.0 / (delta * rho)) + 2;
    double sum = 0.0;
    if (needed <= 200000) {
        for (long k = static_cast<long>(needed); k >= 1; --k) sum += h(k * delta);
        sum += 0.5 * h(0.0);
    } else {
        // Sum = (1/delta) * integral over [0, inf) + Euler-Maclaurin corrections. The
        // full integral is the vacuum force; the head of the sum is done explicitly.
        const long n0 = 4000;
        for (long k = n0 - 1; k >= 1; --k) sum += h(k * delta);
        sum += 0.5 * h(0.0);
        const double xi0 = n0 * delta;
        sum -= quad::integrate(h, 0.0, xi0, 1e-13) / delta;
        using J = Jet<double, 11>;
        J xi = J::variable(xi0);
        J hj = exp_over_rho_deriv(xi, rho, n) / (J(W2) + xi * xi);
        sum += 0.5 * hj.value();
        double dpow = delta, kfact = 2.0;
        for (int j = 1; j <= 5; ++j) {
            double b = boost::math::bernoulli_b2n<double>(j);
            sum -= b / kfact * dpow * hj.derivative(2 * j - 1);
            dpow *= delta * delta;
            kfact *= (2.0 * j + 1) * (2.0 * j + 2);
        }
        double vac = n == 3 ? cp_force_vacuum(z, p) : 0.5 * cp_force_vacuum_gradient(z, p);
        return vac + p.q * p.q / (kPi * beta * p.m) * sum;
    }
    return p.q * p.q / (kPi * beta * p.m) * sum;
}

}  // namespace

double static_polarizability(const AtomParams& p) {
    p.validate();
    return p.q * p.q / (4 * kPi * p.m * p.Omega * p.Omega);
}

double cp_force_retarded(double z, const AtomParams& p) {
    check_z(z, "cp_force_retarded");
    p.validate();
    const double W = p.Omega, x = 2 * W * z;
    const double s = std::sin(x), c = std::cos(x);
    const double z2 = z * z;
    return p.q * p.q / (128 * kPi * p.m * W) *
           (16 * W * W * W * s / z + 24 * W * W * c / z2 - 24 * W * s / (z2 * z) - 12 * c / (z2 * z2));
}

double cp_force_retarded_gradient(double z, const AtomParams& p) {
    check_z(z, "cp_force_retarded_gradient");
    p.validate();
    const double W = p.Omega, x = 2 * W * z;
    const double s = std::sin(x), c = std::cos(x);
    const double z2 = z * z, W2 = W * W;
    return p.q * p.q / (128 * kPi * p.m * W) *
           (32 * W2 * W2 * c / z - 64 * W2 * W * s / z2 - 96 * W2 * c / (z2 * z) + 96 * W * s / (z2 * z2) +
            48 * c / (z2 * z2 * z));
}

double cp_force_vacuum(double z, const AtomParams& p) {
    check_z(z, "cp_force_vacuum");
    p.validate();
    double z4 = z * z * z * z;
    return -p.q * p.q / (32 * kPi * kPi * p.m * p.Omega * z4) * bracket(2 * p.Omega * z);
}

double cp_force_vacuum_gradient(double z, const AtomParams& p) {
    check_z(z, "cp_force_vacuum_gradient");
    p.validate();
    double x = 2 * p.Omega * z, z4 = z * z * z * z;
    return -p.q * p.q / (32 * kPi * kPi * p.m * p.Omega) *
           (-4 * bracket(x) / (z4 * z) + 2 * p.Omega * bracket_prime(x) / z4);
}

double cp_force_dispersive(double z, const AtomParams& p) {
    return cp_force_vacuum(z, p) - cp_force_retarded(z, p);
}

ForceBreakdown cp_force_total(double z, const AtomParams& p) {
    ForceBreakdown b;
    b.z = z;
    b.f_cp1 = cp_force_retarded(z, p);
    // The two parts cancel to O(1/z) in the far field; the total comes from the smooth form.
    b.total = cp_force_vacuum(z, p);
    b.f_cp2 = b.total - b.f_cp1;
    return b;
}

double cp_force_near_asymptote(double z, const AtomParams& p) {
    check_z(z, "cp_force_near_asymptote");
    p.validate();
    return -3 * p.q * p.q / (32 * kPi * p.m * p.Omega * z * z * z * z);
}

double cp_force_far_asymptote(double z, const AtomParams& p) {
    check_z(z, "cp_force_far_asymptote");
    p.validate();
    return -3 * p.q * p.q / (8 * kPi * kPi * p.m * p.Omega * p.Omega * std::pow(z, 5));
}

double cp_force_high_temperature(double z, const AtomParams& p, double beta) {
    check_z(z, "cp_force_high_temperature");
    if (!(beta > 0.0)) throw DomainError("cp_force_high_temperature: beta must be positive");
    return -0.75 * static_polarizability(p) / (beta * z * z * z * z);
}

double cp_force_thermal_retarded(double z, const AtomParams& p, double beta_bar) {
    return thermal_coth_factor(beta_bar, p.Omega) * cp_force_retarded(z, p);
}

double cp_force_equilibrium(double z, const AtomParams& p, double beta, int derivative) {
    check_z(z, "cp_force_equilibrium");
    p.validate();
    if (!(beta > 0.0)) throw DomainError("cp_force_equilibrium: beta must be positive");
    if (std::isinf(beta)) return derivative ? cp_force_vacuum_gradient(z, p) : cp_force_vacuum(z, p);
    return derivative ? 2 * matsubara_sum(z, p, beta, 4) : matsubara_sum(z, p, beta, 3);
}

double cp_force_thermal_dispersive(double z, const AtomParams& p, double beta, const ThermalConfig& cfg) {
    cfg.validate();
    if (std::isinf(beta)) return cp_force_dispersive(z, p);
    return cp_force_equilibrium(z, p, beta) - thermal_coth_factor(beta, p.Omega) * cp_force_retarded(z, p);
}

ForceBreakdown cp_force_thermal(double z, const AtomParams& p, const ThermalConfig& t) {
    t.validate();
    ForceBreakdown b = cp_force_total(z, p);
    b.f_thermal_osc = (thermal_coth_factor(t.beta_bar, p.Omega) - 1.0) * b.f_cp1;
    if (std::isinf(t.beta)) {
        b.total += b.f_thermal_osc;
        return b;
    }
    double c = thermal_coth_factor(t.beta, p.Omega);
    double eq = cp_force_equilibrium(z, p, t.beta);
    b.f_thermal_field = (eq - c * b.f_cp1) - b.f_cp2;
    b.total = eq + (thermal_coth_factor(t.beta_bar, p.Omega) - c) * b.f_cp1;
    return b;
}

double cp_force_gradient(double z, const AtomParams& p, const ThermalConfig& t) {
    t.validate();
    double d1 = cp_force_retarded_gradient(z, p);
    double cb = thermal_coth_factor(t.beta_bar, p.Omega);
    if (std::isinf(t.beta)) return cp_force_vacuum_gradient(z, p) + (cb - 1.0) * d1;
    double c = thermal_coth_factor(t.beta, p.Omega);
    return cp_force_equilibrium(z, p, t.beta, 1) + (cb - c) * d1;
}

}  // namespace cpatom
