// Lag-integral evaluation of the image force, independent of the closed forms.
//
// With sigma~ = (rho^2 - s^2)/2 and rho = 2z, the force integrand reduces to
//   (q^2/(2 m Omega)) rho (s^2 + rho^2) [cos(Omega s) G_ret'''(sigma~) + sin(Omega s) G_H'''(sigma~)].
// The retarded part is supported on sigma~ = 0 and is evaluated as a boundary
// term in sigma~; the Hadamard part has a fourth-order pole at s = rho and is
// taken as a Hadamard finite part.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cpatom/cpforce.hpp"
#include "cpatom/errors.hpp"
#include "cpatom/jet.hpp"
#include "cpatom/quadrature.hpp"

namespace cpatom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kInnerOrder = 44;

// G_ret = delta(sigma~)/(4 pi): integral over s becomes -d^3/dsigma^3 [h(s)/s] at sigma~ = 0.
double retarded_boundary(double rho, const AtomParams& p) {
    using J = Jet<double, 3>;
    J sig = J::variable(0.0);
    J s = sqrt(J(rho * rho) - sig * 2.0);
    J h = (s * s + rho * rho) * cos(s * p.Omega) * rho / s;
    return -p.q * p.q / (8 * kPi * p.m * p.Omega) * h.derivative(3);
}

// Numerator phi(s) of the Hadamard integrand phi(s)/(s - rho)^4.
template <class X>
X hadamard_numerator(const X& s, double rho, const AtomParams& p) {
    using std::sin;
    const double pref = p.q * p.q / (2 * p.m * p.Omega) * (-24.0 / (kPi * kPi));
    X d = s + rho;
    X d2 = d * d;
    return (s * s + rho * rho) * sin(s * p.Omega) * (pref * rho) / (d2 * d2);
}

// Finite part of the integral of Taylor terms a_j u^{j-4} over [-h, h].
double inner_finite_part(double rho, double h, const AtomParams& p) {
    using J = Jet<double, kInnerOrder>;
    J phi = hadamard_numerator(J::variable(rho), rho, p);
    double sum = phi.c[0] * (-2.0 / (3 * h * h * h)) + phi.c[2] * (-2.0 / h);
    for (int j = 4; j <= kInnerOrder; j += 2) sum += phi.c[j] * 2.0 * std::pow(h, j - 3) / (j - 3);
    return sum;
}

double vacuum_hadamard(double rho, double tau, const AtomParams& p, double tol) {
    auto integrand = [&](double s) {
        double u = s - rho;
        return hadamard_numerator(s, rho, p) / (u * u * u * u);
    };
    // A rough scale for the convergence tests: the near-pole contribution.
    const double scale = std::abs(p.q * p.q / (p.m * p.Omega) / std::pow(rho, 4)) * 1e-3;
    if (tau <= rho) {
        if (std::abs(tau - rho) <= 1e-12 * rho)
            throw PoleError("quadrature oracle: elapsed time on the light-bounce pole");
        return quad::integrate(integrand, 0.0, tau, tol, scale);
    }
    const double h = std::min({0.5 * rho, 1.0 / p.Omega, tau - rho});
    double sum = quad::integrate(integrand, 0.0, rho - h, tol, scale);
    sum += inner_finite_part(rho, h, p);
    if (std::isinf(tau)) {
        double start = rho + h;
        double half = kPi / p.Omega;
        double first_zero = std::ceil(start / half) * half;
        sum += quad::integrate(integrand, start, first_zero, tol, scale);
        sum += quad::oscillatory_tail(integrand, first_zero, half, tol, scale);
    } else {
        sum += quad::integrate(integrand, rho + h, tau, tol, scale);
    }
    return sum;
}

// d^3/drho^3 of the thermal part of the Hadamard function; smooth in s.
double thermal_excess_d3(double s, double rho, double beta) {
    return detail::hadamard_radial_excess<double, 3>(s, rho, beta).derivative(3);
}

double thermal_hadamard_correction(double rho, double tau, double beta, const AtomParams& p, double tol) {
    const double pref = p.q * p.q / (p.m * p.Omega);
    auto integrand = [&](double s) { return std::sin(p.Omega * s) * thermal_excess_d3(s, rho, beta); };
    const double scale = std::abs(pref / std::pow(rho, 4)) * 1e-3;
    std::vector<double> pts{0.0};
    for (double k : {-16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0}) {
        double x = rho + k * beta;
        if (x > 0.0) pts.push_back(x);
    }
    double end = rho + 16 * beta;
    if (!std::isinf(tau)) {
        std::vector<double> kept;
        for (double x : pts)
            if (x < tau) kept.push_back(x);
        kept.push_back(tau);
        return pref * quad::integrate_pieces(integrand, kept, tol, scale);
    }
    pts.push_back(end);
    double sum = quad::integrate_pieces(integrand, pts, tol, scale);
    double half = kPi / p.Omega;
    double first_zero = std::ceil(end / half) * half;
    sum += quad::integrate(integrand, end, first_zero, tol, scale);
    sum += quad::oscillatory_tail(integrand, first_zero, half, tol, scale);
    return pref * sum;
}

double hadamard_part(double z, double tau, const AtomParams& p, double beta, double tol) {
    double rho = 2 * z;
    double v = vacuum_hadamard(rho, tau, p, tol);
    if (!std::isinf(beta)) v += thermal_hadamard_correction(rho, tau, beta, p, tol);
    return v;
}

}  // namespace

ForceBreakdown cp_force_quadrature_oracle(double z, double tau, const AtomParams& p,
                                          const ThermalConfig& thermal, const OracleOptions& opt) {
    if (!(z > 0.0)) throw DomainError("cp_force_quadrature_oracle: z must be positive");
    if (!(tau > 0.0)) throw DomainError("cp_force_quadrature_oracle: tau must be positive");
    p.validate();
    thermal.validate();
    const double rho = 2 * z;
    ForceBreakdown b;
    b.z = z;
    if (tau > rho) b.f_cp1 = retarded_boundary(rho, p);
    b.f_thermal_osc = (thermal_coth_factor(thermal.beta_bar, p.Omega) - 1.0) * b.f_cp1;
    b.f_cp2 = hadamard_part(z, tau, p, kInf, opt.rel_tol);
    if (!std::isinf(thermal.beta))
        b.f_thermal_field = thermal_hadamard_correction(rho, tau, thermal.beta, p, opt.rel_tol);
    b.total = b.f_cp1 + b.f_cp2 + b.f_thermal_osc + b.f_thermal_field;
    return b;
}

double cp_force_thermal_dispersive_quadrature(double z, const AtomParams& p, double beta,
                                              const ThermalConfig& cfg) {
    if (!(z > 0.0)) throw DomainError("cp_force_thermal_dispersive_quadrature: z must be positive");
    if (!(beta > 0.0)) throw DomainError("cp_force_thermal_dispersive_quadrature: beta must be positive");
    p.validate();
    cfg.validate();
    return hadamard_part(z, kInf, p, beta, 1e-11);
}

}  // namespace cpatom
