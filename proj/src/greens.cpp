#include "cpatom/greens.hpp"

#include <boost/math/special_functions/polygamma.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "cpatom/errors.hpp"

namespace cpatom {

namespace {

constexpr double kPi = std::numbers::pi;

bool positive_or_inf(double v) { return v > 0.0 && !std::isnan(v); }

}  // namespace

void AtomParams::validate() const {
    auto ok = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!ok(q) || !ok(m) || !ok(Omega) || !ok(M))
        throw DomainError("atom parameters q, m, Omega, M must be positive and finite");
}

void ThermalConfig::validate() const {
    if (!positive_or_inf(beta)) throw DomainError("thermal.beta must be positive or inf");
    if (!positive_or_inf(beta_bar)) throw DomainError("thermal.beta_bar must be positive or inf");
    if (k_max < 1) throw DomainError("thermal.k_max must be >= 1");
    if (!(sum_tol > 0.0)) throw DomainError("thermal.sum_tol must be positive");
}

double worldfunction(const SpacetimePoint& a, const SpacetimePoint& b) {
    double dt = a.t - b.t, dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return 0.5 * (-dt * dt + dx * dx + dy * dy + dz * dz);
}

double image_worldfunction(const SpacetimePoint& a, const SpacetimePoint& b) {
    return worldfunction(a, b) + 2.0 * a.z * b.z;
}

double hadamard_vacuum(double dt, double r) {
    double d = r * r - dt * dt;
    if (d == 0.0 || std::abs(r - std::abs(dt)) <= 4 * std::numeric_limits<double>::epsilon() * r)
        throw PoleError("hadamard_vacuum: evaluation on the light cone");
    return 1.0 / (2 * kPi * kPi * d);
}

double hadamard_thermal(double dt, double r, double beta, const ThermalConfig& cfg) {
    if (std::isinf(beta) && beta > 0) return hadamard_vacuum(dt, r);
    if (!positive_or_inf(beta)) throw DomainError("hadamard_thermal: beta must be positive");
    cfg.validate();
    const int K = cfg.k_max;
    double sum = hadamard_vacuum(dt, r);
    double pairs = 0.0;
    for (int k = K; k >= 1; --k) {
        std::complex<double> w(dt, k * beta);
        pairs += std::real(1.0 / (r * r - w * w));
    }
    sum += pairs / (kPi * kPi);

    // Pair terms expand as (1/pi^2)[1/(kb)^2 - c4/(kb)^4 + c6/(kb)^6 - ...].
    double s2 = dt * dt, A = r * r - s2;
    double c4 = r * r + 3 * s2;
    double c6 = A * A + 12 * A * s2 + 16 * s2 * s2;
    double x = K + 1.0;
    double b2 = beta * beta;
    using boost::math::polygamma;
    double tail = polygamma(1, x) / b2 - c4 * polygamma(3, x) / (6 * b2 * b2) +
                  c6 * polygamma(5, x) / (120 * b2 * b2 * b2);
    sum += tail / (kPi * kPi);

    double reach = (r + std::abs(dt)) / (K * beta);
    double bound = 4 * c4 * c4 * c4 / (7 * std::pow(double(K), 7) * std::pow(beta, 8) * kPi * kPi);
    if (reach > 0.5 || bound > cfg.sum_tol)
        throw TruncationError("hadamard_thermal: image sum not converged at k_max=" +
                              std::to_string(K) + " (tail bound " + std::to_string(bound) +
                              ", (r+|dt|)/(k_max beta)=" + std::to_string(reach) + ")");
    return sum;
}

double oscillator_g_ret(double s, const AtomParams& p) {
    if (s <= 0.0) return 0.0;
    return std::sin(p.Omega * s) / (p.m * p.Omega);
}

double oscillator_g_h(double s, const AtomParams& p, double beta_bar) {
    return thermal_coth_factor(beta_bar, p.Omega) * std::cos(p.Omega * s) / (p.m * p.Omega);
}

namespace {

template <class T>
Eigen::Matrix3d correlator_from_radial(T s, double z, double beta) {
    auto G = detail::hadamard_radial<T, 3>(s, 2 * z, beta);
    double rho = 2 * z;
    double g1 = std::real(G.derivative(1));
    double g2 = std::real(G.derivative(2));
    Eigen::Matrix3d K = Eigen::Matrix3d::Zero();
    K(0, 0) = K(1, 1) = g2 + g1 / rho;
    K(2, 2) = -2 * g1 / rho;
    return K;
}

}  // namespace

Eigen::Matrix3d efield_image_correlator(double z, double s, double beta, const ThermalConfig& cfg) {
    if (!(z > 0.0)) throw DomainError("efield_image_correlator: z must be positive");
    if (!positive_or_inf(beta)) throw DomainError("efield_image_correlator: beta must be positive");
    cfg.validate();
    double rho = 2 * z;
    if (std::abs(std::abs(s) - rho) <= 1e-14 * rho)
        throw PoleError("efield_image_correlator: lag on the light-bounce pole s = 2z");
    return correlator_from_radial<double>(s, z, beta);
}

Eigen::Matrix3d efield_image_correlator_regularized(double z, double s, double eps, double beta) {
    if (!(z > 0.0)) throw DomainError("efield_image_correlator_regularized: z must be positive");
    if (!(eps > 0.0)) throw DomainError("efield_image_correlator_regularized: eps must be positive");
    if (!positive_or_inf(beta)) throw DomainError("efield_image_correlator_regularized: beta must be positive");
    return correlator_from_radial<std::complex<double>>(std::complex<double>(s, -eps), z, beta);
}

}  // namespace cpatom
