#include "cpatom/noise.hpp"

#include <cmath>
#include <complex>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <numbers>
#include <ostream>

#include "cpatom/errors.hpp"

namespace cpatom {

namespace {

constexpr double kPi = std::numbers::pi;
using C = std::complex<double>;

template <class T>
Eigen::Vector3d field_factor(T s, double z, double beta) {
    using J = Jet<T, 5>;
    const double rho = 2 * z;
    J G = detail::hadamard_radial<T, 5>(s, rho, beta);
    J r = J::variable(T(rho));
    J gr = detail::d_dx(G) / r;
    double fzz = 2 * std::real(G.derivative(4));
    double fxx = -2 * std::real(gr.derivative(2));
    return {fxx, fxx, fzz};
}

double noise_prefactor(const AtomParams& p) { return 0.5 * p.q * p.q; }

}  // namespace

std::string to_string(NoiseModel m) {
    return m == NoiseModel::LagResolved ? "lag_resolved" : "quasi_static";
}

NoiseModel noise_model_from_string(const std::string& s) {
    if (s == "lag_resolved") return NoiseModel::LagResolved;
    if (s == "quasi_static") return NoiseModel::QuasiStatic;
    throw UsageError("unknown noise model '" + s + "' (expected lag_resolved or quasi_static)");
}

void TimeGrid::validate(double z, const AtomParams& p) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("grid.dt must be positive");
    if (n < 2) throw DomainError("grid.n must be at least 2");
    double limit = std::min(2 * kPi / p.Omega, 2 * z) / 20.0;
    if (dt > limit * (1 + 1e-12))
        throw DomainError(fmt::format("grid.dt = {:g} does not resolve the oscillator period and bounce time "
                                      "(need dt <= {:g})",
                                      dt, limit));
}

Eigen::Vector3d image_field_factor(double z, double s, double eps, double beta) {
    if (!(z > 0.0)) throw DomainError("image_field_factor: z must be positive");
    if (!(beta > 0.0)) throw DomainError("image_field_factor: beta must be positive");
    if (eps > 0.0) return field_factor<C>(C(s, -eps), z, beta);
    if (std::abs(std::abs(s) - 2 * z) <= 1e-14 * z)
        throw PoleError("image_field_factor: lag on the light-bounce pole s = 2z");
    return field_factor<double>(s, z, beta);
}

Eigen::Matrix3d noise_correlation(double z, double s, const AtomParams& p, const ThermalConfig& thermal) {
    p.validate();
    thermal.validate();
    Eigen::Vector3d f = image_field_factor(z, s, 0.0, thermal.beta);
    return (noise_prefactor(p) * oscillator_g_h(s, p, thermal.beta_bar) * f).asDiagonal();
}

Eigen::Matrix3d noise_correlation_regularized(double z, double s, double eps, const AtomParams& p,
                                              const ThermalConfig& thermal) {
    p.validate();
    thermal.validate();
    if (!(eps > 0.0)) throw DomainError("noise_correlation_regularized: eps must be positive");
    Eigen::Vector3d f = image_field_factor(z, s, eps, thermal.beta);
    return (noise_prefactor(p) * oscillator_g_h(s, p, thermal.beta_bar) * f).asDiagonal();
}

Eigen::Matrix3d noise_correlation_free_space(double s, double uv_eps, const AtomParams& p, double beta_bar) {
    p.validate();
    if (!(uv_eps > 0.0)) throw DomainError("noise_correlation_free_space: uv_eps must be positive");
    // G(s, 0) = -1/(2 pi^2 (s - i eps)^2); each axis gets (2/3) d^4 G / ds^4.
    C w(s, -uv_eps);
    C w2 = w * w;
    double g4 = std::real(-120.0 / (2 * kPi * kPi * w2 * w2 * w2));
    double v = noise_prefactor(p) * oscillator_g_h(s, p, beta_bar) * (2.0 / 3.0) * g4;
    return Eigen::Vector3d::Constant(v).asDiagonal();
}

Eigen::Matrix3d model_correlation(double z, double s, NoiseModel model, double eps, const AtomParams& p,
                                  const ThermalConfig& thermal) {
    if (model == NoiseModel::LagResolved) return noise_correlation_regularized(z, s, eps, p, thermal);
    p.validate();
    thermal.validate();
    Eigen::Vector3d f0 = image_field_factor(z, 0.0, eps, thermal.beta);
    return (noise_prefactor(p) * oscillator_g_h(s, p, thermal.beta_bar) * f0).asDiagonal();
}

Eigen::MatrixXd NoiseCovariance::matrix() const {
    if (!dense()) throw NumericalError("covariance matrix not assembled for this grid size");
    const long n = grid.n;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    for (int k = 0; k < 3; ++k)
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) m(3 * i + k, 3 * j + k) = axis_matrix[k](i, j);
    return m;
}

NoiseCovariance analyze_covariance(double z, const TimeGrid& grid, const AtomParams& p,
                                   const ThermalConfig& thermal, const NoiseOptions& opt) {
    if (!(z > 0.0)) throw DomainError("build_covariance: z must be positive");
    p.validate();
    thermal.validate();
    grid.validate(z, p);
    NoiseCovariance cov;
    cov.grid = grid;
    cov.z = z;
    cov.model = opt.model;
    cov.eps = opt.effective_eps(grid);
    cov.eig_floor = opt.eig_floor;
    const long n = grid.n;
    const bool dense = n <= opt.dense_limit;
    if (opt.model == NoiseModel::LagResolved && !dense)
        throw NumericalError(fmt::format("lag-resolved covariance needs a dense factorization; n = {} exceeds "
                                         "dense_limit = {}",
                                         n, opt.dense_limit));

    const double pref = noise_prefactor(p);
    Eigen::Vector3d f0 = image_field_factor(z, 0.0, cov.eps, thermal.beta);
    cov.blocks.resize(n);
    for (long k = 0; k < n; ++k) {
        double s = grid.dt * double(k);
        if (opt.model == NoiseModel::LagResolved)
            cov.blocks[k] = noise_correlation_regularized(z, s, cov.eps, p, thermal);
        else
            cov.blocks[k] = (pref * oscillator_g_h(s, p, thermal.beta_bar) * f0).asDiagonal();
    }

    if (opt.model == NoiseModel::QuasiStatic) {
        // cos(W(t_i - t_j)) = cos W t_i cos W t_j + sin W t_i sin W t_j: rank two per axis.
        const double amp0 = pref * thermal_coth_factor(thermal.beta_bar, p.Omega) / (p.m * p.Omega);
        for (int k = 0; k < 3; ++k) {
            double A = amp0 * f0[k];
            Eigen::MatrixXd L(n, 2);
            double sa = std::sqrt(std::max(A, 0.0));
            for (long i = 0; i < n; ++i) {
                double t = grid.time(i);
                L(i, 0) = sa * std::cos(p.Omega * t);
                L(i, 1) = sa * std::sin(p.Omega * t);
            }
            cov.factor[k] = std::move(L);
        }
    }

    if (!dense) {
        double amp0 = pref * thermal_coth_factor(thermal.beta_bar, p.Omega) / (p.m * p.Omega);
        double lo = std::min(0.0, amp0 * f0.minCoeff()) * n, hi = amp0 * f0.maxCoeff() * n;
        cov.min_eigenvalue = lo;
        cov.max_eigenvalue = hi;
        double trace = amp0 * f0.sum() * n;
        double neg = 0.0;
        for (int k = 0; k < 3; ++k) neg += std::max(0.0, -amp0 * f0[k] * n);
        cov.clipped_mass = trace != 0.0 ? neg / std::abs(trace) : 0.0;
        return cov;
    }

    double trace = 0.0, clipped = 0.0;
    cov.min_eigenvalue = std::numeric_limits<double>::infinity();
    cov.max_eigenvalue = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        if (k == 1) {
            // The transverse axes share one generating function.
            cov.axis_matrix[1] = cov.axis_matrix[0];
            if (opt.model == NoiseModel::LagResolved) cov.factor[1] = cov.factor[0];
            trace += cov.axis_matrix[0].trace();
            continue;
        }
        Eigen::MatrixXd T(n, n);
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) T(i, j) = cov.blocks[std::labs(i - j)](k, k);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        if (es.info() != Eigen::Success) throw NumericalError("covariance eigendecomposition failed");
        const Eigen::VectorXd& lam = es.eigenvalues();
        const Eigen::MatrixXd& V = es.eigenvectors();
        double lmax = lam.maxCoeff(), lmin = lam.minCoeff();
        cov.min_eigenvalue = std::min(cov.min_eigenvalue, lmin);
        cov.max_eigenvalue = std::max(cov.max_eigenvalue, lmax);
        double mult = (k == 0) ? 2.0 : 1.0;
        trace += mult * T.trace();
        Eigen::VectorXd lp = lam.cwiseMax(0.0);
        clipped += mult * (lp - lam).sum();
        cov.axis_matrix[k] = V * lp.asDiagonal() * V.transpose();
        if (opt.model == NoiseModel::LagResolved) {
            double cut = opt.eig_floor * std::max(lmax, 0.0);
            std::vector<long> keep;
            for (long i = 0; i < n; ++i)
                if (lam[i] > cut) keep.push_back(i);
            Eigen::MatrixXd L(n, static_cast<long>(keep.size()));
            for (size_t c = 0; c < keep.size(); ++c) L.col(c) = V.col(keep[c]) * std::sqrt(lam[keep[c]]);
            cov.factor[k] = std::move(L);
        }
    }
    cov.clipped_mass = trace != 0.0 ? clipped / std::abs(trace) : 0.0;
    return cov;
}

NoiseCovariance build_covariance(double z, const TimeGrid& grid, const AtomParams& p,
                                 const ThermalConfig& thermal, const NoiseOptions& opt) {
    NoiseCovariance cov = analyze_covariance(z, grid, p, thermal, opt);
    if (cov.clipped_mass > 0.01)
        throw IllConditionedError(fmt::format(
            "noise covariance is ill-conditioned: clipped mass {:.3g} of trace (min eigenvalue {:.3g}, max "
            "{:.3g}); change the grid or the regularization width",
            cov.clipped_mass, cov.min_eigenvalue, cov.max_eigenvalue));
    return cov;
}

std::mt19937_64 trajectory_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index),
                      std::uint32_t(index >> 32)};
    return std::mt19937_64(seq);
}

void sample_noise_into(const NoiseCovariance& cov, std::mt19937_64& rng, NoiseRealization& out) {
    std::normal_distribution<double> normal;
    for (int k = 0; k < 3; ++k) {
        const Eigen::MatrixXd& L = cov.factor[k];
        Eigen::VectorXd xi(L.cols());
        for (long c = 0; c < L.cols(); ++c) xi[c] = normal(rng);
        Eigen::VectorXd v = L * xi;
        out[k].assign(v.data(), v.data() + v.size());
    }
}

std::vector<NoiseRealization> sample_noise(const NoiseCovariance& cov, std::uint64_t seed, long count) {
    if (count < 0) throw DomainError("sample_noise: count must be nonnegative");
    for (const auto& L : cov.factor)
        if (L.rows() != cov.grid.n) throw NumericalError("sample_noise: covariance has no factorization");
    std::vector<NoiseRealization> out(count);
    for (long i = 0; i < count; ++i) {
        auto rng = trajectory_stream(seed, std::uint64_t(i));
        sample_noise_into(cov, rng, out[i]);
    }
    return out;
}

void write_covariance_csv(std::ostream& os, const NoiseCovariance& cov) {
    fmt::print(os, "# noise covariance, row-major, index 3*i+axis\n");
    fmt::print(os, "# z={:.17g} t0={:.17g} dt={:.17g} n={} model={} eps={:.17g}\n", cov.z, cov.grid.t0,
               cov.grid.dt, cov.grid.n, to_string(cov.model), cov.eps);
    Eigen::MatrixXd m = cov.matrix();
    for (long i = 0; i < m.rows(); ++i) {
        for (long j = 0; j < m.cols(); ++j) fmt::print(os, j ? ",{:.17g}" : "{:.17g}", m(i, j));
        os << '\n';
    }
}

void write_realizations_csv(std::ostream& os, const NoiseCovariance& cov, const std::vector<NoiseRealization>& r) {
    fmt::print(os, "# noise realizations z={:.17g} dt={:.17g} n={} model={}\n", cov.z, cov.grid.dt, cov.grid.n,
               to_string(cov.model));
    os << "realization,t,xi_x,xi_y,xi_z\n";
    for (size_t j = 0; j < r.size(); ++j)
        for (long i = 0; i < cov.grid.n; ++i)
            fmt::print(os, "{},{:.17g},{:.17g},{:.17g},{:.17g}\n", j, cov.grid.time(i), r[j][0][i], r[j][1][i],
                       r[j][2][i]);
}

}  // namespace cpatom
