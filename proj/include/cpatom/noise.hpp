#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "cpatom/greens.hpp"

namespace cpatom {

struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.1;
    long n = 1000;
    // Requires dt <= min(2 pi / Omega, 2 z) / 20.
    void validate(double z, const AtomParams& p) const;
    double time(long i) const { return t0 + dt * double(i); }
};

enum class NoiseModel {
    // Full lag dependence of the image kernel, pole at s = 2z regularized by eps.
    LagResolved,
    // Field factor frozen at zero lag, times the oscillator Hadamard kernel.
    QuasiStatic,
};

std::string to_string(NoiseModel m);
NoiseModel noise_model_from_string(const std::string& s);

struct NoiseOptions {
    NoiseModel model = NoiseModel::QuasiStatic;
    double eps = 0.0;  // pole regularization width; <= 0 means dt / 2
    double eig_floor = 1e-12;
    long dense_limit = 2048;
    double effective_eps(const TimeGrid& g) const { return eps > 0 ? eps : 0.5 * g.dt; }
};

// Diagonal of d_k d_j' applied to the trace of the image E-field correlator,
// at lag s - i eps (eps = 0 for the unregularized value).
Eigen::Vector3d image_field_factor(double z, double s, double eps, double beta);

// Mirror-induced symmetric noise correlation (q^2/2) g_H(s) d_k d_j' Tr K.
Eigen::Matrix3d noise_correlation(double z, double s, const AtomParams& p, const ThermalConfig& thermal);
Eigen::Matrix3d noise_correlation_regularized(double z, double s, double eps, const AtomParams& p,
                                              const ThermalConfig& thermal);

// Translation-invariant part of the correlation in the field vacuum, with a UV
// cutoff uv_eps. Not used by the ensemble.
Eigen::Matrix3d noise_correlation_free_space(double s, double uv_eps, const AtomParams& p,
                                             double beta_bar);

// Correlation at lag s under the chosen model, with pole width eps.
Eigen::Matrix3d model_correlation(double z, double s, NoiseModel model, double eps, const AtomParams& p,
                                  const ThermalConfig& thermal);

struct NoiseCovariance {
    TimeGrid grid;
    double z = 0;
    NoiseModel model = NoiseModel::QuasiStatic;
    double eps = 0;
    double eig_floor = 0;
    std::vector<Eigen::Matrix3d> blocks;  // correlation at lag k dt, k = 0..n-1
    // Per-axis factor L with covariance L L^T. Off-axis blocks vanish.
    std::array<Eigen::MatrixXd, 3> factor;
    // Per-axis covariance after projection; empty when the grid exceeds dense_limit.
    std::array<Eigen::MatrixXd, 3> axis_matrix;
    double min_eigenvalue = 0;  // before projection
    double max_eigenvalue = 0;
    double clipped_mass = 0;  // sum of clipped negative eigenvalues / trace
    bool dense() const { return axis_matrix[0].size() > 0; }
    // Assembled (3n)x(3n) matrix, index 3 i + k for time i and axis k.
    Eigen::MatrixXd matrix() const;
};

// Builds the covariance and projects it to the PSD cone. Throws
// IllConditionedError when the clipped mass exceeds 1% of the trace.
NoiseCovariance build_covariance(double z, const TimeGrid& grid, const AtomParams& p,
                                 const ThermalConfig& thermal, const NoiseOptions& opt = {});

// Same construction without the conditioning check.
NoiseCovariance analyze_covariance(double z, const TimeGrid& grid, const AtomParams& p,
                                   const ThermalConfig& thermal, const NoiseOptions& opt = {});

using NoiseRealization = std::array<std::vector<double>, 3>;

// Independent stream for trajectory `index` under a master seed.
std::mt19937_64 trajectory_stream(std::uint64_t seed, std::uint64_t index);

void sample_noise_into(const NoiseCovariance& cov, std::mt19937_64& rng, NoiseRealization& out);
std::vector<NoiseRealization> sample_noise(const NoiseCovariance& cov, std::uint64_t seed, long count);

void write_covariance_csv(std::ostream& os, const NoiseCovariance& cov);
void write_realizations_csv(std::ostream& os, const NoiseCovariance& cov,
                            const std::vector<NoiseRealization>& r);

}  // namespace cpatom
