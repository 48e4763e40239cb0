#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cpatom/errors.hpp"
#include "cpatom/greens.hpp"
#include "cpatom/noise.hpp"

namespace cpatom {

struct TrapConfig {
    Eigen::Vector3d omega_trap{0.5, 0.5, 0.5};
    double z_bar = 10.0;
    bool include_cp_shift = true;
    double gamma = 0.0;  // numerical damping, must stay below 2 * min(omega)
    int substeps = 1;
    void validate() const;
};

// Trap frequencies renormalized by the CP force gradient along z.
Eigen::Vector3d effective_trap_frequencies(const TrapConfig& trap, const AtomParams& p,
                                          const ThermalConfig& thermal);

// min_k |W_k^2 - Omega^2| / (q^2 / (m Omega^3 M z^6)).
double validity_margin(const TrapConfig& trap, const AtomParams& p, const ThermalConfig& thermal);
// Throws RegimeError when the margin is below `required`.
void check_validity(const TrapConfig& trap, const AtomParams& p, const ThermalConfig& thermal,
                    double required = 100.0);

struct PhaseState {
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
};

struct Trajectory {
    std::array<std::vector<double>, 3> x, v;  // samples on the noise grid
};

// Kick / exact damped flow / kick splitting with the force linearly interpolated
// between grid points. Throws StepSizeError if (dt / substeps) * W_k > 0.1.
Trajectory integrate_trajectory(const PhaseState& ic, const NoiseRealization& noise, const TrapConfig& trap,
                                const AtomParams& p, const TimeGrid& grid, const ThermalConfig& thermal = {});

struct EnsembleOptions {
    long count = 10000;
    std::uint64_t seed = 1;
    double burn_in_fraction = 0.2;
    int workers = 0;  // 0: hardware concurrency
    double drift_threshold = 3.0;
};

struct EnsembleStats {
    Eigen::Vector3d variance = Eigen::Vector3d::Zero();
    Eigen::Vector3d stderr_ = Eigen::Vector3d::Zero();
    Eigen::Vector3d drift_score = Eigen::Vector3d::Zero();  // split-half difference / its standard error
    long count = 0;
    double burn_in = 0;  // discarded time span
    double z_bar = 0;
    double clipped_mass = 0;
};

// Per-trajectory time average of x_k^2 after burn-in, averaged over the ensemble.
// Throws BurnInError when the split-half drift exceeds drift_threshold standard errors.
EnsembleStats run_ensemble(double z_bar, const TrapConfig& trap, const AtomParams& p, const ThermalConfig& thermal,
                           const TimeGrid& grid, const NoiseOptions& noise, const EnsembleOptions& opt);

struct DispersionPrediction {
    Eigen::Vector3d variance = Eigen::Vector3d::Zero();
    bool regime_ok = true;
    std::string warning;
};

// Closed-form far-field prediction: z axis -15 c, transverse +c, with
// c = q^2 / (16 pi^2 m Omega M^2 (W_k^2 - Omega^2)^2 z^6).
DispersionPrediction dispersion_analytic(double z_bar, const TrapConfig& trap, const AtomParams& p,
                                         const ThermalConfig& thermal = {});

// Stationary variance of a damped oscillator driven by the zero-lag noise kernel:
// N_kk(0) / (M^2 ((W_k^2 - Omega^2)^2 + gamma^2 Omega^2)).
Eigen::Vector3d dispersion_zero_lag(double z_bar, const TrapConfig& trap, const AtomParams& p,
                                    const ThermalConfig& thermal, const NoiseOptions& noise, const TimeGrid& grid);

struct DispersionRow {
    double z = 0;
    EnsembleStats mc;
    DispersionPrediction analytic;
    Eigen::Vector3d zero_lag = Eigen::Vector3d::Zero();
    std::string error;  // non-empty when the row failed
    ErrorKind error_kind = ErrorKind::Numerical;
};

struct DispersionScan {
    std::vector<DispersionRow> rows;
    Eigen::Vector3d slope = Eigen::Vector3d::Constant(std::nan(""));
    Eigen::Vector3d slope_stderr = Eigen::Vector3d::Constant(std::nan(""));
};

DispersionScan dispersion_scan(const std::vector<double>& z_values, const TrapConfig& trap, const AtomParams& p,
                               const ThermalConfig& thermal, const TimeGrid& grid, const NoiseOptions& noise,
                               const EnsembleOptions& opt);

// Least-squares slope of log|y| against log x, with its standard error.
std::pair<double, double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cpatom
