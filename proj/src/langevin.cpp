#include "cpatom/langevin.hpp"

#include <atomic>
#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <thread>
#include <tuple>

#include "cpatom/cpforce.hpp"
#include "cpatom/errors.hpp"

namespace cpatom {

namespace {

constexpr double kPi = std::numbers::pi;

// Exact flow of x'' + gamma x' + w^2 x = 0 over one step h.
struct DampedFlow {
    double a11, a12, a21, a22;
    DampedFlow(double w, double gamma, double h) {
        double g2 = 0.5 * gamma;
        double wd = std::sqrt(w * w - g2 * g2);
        double e = std::exp(-g2 * h);
        double c = std::cos(wd * h), s = std::sin(wd * h);
        a11 = e * (c + g2 / wd * s);
        a12 = e * s / wd;
        a21 = -e * w * w / wd * s;
        a22 = e * (c - g2 / wd * s);
    }
    void apply(double& x, double& v) const {
        double xn = a11 * x + a12 * v;
        v = a21 * x + a22 * v;
        x = xn;
    }
};

// Steps one axis across the grid, calling sink(i, x, v) at every grid point.
template <class Sink>
void integrate_axis(double x, double v, const std::vector<double>& f, double w, double gamma, double M, double dt,
                    int substeps, Sink&& sink) {
    const double h = dt / substeps;
    const DampedFlow flow(w, gamma, h);
    const double half = 0.5 * h / M;
    const long n = static_cast<long>(f.size());
    sink(0, x, v);
    for (long i = 0; i + 1 < n; ++i) {
        const double f0 = f[i], df = (f[i + 1] - f[i]) / substeps;
        for (int j = 0; j < substeps; ++j) {
            v += half * (f0 + df * j);
            flow.apply(x, v);
            v += half * (f0 + df * (j + 1));
        }
        sink(i + 1, x, v);
    }
}

void check_step(const Eigen::Vector3d& w, const TrapConfig& trap, const TimeGrid& grid) {
    double h = grid.dt / trap.substeps;
    for (int k = 0; k < 3; ++k) {
        if (h * w[k] > 0.1)
            throw StepSizeError(fmt::format("step dt/substeps = {:g} too coarse for trap frequency {:g} "
                                            "(need h*W <= 0.1); increase substeps",
                                            h, w[k]));
        if (trap.gamma >= 2 * w[k])
            throw DomainError("trap.gamma must be below twice the effective trap frequency");
    }
}

struct TrajectorySummary {
    std::array<double, 3> mean{}, first{}, second{};
};

}  // namespace

void TrapConfig::validate() const {
    for (int k = 0; k < 3; ++k)
        if (!(omega_trap[k] > 0.0) || !std::isfinite(omega_trap[k]))
            throw DomainError("trap.omega_trap entries must be positive");
    if (!(z_bar > 0.0) || !std::isfinite(z_bar)) throw DomainError("trap.z_bar must be positive");
    if (!(gamma >= 0.0)) throw DomainError("trap.gamma must be nonnegative");
    if (substeps < 1) throw DomainError("trap.substeps must be at least 1");
}

Eigen::Vector3d effective_trap_frequencies(const TrapConfig& trap, const AtomParams& p,
                                          const ThermalConfig& thermal) {
    trap.validate();
    p.validate();
    Eigen::Vector3d w = trap.omega_trap;
    if (!trap.include_cp_shift) return w;
    double w2 = w[2] * w[2] - cp_force_gradient(trap.z_bar, p, thermal) / p.M;
    if (!(w2 > 0.0))
        throw UnstableTrapError(fmt::format("CP gradient destabilizes the trap at z_bar = {:g} (W_z^2 = {:g})",
                                            trap.z_bar, w2));
    w[2] = std::sqrt(w2);
    return w;
}

double validity_margin(const TrapConfig& trap, const AtomParams& p, const ThermalConfig& thermal) {
    Eigen::Vector3d w = effective_trap_frequencies(trap, p, thermal);
    double scale = p.q * p.q / (p.m * std::pow(p.Omega, 3) * p.M * std::pow(trap.z_bar, 6));
    double margin = kInf;
    for (int k = 0; k < 3; ++k) margin = std::min(margin, std::abs(w[k] * w[k] - p.Omega * p.Omega) / scale);
    return margin;
}

void check_validity(const TrapConfig& trap, const AtomParams& p, const ThermalConfig& thermal, double required) {
    double m = validity_margin(trap, p, thermal);
    if (m < required)
        throw RegimeError(fmt::format("trap too close to the internal resonance: margin {:.3g} < {:g}", m, required));
}

Trajectory integrate_trajectory(const PhaseState& ic, const NoiseRealization& noise, const TrapConfig& trap,
                                const AtomParams& p, const TimeGrid& grid, const ThermalConfig& thermal) {
    Eigen::Vector3d w = effective_trap_frequencies(trap, p, thermal);
    check_step(w, trap, grid);
    Trajectory tr;
    for (int k = 0; k < 3; ++k) {
        if (static_cast<long>(noise[k].size()) != grid.n)
            throw DomainError("integrate_trajectory: noise realization does not match the grid");
        tr.x[k].resize(grid.n);
        tr.v[k].resize(grid.n);
        integrate_axis(ic.x[k], ic.v[k], noise[k], w[k], trap.gamma, p.M, grid.dt, trap.substeps,
                       [&](long i, double x, double v) {
                           tr.x[k][i] = x;
                           tr.v[k][i] = v;
                       });
    }
    return tr;
}

EnsembleStats run_ensemble(double z_bar, const TrapConfig& trap_in, const AtomParams& p,
                           const ThermalConfig& thermal, const TimeGrid& grid, const NoiseOptions& nopt,
                           const EnsembleOptions& opt) {
    if (opt.count < 100) throw DomainError("ensemble count must be at least 100");
    if (!(opt.burn_in_fraction >= 0.0 && opt.burn_in_fraction < 0.9))
        throw DomainError("burn_in_fraction must lie in [0, 0.9)");
    TrapConfig trap = trap_in;
    trap.z_bar = z_bar;
    Eigen::Vector3d w = effective_trap_frequencies(trap, p, thermal);
    check_step(w, trap, grid);
    const NoiseCovariance cov = build_covariance(z_bar, grid, p, thermal, nopt);

    const long start = static_cast<long>(std::ceil(opt.burn_in_fraction * double(grid.n)));
    const long kept = grid.n - start;
    if (kept < 4) throw DomainError("grid too short after burn-in");
    const long mid = start + kept / 2;

    std::vector<TrajectorySummary> out(opt.count);
    std::atomic<long> next{0};
    auto work = [&] {
        NoiseRealization noise;
        for (long i; (i = next.fetch_add(1)) < opt.count;) {
            auto rng = trajectory_stream(opt.seed, std::uint64_t(i));
            sample_noise_into(cov, rng, noise);
            TrajectorySummary& s = out[i];
            for (int k = 0; k < 3; ++k) {
                double a = 0, b = 0;
                integrate_axis(0.0, 0.0, noise[k], w[k], trap.gamma, p.M, grid.dt, trap.substeps,
                               [&](long j, double x, double) {
                                   if (j < start) return;
                                   (j < mid ? a : b) += x * x;
                               });
                s.first[k] = a / double(mid - start);
                s.second[k] = b / double(grid.n - mid);
                s.mean[k] = (a + b) / double(kept);
            }
        }
    };
    int nw = opt.workers > 0 ? opt.workers : int(std::max(1u, std::thread::hardware_concurrency()));
    nw = int(std::min<long>(nw, opt.count));
    if (nw <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < nw; ++t) pool.emplace_back(work);
    }

    // Index-ordered reduction keeps the result independent of scheduling.
    EnsembleStats st;
    st.count = opt.count;
    st.burn_in = grid.dt * double(start);
    st.z_bar = z_bar;
    st.clipped_mass = cov.clipped_mass;
    const double N = double(opt.count);
    for (int k = 0; k < 3; ++k) {
        double m = 0, md = 0;
        for (const auto& s : out) {
            m += s.mean[k];
            md += s.second[k] - s.first[k];
        }
        m /= N;
        md /= N;
        double v = 0, vd = 0;
        for (const auto& s : out) {
            v += (s.mean[k] - m) * (s.mean[k] - m);
            double d = s.second[k] - s.first[k] - md;
            vd += d * d;
        }
        st.variance[k] = m;
        st.stderr_[k] = std::sqrt(v / (N - 1) / N);
        double sed = std::sqrt(vd / (N - 1) / N);
        st.drift_score[k] = sed > 0 ? std::abs(md) / sed : (md == 0 ? 0.0 : kInf);
    }
    for (int k = 0; k < 3; ++k)
        if (st.drift_score[k] > opt.drift_threshold)
            throw BurnInError(fmt::format("variance still drifting on axis {} ({:.2f} standard errors between "
                                          "halves); lengthen the grid or increase gamma",
                                          "xyz"[k], st.drift_score[k]));
    return st;
}

DispersionPrediction dispersion_analytic(double z_bar, const TrapConfig& trap_in, const AtomParams& p,
                                         const ThermalConfig& thermal) {
    TrapConfig trap = trap_in;
    trap.z_bar = z_bar;
    Eigen::Vector3d w = effective_trap_frequencies(trap, p, thermal);
    DispersionPrediction out;
    const double base = p.q * p.q / (16 * kPi * kPi * p.m * p.Omega * p.M * p.M * std::pow(z_bar, 6));
    const double sign[3] = {1.0, 1.0, -15.0};
    for (int k = 0; k < 3; ++k) {
        double d = w[k] * w[k] - p.Omega * p.Omega;
        out.variance[k] = sign[k] * base / (d * d);
    }
    std::vector<std::string> notes;
    if (p.Omega * z_bar < 5.0) notes.push_back(fmt::format("not far field (Omega z = {:g})", p.Omega * z_bar));
    double margin = validity_margin(trap, p, thermal);
    if (margin < 100.0) notes.push_back(fmt::format("validity margin {:.3g} < 100", margin));
    out.regime_ok = notes.empty();
    for (size_t i = 0; i < notes.size(); ++i) out.warning += (i ? "; " : "") + notes[i];
    return out;
}

Eigen::Vector3d dispersion_zero_lag(double z_bar, const TrapConfig& trap_in, const AtomParams& p,
                                    const ThermalConfig& thermal, const NoiseOptions& noise, const TimeGrid& grid) {
    TrapConfig trap = trap_in;
    trap.z_bar = z_bar;
    Eigen::Vector3d w = effective_trap_frequencies(trap, p, thermal);
    Eigen::Matrix3d n0 = noise_correlation_regularized(z_bar, 0.0, noise.effective_eps(grid), p, thermal);
    Eigen::Vector3d out;
    for (int k = 0; k < 3; ++k) {
        double d = w[k] * w[k] - p.Omega * p.Omega;
        double g = trap.gamma * p.Omega;
        out[k] = n0(k, k) / (p.M * p.M * (d * d + g * g));
    }
    return out;
}

std::pair<double, double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    if (n < 2 || y.size() != n) throw DomainError("loglog_slope needs at least two points");
    double sx = 0, sy = 0;
    std::vector<double> lx(n), ly(n);
    for (size_t i = 0; i < n; ++i) {
        lx[i] = std::log(x[i]);
        ly[i] = std::log(std::abs(y[i]));
        sx += lx[i];
        sy += ly[i];
    }
    sx /= double(n);
    sy /= double(n);
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - sx) * (lx[i] - sx);
        sxy += (lx[i] - sx) * (ly[i] - sy);
    }
    double b = sxy / sxx;
    if (n < 3) return {b, std::nan("")};
    double r = 0;
    for (size_t i = 0; i < n; ++i) {
        double e = ly[i] - sy - b * (lx[i] - sx);
        r += e * e;
    }
    return {b, std::sqrt(r / double(n - 2) / sxx)};
}

DispersionScan dispersion_scan(const std::vector<double>& z_values, const TrapConfig& trap, const AtomParams& p,
                               const ThermalConfig& thermal, const TimeGrid& grid, const NoiseOptions& noise,
                               const EnsembleOptions& opt) {
    if (z_values.empty()) throw UsageError("dispersion_scan: empty z list");
    DispersionScan scan;
    for (double z : z_values) {
        DispersionRow row;
        row.z = z;
        try {
            row.analytic = dispersion_analytic(z, trap, p, thermal);
            row.zero_lag = dispersion_zero_lag(z, trap, p, thermal, noise, grid);
            row.mc = run_ensemble(z, trap, p, thermal, grid, noise, opt);
        } catch (const Error& e) {
            row.error = e.what();
            row.error_kind = e.kind();
        }
        scan.rows.push_back(std::move(row));
    }
    for (int k = 0; k < 3; ++k) {
        std::vector<double> xs, ys;
        for (const auto& r : scan.rows)
            if (r.error.empty() && r.mc.variance[k] != 0.0) {
                xs.push_back(r.z);
                ys.push_back(r.mc.variance[k]);
            }
        if (xs.size() >= 2) std::tie(scan.slope[k], scan.slope_stderr[k]) = loglog_slope(xs, ys);
    }
    return scan;
}

}  // namespace cpatom
