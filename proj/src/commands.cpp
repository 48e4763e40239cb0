#include "cpatom/commands.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <cmath>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>
#include <ostream>

#include "cpatom/cpforce.hpp"
#include "cpatom/langevin.hpp"
#include "cpatom/noise.hpp"

namespace cpatom {

namespace {

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string csv_escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

void write_header(std::ostream& os, const char* command, const RunConfig& cfg, const std::string& units) {
    fmt::print(os, "# cpatom {}\n# command: {}\n# config_hash: {}\n# seed: {}\n# units: {}\n", kVersion, command,
               config_hash(cfg), cfg.seed, units);
}

std::vector<double> scan_points(const RunConfig& cfg) {
    auto z = cfg.scan.z_values();
    if (z.empty()) throw UsageError("scan: no z values (give scan.z or zmin/zmax/zsteps)");
    return z;
}

const TimeGrid& require_grid(const RunConfig& cfg) {
    if (!cfg.grid) throw UsageError("config: this command needs a 'grid' section");
    return *cfg.grid;
}

const TrapConfig& require_trap(const RunConfig& cfg) {
    if (!cfg.trap) throw UsageError("config: this command needs a 'trap' section");
    return *cfg.trap;
}

struct Scale {
    double z = 1, force = 1;
};

Scale scale_for(const RunConfig& cfg) {
    if (!cfg.output.dimensionless) return {};
    const auto& a = cfg.atom;
    return {a.Omega, a.m / (a.q * a.q * std::pow(a.Omega, 3))};
}

nlohmann::json manifest_base(const char* command, const RunConfig& cfg) {
    nlohmann::json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["config"] = nlohmann::json::parse(serialize_config(cfg));
    m["config_hash"] = config_hash(cfg);
    m["seed"] = cfg.seed;
    m["libraries"] = {{"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
                      {"boost", BOOST_LIB_VERSION},
                      {"fmt", FMT_VERSION},
                      {"json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                           NLOHMANN_JSON_VERSION_PATCH)}};
    return m;
}

void write_plain_manifest(std::ostream* manifest, const char* command, const RunConfig& cfg) {
    if (!manifest) return;
    auto m = manifest_base(command, cfg);
    m["exit_code"] = 0;
    *manifest << m.dump(2) << '\n';
}

nlohmann::json json_number(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

// Shared by simulate and dispersion-scan.
int run_dispersion(const char* command, const RunConfig& cfg, const std::vector<double>& zs, std::ostream& out,
                   std::ostream* manifest) {
    const TrapConfig& trap = require_trap(cfg);
    const TimeGrid& grid = require_grid(cfg);
    EnsembleOptions eo = cfg.ensemble;
    eo.seed = cfg.seed;
    DispersionScan scan = dispersion_scan(zs, trap, cfg.atom, cfg.thermal, grid, cfg.noise, eo);

    write_header(out, command, cfg, "natural (hbar = c = 1)");
    out << "z_bar,axis,variance,stderr,analytic,zero_lag,count,seed,drift_score,flag\n";
    int code = kExitOk;
    auto worst = [&](int c) {
        if (code == kExitOk) code = c;
    };
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : scan.rows) {
        std::string flag;
        if (!r.error.empty()) {
            flag = r.error;
            worst(exit_code(r.error_kind));
        } else if (!r.analytic.regime_ok) {
            flag = "regime: " + r.analytic.warning;
            worst(kExitRegime);
        }
        for (int k = 0; k < 3; ++k) {
            bool ok = r.error.empty();
            fmt::print(out, "{},{},{},{},{},{},{},{},{},{}\n", num(r.z), "xyz"[k], ok ? num(r.mc.variance[k]) : "nan",
                       ok ? num(r.mc.stderr_[k]) : "nan", ok ? num(r.analytic.variance[k]) : "nan",
                       ok ? num(r.zero_lag[k]) : "nan", r.mc.count, cfg.seed,
                       ok ? num(r.mc.drift_score[k]) : "nan", flag.empty() ? "" : csv_escape(flag));
            rows.push_back({{"z_bar", r.z},
                            {"axis", std::string(1, "xyz"[k])},
                            {"variance", json_number(ok ? r.mc.variance[k] : NAN)},
                            {"stderr", json_number(ok ? r.mc.stderr_[k] : NAN)},
                            {"analytic", json_number(ok ? r.analytic.variance[k] : NAN)},
                            {"zero_lag", json_number(ok ? r.zero_lag[k] : NAN)},
                            {"flag", flag}});
        }
    }
    for (int k = 0; k < 3; ++k)
        fmt::print(out, "# slope_{}: {} +- {}\n", "xyz"[k], num(scan.slope[k]), num(scan.slope_stderr[k]));
    if (manifest) {
        auto m = manifest_base(command, cfg);
        m["rows"] = rows;
        m["slope"] = {json_number(scan.slope[0]), json_number(scan.slope[1]), json_number(scan.slope[2])};
        m["slope_stderr"] = {json_number(scan.slope_stderr[0]), json_number(scan.slope_stderr[1]),
                             json_number(scan.slope_stderr[2])};
        m["exit_code"] = code;
        *manifest << m.dump(2) << '\n';
    }
    return code;
}

}  // namespace

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Usage: return kExitUsage;
        case ErrorKind::Domain: return kExitDomain;
        case ErrorKind::Numerical: return kExitNumerical;
        case ErrorKind::Regime: return kExitRegime;
    }
    return kExitNumerical;
}

void cmd_force_scan(const RunConfig& cfg, std::ostream& out, std::ostream* manifest) {
    cfg.atom.validate();
    cfg.thermal.validate();
    auto zs = scan_points(cfg);
    Scale sc = scale_for(cfg);
    write_header(out, "force-scan", cfg,
                 cfg.output.dimensionless ? "dimensionless: Omega z; force in q^2 Omega^3 / m"
                                          : "natural (hbar = c = 1)");
    out << "z,F_cp1,F_cp2,F_total,F_near_asymptote,F_far_asymptote,flag\n";
    for (double z : zs) {
        try {
            ForceBreakdown b = cp_force_thermal(z, cfg.atom, cfg.thermal);
            double near = cp_force_near_asymptote(z, cfg.atom), far = cp_force_far_asymptote(z, cfg.atom);
            fmt::print(out, "{},{},{},{},{},{},\n", num(z * sc.z), num((b.f_cp1 + b.f_thermal_osc) * sc.force),
                       num((b.f_cp2 + b.f_thermal_field) * sc.force), num(b.total * sc.force), num(near * sc.force),
                       num(far * sc.force));
        } catch (const Error& e) {
            fmt::print(out, "{},nan,nan,nan,nan,nan,{}\n", num(z * sc.z), csv_escape(e.what()));
        }
    }
    write_plain_manifest(manifest, "force-scan", cfg);
}

void cmd_thermal_scan(const RunConfig& cfg, std::ostream& out, std::ostream* manifest) {
    cfg.atom.validate();
    auto zs = scan_points(cfg);
    if (cfg.scan.T_field.empty() || cfg.scan.T_osc.empty())
        throw UsageError("scan: T_field and T_osc need at least one temperature each");
    Scale sc = scale_for(cfg);
    double tscale = cfg.output.dimensionless ? 1.0 / cfg.atom.Omega : 1.0;
    write_header(out, "thermal-scan", cfg,
                 cfg.output.dimensionless ? "dimensionless: Omega z; T / Omega; force in q^2 Omega^3 / m"
                                          : "natural (hbar = c = k_B = 1)");
    out << "z,T_field,T_osc,F_thermal_retarded,F_thermal_dispersive,F_total,F_high_T_reference,flag\n";
    for (double z : zs)
        for (double Tf : cfg.scan.T_field)
            for (double To : cfg.scan.T_osc) {
                std::string head = fmt::format("{},{},{}", num(z * sc.z), num(Tf * tscale), num(To * tscale));
                try {
                    ThermalConfig th = cfg.thermal;
                    th.beta = beta_from_temperature(Tf);
                    th.beta_bar = beta_from_temperature(To);
                    ForceBreakdown b = cp_force_thermal(z, cfg.atom, th);
                    double ref = std::isinf(th.beta) ? NAN : cp_force_high_temperature(z, cfg.atom, th.beta);
                    fmt::print(out, "{},{},{},{},{},\n", head, num((b.f_cp1 + b.f_thermal_osc) * sc.force),
                               num((b.f_cp2 + b.f_thermal_field) * sc.force), num(b.total * sc.force),
                               num(ref * sc.force));
                } catch (const Error& e) {
                    fmt::print(out, "{},nan,nan,nan,nan,{}\n", head, csv_escape(e.what()));
                }
            }
    write_plain_manifest(manifest, "thermal-scan", cfg);
}

void cmd_kernel(const RunConfig& cfg, std::ostream& out, std::ostream* manifest) {
    const TimeGrid& grid = require_grid(cfg);
    auto zs = scan_points(cfg);
    write_header(out, "kernel", cfg, "natural (hbar = c = 1)");
    std::vector<NoiseCovariance> covs;
    // Build everything first so an ill-conditioned covariance fails before any rows.
    for (double z : zs) covs.push_back(build_covariance(z, grid, cfg.atom, cfg.thermal, cfg.noise));
    for (const auto& c : covs)
        fmt::print(out, "# z={} model={} eps={} min_eigenvalue={} max_eigenvalue={} clipped_mass={}\n", num(c.z),
                   to_string(c.model), num(c.eps), num(c.min_eigenvalue), num(c.max_eigenvalue),
                   num(c.clipped_mass));
    out << "z,lag,C_xx,C_xy,C_xz,C_yx,C_yy,C_yz,C_zx,C_zy,C_zz\n";
    for (const auto& c : covs)
        for (long k = -(grid.n - 1); k <= grid.n - 1; ++k) {
            double s = grid.dt * double(k);
            Eigen::Matrix3d m = model_correlation(c.z, s, c.model, c.eps, cfg.atom, cfg.thermal);
            fmt::print(out, "{},{}", num(c.z), num(s));
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) fmt::print(out, ",{}", num(m(i, j)));
            out << '\n';
        }
    write_plain_manifest(manifest, "kernel", cfg);
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream* manifest) {
    const TrapConfig& trap = require_trap(cfg);
    return run_dispersion("simulate", cfg, {trap.z_bar}, out, manifest);
}

int cmd_dispersion_scan(const RunConfig& cfg, std::ostream& out, std::ostream* manifest) {
    return run_dispersion("dispersion-scan", cfg, scan_points(cfg), out, manifest);
}

}  // namespace cpatom
