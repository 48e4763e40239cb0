#include <CLI11.hpp>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <optional>

#include "cpatom/commands.hpp"
#include "cpatom/config.hpp"

using namespace cpatom;

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> format;
    bool dimensionless = false;
    std::optional<long> count;
    std::optional<double> zmin, zmax;
    std::optional<int> zsteps;
};

RunConfig resolve(const Overrides& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (o.out) cfg.output.path = *o.out;
    if (o.format) {
        if (*o.format != "csv") throw UsageError("--format: only csv is supported");
        cfg.output.format = *o.format;
    }
    if (o.dimensionless) cfg.output.dimensionless = true;
    if (o.count) cfg.ensemble.count = *o.count;
    if (o.zmin || o.zmax || o.zsteps) {
        if (!(o.zmin && o.zmax && o.zsteps)) throw UsageError("--zmin, --zmax and --zsteps go together");
        cfg.scan.z.clear();
        cfg.scan.zmin = *o.zmin;
        cfg.scan.zmax = *o.zmax;
        cfg.scan.zsteps = *o.zsteps;
    }
    return cfg;
}

// Runs `body` against the configured output file (or stdout).
template <class F>
int with_output(const RunConfig& cfg, F&& body) {
    if (cfg.output.path.empty()) return body(std::cout, static_cast<std::ostream*>(nullptr));
    std::ofstream os(cfg.output.path, std::ios::binary);
    if (!os) throw UsageError("cannot open output file '" + cfg.output.path + "'");
    std::ofstream manifest(cfg.output.path + ".manifest.json", std::ios::binary);
    if (!manifest) throw UsageError("cannot open manifest file");
    return body(os, &manifest);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Casimir-Polder forces and mirror-induced noise for a trapped harmonic atom", "cpatom"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Overrides o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "master random seed");
        sub->add_option("--out", o.out, "output CSV path (default stdout)");
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv"}));
        sub->add_flag("--dimensionless", o.dimensionless, "Omega-scaled columns");
        sub->add_option("--count", o.count, "ensemble size");
        sub->add_option("--zmin", o.zmin, "log scan start");
        sub->add_option("--zmax", o.zmax, "log scan end");
        sub->add_option("--zsteps", o.zsteps, "log scan points");
    };
    auto* force = app.add_subcommand("force-scan", "vacuum or thermal force against distance");
    auto* thermal = app.add_subcommand("thermal-scan", "force over distance and both temperatures");
    auto* kernel = app.add_subcommand("kernel", "noise correlation per lag with covariance diagnostics");
    auto* simulate = app.add_subcommand("simulate", "Langevin ensemble at trap.z_bar");
    auto* disp = app.add_subcommand("dispersion-scan", "ensemble dispersion over the scan distances");
    for (auto* s : {force, thermal, kernel, simulate, disp}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        RunConfig cfg = resolve(o);
        if (force->parsed())
            return with_output(cfg, [&](std::ostream& os, std::ostream* m) {
                cmd_force_scan(cfg, os, m);
                return 0;
            });
        if (thermal->parsed())
            return with_output(cfg, [&](std::ostream& os, std::ostream* m) {
                cmd_thermal_scan(cfg, os, m);
                return 0;
            });
        if (kernel->parsed())
            return with_output(cfg, [&](std::ostream& os, std::ostream* m) {
                cmd_kernel(cfg, os, m);
                return 0;
            });
        if (simulate->parsed())
            return with_output(cfg, [&](std::ostream& os, std::ostream* m) { return cmd_simulate(cfg, os, m); });
        return with_output(cfg, [&](std::ostream& os, std::ostream* m) { return cmd_dispersion_scan(cfg, os, m); });
    } catch (const Error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        fmt::print(stderr, "internal error: {}\n", e.what());
        return 1;
    }
}
