#pragma once

#include <iosfwd>

#include "cpatom/config.hpp"
#include "cpatom/errors.hpp"

namespace cpatom {

enum ExitCode { kExitOk = 0, kExitUsage = 2, kExitDomain = 3, kExitNumerical = 4, kExitRegime = 5 };

int exit_code(ErrorKind kind);

// z, F_cp1, F_cp2, F_total and both asymptotes per scan point. Rows that fail
// carry the error text in the flag column.
void cmd_force_scan(const RunConfig& cfg, std::ostream& out, std::ostream* manifest = nullptr);

// One row per (z, T_field, T_osc) with the high-temperature reference column.
void cmd_thermal_scan(const RunConfig& cfg, std::ostream& out, std::ostream* manifest = nullptr);

// Lag-domain 3x3 correlations for lags -(n-1)..(n-1) dt plus covariance diagnostics.
void cmd_kernel(const RunConfig& cfg, std::ostream& out, std::ostream* manifest = nullptr);

// Every command writes a JSON manifest (config, hash, versions, seed) when
// `manifest` is non-null.

// Ensemble at trap.z_bar. Returns the exit code implied by the regime checks;
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream* manifest);

// Ensembles over the scan z values with the analytic prediction and log-log slope.
int cmd_dispersion_scan(const RunConfig& cfg, std::ostream& out, std::ostream* manifest);

}  // namespace cpatom
