#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpatom/greens.hpp"
#include "cpatom/langevin.hpp"
#include "cpatom/noise.hpp"

namespace cpatom {

inline constexpr const char* kVersion = "0.1.0";

struct ScanConfig {
    std::vector<double> z;  // explicit list; takes precedence over the log range
    double zmin = 0, zmax = 0;
    int zsteps = 0;
    std::vector<double> T_field{0.0};  // temperatures; 0 means vacuum
    std::vector<double> T_osc{0.0};
    // Explicit list, or zsteps log-spaced points from zmin to zmax inclusive.
    std::vector<double> z_values() const;
};

struct OutputConfig {
    std::string path;  // empty: stdout
    std::string format = "csv";
    bool dimensionless = false;
};

struct RunConfig {
    AtomParams atom;
    ThermalConfig thermal;
    std::optional<TrapConfig> trap;
    std::optional<TimeGrid> grid;
    NoiseOptions noise;
    EnsembleOptions ensemble;  // seed lives in RunConfig::seed
    ScanConfig scan;
    std::uint64_t seed = 1;
    OutputConfig output;
};

// Throws UsageError naming the offending field.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

// FNV-1a 64 of the serialized config without output.path, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

// 1 / T, with T = 0 mapped to an infinite beta.
double beta_from_temperature(double T);

}  // namespace cpatom
