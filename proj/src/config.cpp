#include "cpatom/config.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "cpatom/errors.hpp"

namespace cpatom {

using nlohmann::json;

namespace {

// Reads fields of one JSON object, remembering which keys were consumed.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw UsageError(fmt::format("config: '{}' must be an object", path_));
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    double number(const std::string& key, double def) {
        if (!take(key)) return def;
        return to_number(j_.at(key), field(key));
    }

    long integer(const std::string& key, long def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) throw UsageError(fmt::format("config: '{}' must be an integer", field(key)));
        return v.get<long>();
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_number_unsigned())
            throw UsageError(fmt::format("config: '{}' must be a nonnegative integer", field(key)));
        return v.get<std::uint64_t>();
    }

    bool boolean(const std::string& key, bool def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw UsageError(fmt::format("config: '{}' must be true or false", field(key)));
        return v.get<bool>();
    }

    std::string string(const std::string& key, const std::string& def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_string()) throw UsageError(fmt::format("config: '{}' must be a string", field(key)));
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key, const std::vector<double>& def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_array()) throw UsageError(fmt::format("config: '{}' must be an array", field(key)));
        std::vector<double> out;
        for (size_t i = 0; i < v.size(); ++i) out.push_back(to_number(v[i], fmt::format("{}[{}]", field(key), i)));
        return out;
    }

    Section child(const std::string& key) {
        take(key);
        return Section(j_.at(key), field(key));
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw UsageError(fmt::format("config: unknown field '{}'", field(it.key())));
    }

private:
    bool take(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }
    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    static double to_number(const json& v, const std::string& name) {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            const auto& s = v.get_ref<const std::string&>();
            if (s == "inf") return kInf;
            if (s == "-inf") return -kInf;
        }
        throw UsageError(fmt::format("config: '{}' must be a number or \"inf\"", name));
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

json number_json(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

json numbers_json(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number_json(x));
    return a;
}

}  // namespace

std::vector<double> ScanConfig::z_values() const {
    if (!z.empty()) return z;
    if (zsteps <= 0) return {};
    if (!(zmin > 0.0 && zmax >= zmin)) throw UsageError("scan: need 0 < zmin <= zmax for a log range");
    std::vector<double> out(zsteps);
    if (zsteps == 1) {
        out[0] = zmin;
        return out;
    }
    double a = std::log10(zmin), b = std::log10(zmax);
    for (int i = 0; i < zsteps; ++i) out[i] = std::pow(10.0, std::lerp(a, b, double(i) / double(zsteps - 1)));
    out.front() = zmin;
    out.back() = zmax;
    return out;
}

double beta_from_temperature(double T) {
    if (T == 0.0) return kInf;
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("temperatures must be finite and nonnegative");
    return 1.0 / T;
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("config: invalid JSON: ") + e.what());
    }
    RunConfig c;
    Section root(j, "");
    if (root.has("atom")) {
        Section s = root.child("atom");
        c.atom.q = s.number("q", c.atom.q);
        c.atom.m = s.number("m", c.atom.m);
        c.atom.Omega = s.number("Omega", c.atom.Omega);
        c.atom.M = s.number("M", c.atom.M);
        s.finish();
    }
    if (root.has("thermal")) {
        Section s = root.child("thermal");
        c.thermal.beta = s.number("beta", c.thermal.beta);
        c.thermal.beta_bar = s.number("beta_bar", c.thermal.beta_bar);
        c.thermal.k_max = int(s.integer("k_max", c.thermal.k_max));
        c.thermal.sum_tol = s.number("sum_tol", c.thermal.sum_tol);
        s.finish();
    }
    if (root.has("trap")) {
        Section s = root.child("trap");
        TrapConfig t;
        auto w = s.numbers("omega_trap", {t.omega_trap[0], t.omega_trap[1], t.omega_trap[2]});
        if (w.size() != 3) throw UsageError("config: 'trap.omega_trap' must have three entries");
        t.omega_trap = {w[0], w[1], w[2]};
        t.z_bar = s.number("z_bar", t.z_bar);
        t.include_cp_shift = s.boolean("include_cp_shift", t.include_cp_shift);
        t.gamma = s.number("gamma", t.gamma);
        t.substeps = int(s.integer("substeps", t.substeps));
        s.finish();
        c.trap = t;
    }
    if (root.has("grid")) {
        Section s = root.child("grid");
        TimeGrid g;
        g.t0 = s.number("t0", g.t0);
        g.dt = s.number("dt", g.dt);
        g.n = s.integer("n", g.n);
        s.finish();
        c.grid = g;
    }
    if (root.has("noise")) {
        Section s = root.child("noise");
        c.noise.model = noise_model_from_string(s.string("model", to_string(c.noise.model)));
        c.noise.eps = s.number("eps", c.noise.eps);
        c.noise.eig_floor = s.number("eig_floor", c.noise.eig_floor);
        c.noise.dense_limit = s.integer("dense_limit", c.noise.dense_limit);
        s.finish();
    }
    if (root.has("ensemble")) {
        Section s = root.child("ensemble");
        c.ensemble.count = s.integer("count", c.ensemble.count);
        c.ensemble.burn_in_fraction = s.number("burn_in_fraction", c.ensemble.burn_in_fraction);
        c.ensemble.workers = int(s.integer("workers", c.ensemble.workers));
        c.ensemble.drift_threshold = s.number("drift_threshold", c.ensemble.drift_threshold);
        s.finish();
    }
    if (root.has("scan")) {
        Section s = root.child("scan");
        c.scan.z = s.numbers("z", {});
        c.scan.zmin = s.number("zmin", c.scan.zmin);
        c.scan.zmax = s.number("zmax", c.scan.zmax);
        c.scan.zsteps = int(s.integer("zsteps", c.scan.zsteps));
        c.scan.T_field = s.numbers("T_field", c.scan.T_field);
        c.scan.T_osc = s.numbers("T_osc", c.scan.T_osc);
        s.finish();
    }
    c.seed = root.unsigned_integer("seed", c.seed);
    if (root.has("output")) {
        Section s = root.child("output");
        c.output.path = s.string("path", c.output.path);
        c.output.format = s.string("format", c.output.format);
        c.output.dimensionless = s.boolean("dimensionless", c.output.dimensionless);
        s.finish();
    }
    root.finish();
    if (c.output.format != "csv") throw UsageError("config: 'output.format' must be \"csv\"");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    json j;
    j["atom"] = {{"q", c.atom.q}, {"m", c.atom.m}, {"Omega", c.atom.Omega}, {"M", c.atom.M}};
    j["thermal"] = {{"beta", number_json(c.thermal.beta)},
                    {"beta_bar", number_json(c.thermal.beta_bar)},
                    {"k_max", c.thermal.k_max},
                    {"sum_tol", c.thermal.sum_tol}};
    if (c.trap) {
        const auto& t = *c.trap;
        j["trap"] = {{"omega_trap", numbers_json({t.omega_trap[0], t.omega_trap[1], t.omega_trap[2]})},
                     {"z_bar", number_json(t.z_bar)},
                     {"include_cp_shift", t.include_cp_shift},
                     {"gamma", t.gamma},
                     {"substeps", t.substeps}};
    }
    if (c.grid) j["grid"] = {{"t0", c.grid->t0}, {"dt", c.grid->dt}, {"n", c.grid->n}};
    j["noise"] = {{"model", to_string(c.noise.model)},
                  {"eps", c.noise.eps},
                  {"eig_floor", c.noise.eig_floor},
                  {"dense_limit", c.noise.dense_limit}};
    j["ensemble"] = {{"count", c.ensemble.count},
                     {"burn_in_fraction", c.ensemble.burn_in_fraction},
                     {"workers", c.ensemble.workers},
                     {"drift_threshold", c.ensemble.drift_threshold}};
    json scan = {{"T_field", numbers_json(c.scan.T_field)}, {"T_osc", numbers_json(c.scan.T_osc)}};
    if (!c.scan.z.empty())
        scan["z"] = numbers_json(c.scan.z);
    else
        scan.update({{"zmin", c.scan.zmin}, {"zmax", c.scan.zmax}, {"zsteps", c.scan.zsteps}});
    j["scan"] = scan;
    j["seed"] = c.seed;
    j["output"] = {{"path", c.output.path}, {"format", c.output.format}, {"dimensionless", c.output.dimensionless}};
    return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& cfg) {
    // The output location does not change results, so it stays out of the hash.
    RunConfig c = cfg;
    c.output.path.clear();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : serialize_config(c)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return fmt::format("{:016x}", h);
}

}  // namespace cpatom
