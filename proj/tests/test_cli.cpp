#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cpatom/commands.hpp"
#include "cpatom/config.hpp"
#include "cpatom/cpforce.hpp"
#include "support.hpp"

using namespace cpatom;
namespace fs = std::filesystem;

namespace {

struct Csv {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    double num(size_t r, const std::string& col) const {
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i] == col) return std::stod(rows[r][i]);
        throw std::runtime_error("no column " + col);
    }
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') quoted = !quoted;
        else if (c == ',' && !quoted) {
            out.push_back(cur);
            cur.clear();
        } else
            cur += c;
    }
    out.push_back(cur);
    return out;
}

Csv parse_csv(const std::string& text) {
    Csv c;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') c.comments.push_back(line);
        else if (c.header.empty()) c.header = split(line);
        else c.rows.push_back(split(line));
    }
    return c;
}

std::string run(void (*cmd)(const RunConfig&, std::ostream&, std::ostream*), const RunConfig& cfg) {
    std::ostringstream os;
    cmd(cfg, os, nullptr);
    return os.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
}

fs::path scratch_dir() {
    fs::path d = fs::temp_directory_path() / "cpatom_cli_test";
    fs::create_directories(d);
    return d;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(CPATOM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const char* kSimConfig = R"({
  "atom": {"q": 1, "m": 1, "Omega": 1, "M": 1},
  "trap": {"omega_trap": [0.5, 0.5, 0.5], "z_bar": 10, "gamma": 0.2},
  "grid": {"dt": 0.1, "n": 3000},
  "ensemble": {"count": 100},
  "seed": 17
})";

}  // namespace

TEST_CASE("config round trip is a fixpoint") {
    RunConfig c = parse_config(kSimConfig);
    CHECK(c.trap->z_bar == 10);
    CHECK(c.grid->n == 3000);
    CHECK(c.seed == 17);
    std::string a = serialize_config(c);
    std::string b = serialize_config(parse_config(a));
    CHECK(a == b);
    CHECK(config_hash(c) == config_hash(parse_config(a)));
    CHECK(config_hash(c).size() == 16);
}

TEST_CASE("config hash ignores the output path only") {
    RunConfig c = parse_config(kSimConfig);
    RunConfig d = c;
    d.output.path = "/tmp/elsewhere.csv";
    CHECK(config_hash(c) == config_hash(d));
    d.seed = 18;
    CHECK(config_hash(c) != config_hash(d));
}

TEST_CASE("config rejects unknown fields and bad values") {
    try {
        parse_config(R"({"atom": {"q": 1, "mass": 2}})");
        FAIL("expected UsageError");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("mass") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(R"({"colour": 1})"), UsageError);
    CHECK_THROWS_AS(parse_config(R"({"atom": {"q": "one"}})"), UsageError);
    CHECK_THROWS_AS(parse_config(R"({"noise": {"model": "white"}})"), UsageError);
    CHECK_THROWS_AS(parse_config("{not json"), UsageError);
    RunConfig c = parse_config(R"({"thermal": {"beta": "inf", "beta_bar": 2.5}})");
    CHECK(std::isinf(c.thermal.beta));
    CHECK(c.thermal.beta_bar == 2.5);
    CHECK(std::isinf(beta_from_temperature(0.0)));
    CHECK(beta_from_temperature(4.0) == 0.25);
}

TEST_CASE("log-spaced scan points") {
    ScanConfig s;
    s.zmin = 1e-3;
    s.zmax = 1e2;
    s.zsteps = 25;
    auto z = s.z_values();
    REQUIRE(z.size() == 25);
    CHECK(z.front() == 1e-3);
    CHECK(z.back() == 1e2);
    for (size_t i = 1; i < z.size(); ++i) CHECK(z[i] / z[i - 1] == doctest::Approx(std::pow(1e5, 1.0 / 24)));
    s.z = {3.0, 1.0};
    CHECK(s.z_values() == std::vector<double>{3.0, 1.0});
}

TEST_CASE("force scan") {
    RunConfig c;
    c.scan.zmin = 1e-3;
    c.scan.zmax = 1e2;
    c.scan.zsteps = 25;
    std::string text = run(cmd_force_scan, c);
    Csv csv = parse_csv(text);
    REQUIRE(csv.rows.size() == 25);
    CHECK(csv.header.front() == "z");
    CHECK(csv.comments.front() == std::string("# cpatom ") + kVersion);
    for (size_t r = 0; r < csv.rows.size(); ++r) {
        double z = csv.num(r, "z");
        double total = csv.num(r, "F_total");
        CHECK(total == doctest::Approx(cp_force_vacuum(z, c.atom)).epsilon(1e-15));
        CHECK(csv.num(r, "F_cp1") + csv.num(r, "F_cp2") == doctest::Approx(total).epsilon(1e-6));
        if (z <= 1e-2) CHECK(std::abs(total / csv.num(r, "F_near_asymptote") - 1) < 0.05);
        CHECK(csv.rows[r].back().empty());
    }
    CHECK(text == run(cmd_force_scan, c));
    std::ostringstream os, man;
    cmd_force_scan(c, os, &man);
    auto m = nlohmann::json::parse(man.str());
    CHECK(m["command"] == "force-scan");
    CHECK(m["config_hash"] == config_hash(c));
    RunConfig empty;
    CHECK_THROWS_AS(run(cmd_force_scan, empty), UsageError);
}

TEST_CASE("dimensionless force columns") {
    RunConfig c;
    c.atom = AtomParams{2.0, 0.5, 3.0, 1.0};
    c.scan.z = {0.4};
    c.output.dimensionless = true;
    Csv csv = parse_csv(run(cmd_force_scan, c));
    AtomParams unit;
    CHECK(csv.num(0, "z") == doctest::Approx(1.2));
    CHECK(csv.num(0, "F_total") == doctest::Approx(cp_force_vacuum(1.2, unit)).epsilon(1e-12));
}

TEST_CASE("thermal scan") {
    RunConfig c;
    c.scan.z = {0.5, 2.0, 8.0};
    c.scan.T_field = {0.0, 0.5};
    c.scan.T_osc = {0.0, 1.0};
    Csv csv = parse_csv(run(cmd_thermal_scan, c));
    REQUIRE(csv.rows.size() == 12);
    Csv vac = parse_csv(run(cmd_force_scan, c));
    for (size_t r = 0; r < csv.rows.size(); ++r) {
        if (csv.num(r, "T_field") != 0 || csv.num(r, "T_osc") != 0) continue;
        size_t i = r / 4;
        CHECK(csv.num(r, "F_total") == vac.num(i, "F_total"));
        CHECK(csv.rows[r][csv.rows[r].size() - 2] == "nan");
    }
    // Single temperature point.
    RunConfig one;
    one.scan.z = {50.0};
    one.scan.T_field = {100.0};
    one.scan.T_osc = {100.0};
    Csv hot = parse_csv(run(cmd_thermal_scan, one));
    REQUIRE(hot.rows.size() == 1);
    CHECK(std::abs(hot.num(0, "F_total") / hot.num(0, "F_high_T_reference") - 1) < 0.05);
}

TEST_CASE("kernel output") {
    RunConfig c;
    c.scan.z = {2.0};
    c.grid = TimeGrid{0.0, 0.1, 20};
    Csv csv = parse_csv(run(cmd_kernel, c));
    REQUIRE(csv.rows.size() == 39);
    bool diag = false;
    for (const auto& l : csv.comments) diag = diag || l.find("clipped_mass=") != std::string::npos;
    CHECK(diag);
    for (size_t r = 0; r < csv.rows.size(); ++r) {
        for (auto col : {"C_xy", "C_xz", "C_yx", "C_yz", "C_zx", "C_zy"}) CHECK(csv.num(r, col) == 0.0);
        CHECK(csv.num(r, "C_xx") == csv.num(r, "C_yy"));
        size_t mirror = csv.rows.size() - 1 - r;
        CHECK(csv.num(r, "lag") == -csv.num(mirror, "lag"));
        CHECK(csv.num(r, "C_zz") == csv.num(mirror, "C_zz"));
    }
    RunConfig nogrid;
    nogrid.scan.z = {2.0};
    CHECK_THROWS_AS(run(cmd_kernel, nogrid), UsageError);
}

TEST_CASE("simulate writes rows and a manifest") {
    RunConfig c = parse_config(kSimConfig);
    std::ostringstream out, man;
    int code = cmd_simulate(c, out, &man);
    CHECK(code == kExitOk);
    Csv csv = parse_csv(out.str());
    REQUIRE(csv.rows.size() == 3);
    for (size_t r = 0; r < 3; ++r) {
        CHECK(csv.num(r, "count") == 100);
        CHECK(csv.num(r, "seed") == 17);
        CHECK(csv.num(r, "variance") > 0);
    }
    auto m = nlohmann::json::parse(man.str());
    CHECK(m["config_hash"] == config_hash(c));
    CHECK(m["seed"] == 17);
    CHECK(m["rows"].size() == 3);
    CHECK(m["exit_code"] == 0);
    std::ostringstream again;
    cmd_simulate(c, again, nullptr);
    CHECK(again.str() == out.str());
}

TEST_CASE("exit codes map error kinds") {
    CHECK(exit_code(ErrorKind::Usage) == 2);
    CHECK(exit_code(ErrorKind::Domain) == 3);
    CHECK(exit_code(ErrorKind::Numerical) == 4);
    CHECK(exit_code(ErrorKind::Regime) == 5);
}

TEST_CASE("binary: reruns are byte-identical and errors set the exit code") {
    fs::path d = scratch_dir();
    fs::path a = d / "a.csv", b = d / "b.csv", cfg = d / "sim.json";
    CHECK(run_cli("force-scan --zmin 0.001 --zmax 100 --zsteps 25 --out " + a.string()) == 0);
    CHECK(run_cli("force-scan --zmin 0.001 --zmax 100 --zsteps 25 --out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());

    std::ofstream(cfg) << kSimConfig;
    CHECK(run_cli("simulate --config " + cfg.string() + " --out " + a.string()) == 0);
    CHECK(run_cli("simulate --config " + cfg.string() + " --out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(fs::exists(a.string() + ".manifest.json"));

    CHECK(run_cli("force-scan") == 2);
    CHECK(run_cli("no-such-command") == 2);
    CHECK(run_cli("force-scan --zmin 1 --zmax 2") == 2);
    std::ofstream(d / "bad.json") << R"({"atom": {"m": -1}, "scan": {"z": [1]}})";
    CHECK(run_cli("force-scan --config " + (d / "bad.json").string()) == 3);
    std::ofstream(d / "lr.json") << R"({"noise": {"model": "lag_resolved"}, "grid": {"dt": 0.05, "n": 400},
                                         "scan": {"z": [1]}})";
    CHECK(run_cli("kernel --config " + (d / "lr.json").string()) == 4);
    std::ofstream(d / "near.json") << R"({"trap": {"omega_trap": [1.0, 0.5, 0.5], "z_bar": 10, "gamma": 0.2},
                                           "grid": {"dt": 0.1, "n": 3000}, "ensemble": {"count": 100}})";
    CHECK(run_cli("simulate --config " + (d / "near.json").string()) == 5);
}
