#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef SPECRES_CLI_PATH
#define SPECRES_CLI_PATH "specres"
#endif
#ifndef SPECRES_CONFIG_DIR
#define SPECRES_CONFIG_DIR "configs"
#endif

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SPECRES_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
#ifdef __unix__
    if (rc != -1) rc = WEXITSTATUS(rc);
#endif
    return rc;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    REQUIRE(is.good());
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("specres_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& body) {
    fs::path p = dir / name;
    std::ofstream os(p);
    os << body;
    return p;
}

const std::string kLightConfig = R"(
model.kind = lorentzian
model.lambda = 0
model.g = 1
model.x0 = 0
model.w = 1
model.unbounded = true
model.truncation_L = 8
interval.lo = -0.5
interval.hi = 0.5
n = 2
kappa.max = 0.2
kappa.count = 3
kappa.ratio = 2
grid.N = 400
grid.N_direct = 0
time.max_tau = 2
time.count = 161
cutoff.plateau_halfwidth = 0.2
seed = 12345
)";

}  // namespace

TEST_CASE("cli: fgr writes the Golden-Rule width of the reference config") {
    auto dir = temp_dir("fgr");
    const std::string cfg = std::string(SPECRES_CONFIG_DIR) + "/lorentzian.cfg";
    REQUIRE(run_cli("--config " + cfg + " --out " + (dir / "out").string() + " fgr") == 0);
    const std::string gamma = slurp(dir / "out" / "gamma.json");
    // Gamma = 2 g^2 w / ((lambda-x0)^2 + w^2) = 2
    CHECK(gamma.find("\"gamma\": 2.0") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "trace.csv"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));
}

TEST_CASE("cli: identical config and seed give byte-identical outputs") {
    auto dir = temp_dir("determinism");
    auto cfgp = write_config(dir, "light.cfg", kLightConfig);
    REQUIRE(run_cli("--config " + cfgp.string() + " --out " + (dir / "a").string() + " sweep") ==
            0);
    REQUIRE(run_cli("--config " + cfgp.string() + " --out " + (dir / "b").string() + " sweep") ==
            0);
    for (const char* name : {"sweep_report.json", "resonances.jsonl", "scaling_points.csv"})
        CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
}

TEST_CASE("cli: sweep report carries slopes and every manifest output exists") {
    auto dir = temp_dir("sweep");
    auto cfgp = write_config(dir, "light.cfg", kLightConfig);
    REQUIRE(run_cli("--config " + cfgp.string() + " --out " + (dir / "out").string() +
                    " sweep") == 0);
    const std::string report = slurp(dir / "out" / "sweep_report.json");
    CHECK(report.find("\"expansion\"") != std::string::npos);
    CHECK(report.find("\"rn_j0\"") != std::string::npos);
    const std::string manifest = slurp(dir / "out" / "manifest.json");
    CHECK(manifest.find("\"config_hash\"") != std::string::npos);
    // all declared outputs exist
    for (const char* name : {"resonances.jsonl", "scaling_points.csv", "sweep_report.json"})
        CHECK(fs::exists(dir / "out" / name));
}

TEST_CASE("cli: vanishing coupling exits with the contract code and cites positivity") {
    auto dir = temp_dir("zero_coupling");
    std::string body = kLightConfig;
    body.replace(body.find("model.g = 1"), 11, "model.g = 0");
    auto cfgp = write_config(dir, "zero.cfg", body);
    const std::string cmd = std::string(SPECRES_CLI_PATH) + " --config " + cfgp.string() +
                            " --out " + (dir / "out").string() + " fgr 2> " +
                            (dir / "err.txt").string();
    int rc = std::system(cmd.c_str());
#ifdef __unix__
    rc = WEXITSTATUS(rc);
#endif
    CHECK(rc == 2);
    const std::string err = slurp(dir / "err.txt");
    CHECK(err.find("not strictly negative") != std::string::npos);
}

TEST_CASE("cli: config errors exit with code 3") {
    auto dir = temp_dir("config_error");
    auto cfgp = write_config(dir, "bad.cfg", "model.kind = lorentzian\nkappa.count = 0\n");
    CHECK(run_cli("--config " + cfgp.string() + " --out " + (dir / "out").string() + " fgr") ==
          3);
    auto missing = write_config(dir, "bad2.cfg", "model.kind = lorentzian\nn = 0\n");
    CHECK(run_cli("--config " + missing.string() + " --out " + (dir / "out").string() +
                  " fgr") == 3);
    CHECK(run_cli(std::string("--config ") + (dir / "nonexistent.cfg").string() + " fgr") == 3);
}

TEST_CASE("cli: feshbach-check on a small random ensemble") {
    auto dir = temp_dir("feshbach");
    auto cfgp = write_config(dir, "rand.cfg", R"(
model.kind = random
model.random_size = 12
interval.lo = -0.5
interval.hi = 0.5
check.models = 4
check.samples = 6
check.size = 16
seed = 11
)");
    CHECK(run_cli("--config " + cfgp.string() + " --out " + (dir / "out").string() +
                  " feshbach-check") == 0);
    const std::string rep = slurp(dir / "out" / "feshbach_report.json");
    CHECK(rep.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("cli: mourre-check on a reduced star model") {
    auto dir = temp_dir("mourre");
    auto cfgp = write_config(dir, "mourre.cfg", R"(
model.kind = lorentzian
model.lambda = 1
model.g = 1
model.x0 = 1
model.w = 1
model.unbounded = true
model.truncation_L = 8
interval.lo = 0.5
interval.hi = 1.5
mourre.delta_lo = 0.7
mourre.delta_hi = 1.3
mourre.kappa = 0.05
mourre.nu = 5
mourre.grid_N = 1200
seed = 12345
)");
    CHECK(run_cli("--config " + cfgp.string() + " --out " + (dir / "out").string() +
                  " mourre-check") == 0);
    const std::string rep = slurp(dir / "out" / "mourre_report.json");
    CHECK(rep.find("\"pass\": true") != std::string::npos);
    CHECK(rep.find("certificate_unreduced") != std::string::npos);
}
