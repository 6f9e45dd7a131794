#include "specres/config.hpp"
#include "specres/io.hpp"
#include "specres/pipeline.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace specres;

TEST_CASE("flat text and JSON configs parse to the same canonical form") {
    const std::string flat = R"(
# comment
model.kind = lorentzian
model.lambda = 0.25
interval.lo = -0.5
interval.hi = 0.75
kappa.max = 0.1
seed = 7
)";
    const std::string json = R"({
  "model": {"kind": "lorentzian", "lambda": 0.25},
  "interval": {"lo": -0.5, "hi": 0.75},
  "kappa": {"max": 0.1},
  "seed": 7
})";
    ExperimentConfig a = parse_config_text(flat);
    ExperimentConfig b = parse_config_text(json);
    CHECK(canonical_dump(a) == canonical_dump(b));
    CHECK(config_hash(a) == config_hash(b));
    CHECK(a.lambda == 0.25);
    CHECK(a.interval.hi == 0.75);
    CHECK(a.seed == 7);
}

TEST_CASE("config validation rejects bad ladders, orders and intervals") {
    ExperimentConfig cfg = parse_config_text("model.kind = lorentzian");
    validate_config(cfg);  // defaults are fine

    ExperimentConfig bad = cfg;
    bad.kappa_count = 0;
    CHECK_THROWS_AS(validate_config(bad), Error);
    bad = cfg;
    bad.kappa_ratio = 1.0;
    CHECK_THROWS_AS(validate_config(bad), Error);
    bad = cfg;
    bad.n = 0;
    CHECK_THROWS_AS(validate_config(bad), Error);
    bad = cfg;
    bad.interval = {0.5, -0.5};
    CHECK_THROWS_AS(validate_config(bad), Error);
    bad = cfg;
    bad.lambda = 2.0;  // outside I
    CHECK_THROWS_AS(validate_config(bad), Error);

    CHECK_THROWS_AS(parse_config_text("unknown.key = 1"), Error);
    CHECK_THROWS_AS(parse_config_text("model.kind lorentzian"), Error);
}

TEST_CASE("kappa ladder is strictly decreasing with the configured ratio") {
    ExperimentConfig cfg;
    cfg.kappa_max = 0.2;
    cfg.kappa_count = 5;
    cfg.kappa_ratio = 2.0;
    auto ladder = cfg.kappa_ladder();
    REQUIRE(ladder.size() == 5);
    CHECK(ladder.front() == 0.2);
    for (std::size_t i = 0; i + 1 < ladder.size(); ++i)
        CHECK(ladder[i + 1] == doctest::Approx(ladder[i] / 2.0));
}

TEST_CASE("trace CSV round-trips through a plain parser") {
    FriedrichsSpec spec;
    spec.lambda = 0.0;
    spec.unbounded_support = true;
    spec.truncation_L = 8.0;
    spec.coupling.kind = CouplingDensity::Kind::Lorentzian;
    FriedrichsModel m = build_friedrichs(spec);
    BoundaryTrace tr =
        boundary_trace(m, {-0.5, 0.5}, 0.0, 2, TraceMethod::ClosedForm);
    const std::string path = "trace_roundtrip_test.csv";
    write_trace_csv(tr, path);

    std::ifstream is(path);
    REQUIRE(is.good());
    std::string header;
    std::getline(is, header);
    CHECK(header == "E,ReF,ImF,ReF1,ImF1,ReF2,ImF2,ReF3,ImF3");
    std::string line;
    Eigen::Index rows = 0;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
        REQUIRE(vals.size() == 9);
        CHECK(vals[0] == tr.grid(rows));
        CHECK(vals[1] == tr.values(rows).real());
        CHECK(vals[2] == tr.values(rows).imag());
        ++rows;
    }
    CHECK(rows == tr.grid.size());
    std::remove(path.c_str());
}

TEST_CASE("resonance JSON carries the declared fields") {
    Resonance r;
    r.kappa = 0.1;
    r.lambda_res = cxd(0.01, -0.0101);
    r.gamma_fgr = 2.0;
    r.amplitude = cxd(1.01, -0.002);
    r.expansion_gap = 1e-4;
    auto j = resonance_json(r);
    CHECK(j["kappa"] == 0.1);
    CHECK(j["im_lambda"] == -0.0101);
    CHECK(j["re_a"] == 1.01);
    CHECK(j["gap"] == 1e-4);
    std::ostringstream os;
    append_resonance_jsonl(r, os);
    CHECK(os.str().find("\"gamma\":2.0") != std::string::npos);
}

TEST_CASE("scaling fit helpers") {
    std::vector<double> ks{0.2, 0.1, 0.05, 0.025};
    std::vector<double> quad, logged;
    for (double k : ks) {
        quad.push_back(3.0 * k * k);
        logged.push_back(0.7 * k * k * std::abs(std::log(k)));
    }
    CHECK(loglog_slope(ks, quad) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(compare_log_model(ks, logged).log_model_wins());
    CHECK_FALSE(compare_log_model(ks, quad).log_model_wins());
}
