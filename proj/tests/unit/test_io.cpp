#include "calib/error.hpp"
#include "calib/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace calib;

namespace {

PredictionTable parse(const std::string& text) {
    std::istringstream in(text);
    return read_prediction_table(in, "mem");
}

void expect_parse_error(const std::string& text, std::size_t row, std::size_t column) {
    try {
        parse(text);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.row() == row);
        CHECK(e.column() == column);
        CHECK(std::string(e.what()).find("row " + std::to_string(row)) != std::string::npos);
    }
}

}  // namespace

TEST_CASE("reads rows with and without a header") {
    const auto a = parse("0.9,0.1,0\n0.2,0.8,1\n");
    CHECK_FALSE(a.had_header);
    CHECK(a.values == Matrix(2, 2, {0.9, 0.1, 0.2, 0.8}));
    CHECK(a.labels == std::vector<int>{0, 1});

    const auto b = parse("p0,p1,label\r\n0.9, 0.1 ,0\r\n\r\n0.2,0.8,1\r\n");
    CHECK(b.had_header);
    CHECK(b.values == a.values);
    CHECK(b.labels == a.labels);
}

TEST_CASE("parse failures carry row and column") {
    expect_parse_error("0.9,0.1,0\n0.2,abc,1\n", 2, 2);
    expect_parse_error("0.9,0.1,0\n0.2,0.8\n", 2, 3);
    expect_parse_error("0.9,0.1,0\n0.2,0.8,1.5\n", 2, 3);
    expect_parse_error("0.9,0.1,0\n0.2,0.8,1,4\n", 2, 4);
    expect_parse_error("p0,p1,label\n0.5,nan,1\n", 2, 2);
    expect_parse_error("", 1, 1);
}

TEST_CASE("probabilities are validated, logits are converted") {
    auto t = parse("0.9,0.2,0\n");
    CHECK_THROWS_AS(to_model_outputs(t, false), ValidationError);
    const auto m = to_model_outputs(parse("2,0,0\n"), true);
    REQUIRE(m.logits);
    CHECK(m.probs.row(0)[0] == doctest::Approx(0.8808).epsilon(1e-4));
    CHECK_THROWS_AS(to_model_outputs(parse("0.5,0.5,2\n"), false), ValidationError);
}

TEST_CASE("format_double round-trips") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("property: csv write then read reproduces the predictions") {
    std::mt19937_64 rng(7);
    std::gamma_distribution<double> g(0.7, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng() % 30, k = 2 + rng() % 5;
        Matrix m(n, k);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (double& v : m.row(i)) v = g(rng) + 1e-9;
            y[i] = static_cast<int>(rng() % k);
        }
        const auto p = PredictionSet::renormalized(std::move(m), std::move(y));
        for (bool header : {false, true}) {
            std::ostringstream out;
            write_prediction_csv(out, p, header);
            const auto t = parse(out.str());
            CHECK(t.had_header == header);
            const auto back = to_model_outputs(t, false).probs;
            for (std::size_t i = 0; i < p.probs().data().size(); ++i)
                CHECK(std::abs(back.probs().data()[i] - p.probs().data()[i]) <= 1e-12);
            CHECK(std::equal(back.labels().begin(), back.labels().end(), p.labels().begin()));
        }
    }
}

TEST_CASE("file helpers") {
    const auto dir = std::filesystem::temp_directory_path() / "calib_test_io";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "p.csv").string();
    const PredictionSet p(Matrix(1, 2, {0.25, 0.75}), {1});
    write_prediction_csv(path, p, true);
    const auto m = load_predictions(path, false);
    CHECK(m.probs == p);
    CHECK_THROWS_AS(load_predictions((dir / "missing.csv").string(), false), ValidationError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("run config parsing") {
    const auto rc = parse_run_config(nlohmann::json::parse(R"({
        "metric": {"binning": "adaptive", "max_probs": false, "class_conditional": true,
                   "threshold": 0.01, "norm": "l1", "bins": 10},
        "recalibration": {"method": "vector", "iterations": 50, "learning_rate": 0.01},
        "seed": 3
    })"));
    CHECK(rc.seed == 3);
    CHECK(metric_index(rc.metric.to_config()) == 26);
    CHECK(rc.metric.to_config().binning.n_bins == 10);
    CHECK(rc.recalibration.method == Method::vector);
    CHECK(rc.recalibration.sgd.iterations == 50);
    CHECK(rc.recalibration.sgd.learning_rate == 0.01);
    CHECK(rc.split == "first-half");

    const auto named = parse_run_config(nlohmann::json::parse(R"({"metric": {"named": "SCE", "bins": 5}})"));
    CHECK(named.metric.to_config() == named_metric("SCE", 5));

    CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"seeds": 1})")), ArgumentError);
    CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"metric": {"bin": 3}})")), ArgumentError);
    CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"recalibration": {"method": "nope"}})")),
                    ArgumentError);
    CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"seed": "x"})")), ArgumentError);
    CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"split": "random"})")), ArgumentError);
    CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse("[1]")), ArgumentError);
}

TEST_CASE("temperature objective selection") {
    RecalibrationSpec spec;
    apply_objective(spec, "ECE", 10);
    CHECK(spec.objective == TemperatureObjective::gce);
    CHECK(spec.metric == named_metric("ECE", 10));
    apply_objective(spec, "nll", 10);
    CHECK(spec.objective == TemperatureObjective::nll);
    CHECK_THROWS_AS(apply_objective(spec, "bogus", 10), ArgumentError);
}
