#include "doctest.h"
#include "helpers.hpp"
#include "visclab/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace visclab;

TEST_SUITE("experiments") {

TEST_CASE("fit_rate on exact data") {
    std::vector<std::pair<double, double>> a{{1, 1}, {0.5, 0.5}, {0.25, 0.25}};
    auto f = fit_rate(a);
    CHECK(f.slope == doctest::Approx(1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
    std::vector<std::pair<double, double>> b{{1, 2}, {0.25, 1}};
    CHECK(fit_rate(b).slope == doctest::Approx(0.5));
    std::vector<std::pair<double, double>> c;
    for (double mu = 0.25; mu > 1e-3; mu /= 2) c.emplace_back(mu, 2 * std::sqrt(mu));
    CHECK(fit_rate(c).slope == doctest::Approx(0.5));
    CHECK(fit_rate(c).intercept == doctest::Approx(std::log(2.0)));
}

TEST_CASE("fit_rate on noisy data") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<std::pair<double, double>> pts;
    for (int k = 2; k <= 12; ++k) {
        double mu = std::ldexp(1.0, -k);
        pts.emplace_back(mu, 3.0 * std::sqrt(mu) * std::exp(noise(rng)));
    }
    CHECK(fit_rate(pts).slope == doctest::Approx(0.5).epsilon(0.1));
    CHECK(std::abs(fit_rate(pts).slope - 0.5) <= 0.05);
}

TEST_CASE("fit_rate rejects bad input") {
    std::vector<std::pair<double, double>> one{{1, 1}};
    CHECK_THROWS_AS(fit_rate(one), ArgumentError);
    std::vector<std::pair<double, double>> neg{{1, 1}, {0.5, 0.0}};
    CHECK_THROWS_AS(fit_rate(neg), ArgumentError);
}

TEST_CASE("tables print every digit") {
    Table t{{"a", "b"}, {{0.1, 1.0 / 3.0}, {2.0, -1e-20}}};
    CHECK(t.csv() == "a,b\n0.10000000000000001,0.33333333333333331\n2,-9.9999999999999995e-21\n");
}

TEST_CASE("reports write json and csv") {
    Report r;
    r.study = "demo";
    r.summary["x"] = 1.5;
    r.tables.push_back({"rows", Table{{"k"}, {{1.0}, {2.0}}}});
    auto dir = std::filesystem::temp_directory_path() / "visclab_report_test";
    std::filesystem::remove_all(dir);
    r.write(dir);
    CHECK(std::filesystem::exists(dir / "demo.json"));
    std::ifstream in(dir / "demo_rows.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "k\n1\n2\n");
    auto j = Json::parse(std::ifstream(dir / "demo.json"));
    CHECK(j["pass"] == true);
    CHECK(j["summary"]["x"] == 1.5);
    std::filesystem::remove_all(dir);
}

TEST_CASE("vv rate on synthetic-size problem") {
    Domain d = th::unit_interval();
    Problem p{d, th::linear(1, th::coeffs(1, 0.0, 1.0, ScalarField::constant(1.0), th::trig(0.0, 1.0, {1.0}))),
              th::neumann(d)};
    RateStudy st{{0.25, 0.125, 0.0625, 0.03125}, {64}, 4};
    auto r = run_vv_rate(p, {}, st);
    CHECK(r.pass);
    CHECK(r.tables.at(0).second.rows.size() == 4);
}

TEST_CASE("cont-dep: zero perturbation and constant shifts") {
    Domain d = th::unit_interval();
    Problem p{d, th::linear(1, th::coeffs(1, 0.5, 0.2, ScalarField::constant(1.0), th::trig(0.0, 1.0, {1.0}))),
              th::neumann(d)};
    ContDepStudy st;
    st.cells = {64};
    st.families = {{"f_shift", "operator", "f", {0.0, 0.1, 0.01, 0.001}}};
    auto r = run_cont_dep(p, {}, st, 1);
    const auto& rows = r.tables.at(0).second.rows;
    CHECK(rows[0][1] == 0.0);  // sup_diff
    CHECK(rows[0][8] == 0.0);  // R
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][1] == doctest::Approx(rows[i][0]).epsilon(1e-8));
        CHECK(rows[i][8] == doctest::Approx(1.0).epsilon(1e-7));
    }
}

TEST_CASE("probe reports lambda and nu") {
    Domain d = th::unit_interval();
    Problem p{d, th::linear(1, th::coeffs(1, 1.0, 0.0, 0.5, 0.0)), th::neumann(d)};
    auto ok = run_probe(p, {}, 1);
    CHECK(ok.pass);
    CHECK(ok.summary["lambda_hat"].get<double>() == doctest::Approx(0.5));
    CHECK(ok.summary["nu_hat"].get<double>() == doctest::Approx(1.0));
    ProbeStudy strict;
    strict.lambda = 1.0;
    CHECK_FALSE(run_probe(p, strict, 1).pass);
}

TEST_CASE("refinement study") {
    Domain d = th::unit_interval();
    Problem p{d, th::linear(1, th::coeffs(1, 1.0, 0.0, ScalarField::constant(1.0), th::trig(0.0, kPi * kPi + 1, {1.0}))),
              th::neumann(d)};
    std::vector<int> cells{64, 128, 256};
    auto r = run_refinement(p, {}, cells, [](const Vec& x) { return std::cos(kPi * x(0)); });
    CHECK(r.pass);
}

}
