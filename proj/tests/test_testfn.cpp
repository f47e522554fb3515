#include "doctest.h"
#include "helpers.hpp"
#include "visclab/testfn.hpp"

#include <cmath>

using namespace visclab;

namespace {

RegularizedShift const_shift(double v, double a = 0.1) {
    DistanceField f(th::unit_interval(), 0.5);
    return RegularizedShift([v](const Vec&, const Vec&) { return v; }, f, a, Mollifier(1));
}

RegularizedShift capillary_shift(double a = 0.1, int order = 16) {
    Domain d = th::unit_interval();
    DistanceField f(d, 0.5);
    NormalShift ns(BoundarySpec(d, BoundarySpec::Capillary{th::affine(0.2, {0.3})}));
    return RegularizedShift(ShiftExtension(ns, f), f, a, Mollifier(1, order));
}

}  // namespace

TEST_SUITE("testfn") {

TEST_CASE("mollifier has unit discrete mass") {
    CHECK(Mollifier(1).mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(Mollifier(2, 12).mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(Mollifier(1)(make_vec(1.2)) == 0.0);
    CHECK(Mollifier(1)(make_vec(0.3)) == doctest::Approx(Mollifier(1)(make_vec(-0.3))));
    CHECK_THROWS_AS(Mollifier(1, 3), ConfigError);
}

TEST_CASE("constants and linear functions pass through") {
    auto s = const_shift(7.0);
    for (double x : {0.0, 0.05, 0.3})
        for (double p : {-2.0, 0.0, 0.4}) CHECK(eval_C_a(s, make_vec(x), make_vec(p)) == doctest::Approx(7.0));

    DistanceField f(th::unit_interval(), 0.5);
    RegularizedShift lin([](const Vec&, const Vec& q) { return 0.7 * q(0); }, f, 0.1, Mollifier(1));
    for (double p : {-2.0, 0.0, 0.4, 3.0})
        CHECK(eval_C_a(lin, make_vec(0.1), make_vec(p)) == doctest::Approx(0.7 * p).epsilon(1e-12));
}

TEST_CASE("quadrature refinement") {
    double q16 = eval_C_a(capillary_shift(0.1, 16), make_vec(0.0), make_vec(0.0));
    double q32 = eval_C_a(capillary_shift(0.1, 32), make_vec(0.0), make_vec(0.0));
    CHECK(std::abs(q16 - q32) <= 1e-6);
}

TEST_CASE("derivatives of constants and linear functions") {
    auto s = const_shift(7.0);
    for (auto w : {ShiftDeriv::Dx, ShiftDeriv::Dp, ShiftDeriv::Dxx, ShiftDeriv::Dxp, ShiftDeriv::Dpp})
        CHECK(std::abs(deriv_C_a(s, make_vec(0.1), make_vec(0.5), w)(0, 0)) <= 1e-6);

    DistanceField f(th::unit_interval(), 0.5);
    RegularizedShift lin([](const Vec&, const Vec& q) { return 0.7 * q(0); }, f, 0.1, Mollifier(1));
    CHECK(deriv_C_a(lin, make_vec(0.1), make_vec(0.5), ShiftDeriv::Dp)(0, 0) == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(std::abs(deriv_C_a(lin, make_vec(0.1), make_vec(0.5), ShiftDeriv::Dxx)(0, 0)) <= 1e-6);
}

TEST_CASE("lemguy on a constant shift") {
    auto s = const_shift(0.0);
    auto grid = make_lemguy_grid(th::unit_interval(), 5, 5, 2.0, 2, 0.5);
    auto r = check_lemguy(s, grid);
    REQUIRE(r.bounds.size() == 7);
    for (std::size_t i = 2; i < 7; ++i) CHECK(r.bounds[i].K <= 1e-6);
}

TEST_CASE("lemguy on a capillary shift") {
    auto grid = make_lemguy_grid(th::unit_interval(), 9, 11, 3.0, 3, 0.4);
    auto r = check_lemguy(capillary_shift(), grid);
    for (const auto& b : r.bounds) {
        CHECK(b.violations == 0);
        CHECK(std::isfinite(b.K));
    }
}

TEST_CASE("phi with a vanishing shift") {
    auto s = const_shift(0.0);
    TestFunction tf({0.1, 1.0, 2.0, 0.3}, s);
    DistanceField f(th::unit_interval(), 0.5);
    double dx = eval_distance(f, make_vec(0.2)).d;
    CHECK(eval_phi(tf, make_vec(0.2), make_vec(0.2)) == doctest::Approx(-2 * 0.3 * dx));

    TestFunction tf0 = tf.with_AB(2.0, 0.0);
    double d1 = eval_distance(f, make_vec(0.05)).d, d2 = eval_distance(f, make_vec(0.08)).d;
    double want = 0.03 * 0.03 / 0.01 + 2.0 * (d1 - d2) * (d1 - d2) / 0.01;
    CHECK(eval_phi(tf0, make_vec(0.05), make_vec(0.08)) == doctest::Approx(want));

    auto g = grad_hess_phi(tf0, make_vec(0.3), make_vec(0.3));
    CHECK(g.Dx(0) == doctest::Approx(0.0));
    CHECK(g.Dy(0) == doctest::Approx(0.0));
    // on the plateau Dd = 0, so the B term has no gradient either
    auto gp = grad_hess_phi(tf, make_vec(0.5), make_vec(0.5));
    CHECK(gp.Dx(0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("phi against a direct evaluation") {
    auto s = capillary_shift();
    TestFunction tf({0.2, 1.0, 1.5, 0.05}, s);
    DistanceField f(th::unit_interval(), 0.5);
    for (auto [x, y] : {std::pair{0.0, 0.03}, {0.02, 0.0}, {0.4, 0.37}, {0.98, 1.0}}) {
        const double eps2 = 0.04;
        double dx = eval_distance(f, make_vec(x)).d, dy = eval_distance(f, make_vec(y)).d;
        double c = eval_C_a(tf.shift(), make_vec(0.5 * (x + y)), make_vec(2 * (x - y) / eps2));
        double direct = -(c * (dx - dy)) - 0.05 * (dy + dx) + 1.5 * (dx - dy) * (dx - dy) / eps2 + (x - y) * (x - y) / eps2;
        CHECK(eval_phi(tf, make_vec(x), make_vec(y)) == doctest::Approx(direct).epsilon(1e-8));
    }
}

TEST_CASE("phi gradient and hessian against differences") {
    auto s = capillary_shift();
    TestFunction tf({0.2, 1.0, 1.5, 0.05}, s);
    const double h = 1e-4;
    for (auto [x, y] : {std::pair{0.05, 0.08}, {0.3, 0.26}, {0.9, 0.93}}) {
        auto g = grad_hess_phi(tf, make_vec(x), make_vec(y));
        double fx = (eval_phi(tf, make_vec(x + h), make_vec(y)) - eval_phi(tf, make_vec(x - h), make_vec(y))) / (2 * h);
        double fy = (eval_phi(tf, make_vec(x), make_vec(y + h)) - eval_phi(tf, make_vec(x), make_vec(y - h))) / (2 * h);
        CHECK(g.Dx(0) == doctest::Approx(fx).epsilon(1e-5));
        CHECK(g.Dy(0) == doctest::Approx(fy).epsilon(1e-5));
        double fxy = (grad_hess_phi(tf, make_vec(x), make_vec(y + h)).Dx(0) -
                      grad_hess_phi(tf, make_vec(x), make_vec(y - h)).Dx(0)) / (2 * h);
        CHECK(g.hess(0, 1) == doctest::Approx(fxy).epsilon(1e-3));
        CHECK(g.hess(0, 1) == doctest::Approx(g.hess(1, 0)));
    }
}

TEST_CASE("choose_AB") {
    auto ab = choose_AB(0.1, 0.1, 0.01, 1.0, 1.0, 0.0, 0.0, 1.0);
    CHECK(ab.A == 1.0);
    CHECK(ab.B == doctest::Approx(0.03));
    CHECK(choose_AB(0.1, 0.1, 0.01, 1.0, 1.0, 0.2, 0.0, 1.0).B == doctest::Approx(0.23));
    CHECK_THROWS_AS(choose_AB(0.1, 0.1, 0.01, 0.0, 0.0, 0.2, 0.0, 1.0), AssumptionError);
}

TEST_CASE("eta and a") {
    CHECK(TestFunction::eta_for(0.1, 1.0) == doctest::Approx(0.1));
    CHECK(TestFunction::eta_for(0.1, 0.5) == doctest::Approx(std::pow(0.1, 1.0 / 3.0)));
    TestFunction tf({0.1, 1.0, 0.0, 0.0}, capillary_shift(0.5));
    CHECK(tf.a() == doctest::Approx(0.01));
}

TEST_CASE("lem_pos without a shift needs no constant") {
    auto s = const_shift(0.0);
    std::vector<double> eps{0.2, 0.1};
    auto samples = make_pair_samples(th::unit_interval(), eps, 1.0, 400, 1.0, PairMode::Any, 3);
    auto pts = precompute_points(s, 1.0, samples, 0);
    CHECK(check_lem_pos(pts, 1.0, 0.0).K0 <= 1e-12);
    CHECK(check_lem_pos(pts, 1.0, 0.0).violations == 0);
}

TEST_CASE("lem_pos calibration on a capillary shift") {
    auto s = capillary_shift();
    std::vector<double> eps{0.2, 0.1, 0.05};
    auto samples = make_pair_samples(th::unit_interval(), eps, 1.0, 600, 1.0, PairMode::Any, 4);
    auto pts = precompute_points(s, 1.0, samples, 0);
    auto cal = calibrate_lem_pos(pts);
    CHECK(cal.A >= 1.0);
    CHECK(check_lem_pos(pts, cal.A, 0.0).violations == 0);
}

TEST_CASE("pair samples respect their mode") {
    Domain d = th::unit_interval();
    std::vector<double> eps{0.2, 0.1};
    for (const auto& s : make_pair_samples(d, eps, 1.0, 200, 1.0, PairMode::Close, 1))
        CHECK(std::abs(s.x(0) - s.y(0)) <= s.eps * TestFunction::eta_for(s.eps, 1.0) + 1e-15);
    for (const auto& s : make_pair_samples(d, eps, 1.0, 200, 1.0, PairMode::XOnBoundary, 1)) {
        CHECK(d.signed_distance(s.x) == doctest::Approx(0.0));
        CHECK(d.contains(s.y));
    }
}

TEST_CASE("lem_BC for homogeneous Neumann") {
    Domain d = th::unit_interval();
    auto b = th::neumann(d);
    DistanceField f(d, 0.5);
    RegularizedShift s(ShiftExtension(NormalShift(b), f), f, 1.0, Mollifier(1));
    std::vector<PairSample> samples;
    for (double eps : {0.2, 0.1, 0.05}) {
        double r = 0.5 * eps * TestFunction::eta_for(eps, 1.0);
        samples.push_back({make_vec(0.0), make_vec(r), eps});
        samples.push_back({make_vec(1.0), make_vec(1.0 - r), eps});
        samples.push_back({make_vec(r), make_vec(0.0), eps});
        samples.push_back({make_vec(0.0), make_vec(0.0), eps});
    }
    auto pts = precompute_points(s, 1.0, samples, 1);
    auto ab = [](double eps) {
        double eta = TestFunction::eta_for(eps, 1.0);
        return choose_AB(eps, eta, eps * eta, 1.0, 1.0, 0.0, 0.0, 1.0);
    };
    auto r = check_lem_BC(pts, b, b, ab, 1.0, 1.0);
    CHECK(r.violations_x == 0);
    CHECK(r.violations_y == 0);
    CHECK(r.checked_x == 9);
    CHECK(r.checked_y == 6);

    std::vector<PairSample> far{{make_vec(0.0), make_vec(0.5), 0.1}};
    auto fp = precompute_points(s, 1.0, far, 1);
    CHECK_THROWS_AS(check_lem_BC(fp, b, b, 1.0, 0.1, 1.0, 1.0), ArgumentError);
}

TEST_CASE("lem_deriv on the diagonal without a shift") {
    auto s = const_shift(0.0);
    std::vector<PairSample> samples;
    for (double x : {0.0, 0.1, 0.2, 0.4, 0.5, 0.9, 1.0}) samples.push_back({make_vec(x), make_vec(x), 0.1});
    auto pts = precompute_points(s, 1.0, samples, 2);
    const double A = 2.0;
    auto r = check_lem_deriv(pts, A, 0.3, 1.0);
    REQUIRE(r.bounds.size() == 4);
    CHECK(r.bounds[0].K <= 1e-12);  // pmqest
    // the quadratic alone: its Hessian is 2(1+A)/eps^2 times the coupling block
    CHECK(check_lem_deriv(pts, A, 0.0, 1.0).bounds[3].K <= 2 * (1 + A) + 1e-9);
    CHECK_THROWS_AS(check_lem_deriv(precompute_points(s, 1.0, samples, 1), A, 0.3, 1.0), ArgumentError);
}

}
