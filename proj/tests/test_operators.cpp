#include "doctest.h"
#include "helpers.hpp"

#include <random>

using namespace visclab;

TEST_SUITE("operators") {

TEST_CASE("eval_F on a single control") {
    auto zero = th::linear(1, th::coeffs(1, 0.0, 0.0, 1.0, 0.0));
    CHECK(eval_F(zero, make_vec(0.3), 0.0, make_vec(0.7), make_mat(5.0)) == 0.0);
    auto one = th::linear(1, th::coeffs(1, 1.0, 0.0, 1.0, 1.0));
    CHECK(eval_F(one, make_vec(0.3), 3.0, make_vec(0.0), make_mat(2.0)) == doctest::Approx(0.0));
    CHECK(eval_argcontrols(one, make_vec(0.3), 3.0, make_vec(0.0), make_mat(2.0)) == ControlPair{0, 0});
}

TEST_CASE("drift enters with a minus sign") {
    auto op = th::linear(1, th::coeffs(1, 0.0, 2.0, 0.0, 0.0));
    CHECK(eval_F(op, make_vec(0.5), 0.0, make_vec(1.5), make_mat(0.0)) == doctest::Approx(-3.0));
}

TEST_CASE("inf over theta1") {
    auto op = th::bellman(1, {th::coeffs(1, 0.0, 0.0, 0.0, 1.0), th::coeffs(1, 0.0, 0.0, 0.0, 2.0)});
    CHECK(eval_F(op, make_vec(0.5), 0.0, make_vec(0.0), make_mat(0.0)) == doctest::Approx(-2.0));
    CHECK(eval_argcontrols(op, make_vec(0.5), 0.0, make_vec(0.0), make_mat(0.0)).theta1 == 1);
}

TEST_CASE("argcontrols matches an exhaustive scan on a 5x5 table") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ControlledCoefficients cc;
    cc.dim = 1;
    for (int i = 0; i < 5; ++i) {
        cc.sets.emplace_back();
        for (int j = 0; j < 5; ++j) cc.sets.back().push_back(th::coeffs(1, u(rng), u(rng), 1.0 + u(rng) * 0.5, u(rng)));
    }
    OperatorSpec op(OperatorKind::Isaacs, cc);
    for (int t = 0; t < 20; ++t) {
        Vec x = make_vec(0.5 + 0.5 * u(rng));
        double r = u(rng);
        Vec p = make_vec(2 * u(rng));
        Mat X = make_mat(3 * u(rng));
        double best = 1e300;
        ControlPair arg;
        for (int i = 0; i < 5; ++i) {
            double sup = -1e300;
            int jbest = 0;
            for (int j = 0; j < 5; ++j) {
                double v = op.eval_pair(i, j, x, r, p, X);
                if (v > sup) sup = v, jbest = j;
            }
            if (sup < best) best = sup, arg = {i, jbest};
        }
        CHECK(eval_F(op, x, r, p, X) == doctest::Approx(best).epsilon(1e-15));
        CHECK(eval_argcontrols(op, x, r, p, X) == arg);
    }
}

TEST_CASE("non-symmetric hessian argument") {
    auto op = th::linear(2, th::coeffs(2, 1.0, 0.0, 1.0, 0.0));
    Mat X(2, 2);
    X << 1, 2, 0, 1;
    CHECK_THROWS_AS(eval_F(op, make_vec(0.5, 0.5), 0.0, make_vec(0.0, 0.0), X), ArgumentError);
}

TEST_CASE("probe_H3") {
    Domain d = th::unit_interval();
    auto one = th::linear(1, th::coeffs(1, 1.0, 0.0, 1.0, 0.0));
    auto s = make_h3_samples(one, d, 500, 1.0, 3);
    CHECK(probe_H3(one, s) == doctest::Approx(1.0));

    auto ramp = th::linear(1, th::coeffs(1, 1.0, 0.0, th::affine(1.0, {1.0}), ScalarField::constant(0.0)));
    auto s2 = make_h3_samples(ramp, d, 4000, 1.0, 4);
    CHECK(probe_H3(ramp, s2) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(probe_H3(ramp, s2) >= 1.0);

    auto two = th::bellman(1, {th::coeffs(1, 0.0, 0.0, 1.0, 0.0), th::coeffs(1, 0.0, 0.0, 2.0, 0.0)});
    auto s3 = make_h3_samples(two, d, 500, 1.0, 5);
    CHECK(probe_H3(two, s3) == doctest::Approx(1.0));

    H3Sample bad{make_vec(0.5), make_vec(0.0), make_mat(0.0), 0.0, 1.0};
    std::vector<H3Sample> bads{bad};
    CHECK_THROWS_AS(probe_H3(one, bads), ArgumentError);
}

TEST_CASE("coefficient_distance") {
    Domain d = th::unit_interval();
    auto pts = d.sample_points(33);
    auto op = th::linear(1, th::coeffs(1, 0.5, 0.3, th::affine(1.0, {0.5}), th::trig(0.0, 1.0, {1.0})));
    auto same = coefficient_distance(op, op, pts);
    CHECK(same.delta1 == 0.0);
    CHECK(same.delta2 == 0.0);
    auto f = coefficient_distance(op, op.shifted("f", 0.3), pts);
    CHECK(f.delta1 == doctest::Approx(0.3));
    CHECK(f.delta2 == 0.0);
    auto sb = coefficient_distance(op, op.shifted("sigma", 0.1).shifted("b", 0.2), pts);
    CHECK(sb.delta1 == 0.0);
    CHECK(sb.delta2 == doctest::Approx(std::sqrt(0.05)));

    auto two = th::bellman(1, {th::coeffs(1, 0.0, 0.0, 1.0, 0.0), th::coeffs(1, 0.0, 0.0, 2.0, 0.0)});
    CHECK_THROWS_AS(coefficient_distance(op, two, pts), ArgumentError);
}

TEST_CASE("H2bar on the diagonal and under refinement") {
    Domain d = th::unit_interval();
    auto op = th::linear(1, th::coeffs(1, 0.5, 0.3, th::affine(1.0, {0.5}), th::trig(0.0, 1.0, {1.0})));
    H2barSample diag{make_vec(0.4), make_vec(0.4), 0.2, make_vec(1.0), make_vec(1.0),
                     make_mat(1.0), make_mat(1.0), 0.1, 0.1, 0.0};
    std::vector<H2barSample> one{diag};
    CHECK(probe_H2bar(op, one, 1.0).K_hat == doctest::Approx(0.0));

    std::vector<EpsEta> sched{{0.2, 0.2}, {0.1, 0.1}, {0.05, 0.05}};
    auto smooth = h2bar_stability(op, d, sched, 2000, {}, 9);
    CHECK(smooth.stable);

    ScalarField jump(ScalarField::Step{0, 0.5, 0.0, 1.0});
    auto rough = th::linear(1, th::coeffs(1, 0.5, 0.3, ScalarField::constant(1.0), jump));
    CHECK_FALSE(h2bar_stability(rough, d, sched, 2000, {}, 9).stable);

    std::vector<EpsEta> empty;
    CHECK_THROWS_AS(probe_H2bar(op, d, empty, 10, {}, 1), ArgumentError);
}

TEST_CASE("invariants flag small c") {
    Domain d = th::unit_interval();
    auto pts = d.sample_points(9);
    auto op = th::linear(1, th::coeffs(1, 1.0, 0.0, 0.5, 0.0));
    CHECK(op.invariant_issues(pts, 0.25).empty());
    CHECK_FALSE(op.invariant_issues(pts, 1.0).empty());
}

}
