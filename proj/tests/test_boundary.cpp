#include "doctest.h"
#include "helpers.hpp"

#include <cmath>

using namespace visclab;

TEST_SUITE("boundary") {

TEST_CASE("eval_G formulas") {
    Domain s = th::strip();
    auto n0 = th::neumann(s);
    CHECK(eval_G(n0, make_vec(0.3, 0.0), make_vec(1.0, 0.0)) == doctest::Approx(0.0));

    Domain d = th::unit_interval();
    auto cap = th::capillary(d, 0.5);
    CHECK(eval_G(cap, make_vec(0.0), make_vec(0.0)) == doctest::Approx(-0.5));

    // gamma in {n, 2n} at the left end, p = n
    BoundarySpec::ControlledReflection cr;
    cr.sets = {{ObliqueTerm{VectorField::constant(make_vec(-1.0)), ScalarField::constant(0.0)}},
               {ObliqueTerm{VectorField::constant(make_vec(-2.0)), ScalarField::constant(0.0)}}};
    BoundarySpec crs(d, cr, 0.5);
    CHECK(eval_G(crs, make_vec(0.0), make_vec(-1.0)) == doctest::Approx(1.0));
}

TEST_CASE("G outside the band is a domain error") {
    Domain d = th::unit_interval();
    auto n0 = th::neumann(d);
    CHECK_THROWS_AS(eval_G(n0, make_vec(0.5), make_vec(0.0)), DomainError);
}

TEST_CASE("probe_HB1") {
    Domain d = th::unit_interval();
    auto samples = make_boundary_samples(d, 400, 4.0, 2);
    std::vector<double> mus{1e-3, 1e-2, 0.1, 1.0, 10.0};
    CHECK(probe_HB1(th::neumann(d, 0.3), samples, mus) == doctest::Approx(1.0).epsilon(1e-12));
    double cap = probe_HB1(th::capillary(d, 0.5), samples, mus);
    CHECK(cap >= 0.5);
    CHECK(cap < 1.0);
    CHECK(probe_HB1(th::oblique1(d, -0.3, 0.6, 0.0), samples, mus) == doctest::Approx(0.3));
    std::vector<double> bad{0.1, 0.0};
    CHECK_THROWS_AS(probe_HB1(th::neumann(d), samples, bad), ArgumentError);
}

TEST_CASE("normal shift closed forms") {
    Domain d = th::unit_interval();
    NormalShift obl(th::oblique1(d, -1.0, 2.0, 2.0));
    double c = compute_normal_shift(obl, make_vec(0.0), make_vec(0.5));
    CHECK(c == doctest::Approx(2.5).epsilon(1e-12));

    NormalShift cap(th::capillary(d, 0.5));
    double cc = compute_normal_shift(cap, make_vec(0.0), make_vec(0.0));
    CHECK(std::abs(cc - 1.0 / std::sqrt(3.0)) <= 1e-10);

    Domain s = th::strip();
    NormalShift neu(th::neumann(s));
    Vec p = make_vec(0.7, -1.3);
    CHECK(compute_normal_shift(neu, make_vec(0.2, 0.0), p) == doctest::Approx(-1.3));  // -p.n, n = (0,-1)
    CHECK(compute_normal_shift(neu, make_vec(0.2, 1.0), p) == doctest::Approx(1.3));
}

TEST_CASE("normal shift residual on random inputs") {
    Domain d = th::unit_interval();
    NormalShift cap(BoundarySpec(d, BoundarySpec::Capillary{th::affine(0.2, {0.3})}));
    for (const auto& s : make_boundary_samples(d, 200, 8.0, 7)) {
        double c = compute_normal_shift(cap, s.x, s.p);
        Vec q = s.p + c * cap.spec.normal(s.x);
        CHECK(std::abs(eval_G(cap.spec, s.x, q)) <= 1e-12 * (1.0 + s.p.norm()));
    }
}

TEST_CASE("boundary_distance") {
    Domain d = th::unit_interval();
    auto samples = make_boundary_samples(d, 128, 4.0, 1);
    auto b1 = th::oblique1(d, -1.0, 2.0, 0.1);
    auto same = boundary_distance(b1, b1, samples);
    CHECK(same.mu1 == 0.0);
    CHECK(same.mu2 == 0.0);
    auto g = boundary_distance(b1, b1.shifted("g", 0.2), samples);
    CHECK(g.mu1 == doctest::Approx(0.2));
    CHECK(g.mu2 == doctest::Approx(0.0));
    auto gam = boundary_distance(b1, b1.shifted("gamma", 0.05), samples);
    CHECK(gam.mu2 == doctest::Approx(0.05));
}

TEST_CASE("shift difference for a Neumann pair") {
    Domain d = th::unit_interval();
    auto samples = make_boundary_samples(d, 128, 4.0, 1);
    auto b1 = th::neumann(d, 0.0), b2 = th::neumann(d, 0.2);
    auto dist = boundary_distance(b1, b2, samples);
    auto r = check_shift_difference(NormalShift(b1), NormalShift(b2), dist, samples);
    CHECK(r.violations == 0);
    CHECK(r.K_C == doctest::Approx(1.0));
    auto same = check_shift_difference(NormalShift(b1), NormalShift(b1), boundary_distance(b1, b1, samples), samples);
    CHECK(same.violations == 0);
}

TEST_CASE("probe_HB2") {
    Domain s = th::strip();
    // g = cos(2 pi x1) / pi has Lipschitz constant 2
    auto b = th::neumann(s, th::trig(0.0, 1.0 / kPi, {2.0, 0.0}));
    auto pairs = make_boundary_pairs(s, 2000, 4.0, 3);
    double K = probe_HB2(b, pairs);
    CHECK(K > 0.0);
    CHECK(K <= 3.0);
    std::vector<BoundaryPair> same{{make_vec(0.1, 0.0), make_vec(1.0, 2.0), make_vec(0.1, 0.0), make_vec(1.0, 2.0)}};
    CHECK(probe_HB2(b, same) == 0.0);
    std::vector<BoundaryPair> none;
    CHECK_THROWS_AS(probe_HB2(b, none), ArgumentError);
}

TEST_CASE("capillary shift bounds are stable") {
    Domain d = th::unit_interval();
    NormalShift cap(BoundarySpec(d, BoundarySpec::Capillary{th::affine(0.2, {0.3})}));
    CHECK(check_shift_bound(cap, d, 500, 4.0, 1).stable);
    CHECK(check_shift_regularity(cap, d, 500, 4.0, 1).stable);
}

TEST_CASE("invariants") {
    Domain d = th::unit_interval();
    CHECK(th::capillary(d, 0.5).invariant_issues().empty());
    CHECK_FALSE(th::capillary(d, 1.2).invariant_issues().empty());
    CHECK_FALSE(th::oblique1(d, 0.5, 0.0, 0.0).invariant_issues().empty());  // gamma.n < 0 at the left end
}

}
