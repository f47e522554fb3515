#include "doctest.h"
#include "helpers.hpp"

#include <random>

using namespace visclab;

TEST_SUITE("geometry") {

TEST_CASE("distance is exact near the interval ends") {
    DistanceField f(th::unit_interval(), 0.2);
    auto e = eval_distance(f, make_vec(0.05));
    CHECK(e.d == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(e.grad(0) == doctest::Approx(1.0));
    CHECK(e.hess(0, 0) == doctest::Approx(0.0));
    auto r = eval_distance(f, make_vec(0.97));
    CHECK(r.d == doctest::Approx(0.03));
    CHECK(r.grad(0) == doctest::Approx(-1.0));
}

TEST_CASE("distance near the disc boundary is 1 - |x|") {
    DistanceField f(Domain(Disc{1.0}), 0.2);
    auto e = eval_distance(f, make_vec(0.9, 0.0));
    CHECK(e.d == doctest::Approx(0.1));
    CHECK(e.grad(0) == doctest::Approx(-1.0));
    CHECK(e.grad(1) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("interval midpoint sits on the plateau") {
    DistanceField f(th::unit_interval(), 0.2);
    auto e = eval_distance(f, make_vec(0.5));
    CHECK(e.d == doctest::Approx(0.2 * DistanceField::profile(0.5 / 0.2)));
    CHECK(e.d == doctest::Approx(f.plateau()));
    CHECK(e.grad(0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("profile derivatives agree with differences") {
    const double h = 1e-5;
    for (double t : {0.3, 0.55, 0.7, 0.9, 0.99}) {
        for (int k = 0; k < 3; ++k) {
            double fd = (DistanceField::profile(t + h, k) - DistanceField::profile(t - h, k)) / (2 * h);
            CHECK(DistanceField::profile(t, k + 1) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
    // C^2 joins at t = 1/2 and t = 1
    for (double t : {0.5, 1.0})
        for (int k = 0; k < 3; ++k)
            CHECK(DistanceField::profile(t - 1e-9, k) == doctest::Approx(DistanceField::profile(t + 1e-9, k)).epsilon(1e-6));
}

TEST_CASE("hessian matches differences of the gradient on the disc") {
    DistanceField f(Domain(Disc{1.0}), 0.6);
    Vec x = make_vec(0.3, -0.45);
    const double h = 1e-6;
    auto e = eval_distance(f, x);
    for (int i = 0; i < 2; ++i) {
        Vec xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        Vec col = (eval_distance(f, xp).grad - eval_distance(f, xm).grad) / (2 * h);
        for (int j = 0; j < 2; ++j) CHECK(e.hess(j, i) == doctest::Approx(col(j)).epsilon(1e-5));
    }
}

TEST_CASE("outward normals") {
    DistanceField f(th::unit_interval(), 0.2);
    CHECK(outward_normal(f, make_vec(0.0))(0) == doctest::Approx(-1.0));
    CHECK(outward_normal(f, make_vec(1.0))(0) == doctest::Approx(1.0));
    DistanceField g(Domain(Disc{1.0}), 0.2);
    Vec n = outward_normal(g, make_vec(0.0, 1.0));
    CHECK(n(0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(n(1) == doctest::Approx(1.0));
}

TEST_CASE("points outside are rejected") {
    DistanceField f(th::unit_interval(), 0.2);
    CHECK_THROWS_AS(eval_distance(f, make_vec(1.5)), DomainError);
    CHECK_THROWS_AS(eval_distance(f, make_vec(-0.1)), DomainError);
}

TEST_CASE("w3 inequality") {
    DistanceField f(th::unit_interval(), 0.2);
    std::vector<std::pair<Vec, Vec>> same{{make_vec(0.3), make_vec(0.3)}};
    CHECK(check_w3_inequality(f, same).violations == 0);
    std::vector<std::pair<Vec, Vec>> near{{make_vec(0.01), make_vec(0.03)}};
    auto r = check_w3_inequality(f, near);
    CHECK(r.violations == 0);
    CHECK(r.fitted_bound == doctest::Approx(0.0).epsilon(1e-12));

    DistanceField disc(Domain(Disc{1.0}), 0.5);
    std::mt19937_64 rng(11);
    std::vector<std::pair<Vec, Vec>> pairs;
    for (int i = 0; i < 10000; ++i) {
        Vec x = disc.domain().uniform_point(rng);
        pairs.emplace_back(x, disc.domain().uniform_point(rng));
    }
    CHECK(check_w3_inequality(disc, pairs).violations == 0);

    std::vector<std::pair<Vec, Vec>> none;
    CHECK_THROWS_AS(check_w3_inequality(f, none), ArgumentError);
}

TEST_CASE("grids") {
    Grid g(th::unit_interval(), {8});
    CHECK(g.size() == 9);
    CHECK(g.h(0) == doctest::Approx(0.125));
    CHECK(g.boundary_nodes().size() == 2);
    CHECK(g.neighbor(0, -1) == -1);
    CHECK(g.neighbor(0, 1) == 1);

    Grid s(th::strip(), {8, 4});
    CHECK(s.size() == 8 * 5);
    CHECK(s.boundary_nodes().size() == 16);
    CHECK(s.neighbor(s.index(0, 2), -1) == s.index(7, 2));  // periodic wrap
    CHECK(s.neighbor(s.index(3, 0), 0, -1) == -1);
    CHECK(s.inward_step(s.index(3, 0)) == 1);
    CHECK(s.inward_step(s.index(3, 4)) == -1);
}

TEST_CASE("strip difference wraps to the nearest image") {
    Domain d = th::strip();
    Vec v = d.difference(make_vec(0.95, 0.5), make_vec(0.05, 0.2));
    CHECK(v(0) == doctest::Approx(-0.1));
    CHECK(v(1) == doctest::Approx(0.3));
    CHECK(d.inradius() == doctest::Approx(0.5));
}

}
