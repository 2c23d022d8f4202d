#include "doctest.h"

#include "cokinetic/curve.hpp"
#include "cokinetic/common.hpp"

#include <algorithm>
#include <cmath>

using namespace cokinetic;

TEST_CASE("smooth step") {
    CHECK(smooth_step(-1.0) == 0.0);
    CHECK(smooth_step(0.0) == 0.0);
    CHECK(smooth_step(1.0) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    for (double u : {0.1, 0.27, 0.63, 0.9}) CHECK(smooth_step(u) + smooth_step(1 - u) == doctest::Approx(1.0).epsilon(1e-15));
    // Symmetry gives the half integral 1/2 over [0, 1].
    CHECK(smooth_step_integral(1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(smooth_step_integral(0.0) == 0.0);
}

TEST_CASE("basic curves") {
    const auto id = ReparamCurve::identity();
    CHECK(id.value(0.3) == 0.3);
    CHECK(id.deriv(0.3) == 1.0);
    const auto z = ReparamCurve::zero();
    CHECK(z.value(0.3) == 0.0);
    const auto sq = ReparamCurve::polynomial({0, 0, 1});
    CHECK(sq.value(0.5) == 0.25);
    CHECK(sq.deriv(0.5) == 1.0);
    CHECK(sq.monotone());
    CHECK(sq.maps_into_unit());
    CHECK_FALSE(ReparamCurve::polynomial({0, 2, -1.5}).monotone());
    const auto comp = ReparamCurve::composed(sq, ReparamCurve::polynomial({0, 0.5}));
    CHECK(comp.value(0.8) == doctest::Approx(0.16));
    CHECK(comp.deriv(0.8) == doctest::Approx(0.4));
    const auto bl = ReparamCurve::blend(id, sq, 0.25);
    CHECK(bl.value(0.5) == doctest::Approx(0.75 * 0.5 + 0.25 * 0.25));
    REQUIRE(bl.first() != nullptr);
    CHECK(bl.delta() == 0.25);
}

TEST_CASE("smooth plateau") {
    const double d = 0.1;
    const auto p = ReparamCurve::smooth_plateau(d);
    for (double t : {0.0, 0.05, 0.1}) CHECK(p.value(t) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    for (double t : {0.9, 0.95, 1.0}) CHECK(p.value(t) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.value(0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.monotone());
    CHECK(p.deriv(0.02) == 0.0);
    CHECK_THROWS_AS(ReparamCurve::smooth_plateau(0.4), Error);
}

TEST_CASE("Hamiltonian curve norm") {
    CHECK(ham_norm(ReparamCurve::identity()) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(ham_norm(ReparamCurve::zero()) == 0.0);
    CHECK(ham_norm(ReparamCurve::polynomial({0, 0, 1})) == doctest::Approx(2.0).epsilon(1e-9));
    const auto a = ReparamCurve::identity(), b = ReparamCurve::polynomial({0, 0, 1});
    // sup |t - t^2| = 1/4, int |1 - 2t| = 1/2.
    CHECK(ham_norm_diff(a, b) == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(c0_norm_diff(a, b) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("flatten curve") {
    const double d6 = flatten_delta(0.6);
    CHECK(d6 == doctest::Approx(1.0 / 13.0).epsilon(1e-12));
    const auto c6 = flatten_curve(0.6);
    double maxd = 0;
    for (int i = 0; i <= 2000; ++i) maxd = std::max(maxd, c6.deriv(i / 2000.0));
    CHECK(maxd <= 1.30);

    const double d = flatten_delta(0.06);
    CHECK(d == doctest::Approx(0.01).epsilon(1e-12));
    const auto c = flatten_curve(0.06);
    CHECK(c.value(0.0) == 0.0);
    CHECK(c.value(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c0_norm_diff(c, ReparamCurve::identity()) <= 0.03);
    CHECK(std::abs(c.value(0.5) - 0.5) <= 3 * d);
    CHECK_THROWS_AS(flatten_curve(0.0), Error);
    CHECK_THROWS_AS(flatten_curve(1.5), Error);
}

TEST_CASE("time quadrature") {
    const auto q = time_quadrature({0.3}, 16, 4);
    double w = 0, cube = 0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        w += q.weights[i];
        cube += q.weights[i] * q.nodes[i] * q.nodes[i] * q.nodes[i];
    }
    CHECK(w == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cube == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(std::find(q.nodes.begin(), q.nodes.end(), 0.3) != q.nodes.end());
}

TEST_CASE("polynomial turning points are breakpoints") {
    const auto z = ReparamCurve::polynomial({0, 5, -12, 8});
    const auto b = z.breakpoints();
    REQUIRE(b.size() == 2u);
    CHECK(b[0] == doctest::Approx((1 - 1 / std::sqrt(6.0)) / 2).epsilon(1e-14));
    CHECK(b[1] == doctest::Approx((1 + 1 / std::sqrt(6.0)) / 2).epsilon(1e-14));
    CHECK(ReparamCurve::polynomial({0, 0.5, 0.5}).breakpoints().empty());
}
