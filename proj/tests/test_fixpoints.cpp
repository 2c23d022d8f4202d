#include "doctest.h"

#include "cokinetic/fixpoints.hpp"
#include "helpers.hpp"

using namespace cokinetic;
using testing::coham;
using testing::freq;
using testing::pt;

namespace {

CoIsotopy wells() { return coham({{freq(1, 0, 0), 0.1, 0.0}, {freq(0, 1, 0), 0.1, 0.0}}); }

// Distance of an angle to the nearest multiple of pi.
double off_lattice(double a) { return std::abs(wrap_diff(2 * a)) / 2; }

}  // namespace

TEST_CASE("fixed points of a two-well generator") {
    const auto set = find_fixed_points(wells());
    REQUIRE(set.components.size() == 4u);
    CHECK(set.z_collapsed);
    int corners[2][2] = {};
    for (const auto& c : set.components) {
        CHECK(c.residual <= 1e-10);
        CHECK(off_lattice(c.representative[0]) <= 1e-8);
        CHECK(off_lattice(c.representative[1]) <= 1e-8);
        const int i = std::abs(wrap_diff(c.representative[0])) > 1.0;
        const int j = std::abs(wrap_diff(c.representative[1])) > 1.0;
        ++corners[i][j];
    }
    for (auto& row : corners)
        for (int v : row) CHECK(v == 1);
}

TEST_CASE("other fixed-point sets") {
    const auto id = find_fixed_points(CoIsotopy::identity(testing::circle_model()));
    CHECK(id.identity_map);
    const auto tori = find_fixed_points(coham({{freq(0, 1, 0), 0.0, 0.1}}));
    CHECK(tori.components.size() == 2u);
    CHECK(check_fix_lower_bound(wells()).pass());
    CHECK(check_fix_lower_bound(CoIsotopy::identity(testing::circle_model())).pass());
}

TEST_CASE("gamma bounds") {
    const auto g = gamma_lower_bound(testing::circle_model());
    CHECK(g.lower == 1);
    REQUIRE(g.upper.has_value());
    CHECK(*g.upper == 2);
    CHECK(*gamma_bound_for_factor("interval").upper == 1);
    CHECK(*gamma_bound_for_factor("torus", 2).upper == 5);
    CHECK_THROWS_AS(gamma_bound_for_factor("sphere"), Error);
}

TEST_CASE("windings at fixed points and on average") {
    CHECK(winding_at_fixed_points(wells()).pass());
    CHECK(winding_at_fixed_points(CoIsotopy::identity(testing::circle_model())).pass());

    const auto siny = coham({{freq(0, 1, 0), 0.0, 1.0}});
    const auto rep = mean_winding_integral(siny, OneFormField::constant({1, 0, 0}), 64);
    CHECK(rep.pass());
    CHECK(std::abs(rep.data()["mean"].get<double>()) <= 1e-12);
    CHECK(rep.data()["min"].get<double>() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(rep.data()["max"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

    const auto dz = mean_winding_integral(siny, OneFormField::constant({0, 0, 1}), 16);
    CHECK(dz.data()["min"].get<double>() == 0.0);
    CHECK(dz.data()["max"].get<double>() == 0.0);
    const auto idr = mean_winding_integral(CoIsotopy::identity(testing::circle_model()), OneFormField::constant({1, 0, 0}), 8);
    CHECK(idr.pass());
    CHECK(idr.data()["mean"].get<double>() == 0.0);
}
