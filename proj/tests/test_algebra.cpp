#include "doctest.h"

#include "cokinetic/algebra.hpp"
#include "cokinetic/random.hpp"
#include "helpers.hpp"

using namespace cokinetic;
using testing::coham;
using testing::freq;
using testing::pt;

namespace {

SampleOptions small(std::uint64_t seed, int samples = 16) {
    SampleOptions o;
    o.samples = samples;
    o.seed = seed;
    return o;
}

CoIsotopy random_almost(Rng& rng) {
    const ModelSpec m = testing::circle_model();
    RandomGeneratorSpec g;
    g.max_terms = 4;
    RandomReebSpec r;
    return CoIsotopy(m, Kind::AlmostCoHamiltonian, random_generator(m, g, rng), random_reeb(r, rng));
}

}  // namespace

TEST_CASE("generator identity on trivial paths") {
    const auto id = CoIsotopy::identity(testing::circle_model());
    const auto rep = verify_generator_identity(path_of(id), small(1));
    CHECK(rep.pass());
    CHECK(rep.max_value("residual") == 0.0);
}

TEST_CASE("group facts on fixed generators") {
    const auto siny = coham({{freq(0, 1, 0), 0.0, 1.0}});
    const auto mixed = coham({{freq(1, 0, 0), 0.3, 0.0}, {freq(1, 1, 0), 0.0, 0.4}});
    CHECK(verify_fact1(siny, small(2, 64)).max_value("residual") <= 1e-6);
    CHECK(verify_fact1(mixed, small(3)).pass());
    CHECK(verify_fact3(siny, mixed, small(4)).pass());
    CHECK(verify_fact4(mixed, small(5)).pass());
}

TEST_CASE("group facts on random generators") {
    Rng rng(101);
    const ModelSpec m = testing::circle_model();
    for (int trial = 0; trial < 2; ++trial) {
        const auto a = random_cohamiltonian(m, {}, rng);
        const auto b = random_cohamiltonian(m, {}, rng);
        CHECK(verify_fact1(a, small(trial)).pass());
        CHECK(verify_fact2(a, random_conjugator(m, rng), small(trial)).pass());
        CHECK(verify_fact3(a, b, small(trial)).pass());
        CHECK(verify_fact4(a, small(trial)).pass());
        const auto r5 = verify_fact5(a, b, small(trial));
        CHECK(r5.pass());
    }
}

TEST_CASE("conformal facts on random almost co-Hamiltonian paths") {
    Rng rng(202);
    for (int trial = 0; trial < 2; ++trial) {
        const auto a = random_almost(rng);
        const auto b = random_almost(rng);
        CHECK(verify_fact6(a, small(trial)).pass());
        CHECK(verify_fact7(a, b, small(trial)).pass());
        CHECK(verify_fact8(a, pt(0.5, 1.0, 2.0), small(trial)).pass());
        CHECK(verify_fact9(a, b, small(trial)).pass());
        CHECK(verify_fact10(a, small(trial)).pass());
    }
}

TEST_CASE("energy profiles") {
    const auto siny = coham({{freq(0, 1, 0), 0.0, 1.0}});
    const Vec p = pt(0.2, 0.9, 1.0);
    for (const auto& s : orbit_energy_profile(siny, p, {0.0, 0.5, 1.0})) {
        CHECK(s.value == doctest::Approx(std::sin(0.9)).epsilon(1e-12));
        CHECK(s.predicted == doctest::Approx(std::sin(0.9)).epsilon(1e-12));
    }

    auto g = testing::generator({{freq(0, 1, 0), 0.0, 1.0}});
    g.z_slope = PolyT::constant(0.3);
    const CoIsotopy line(testing::line_model(), Kind::CoHamiltonian, g, std::nullopt);
    const Vec q = pt(0.2, 0.4, -0.5);
    const double G0 = std::sin(0.4) + 0.3 * -0.5;
    for (const auto& s : orbit_energy_profile(line, q, {0.0, 0.25, 0.5, 1.0})) {
        CHECK(std::abs(s.value - (G0 + 0.09 * s.t)) <= 1e-8);
        CHECK(std::abs(s.predicted - (G0 + 0.09 * s.t)) <= 1e-8);
    }

    const auto zero = CoIsotopy::identity(testing::circle_model());
    for (const auto& s : orbit_energy_profile(zero, p, {0.5})) CHECK(s.value == 0.0);
}

TEST_CASE("windings") {
    const auto siny = coham({{freq(0, 1, 0), 0.0, 1.0}});
    const auto dx = OneFormField::constant({1, 0, 0});
    const auto dz = OneFormField::constant({0, 0, 1});
    for (double y : {0.0, 0.7, 2.0, 4.1}) {
        CHECK(winding(siny, dx, pt(1.0, y, 0.5)) == doctest::Approx(std::cos(y)).epsilon(1e-12));
        CHECK(winding(siny, dz, pt(1.0, y, 0.5)) == 0.0);
    }
    const auto id = CoIsotopy::identity(testing::circle_model());
    CHECK(winding(id, dx, pt(1, 2, 3)) == 0.0);

    const std::vector<Vec> pts = {pt(0.1, 0.2, 0.3), pt(2.0, 1.5, 0.0)};
    const auto vals = winding_values(siny, {dx, dz}, pts);
    CHECK(vals[1][0] == winding(siny, dx, pts[1]));
    CHECK(vals[1][1] == 0.0);
}

TEST_CASE("flux identity") {
    const auto id = CoIsotopy::identity(testing::circle_model());
    CHECK(flux_identity_residual(id, OneFormField::constant({1, 0, 0}), 16).residual == 0.0);
    const auto siny = coham({{freq(0, 1, 0), 0.0, 1.0}});
    CHECK(flux_identity_residual(siny, OneFormField::constant({1, 0, 0}), 64).residual <= 1e-6);
    const auto sc = coham({{freq(1, 1, 0), 0.0, 0.5}, {freq(1, -1, 0), 0.0, 0.5}});
    CHECK(flux_identity_residual(sc, OneFormField::constant({0, 1, 0}), 32).residual <= 1e-5);
}

TEST_CASE("grid points") {
    const ModelSpec m = testing::circle_model();
    CHECK(grid_points(m, 4, false).size() == 64u);
    CHECK(grid_points(m, 4, true).size() == 16u);
}
