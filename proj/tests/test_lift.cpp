#include "doctest.h"

#include "cokinetic/lift.hpp"
#include "cokinetic/random.hpp"
#include "helpers.hpp"

using namespace cokinetic;
using testing::coham;
using testing::freq;
using testing::pt;

namespace {

CoIsotopy reeb_only(double c0) {
    return CoIsotopy(testing::circle_model(), Kind::Cosymplectic, Generator{}, testing::reeb_const(c0));
}

// sin x cos y as two sine modes.
CoIsotopy sin_cos() { return coham({{freq(1, 1, 0), 0.0, 0.5}, {freq(1, -1, 0), 0.0, 0.5}}); }

}  // namespace

TEST_CASE("rotation of the lifted angle") {
    const auto li = lift_isotopy(coham({{freq(0, 1, 0), 0.0, 1.0}}));
    const LiftedPoint lp{pt(0.3, 0.4, 0.5), 1.2};
    CHECK(li.flow(lp, 0.8).theta == 1.2);
    CHECK(max_theta_shift(li, 16, {0.5, 1.0}) <= 1e-14);

    const auto rot = lift_isotopy(reeb_only(0.4));
    for (double t : {0.25, 1.0}) CHECK(wrap_diff(rot.flow(lp, t).theta - (1.2 - 0.4 * t)) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(rot.rotation_integral(lp.base, 1.0) == doctest::Approx(0.4).epsilon(1e-12));

    const auto id = lift_isotopy(CoIsotopy::identity(testing::circle_model()));
    const auto same = id.flow(lp, 0.7);
    CHECK(same.base == lp.base);
    CHECK(same.theta == lp.theta);
}

TEST_CASE("batched lifted flows match") {
    Rng rng(4);
    const ModelSpec m = testing::circle_model();
    RandomReebSpec rs;
    for (const auto& iso : {CoIsotopy(m, Kind::AlmostCoHamiltonian, random_generator(m, {}, rng), random_reeb(rs, rng)),
                            reeb_only(0.4)}) {
        const auto li = lift_isotopy(iso);
        std::vector<LiftedPoint> lps;
        for (int i = 0; i < 9; ++i) lps.push_back({random_point(m, rng), 0.1 * i});
        const std::vector<double> times = {0.25, 1.0, 0.5};
        std::vector<std::vector<LiftedPoint>> many;
        li.flow_times_many(lps, times, many);
        for (std::size_t i = 0; i < lps.size(); ++i) {
            std::vector<LiftedPoint> single;
            li.flow_times(lps[i], times, single);
            for (std::size_t k = 0; k < times.size(); ++k) {
                CHECK(many[i][k].base == single[k].base);
                CHECK(many[i][k].theta == single[k].theta);
            }
        }
    }
}

TEST_CASE("lifted Hamiltonian") {
    const auto iso = sin_cos();
    const LiftedPoint lp{pt(0.3, 0.9, 0.2), 2.0};
    const auto h = lifted_hamiltonian(iso, 0.5, lp);
    CHECK(h.value == doctest::Approx(std::sin(0.3) * std::cos(0.9)).epsilon(1e-14));
    CHECK(h.theta_coefficient == 0.0);
    CHECK(lifted_hamiltonian(CoIsotopy::identity(testing::circle_model()), 0.5, lp).value == 0.0);
}

TEST_CASE("lifted paths are symplectic") {
    const std::vector<double> times = {0.5, 1.0};
    CHECK(check_symplectic(lift_isotopy(CoIsotopy::identity(testing::circle_model())), 8, times).max_value("residual") <=
          1e-10);
    CHECK(check_symplectic(lift_isotopy(sin_cos()), 32, times).pass());
    CHECK(check_symplectic(lift_isotopy(reeb_only(0.4)), 32, times).pass());
}

TEST_CASE("sections and fixed points") {
    CHECK(section_consistency(sin_cos(), 0.5, 8, 8).pass());
    const auto wells = coham({{freq(1, 0, 0), 0.1, 0.0}, {freq(0, 1, 0), 0.1, 0.0}});
    const auto li = lift_isotopy(wells);
    CHECK(fixed_point_correspondence(li, pt(0, 0, 1.0), 1e-8).pass());
    CHECK(fixed_point_correspondence(li, pt(kPi, 0, 0.0), 1e-8).pass());
    CHECK(fixed_point_correspondence(lift_isotopy(CoIsotopy::identity(testing::circle_model())), pt(1, 2, 3), 0.0).pass());
}
