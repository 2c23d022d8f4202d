#include "doctest.h"

#include "cokinetic/norms.hpp"
#include "cokinetic/random.hpp"
#include "cokinetic/reparam.hpp"
#include "helpers.hpp"

using namespace cokinetic;
using testing::coham;
using testing::freq;
using testing::pt;

namespace {

// t * sin(y)
CoIsotopy ramp_sin_y() {
    Generator g;
    PolyT b;
    b.c[1] = 1.0;
    g.terms.push_back({freq(0, 1, 0), PolyT{}, b});
    return CoIsotopy(testing::circle_model(), Kind::CoHamiltonian, g, std::nullopt);
}

CoIsotopy cosym(std::initializer_list<testing::Mode> modes, double c0) {
    return CoIsotopy(testing::circle_model(), Kind::AlmostCoHamiltonian, testing::generator(modes), testing::reeb_const(c0));
}

const testing::Mode kSinY{freq(0, 1, 0), 0.0, 1.0};
constexpr int kRes = 64;

}  // namespace

TEST_CASE("co-Hofer lengths") {
    const auto siny = coham({kSinY});
    const auto l1 = length_L1inf(siny);
    CHECK(l1.value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(l1.value_lo <= 2.0);
    CHECK(l1.value_hi >= 2.0);
    CHECK(l1.value_hi - l1.value_lo <= 1e-3);
    CHECK(length_Linf(siny).value == doctest::Approx(2.0).epsilon(1e-9));

    const auto zero = CoIsotopy::identity(testing::circle_model());
    CHECK(length_L1inf(zero).value == 0.0);
    CHECK(length_Linf(zero).value == 0.0);

    const auto ramp = ramp_sin_y();
    CHECK(length_L1inf(ramp, kRes).value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(length_Linf(ramp, kRes).value == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(reflavor(length_L1inf(ramp, kRes), Flavor::Linf).value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("length invariances") {
    Rng rng(31);
    const ModelSpec m = testing::circle_model();
    const auto iso = random_cohamiltonian(m, {}, rng);
    const double base = length_L1inf(iso, kRes).value;
    CHECK(length_L1inf(iso.inverse_path(), kRes).value == doctest::Approx(base).epsilon(1e-6));
    CHECK(length_L1inf(conjugate_isotopy(iso, random_conjugator(m, rng)), kRes).value ==
          doctest::Approx(base).epsilon(1e-6));
    const auto zeta = ReparamCurve::polynomial({0, 0.3, 0.7});
    CHECK(length_L1inf(reparametrize(iso, zeta), kRes).value == doctest::Approx(base).epsilon(1e-6));

    const auto siny = coham({kSinY});
    const auto lin = length_Linf(siny);
    // max zeta' = 0.3 + 1.4
    CHECK(length_Linf(reparametrize(siny, zeta)).value <= 1.7 * lin.value_hi + 1e-8);
}

TEST_CASE("co-Hofer distances") {
    const auto siny = coham({kSinY});
    const auto zero = CoIsotopy::identity(testing::circle_model());
    const auto shifted = coham({kSinY, {freq(1, 0, 0), 0.5, 0.0}});
    CHECK(distance_CH(siny, siny, Flavor::L1inf, kRes).value == 0.0);
    CHECK(distance_CH(siny, zero, Flavor::L1inf, kRes).value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(distance_CH(siny, shifted, Flavor::L1inf, kRes).value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(distance_CH(shifted, siny, Flavor::Linf, kRes).value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Aco norm terms") {
    const ModelSpec m = testing::circle_model();
    const auto r = aco_norm(reeb_field_data(m));
    CHECK(r.theta == doctest::Approx(1.0));
    CHECK(r.harmonic_l2 == 0.0);
    CHECK(r.nu_b == 0.0);
    CHECK(r.total == doctest::Approx(1.0));

    const auto s = aco_norm(field_data(coham({kSinY}), 0.5));
    CHECK(s.harmonic_l2 <= 1e-15);
    CHECK(s.nu_b == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(s.theta == 0.0);
    CHECK(s.total == doctest::Approx(2.0).epsilon(1e-9));

    const auto z = aco_norm(field_data(CoIsotopy::identity(m), 0.5));
    CHECK(z.total == 0.0);
}

TEST_CASE("almost co-Hofer lengths and distances") {
    const auto a = cosym({kSinY}, 0.3);
    CHECK(almost_length(a, Flavor::L1inf, AlmostVariant::AH, kRes).value == doctest::Approx(2.3).epsilon(1e-9));
    CHECK(almost_length(cosym({}, 0.0), Flavor::L1inf).value == 0.0);

    const auto b = cosym({kSinY}, 0.5);
    CHECK(distance_AH(a, a, Flavor::L1inf, kRes).value == 0.0);
    CHECK(distance_AH(a, b, Flavor::L1inf, kRes).value == doctest::Approx(0.2).epsilon(1e-12));
    const auto c = cosym({kSinY, {freq(1, 0, 0), 0.0, 1.0}}, 0.3);
    CHECK(distance_AH(a, c, Flavor::L1inf, kRes).value == doctest::Approx(2.0).epsilon(1e-9));

    Rng rng(8);
    const ModelSpec m = testing::circle_model();
    RandomReebSpec rs;
    const CoIsotopy r(m, Kind::AlmostCoHamiltonian, random_generator(m, {}, rng), random_reeb(rs, rng));
    const double fwd = almost_length(r, Flavor::Linf, AlmostVariant::AH, kRes).value;
    CHECK(almost_length(r.inverse_path(), Flavor::Linf, AlmostVariant::AH, kRes).value ==
          doctest::Approx(fwd).epsilon(1e-6));
}

TEST_CASE("C0 distances") {
    const ModelSpec m = testing::circle_model();
    const auto grid = grid_points(m, 6, false);
    auto id = [](const Vec& p) { return p; };
    auto shift = [](double d) { return [d](const Vec& p) { return pt(p[0] + d, p[1], p[2]); }; };
    CHECK(c0_distance(m, id, id, id, id, grid) == 0.0);
    CHECK(c0_distance(m, id, id, shift(0.4), shift(-0.4), grid) == doctest::Approx(0.4).epsilon(1e-14));

    const auto siny = coham({kSinY});
    CHECK(path_distance(siny, siny).value == 0.0);
}

TEST_CASE("energy upper bound") {
    const ModelSpec m = testing::circle_model();
    const auto id = CoIsotopy::identity(m);
    const auto siny = coham({kSinY});
    const auto e0 = energy_upper_bound(id, {siny, id});
    CHECK(e0.value == 0.0);
    CHECK(e0.best == 1);
    CHECK(std::isnan(e0.lengths[0]));

    const auto e1 = energy_upper_bound(siny, {reparametrize(siny, ReparamCurve::polynomial({0, 0, 1})),
                                              reparametrize(siny, ReparamCurve::smooth_plateau(0.1))});
    CHECK(e1.value == doctest::Approx(2.0).epsilon(1e-6));

    // zeta = 5t - 12t^2 + 8t^3 stays in [0, 1] but runs back between its
    // critical points (1 -+ 1/sqrt 6)/2; its total variation is 1.5443310539518174.
    const auto e2 = energy_upper_bound(siny, {siny, reparametrize(siny, ReparamCurve::polynomial({0, 5, -12, 8}))});
    CHECK(e2.best == 0);
    CHECK(e2.value == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(e2.lengths[1] == doctest::Approx(2 * 1.5443310539518174).epsilon(1e-6));
}

TEST_CASE("Cauchy diagnostics") {
    std::vector<CoIsotopy> geo;
    for (int i = 0; i < 5; ++i) geo.push_back(coham({{freq(0, 1, 0), 0.0, 1.0 + std::ldexp(1.0, -i)}}));
    const auto g = cauchy_report(geo, Flavor::L1inf, {}, false);
    for (int i = 0; i + 1 < 5; ++i)
        CHECK(g.pairwise_D[i][i + 1] == doctest::Approx(2.0 * std::ldexp(1.0, -i - 1)).epsilon(1e-9));
    CHECK(g.tail_profile.back() == 0.0);

    const auto siny = coham({kSinY});
    const auto neg = coham({{freq(0, 1, 0), 0.0, -1.0}});
    const auto alt = cauchy_report({siny, neg, siny, neg}, Flavor::L1inf, {}, false);
    CHECK(alt.cauchy_margin == doctest::Approx(4.0).epsilon(1e-9));

    const auto same = cauchy_report({siny, siny, siny}, Flavor::L1inf);
    CHECK(same.cauchy_margin == 0.0);
    CHECK(same.pairwise_c0[0][2] == 0.0);
}
