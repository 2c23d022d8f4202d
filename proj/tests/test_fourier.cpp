#include "doctest.h"

#include "cokinetic/fourier.hpp"
#include "cokinetic/kernels.hpp"
#include "helpers.hpp"

using namespace cokinetic;
using testing::freq;
using testing::pt;

namespace {

FourierScalar scalar(std::initializer_list<FourierTerm> terms, int dim = 3) { return FourierScalar(dim, terms); }

const double kVol = std::pow(kTwoPi, 3);

}  // namespace

TEST_CASE("pairing I on basis vectors") {
    const ModelSpec m = testing::circle_model();
    const Vec dx = pairing_I(m, pt(1, 0, 0));
    CHECK(dx[0] == 0.0);
    CHECK(dx[1] == 1.0);
    CHECK(dx[2] == 0.0);
    const Vec dz = pairing_I(m, pt(0, 0, 1));
    CHECK(dz[2] == 1.0);
    const Vec mixed = pairing_I(m, pt(1, -2, 3));
    CHECK(mixed[0] == 2.0);
    CHECK(mixed[1] == 1.0);
    CHECK(mixed[2] == 3.0);
    const Vec round = pairing_I(m, pairing_I_inverse(m, pt(0.3, -1.7, 2.5)));
    CHECK(std::abs(round[0] - 0.3) <= 1e-14);
    CHECK(std::abs(round[1] + 1.7) <= 1e-14);
    CHECK(std::abs(round[2] - 2.5) <= 1e-14);
}

TEST_CASE("values and derivatives") {
    const auto F = scalar({{freq(1, 0, 0), 0.0, 2.0}, {freq(0, 1, 0), 0.5, 0.0}});
    const Vec p = pt(0.4, 1.3, 0.0);
    CHECK(F.value(p) == doctest::Approx(2 * std::sin(0.4) + 0.5 * std::cos(1.3)).epsilon(1e-15));
    Vec g;
    F.value_grad(p, g);
    CHECK(g[0] == doctest::Approx(2 * std::cos(0.4)).epsilon(1e-15));
    CHECK(g[1] == doctest::Approx(-0.5 * std::sin(1.3)).epsilon(1e-15));
    CHECK(F.partial(0).value(p) == doctest::Approx(2 * std::cos(0.4)).epsilon(1e-15));
    CHECK(F.independent_of(2));
    CHECK_FALSE(F.independent_of(0));
}

TEST_CASE("canonical folds opposite frequencies") {
    const auto F = scalar({{freq(-1, 0, 0), 1.0, 1.0}, {freq(1, 0, 0), 0.5, 0.0}});
    const auto c = F.canonical();
    REQUIRE(c.terms().size() == 1);
    CHECK(c.terms()[0].k[0] == 1);
    CHECK(c.terms()[0].a == doctest::Approx(1.5));
    CHECK(c.terms()[0].b == doctest::Approx(-1.0));
}

TEST_CASE("translation and affine pullback") {
    const auto F = scalar({{freq(1, 0, 0), 0.0, 1.0}});
    Vec shift = pt(kPi, 0, 0);
    const auto G = F.translated(shift);
    const Vec p = pt(0.7, 0.1, 0.2);
    CHECK(G.value(p) == doctest::Approx(-std::sin(0.7)).epsilon(1e-14));

    std::array<std::array<int, kMaxDim>, kMaxDim> A{};
    A[0][0] = 1;
    A[0][1] = 1;
    A[1][1] = 1;
    A[2][2] = 1;
    const auto H = F.affine_pullback(A, zero_vec());
    CHECK(H.value(p) == doctest::Approx(std::sin(0.7 + 0.1)).epsilon(1e-14));
}

TEST_CASE("oscillation enclosures") {
    const auto s = osc(scalar({{freq(1, 0, 0), 0.0, 1.0}}));
    CHECK(s.contains(2.0));
    CHECK(s.width() <= 1e-3);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-9));

    const auto c = osc(FourierScalar::constant(3, 5.0));
    CHECK(c.value == 0.0);
    CHECK(c.hi == 0.0);

    const auto r = osc(scalar({{freq(1, 0, 0), 1.0, 1.0}}));
    CHECK(r.contains(2.0 * std::sqrt(2.0)));
    CHECK(r.value == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));

    const auto two = osc(scalar({{freq(1, 0, 0), 1.0, 0.0}, {freq(0, 1, 0), 1.0, 0.0}}), 64);
    CHECK(two.contains(4.0));
    CHECK_THROWS_AS(osc(FourierScalar::constant(3, 1.0), 4), Error);
}

TEST_CASE("integrals over the flat model") {
    const ModelSpec m = testing::circle_model();
    CHECK(integrate(FourierScalar::constant(3, 1.0), m) == doctest::Approx(kVol));
    CHECK(integrate(scalar({{freq(1, 0, 0), 0.0, 1.0}}), m) == 0.0);
    auto F = scalar({{freq(0, 2, 0), 1.0, 0.0}});
    F = F + FourierScalar::constant(3, 3.0);
    CHECK(integrate(F, m) == doctest::Approx(3.0 * kVol));
    CHECK_THROWS_AS(integrate(F, testing::line_model()), Error);
}

TEST_CASE("Hodge splitting") {
    SUBCASE("harmonic plus exact") {
        OneFormField a = OneFormField::zero(3);
        a.components[0] = scalar({{freq(0, 0, 0), 3.0, 0.0}, {freq(1, 0, 0), 1.0, 0.0}});
        const auto s = hodge_split(a);
        CHECK(s.harmonic.components[0].mean() == doctest::Approx(3.0));
        CHECK(s.primitive.value(pt(0.9, 0, 0)) == doctest::Approx(std::sin(0.9)).epsilon(1e-14));
        CHECK(hodge_reconstruction_error(a, s) <= 1e-13);
    }
    SUBCASE("eta is harmonic") {
        const auto a = OneFormField::constant({0, 0, 1});
        const auto s = hodge_split(a);
        CHECK(s.harmonic.components[2].mean() == 1.0);
        CHECK(s.primitive.value(pt(0.3, 0.4, 0.5)) == 0.0);
    }
    SUBCASE("exact form") {
        const auto U = scalar({{freq(1, 1, 0), 1.0, 0.0}});
        const auto a = OneFormField::exact(U);
        const auto s = hodge_split(a);
        for (const auto& c : s.harmonic.components) CHECK(std::abs(c.mean()) <= 1e-15);
        CHECK(s.primitive.value(pt(0.2, 0.5, 0)) == doctest::Approx(std::cos(0.7)).epsilon(1e-14));
        CHECK(hodge_reconstruction_error(a, s) <= 1e-13);
    }
    SUBCASE("non-closed input") {
        OneFormField a = OneFormField::zero(3);
        a.components[0] = scalar({{freq(0, 1, 0), 1.0, 0.0}});
        CHECK_FALSE(a.is_closed());
        CHECK_THROWS_AS(hodge_split(a), Error);
    }
}

TEST_CASE("harmonic L2 norms") {
    const ModelSpec m = testing::circle_model();
    const double r = std::pow(kTwoPi, 1.5);
    CHECK(l2_norm_harmonic(OneFormField::zero(3), m) == 0.0);
    CHECK(l2_norm_harmonic(OneFormField::constant({1, 0, 0}), m) == doctest::Approx(r));
    CHECK(l2_norm_harmonic(OneFormField::constant({0, 3, 4}), m) == doctest::Approx(5.0 * r));
}

TEST_CASE("grid kernels agree across instruction sets") {
    const auto F = scalar({{freq(1, 0, 0), 0.3, -0.2}, {freq(1, 2, 0), 0.1, 0.7}, {freq(0, 3, 0), -0.4, 0.05}});
    std::vector<int> active;
    const auto ref = grid_values(F, 48, static_cast<int>(kernels::Isa::Scalar), &active);
    CHECK(active.size() == 2);
    CHECK(ref.size() == 48u * 48u);
    // Spot values against direct evaluation.
    const double h = kTwoPi / 48;
    for (int i : {0, 7, 31}) {
        for (int j : {0, 13, 47}) {
            CHECK(ref[i * 48 + j] == doctest::Approx(F.value(pt(i * h, j * h, 0))).epsilon(1e-13));
        }
    }
    if (kernels::cpu_has_avx2()) {
        const auto fast = grid_values(F, 48, static_cast<int>(kernels::Isa::Avx2));
        double worst = 0;
        for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(fast[i] - ref[i]));
        CHECK(worst <= 1e-14);
        const auto a = grid_extrema(F, 48, static_cast<int>(kernels::Isa::Scalar));
        const auto b = grid_extrema(F, 48, static_cast<int>(kernels::Isa::Avx2));
        CHECK(std::abs(a.max - b.max) <= 1e-14);
        CHECK(std::abs(a.min - b.min) <= 1e-14);
    }
}

TEST_CASE("fast sincos against libm") {
    double worst = 0;
    for (int i = -2000; i <= 2000; ++i) {
        const double x = i * 0.0137 + 1e-3 * (i % 7);
        double s, c;
        fast_sincos(x, s, c);
        worst = std::max({worst, std::abs(s - std::sin(x)), std::abs(c - std::cos(x))});
    }
    CHECK(worst <= 4e-16);
}
