#include "doctest.h"

#include "cokinetic/algebra.hpp"
#include "cokinetic/random.hpp"
#include "cokinetic/reparam.hpp"
#include "helpers.hpp"

using namespace cokinetic;
using testing::coham;
using testing::freq;
using testing::pt;

namespace {

double vec_gap(const ModelSpec& m, const Vec& a, const Vec& b) { return max_abs(m, point_diff(m, a, b)); }

CoIsotopy reeb_flow(ReebComponent r, Kind kind = Kind::Cosymplectic) {
    Generator g;
    return CoIsotopy(testing::circle_model(), kind, g, std::move(r));
}

}  // namespace

TEST_CASE("fields of simple generators") {
    const auto siny = coham({{freq(0, 1, 0), 0.0, 1.0}});
    const Vec p = pt(0.4, 1.1, 2.0);
    const Vec X = siny.base_field(p, 0.3);
    CHECK(X[0] == doctest::Approx(std::cos(1.1)).epsilon(1e-15));
    CHECK(X[1] == 0.0);
    CHECK(X[2] == 0.0);

    const auto sinx = coham({{freq(1, 0, 0), 0.0, 1.0}});
    const Vec Y = sinx.base_field(p, 0.3);
    CHECK(Y[0] == 0.0);
    CHECK(Y[1] == doctest::Approx(-std::cos(0.4)).epsilon(1e-15));

    const auto pure = reeb_flow(testing::reeb_const(1.0));
    const Vec Z = pure.base_field(p, 0.3);
    CHECK(Z[0] == 0.0);
    CHECK(Z[1] == 0.0);
    CHECK(Z[2] == 1.0);
}

TEST_CASE("closed-form flows") {
    const ModelSpec m = testing::circle_model();
    const auto siny = coham({{freq(0, 1, 0), 0.0, 1.0}});
    for (const Vec& p : {pt(0.1, 0.2, 0.3), pt(5.0, 2.5, 1.0), pt(3.0, 4.4, 6.0)}) {
        for (double t : {0.0, 0.25, 1.0}) CHECK(vec_gap(m, siny.flow(p, t), testing::sin_y_flow(p, t)) <= 1e-12);
        CHECK(siny.flow(p, 0.0) == reduce_point(m, p));
    }
    const auto pure = reeb_flow(testing::reeb_const(1.0));
    CHECK(vec_gap(m, pure.flow(pt(1, 2, 3), 0.6), pt(1, 2, 3.6)) <= 1e-13);
}

TEST_CASE("RK4 against the closed form at 1024 steps") {
    // x' = -0.1 sin y, y' = 0.1 sin x conserves F = 0.1(cos x + cos y); check the invariant.
    const auto iso = coham({{freq(1, 0, 0), 0.1, 0.0}, {freq(0, 1, 0), 0.1, 0.0}});
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const Vec p = random_point(iso.model(), rng);
        const Vec q = iso.flow(p, 1.0);
        const double Fp = 0.1 * (std::cos(p[0]) + std::cos(p[1]));
        const double Fq = 0.1 * (std::cos(q[0]) + std::cos(q[1]));
        CHECK(std::abs(Fp - Fq) <= 1e-12);
    }
}

TEST_CASE("inverse flows round trip") {
    Rng rng(11);
    const ModelSpec m = testing::circle_model();
    RandomGeneratorSpec spec;
    for (int trial = 0; trial < 5; ++trial) {
        const auto iso = random_cohamiltonian(m, spec, rng);
        for (int i = 0; i < 8; ++i) {
            const Vec p = random_point(m, rng);
            CHECK(vec_gap(m, iso.inverse_flow(iso.flow(p, 0.7), 0.7), reduce_point(m, p)) <= 1e-8);
            const auto inv = iso.inverse_path();
            CHECK(vec_gap(m, inv.flow(iso.flow(p, 0.4), 0.4), reduce_point(m, p)) <= 1e-8);
        }
    }
}

TEST_CASE("batched flows match single-point flows exactly") {
    Rng rng(3);
    const ModelSpec m = testing::circle_model();
    RandomReebSpec rs;
    const CoIsotopy iso(m, Kind::AlmostCoHamiltonian, random_generator(m, {}, rng), random_reeb(rs, rng), 256);
    std::vector<Vec> pts;
    for (int i = 0; i < 37; ++i) pts.push_back(random_point(m, rng));

    std::vector<Vec> out;
    std::vector<double> f;
    iso.flow_many(pts, 0.6, out, false, &f);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double fi = 0;
        CHECK(out[i] == iso.flow(pts[i], 0.6, &fi));
        CHECK(f[i] == fi);
    }
    iso.flow_many(pts, 0.6, out, true);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(out[i] == iso.inverse_flow(pts[i], 0.6));

    const std::vector<double> times = {0.9, 0.1, 0.5};
    std::vector<std::vector<Vec>> many;
    iso.flow_times_many(pts, times, many);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<Vec> single;
        iso.flow_times(pts[i], times, single);
        CHECK(many[i] == single);
    }
}

TEST_CASE("thread count does not change results") {
    Rng rng(17);
    const ModelSpec m = testing::circle_model();
    const auto iso = random_cohamiltonian(m, {}, rng, 128);
    std::vector<Vec> pts;
    for (int i = 0; i < 100; ++i) pts.push_back(random_point(m, rng));
    set_worker_override(1);
    std::vector<Vec> a;
    iso.flow_many(pts, 1.0, a);
    const auto fa = flux_identity_residual(iso, OneFormField::constant({1, 0, 0}), 16);
    set_worker_override(4);
    std::vector<Vec> b;
    iso.flow_many(pts, 1.0, b);
    const auto fb = flux_identity_residual(iso, OneFormField::constant({1, 0, 0}), 16);
    set_worker_override(0);
    CHECK(a == b);
    CHECK(fa.lhs == fb.lhs);
    CHECK(fa.rhs == fb.rhs);
}

TEST_CASE("Reeb pairing") {
    const auto siny = coham({{freq(0, 1, 0), 0.0, 1.0}});
    CHECK(siny.C_function(0.4, pt(1, 2, 3)) == 0.0);
    CHECK(siny.C_spatially_constant());
    const auto c = reeb_flow(testing::reeb_const(0.4));
    CHECK(c.C_function(0.4, pt(1, 2, 3)) == doctest::Approx(0.4));
    CHECK(c.C_sup(0.2) == doctest::Approx(0.4));
}

TEST_CASE("inverse, conjugate and composed generators") {
    const ModelSpec m = testing::circle_model();
    const auto siny = coham({{freq(0, 1, 0), 0.0, 1.0}});
    const auto inv = inverse_isotopy(siny);
    const Vec q = pt(0.3, 0.8, 0.1);
    CHECK(inv.generator_value(q, 0.5) == doctest::Approx(-std::sin(0.8)).epsilon(1e-12));

    const auto sinx = coham({{freq(1, 0, 0), 0.0, 1.0}});
    const auto conj = conjugate_isotopy(sinx, AffineMap::translation(3, pt(kPi, 0, 0)));
    CHECK(conj.base_generator(0.5).value(q) == doctest::Approx(-std::sin(0.3)).epsilon(1e-14));
    const auto zconj = conjugate_isotopy(sinx, AffineMap::translation(3, pt(0, 0, 1.3)));
    CHECK(zconj.base_generator(0.5).value(q) == doctest::Approx(std::sin(0.3)).epsilon(1e-14));

    const auto twice = compose_isotopies(siny, siny);
    const Vec p = pt(0.5, 1.0, 2.0);
    CHECK(vec_gap(m, twice.flow(p, 0.7), pt(0.5 + 1.4 * std::cos(1.0), 1.0, 2.0)) <= 1e-12);
    CHECK(twice.claimed_generator(p, 0.7) == doctest::Approx(2 * std::sin(1.0)).epsilon(1e-10));

    const auto with_id = compose_isotopies(siny, CoIsotopy::identity(m));
    CHECK(vec_gap(m, with_id.flow(p, 0.7), siny.flow(p, 0.7)) <= 1e-14);
}

TEST_CASE("reparametrized paths") {
    const ModelSpec m = testing::circle_model();
    const auto siny = coham({{freq(0, 1, 0), 0.0, 1.0}});
    const auto sq = reparametrize(siny, ReparamCurve::polynomial({0, 0, 1}));
    const Vec p = pt(0.5, 1.0, 2.0);
    CHECK(vec_gap(m, sq.flow(p, 1.0), siny.flow(p, 1.0)) <= 1e-12);
    CHECK(vec_gap(m, sq.flow(p, 0.5), siny.flow(p, 0.25)) <= 1e-12);
    CHECK(sq.generator_value(p, 0.5) == doctest::Approx(std::sin(1.0)).epsilon(1e-12));
    const auto same = reparametrize(siny, ReparamCurve::identity());
    CHECK(same.flow(p, 0.3) == siny.flow(p, 0.3));
}

TEST_CASE("constructor constraints") {
    const ModelSpec m = testing::circle_model();
    CHECK_THROWS_AS(coham({{freq(0, 1, 1), 1.0, 0.0}}), Error);
    CHECK_THROWS_AS(CoIsotopy(m, Kind::CoHamiltonian, testing::generator({}), testing::reeb_const(1.0)), Error);
    CHECK_THROWS_AS(coham({{freq(0, 1, 0), 1.0, 0.0}}, m, 0), Error);
    auto g = testing::generator({{freq(0, 1, 0), 0.0, 1.0}});
    g.z_slope = PolyT::constant(0.3);
    CHECK_THROWS_AS(CoIsotopy(m, Kind::CoHamiltonian, g, std::nullopt), Error);
    CHECK_NOTHROW(CoIsotopy(testing::line_model(), Kind::CoHamiltonian, g, std::nullopt));
}

TEST_CASE("conformal residuals") {
    const auto siny = coham({{freq(0, 1, 0), 0.0, 1.0}});
    const auto r = lie_residuals(field_fourier(siny, 0.5));
    CHECK(r.lie_omega == 0.0);
    CHECK(r.lie_eta == 0.0);
    CHECK(check_cosymplectic(siny).pass());

    ReebComponent cz;
    cz.terms.push_back({1, PolyT::constant(1.0), PolyT{}});
    const auto conf = reeb_flow(cz, Kind::AlmostCoHamiltonian);
    const auto rc = lie_residuals(field_fourier(conf, 0.5));
    CHECK(rc.conformal <= 1e-15);
    CHECK(rc.mu_max == doctest::Approx(1.0));
    double mu = 0;
    conf.base_field(pt(0, 0, 0.7), 0.5, &mu);
    CHECK(mu == doctest::Approx(-std::sin(0.7)).epsilon(1e-15));

    FourierVectorField raw;
    raw.components.assign(3, FourierScalar(3));
    raw.components[2] = FourierScalar(3, {{freq(1, 0, 0), 0.0, 1.0}});
    CHECK(lie_residuals(raw).conformal > 0.5);
    CHECK_FALSE(check_cosymplectic_field(raw, Kind::Cosymplectic).pass());
}

TEST_CASE("observed RK4 order") {
    Rng rng(23);
    const ModelSpec m = testing::circle_model();
    const auto iso = random_cohamiltonian(m, {}, rng);
    std::vector<Vec> pts;
    for (int i = 0; i < 8; ++i) pts.push_back(random_point(m, rng));
    const auto r = rk4_order(iso, pts);
    CHECK((r.exact || r.order >= 3.8));
}
