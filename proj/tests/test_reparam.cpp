#include "doctest.h"

#include "cokinetic/reparam.hpp"
#include "helpers.hpp"

using namespace cokinetic;
using testing::coham;
using testing::freq;
using testing::pt;

namespace {

const testing::Mode kSinY{freq(0, 1, 0), 0.0, 1.0};

ReparamOptions fast() {
    ReparamOptions o;
    o.osc_res = 64;
    o.lip_pairs = 128;
    o.c0.resolution = 6;
    o.c0.time_nodes = 13;
    return o;
}

CoIsotopy scaled_sin_y(double s) { return coham({{freq(0, 1, 0), 0.0, s}}); }

}  // namespace

TEST_CASE("boundary flatness") {
    const auto siny = coham({kSinY});
    CHECK_FALSE(is_boundary_flat(siny, 0.05, 64));
    const auto zero = CoIsotopy::identity(testing::circle_model());
    CHECK(is_boundary_flat(zero, 0.05, 64));
    CHECK(is_boundary_flat(zero, 0.3, 64));
    const auto flat = reparametrize(siny, ReparamCurve::smooth_plateau(0.1));
    CHECK(is_boundary_flat(flat, 0.1, 64));
}

TEST_CASE("Lipschitz estimates") {
    const auto siny = coham({kSinY});
    const auto a = lipschitz_constants(siny, 64, 64);
    CHECK(a.k0 == 0.0);
    CHECK(a.c0 == 0.0);
    CHECK(a.maxC == 0.0);

    Generator g;
    PolyT b;
    b.c[1] = 1.0;
    g.terms.push_back({freq(0, 1, 0), PolyT{}, b});
    const CoIsotopy ramp(testing::circle_model(), Kind::CoHamiltonian, g, std::nullopt);
    const auto r = lipschitz_constants(ramp, 64, 64);
    CHECK(r.k0 >= 1.0);
    // 1.25 times the sup of |sin y|, whose grid enclosure adds a little slack.
    CHECK(r.k0 <= 1.25 * 1.005);
}

TEST_CASE("boundary flattening") {
    const auto siny = coham({kSinY});
    const auto res = boundary_flatten(siny, 0.1, fast());
    CHECK(res.report.pass());
    CHECK(is_boundary_flat(res.iso, res.delta, 64));
    CHECK(res.report.max_value("D_L1inf") < 0.1);
    CHECK(res.report.max_value("dbar") < 0.1);
    const ModelSpec m = testing::circle_model();
    for (const Vec& p : {pt(0.1, 0.2, 0.3), pt(4.0, 5.0, 6.0)})
        CHECK(max_abs(m, point_diff(m, res.iso.flow(p, 1.0), siny.flow(p, 1.0))) <= 1e-8);

    const auto zero = boundary_flatten(CoIsotopy::identity(m), 0.1, fast());
    CHECK(zero.report.pass());
    CHECK(zero.iso.is_identity());
    CHECK_THROWS_AS(boundary_flatten(siny, 0.0, fast()), Error);
}

TEST_CASE("normalized flattening") {
    const auto res = normalized_flatten(coham({kSinY}), 0.1, fast());
    CHECK(res.report.pass());
    CHECK(res.report.max_value("endpoint_mismatch") <= 1e-8);
}

TEST_CASE("reparameterization lemma") {
    const auto siny = coham({kSinY, {freq(1, 1, 0), 0.3, 0.0}});
    const auto id = ReparamCurve::identity();
    const auto same = verify_rl2(siny, id, id, fast());
    CHECK(same.pass());
    CHECK(same.max_value("distance") == 0.0);
    CHECK(verify_rl2(siny, id, ReparamCurve::polynomial({0, 0, 1}), fast()).pass());
    CHECK(verify_rl2(siny, id, flatten_curve(0.1), fast()).pass());
}

TEST_CASE("uniform reparameterization over sequences") {
    const auto id = ReparamCurve::identity();
    const auto sq = ReparamCurve::polynomial({0, 0, 1});
    const auto siny = coham({kSinY});
    CHECK(verify_rl3({siny, siny, siny}, id, sq, 0.1, fast()).pass());
    std::vector<CoIsotopy> seq;
    // Pairwise distances 2 |2^-i - 2^-j| drop below epsilon / 3 from i = 6 on.
    for (int i = 0; i < 12; ++i) seq.push_back(scaled_sin_y(1.0 + std::ldexp(1.0, -i)));
    CHECK(verify_rl3(seq, id, sq, 0.1, fast(), 4).pass());
}
