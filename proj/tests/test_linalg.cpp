#include "doctest.h"

#include "cokinetic/linalg.hpp"

using namespace cokinetic;

namespace {

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
    Eigen::MatrixXd m(rows.size(), rows.begin()->size());
    int i = 0;
    for (const auto& r : rows) {
        int j = 0;
        for (double v : r) m(i, j++) = v;
        ++i;
    }
    return m;
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(xs.size());
    int i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

}  // namespace

TEST_CASE("canonical couple normal form") {
    const auto c = canonical_couple(1);
    CHECK(c.b().isApprox(mat({{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}})));
    CHECK(c.L().isApprox(vec({0, 0, 1})));
    const auto c2 = canonical_couple(2);
    CHECK(c2.dim() == 5);
    CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(c2.b()).rank() == 4);
    CHECK_THROWS_AS(canonical_couple(0), Error);
}

TEST_CASE("pairing matrix entries") {
    CHECK(build_pairing(canonical_couple(1)).A.isApprox(mat({{0, 1, 0}, {-1, 0, 0}, {0, 0, 1}})));
    const CosymplecticCouple zero_b(Eigen::MatrixXd::Zero(3, 3), vec({1, 0, 0}));
    CHECK(build_pairing(zero_b).A.isApprox(mat({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}})));
    const CosymplecticCouple planar(mat({{0, 1}, {-1, 0}}), vec({1, 0}));
    CHECK(build_pairing(planar).A.isApprox(mat({{1, 1}, {-1, 0}})));
}

TEST_CASE("cosymplectic predicate") {
    CHECK(is_cosymplectic(canonical_couple(1)));
    CHECK_FALSE(is_cosymplectic(CosymplecticCouple(Eigen::MatrixXd::Zero(3, 3), vec({0.3, -1, 2}))));
    const auto c = canonical_couple(1);
    CHECK(is_cosymplectic(CosymplecticCouple(c.b(), 0.5 * c.L())));
    CHECK_THROWS_AS(CosymplecticCouple(Eigen::MatrixXd::Zero(3, 3), Eigen::VectorXd::Zero(3)), Error);
}

TEST_CASE("antisymmetric part is kept") {
    const CosymplecticCouple c(mat({{0, 3, 0}, {1, 0, 0}, {0, 0, 0}}), vec({0, 0, 1}));
    CHECK(c.b().isApprox(mat({{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}})));
}

TEST_CASE("Reeb vectors") {
    CHECK(reeb_vector(canonical_couple(1)).isApprox(vec({0, 0, 1})));
    const auto P = mat({{1, 2, 0}, {0, 1, 0}, {1, 0, 3}});
    const auto pulled = pullback_couple(canonical_couple(1), P);
    const Eigen::VectorXd expect = P.fullPivLu().solve(vec({0, 0, 1}));
    CHECK((reeb_vector(pulled) - expect).cwiseAbs().maxCoeff() < 1e-12);

    const CosymplecticCouple planar(mat({{0, 1}, {-1, 0}}), vec({1, 0}));
    CHECK(is_cosymplectic(planar));
    try {
        reeb_vector(planar);
        FAIL("expected NoReebVector");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoReebVector);
    }
}

TEST_CASE("pullbacks") {
    const auto c = canonical_couple(1);
    const auto same = pullback_couple(c, Eigen::MatrixXd::Identity(3, 3));
    CHECK(same.b().isApprox(c.b()));
    CHECK(same.L().isApprox(c.L()));

    const auto doubled = pullback_couple(c, 2.0 * Eigen::MatrixXd::Identity(3, 3));
    CHECK(doubled.b().isApprox(4.0 * c.b()));
    CHECK(doubled.L().isApprox(2.0 * c.L()));

    // det P = 2, so det A' = 4 det A.
    const auto P = mat({{2, 1, 0}, {0, 1, 0}, {0, 3, 1}});
    const auto q = pullback_couple(c, P);
    CHECK(is_cosymplectic(q));
    CHECK(build_pairing(q).A.determinant() == doctest::Approx(4.0 * build_pairing(c).A.determinant()));

    try {
        pullback_couple(c, mat({{1, 2, 0}, {2, 4, 0}, {0, 0, 1}}));
        FAIL("expected SingularChangeOfBasis");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularChangeOfBasis);
    }
}
