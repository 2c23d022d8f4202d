#include "cokinetic/linalg.hpp"

namespace cokinetic {

CosymplecticCouple::CosymplecticCouple(const Eigen::MatrixXd& b, const Eigen::VectorXd& L) {
    if (b.rows() != b.cols() || b.rows() != L.size() || L.size() == 0)
        throw Error(ErrorCode::InvalidArgument, "couple needs a square b matching the length of L");
    if (L.cwiseAbs().maxCoeff() == 0.0) throw Error(ErrorCode::InvalidArgument, "L must be nonzero");
    b_ = 0.5 * (b - b.transpose());
    L_ = L;
}

CosymplecticCouple canonical_couple(int n) {
    if (n < 1) throw Error(ErrorCode::InvalidDimension, "canonical couple needs n >= 1");
    const int d = 2 * n + 1;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < n; ++i) {
        b(i, n + i) = 1.0;
        b(n + i, i) = -1.0;
    }
    Eigen::VectorXd L = Eigen::VectorXd::Zero(d);
    L(d - 1) = 1.0;
    return CosymplecticCouple(b, L);
}

PairingMatrix build_pairing(const CosymplecticCouple& c) {
    return {c.b() + c.L() * c.L().transpose()};
}

bool is_cosymplectic(const CosymplecticCouple& c) {
    const Eigen::MatrixXd A = build_pairing(c).A;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const double op = svd.singularValues()(0);
    const double det = A.determinant();
    return std::abs(det) > 1e-10 * std::pow(op, c.dim());
}

Eigen::VectorXd reeb_vector(const CosymplecticCouple& c, double tol) {
    if (!is_cosymplectic(c)) throw Error(ErrorCode::NotCosymplectic, "pairing matrix is singular");
    const int d = c.dim();
    Eigen::MatrixXd S(d + 1, d);
    S.topRows(d) = c.b();
    S.row(d) = c.L().transpose();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d + 1);
    rhs(d) = 1.0;
    Eigen::VectorXd xi = S.completeOrthogonalDecomposition().solve(rhs);
    const double res = (S * xi - rhs).cwiseAbs().maxCoeff();
    if (res > tol) throw Error(ErrorCode::NoReebVector, "least-squares residual " + std::to_string(res));
    return xi;
}

CosymplecticCouple pullback_couple(const CosymplecticCouple& c, const Eigen::MatrixXd& P, double tol) {
    if (P.rows() != c.dim() || P.cols() != c.dim())
        throw Error(ErrorCode::InvalidArgument, "change of basis has the wrong size");
    if (std::abs(P.determinant()) <= tol) throw Error(ErrorCode::SingularChangeOfBasis, "|det P| below tolerance");
    Eigen::MatrixXd b = P.transpose() * c.b() * P;
    Eigen::VectorXd L = P.transpose() * c.L();
    return CosymplecticCouple(b, L);
}

}  // namespace cokinetic
