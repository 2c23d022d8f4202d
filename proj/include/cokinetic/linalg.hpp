#pragma once

#include <Eigen/Dense>

#include "cokinetic/common.hpp"

namespace cokinetic {

// A couple (b, L): antisymmetric bilinear form plus a nonzero covector.
class CosymplecticCouple {
public:
    // Antisymmetry is enforced by keeping (b - b^T)/2. Throws InvalidArgument
    // for a zero covector or mismatched sizes.
    CosymplecticCouple(const Eigen::MatrixXd& b, const Eigen::VectorXd& L);

    int dim() const { return static_cast<int>(L_.size()); }
    const Eigen::MatrixXd& b() const { return b_; }
    const Eigen::VectorXd& L() const { return L_; }

private:
    Eigen::MatrixXd b_;
    Eigen::VectorXd L_;
};

struct PairingMatrix {
    Eigen::MatrixXd A;
};

CosymplecticCouple canonical_couple(int n);
PairingMatrix build_pairing(const CosymplecticCouple& c);
bool is_cosymplectic(const CosymplecticCouple& c);
Eigen::VectorXd reeb_vector(const CosymplecticCouple& c, double tol = 1e-10);
CosymplecticCouple pullback_couple(const CosymplecticCouple& c, const Eigen::MatrixXd& P, double tol = 1e-12);

}  // namespace cokinetic
