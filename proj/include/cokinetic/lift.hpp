#pragma once

#include <cstdint>
#include <vector>

#include "cokinetic/isotopy.hpp"
#include "cokinetic/report.hpp"

namespace cokinetic {

struct LiftedPoint {
    Vec base{};
    double theta = 0.0;
};

// Path on M x S^1: (x, theta) -> (phi_t(x), theta - int_0^t C^s(phi_s(x)) ds).
class LiftedIsotopy {
public:
    explicit LiftedIsotopy(CoIsotopy base);

    const CoIsotopy& base() const { return base_; }
    // int_0^t C(Phi, eta)^s(phi_s(x)) ds by composite Simpson on the flow grid.
    double rotation_integral(const Vec& x, double t) const;
    LiftedPoint flow(const LiftedPoint& lp, double t) const;
    void flow_times(const LiftedPoint& lp, const std::vector<double>& times, std::vector<LiftedPoint>& out) const;
    // flow_times() for many points; out[i][k] is point i at times[k].
    void flow_times_many(const std::vector<LiftedPoint>& lps, const std::vector<double>& times,
                         std::vector<std::vector<LiftedPoint>>& out) const;

private:
    CoIsotopy base_;
};

LiftedIsotopy lift_isotopy(const CoIsotopy& iso);

struct LiftedHamiltonianValue {
    double value = 0.0;
    double theta_coefficient = 0.0;  // eta(phi_dot_t) at the base point
};
LiftedHamiltonianValue lifted_hamiltonian(const CoIsotopy& iso, double t, const LiftedPoint& lp);

// Jacobian test J^T W J = W for the lifted symplectic form at sampled points
// and times; one breakdown entry per time.
VerificationReport check_symplectic(const LiftedIsotopy& li, int samples, const std::vector<double>& times,
                                    std::uint64_t seed = 1, double tol = 1e-5);

// d(H o S_l) against d(H o S_0) over `sections` sections at sampled points.
VerificationReport section_consistency(const CoIsotopy& iso, double t, int samples, int sections = 16,
                                       std::uint64_t seed = 1);

// Max displacement of (z, theta) under the lifted time-1 map over 16 thetas.
VerificationReport fixed_point_correspondence(const LiftedIsotopy& li, const Vec& z, double tol);

// max |R(x, theta) - theta| over samples and times (wrapped).
double max_theta_shift(const LiftedIsotopy& li, int samples, const std::vector<double>& times, std::uint64_t seed = 1);

}  // namespace cokinetic
