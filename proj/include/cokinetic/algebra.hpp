#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cokinetic/isotopy.hpp"
#include "cokinetic/report.hpp"

namespace cokinetic {

using PointMap = std::function<Vec(const Vec&, double)>;
using ScalarField = std::function<double(const Vec&, double)>;
// Positions at several times from one start point, in the order given.
using MultiTimeMap = std::function<void(const Vec&, const std::vector<double>&, std::vector<Vec>&)>;
// A map or scalar field evaluated on a batch of points.
using BatchMap = std::function<void(const std::vector<Vec>&, std::vector<Vec>&)>;
using BatchScalar = std::function<void(const std::vector<Vec>&, std::vector<double>&)>;

// A path t -> lambda_t given pointwise, with an optional inverse and a
// claimed generator.
struct PathView {
    ModelSpec model;
    PointMap flow;
    PointMap inverse;
    ScalarField generator;
    int steps = 1024;
    // Optional shared-pass evaluation of `flow` at several times.
    MultiTimeMap flow_times;
    // Optional batched `generator` at one time.
    std::function<void(const std::vector<Vec>&, double, std::vector<double>&)> generator_many;
};

Vec vector_field(const CoIsotopy& iso, const Vec& p, double t);

// t -> phi_t^{-1}; generator -F_t o phi_t. Co-Hamiltonian only.
CoIsotopy inverse_isotopy(const CoIsotopy& iso);
CoIsotopy conjugate_isotopy(const CoIsotopy& iso, const AffineMap& rho);

// t -> phi_t o psi_t with the claimed generator F_t + H_t o phi_t^{-1}.
struct ComposedPath {
    CoIsotopy a, b;
    Vec flow(const Vec& p, double t) const;
    Vec inverse(const Vec& q, double t) const;
    double claimed_generator(const Vec& q, double t) const;
    PathView view() const;
};
ComposedPath compose_isotopies(const CoIsotopy& a, const CoIsotopy& b);

PathView path_of(const CoIsotopy& iso);

struct SampleOptions {
    int samples = 64;
    std::uint64_t seed = 1;
    double tol = 1e-5;
    double h = 1e-5;       // spatial finite-difference step
    double nested_h = 3e-4;  // spatial step when differentiating a time difference
    double t_lo = 0.05;    // sampled times stay inside [t_lo, t_hi]
    double t_hi = 0.95;
};

// Path velocity by the fourth-order central stencil at spacing dt
// (callers use dt = 1/(4 steps)); circle coordinates are unwrapped.
Vec path_velocity(const ModelSpec& m, const PointMap& flow, const Vec& p, double t, double dt);
// Same stencil; forward paths share one integration pass.
Vec path_velocity(const CoIsotopy& iso, const Vec& p, double t, double dt);
Vec curve_velocity(const ModelSpec& m, const std::function<Vec(double)>& c, double t, double dt);
double time_derivative(const std::function<double(double)>& g, double t, double dt);
// Central-difference Jacobian of a map with wrapped differences.
Eigen::MatrixXd map_jacobian(const ModelSpec& m, const std::function<Vec(const Vec&)>& f, const Vec& x, double h);
Eigen::MatrixXd map_jacobian(const ModelSpec& m, const BatchMap& f, const Vec& x, double h);

// I(velocity) = d(claimed generator) at sampled (p, t).
VerificationReport verify_generator_identity(const PathView& path, const SampleOptions& opt);

// Group algebra of co-Hamiltonian isotopies.
VerificationReport verify_fact1(const CoIsotopy& a, const SampleOptions& opt);
VerificationReport verify_fact2(const CoIsotopy& a, const AffineMap& rho, const SampleOptions& opt);
VerificationReport verify_fact3(const CoIsotopy& a, const CoIsotopy& b, const SampleOptions& opt);
VerificationReport verify_fact4(const CoIsotopy& a, const SampleOptions& opt);
VerificationReport verify_fact5(const CoIsotopy& a, const CoIsotopy& b, const SampleOptions& opt);
// Conformal algebra; any kind.
VerificationReport verify_fact6(const CoIsotopy& a, const SampleOptions& opt);
VerificationReport verify_fact7(const CoIsotopy& a, const CoIsotopy& b, const SampleOptions& opt);
// Translation conjugators only.
VerificationReport verify_fact8(const CoIsotopy& a, const Vec& shift, const SampleOptions& opt);
VerificationReport verify_fact9(const CoIsotopy& a, const CoIsotopy& b, const SampleOptions& opt);
VerificationReport verify_fact10(const CoIsotopy& a, const SampleOptions& opt);

// Vector field with Fourier components (x_1..x_n, y_1..y_n, z).
struct FourierVectorField {
    std::vector<FourierScalar> components;
};
FourierVectorField field_fourier(const CoIsotopy& iso, double t);

struct LieResiduals {
    double lie_omega = 0.0;   // max coefficient of d(i_X omega)
    double lie_eta = 0.0;     // max coefficient of d(eta(X))
    double conformal = 0.0;   // max coefficient of L_X eta - mu eta
    double mu_max = 0.0;      // max coefficient of mu = d eta(X) / dz
};
LieResiduals lie_residuals(const FourierVectorField& X);
VerificationReport check_cosymplectic(const CoIsotopy& iso, int samples = 16);
VerificationReport check_cosymplectic_field(const FourierVectorField& X, Kind declared);

struct EnergySample {
    double t;
    double value;      // G(phi_t(p))
    double predicted;  // G(p) + int_0^t eta(X)^2
};
std::vector<EnergySample> orbit_energy_profile(const CoIsotopy& iso, const Vec& p, const std::vector<double>& times);

// Delta(Phi, alpha)(p) by composite Simpson on the path quadrature.
double winding(const CoIsotopy& iso, const OneFormField& alpha, const Vec& p);
// Delta for several forms at several points; rows follow `points`.
std::vector<std::vector<double>> winding_values(const CoIsotopy& iso, const std::vector<OneFormField>& alphas,
                                                const std::vector<Vec>& points);

// Uniform grid on M, `res` nodes per circle; the z axis collapses to z = 0
// when skip_z is set. Returns points and the z multiplicity.
std::vector<Vec> grid_points(const ModelSpec& m, int res, bool skip_z);

struct FluxResult {
    double residual = 0.0;
    double lhs = 0.0;  // int Delta(Phi, eta) alpha ^ omega^n / Vol
    double rhs = 0.0;  // int Delta(Phi, alpha) eta ^ omega^n / Vol
    int resolution = 0;
    bool z_collapsed = false;
};
FluxResult flux_identity_residual(const CoIsotopy& iso, const OneFormField& alpha, int res = 64);

// Observed RK4 order from time-1 positions at steps N, 2N, 4N.
struct OrderResult {
    double order = 0.0;
    double e1 = 0.0, e2 = 0.0;
    bool exact = false;  // both differences at rounding level
};
OrderResult rk4_order(const CoIsotopy& iso, const std::vector<Vec>& points, int base_steps = 16);

}  // namespace cokinetic
