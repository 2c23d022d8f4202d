#pragma once

#include <optional>
#include <vector>

#include "cokinetic/curve.hpp"
#include "cokinetic/isotopy.hpp"
#include "cokinetic/norms.hpp"
#include "cokinetic/report.hpp"

namespace cokinetic {

// t -> phi_{zeta(t)} with generator zeta'(t) F_{zeta(t)}.
CoIsotopy reparametrize(const CoIsotopy& iso, const ReparamCurve& zeta);

// Generator (and conformal factor) vanish at 64 nodes in each of [0, delta)
// and (1 - delta, 1].
bool is_boundary_flat(const CoIsotopy& iso, double delta, int osc_res = 256);

struct LipschitzData {
    double k0 = 0.0;      // sup-norm Lipschitz constant of t -> F_t
    double c0 = 0.0;      // Lipschitz constant of t -> eta(phi_dot_t)
    double maxosc = 0.0;  // max_t osc(F_t), certified upper value
    double maxC = 0.0;    // max_t |C^t|
    double C_of_F_eta = 0.0;
    std::string estimator;
    Json to_json() const;
};
// Difference quotients over `pairs` consecutive time pairs, inflated by 1.25.
// Almost kinds measure the Reeb part through the space average of C^t.
LipschitzData lipschitz_constants(const CoIsotopy& iso, int pairs = 512, int osc_res = 256);

// Inflated secant speed of t -> phi_t and t -> phi_t^{-1} on a grid.
double flow_lipschitz(const CoIsotopy& iso, int resolution = 8, int time_nodes = 17);

struct ReparamOptions {
    int osc_res = 256;
    int lip_pairs = 512;
    C0Options c0{};
    // Precomputed estimates for the input isotopy; measured when absent.
    std::optional<LipschitzData> lip;
    std::optional<double> l0;
};

struct FlattenResult {
    CoIsotopy iso;
    VerificationReport report;
    double epsilon_prime = 0.0;
    double delta = 0.0;
    int rounds = 0;
};

FlattenResult boundary_flatten(const CoIsotopy& iso, double epsilon, const ReparamOptions& opt = {});
FlattenResult normalized_flatten(const CoIsotopy& iso, double epsilon, const ReparamOptions& opt = {});

VerificationReport verify_rl2(const CoIsotopy& iso, const ReparamCurve& xi1, const ReparamCurve& xi2,
                              const ReparamOptions& opt = {});
VerificationReport verify_rl3(const std::vector<CoIsotopy>& seq, const ReparamCurve& xi1, const ReparamCurve& xi2,
                              double epsilon, const ReparamOptions& opt = {}, int window = 8);

}  // namespace cokinetic
