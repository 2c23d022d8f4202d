#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cokinetic/isotopy.hpp"
#include "cokinetic/report.hpp"

namespace cokinetic {

struct FixedComponent {
    Vec representative{};
    int cluster_size = 0;
    double residual = 0.0;
};

struct FixedPointSet {
    std::vector<FixedComponent> components;
    int dim = 3;  // coordinates written per representative
    int grid_resolution = 0;
    double newton_tol = 0.0;
    double merge_radius = 0.0;
    bool identity_map = false;  // every point is fixed
    bool z_collapsed = false;
    int seeds = 0;
    int converged = 0;
    Json to_json() const;
    // component,cluster_size,residual,coords...
    std::string to_csv() const;
};

// Fixed points of the time-1 map: grid seeds, Gauss-Newton refinement and
// merging into connected components.
FixedPointSet find_fixed_points(const CoIsotopy& iso, int grid_resolution = 16, double newton_tol = 1e-10);

struct GammaBound {
    int lower = 1;
    std::optional<int> upper;
    std::string model;
    Json to_json() const;
};
// M x S^1 for the flat models.
GammaBound gamma_lower_bound(const ModelSpec& m);
// Product with a second factor: "circle", "interval" or "torus" of dimension 2k.
GammaBound gamma_bound_for_factor(const std::string& factor, int k = 1);

VerificationReport check_fix_lower_bound(const CoIsotopy& iso, int grid_resolution = 16, double newton_tol = 1e-10);

// |winding| against dx_i, dy_i, dz at every representative.
VerificationReport winding_at_fixed_points(const CoIsotopy& iso, const FixedPointSet& set, double tol = 1e-6);
VerificationReport winding_at_fixed_points(const CoIsotopy& iso, double tol = 1e-6);

// Space average and range of Delta(Phi, alpha) on a grid; loops also need
// Delta close to 0 everywhere.
VerificationReport mean_winding_integral(const CoIsotopy& iso, const OneFormField& alpha, int resolution = 32,
                                         double tol_quad = 1e-5);

}  // namespace cokinetic
