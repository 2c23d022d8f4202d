#pragma once

#include <string>
#include <vector>

#include "cokinetic/algebra.hpp"
#include "cokinetic/isotopy.hpp"
#include "cokinetic/report.hpp"

namespace cokinetic {

enum class Flavor { L1inf, Linf };
const char* flavor_name(Flavor f);

struct LengthNode {
    double t = 0.0;
    double osc = 0.0;
    double osc_lo = 0.0;
    double osc_hi = 0.0;
    double reeb = 0.0;
    double weight = 0.0;  // quadrature weight
};

struct LengthReport {
    double value = 0.0;
    Flavor flavor = Flavor::L1inf;
    std::vector<LengthNode> breakdown;
    std::string quadrature;
    std::string reeb_term;  // how the Reeb contribution was measured
    // Same aggregation applied to the certified osc bounds.
    double value_lo = 0.0;
    double value_hi = 0.0;

    Json to_json(bool with_breakdown = true) const;
    // t,osc,osc_lo,osc_hi,reeb
    std::string to_csv() const;
};

// Co-Hofer lengths; co-Hamiltonian kind only.
LengthReport length_L1inf(const CoIsotopy& iso, int osc_res = 256);
LengthReport length_Linf(const CoIsotopy& iso, int osc_res = 256);
LengthReport length(const CoIsotopy& iso, Flavor flavor, int osc_res = 256);
// The same breakdown aggregated in the other flavor.
LengthReport reflavor(const LengthReport& r, Flavor flavor);

// osc(F_t - H_t) + |C_a^t - C_b^t| aggregated over time. A path built by
// inverse_path() may only be compared with an identity path.
LengthReport distance_CH(const CoIsotopy& a, const CoIsotopy& b, Flavor flavor, int osc_res = 256);

// Data of a cosymplectic field: i_X omega and eta(X).
struct CosymplecticFieldData {
    ModelSpec model;
    OneFormField iota_omega;
    FourierScalar eta_x;
};
CosymplecticFieldData field_data(const CoIsotopy& iso, double t);
CosymplecticFieldData reeb_field_data(const ModelSpec& m);

double theta_of_field(const CosymplecticFieldData& X);
struct AcoTerms {
    double harmonic_l2 = 0.0;
    double nu_b = 0.0;
    double theta = 0.0;
    double total = 0.0;
};
AcoTerms aco_norm(const CosymplecticFieldData& X, int osc_res = 256);

enum class AlmostVariant { AH, Aco };
LengthReport almost_length(const CoIsotopy& iso, Flavor flavor, AlmostVariant variant = AlmostVariant::AH,
                           int osc_res = 256);
LengthReport distance_AH(const CoIsotopy& a, const CoIsotopy& b, Flavor flavor, int osc_res = 256);

// Space average of C^t at the given path times.
std::vector<double> c_mean_profile(const CoIsotopy& iso, const std::vector<double>& times);

// Length matching the kind: co-Hofer, almost co-Hofer, or the Aco variant.
LengthReport kind_length(const CoIsotopy& iso, Flavor flavor, int osc_res = 256);

// d0 of two maps on a point set: max of the forward and inverse sups.
double c0_distance(const ModelSpec& m, const std::function<Vec(const Vec&)>& f,
                   const std::function<Vec(const Vec&)>& finv, const std::function<Vec(const Vec&)>& g,
                   const std::function<Vec(const Vec&)>& ginv, const std::vector<Vec>& points);

struct C0Options {
    int resolution = 8;   // grid nodes per circle coordinate
    int time_nodes = 17;  // uniform nodes on [0, 1]; breakpoints are added
};

struct PathDistance {
    double value = 0.0;
    int resolution = 0;
    int time_nodes = 0;
    bool z_collapsed = false;
    Json to_json() const;
};
// Grid lower estimate of max_t d0(a_t, b_t).
PathDistance path_distance(const CoIsotopy& a, const CoIsotopy& b, const C0Options& opt = {});
PathDistance path_distance(const PathView& a, const PathView& b, const std::vector<double>& times,
                           const C0Options& opt, bool skip_z);

struct EnergyBound {
    double value = 0.0;
    int best = -1;
    std::vector<double> lengths;        // NaN for rejected candidates
    std::vector<double> c0_mismatch;    // d0 of time-1 maps against the target
};
// Minimum kind-appropriate L1inf length over candidates whose time-1 map
// matches the target's.
EnergyBound energy_upper_bound(const CoIsotopy& target, const std::vector<CoIsotopy>& candidates,
                               double c0_tol = 1e-6, int resolution = 8);

struct SequenceDiagnostics {
    std::vector<std::vector<double>> pairwise_D;
    std::vector<std::vector<double>> pairwise_c0;
    std::vector<double> tail_profile;  // max_{i,j >= k} D_ij
    double cauchy_margin = 0.0;        // tail_profile at k = N/2
    Json to_json() const;
};
SequenceDiagnostics cauchy_report(const std::vector<CoIsotopy>& seq, Flavor flavor, const C0Options& opt = {},
                                  bool with_c0 = true);

}  // namespace cokinetic
