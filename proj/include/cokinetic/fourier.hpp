#pragma once

#include <array>
#include <vector>

#include "cokinetic/common.hpp"

namespace cokinetic {

using Freq = std::array<int, kMaxDim>;

// a*cos(k.theta) + b*sin(k.theta)
struct FourierTerm {
    Freq k{};
    double a = 0.0;
    double b = 0.0;
};

class FourierScalar {
public:
    FourierScalar() = default;
    explicit FourierScalar(int dim) : dim_(dim) {}
    FourierScalar(int dim, std::vector<FourierTerm> terms);

    static FourierScalar constant(int dim, double c);

    int dim() const { return dim_; }
    const std::vector<FourierTerm>& terms() const { return terms_; }
    std::vector<FourierTerm>& terms() { return terms_; }
    void add_term(const Freq& k, double a, double b) { terms_.push_back({k, a, b}); }
    bool empty() const { return terms_.empty(); }

    // No term has a nonzero frequency in coordinate j.
    bool independent_of(int j) const;

    double value(const Vec& p) const;
    double value_grad(const Vec& p, Vec& grad) const;
    double value_grad_hess(const Vec& p, Vec& grad, std::array<Vec, kMaxDim>& hess) const;

    FourierScalar partial(int j) const;
    double mean() const;

    // Merges repeated frequencies, folds k and -k together (first nonzero
    // entry positive) and drops terms with both amplitudes below drop_tol.
    FourierScalar canonical(double drop_tol = 0.0) const;

    // F(theta + shift); exact phase rotation of every term.
    FourierScalar translated(const Vec& shift) const;
    // F(A theta + shift) for an integer matrix A acting on the coordinates.
    FourierScalar affine_pullback(const std::array<std::array<int, kMaxDim>, kMaxDim>& A, const Vec& shift) const;

    FourierScalar operator+(const FourierScalar& o) const;
    FourierScalar operator-(const FourierScalar& o) const;
    FourierScalar scaled(double s) const;

    // Sum over terms of |k|*(|a|+|b|) and |k|^2*(|a|+|b|).
    double lipschitz_bound() const;
    double hessian_bound() const;
    double max_abs_coefficient() const;

private:
    int dim_ = 0;
    std::vector<FourierTerm> terms_;
};

struct OneFormField {
    std::vector<FourierScalar> components;  // dx_1..dx_n, dy_1..dy_n, dz

    int dim() const { return static_cast<int>(components.size()); }
    static OneFormField zero(int dim);
    static OneFormField constant(const std::vector<double>& coeffs);
    static OneFormField exact(const FourierScalar& F);

    Vec evaluate(const Vec& p) const;
    bool is_closed(double tol = 1e-12) const;
    double closedness_defect() const;
    bool is_constant() const;
};

// Sigma a_i dy_i - b_i dx_i + c dz for X = Sigma a_i dx_i + b_i dy_i + c dz.
Vec pairing_I(const ModelSpec& m, const Vec& X);
// Inverse of pairing_I.
Vec pairing_I_inverse(const ModelSpec& m, const Vec& covector);

struct OscInterval {
    double lo = 0.0;      // polished max - polished min, attained values
    double hi = 0.0;      // grid range plus the certified sampling slack
    double value = 0.0;   // reported estimate
    double grid_lo = 0.0; // raw grid range
    double argmax_value = 0.0;
    double argmin_value = 0.0;
    int resolution = 0;
    int active_dims = 0;
    double width() const { return hi - lo; }
    bool contains(double v) const { return v >= lo && v <= hi; }
};

struct GridExtrema {
    double min = 0.0;
    double max = 0.0;
    double slack = 0.0;  // certified bound on (true extremum - grid extremum)
    int active_dims = 0;
};

// Grid min/max with the certified sampling slack. Uses the active ISA
// unless one is given.
GridExtrema grid_extrema(const FourierScalar& F, int resolution);
GridExtrema grid_extrema(const FourierScalar& F, int resolution, int isa);

// Full grid evaluation over the active dimensions, row-major; exposed for the
// kernel equivalence tests.
std::vector<double> grid_values(const FourierScalar& F, int resolution, int isa, std::vector<int>* active = nullptr);

OscInterval osc(const FourierScalar& F, int resolution = 256);

// sup |F| over M, grid estimate plus slack.
double sup_abs(const FourierScalar& F, int resolution = 256);

double integrate(const FourierScalar& F, const ModelSpec& m);

struct HodgeSplit {
    OneFormField harmonic;
    FourierScalar primitive;
};

HodgeSplit hodge_split(const OneFormField& alpha);
// Max coefficient mismatch between alpha and harmonic + d(primitive).
double hodge_reconstruction_error(const OneFormField& alpha, const HodgeSplit& s);

double l2_norm_harmonic(const OneFormField& h, const ModelSpec& m);

}  // namespace cokinetic
