#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "cokinetic/common.hpp"
#include "cokinetic/curve.hpp"
#include "cokinetic/fourier.hpp"

namespace cokinetic {

inline constexpr int kMaxPolyDegree = 6;

// Polynomial in t of degree <= 6.
struct PolyT {
    std::array<double, kMaxPolyDegree + 1> c{};

    static PolyT constant(double v) {
        PolyT p;
        p.c[0] = v;
        return p;
    }
    double operator()(double t) const {
        double v = c[kMaxPolyDegree];
        for (int i = kMaxPolyDegree - 1; i >= 0; --i) v = v * t + c[i];
        return v;
    }
    double deriv(double t) const {
        double v = 0;
        for (int i = kMaxPolyDegree; i >= 1; --i) v = v * t + i * c[i];
        return v;
    }
    bool is_constant() const {
        for (int i = 1; i <= kMaxPolyDegree; ++i)
            if (c[i] != 0.0) return false;
        return true;
    }
    bool is_zero() const { return is_constant() && c[0] == 0.0; }
};

struct TimeTerm {
    Freq k{};
    PolyT a, b;
};

enum class Kind { CoHamiltonian, AlmostCoHamiltonian, Cosymplectic };
enum class Normalization { ZeroMean, Raw };

const char* kind_name(Kind k);

// F_t = sum a_k(t) cos(k.theta) + b_k(t) sin(k.theta) (+ z_slope(t) * z on line topology).
struct Generator {
    int dim = 3;
    std::vector<TimeTerm> terms;
    PolyT z_slope;
    Normalization normalization = Normalization::Raw;

    FourierScalar at(double t) const;
    bool autonomous() const;
    bool z_independent() const;
};

// c(z, t) = sum a_m(t) cos(m z) + b_m(t) sin(m z).
struct ReebTerm {
    int m = 0;
    PolyT a, b;
};

struct ReebComponent {
    std::vector<ReebTerm> terms;

    double value(double z, double t, double* dcdz = nullptr) const;
    bool z_independent() const;
    bool is_zero() const;
    double abs_bound() const;
};

// Integer affine map p -> A p + shift with A acting on all coordinates.
// Cosymplectomorphisms of the flat model: A symplectic on (x, y), identity on z.
struct AffineMap {
    int dim = 3;
    std::array<std::array<int, kMaxDim>, kMaxDim> A{};
    Vec shift{};

    static AffineMap translation(int dim, const Vec& shift);
    static AffineMap identity(int dim) { return translation(dim, zero_vec()); }
    Vec apply(const Vec& p) const;
    Vec apply_inverse(const Vec& q) const;
    AffineMap inverse() const;
    bool is_cosymplectic(const ModelSpec& m) const;
};

class CoIsotopy {
public:
    CoIsotopy(const ModelSpec& model, Kind kind, Generator gen, std::optional<ReebComponent> reeb, int steps = 1024);

    static CoIsotopy identity(const ModelSpec& model, int steps = 1024);

    const ModelSpec& model() const { return core_->model; }
    Kind kind() const { return core_->kind; }
    int steps() const { return core_->steps; }
    const Generator& generator() const { return core_->gen; }
    const std::optional<ReebComponent>& reeb() const { return core_->reeb; }
    bool inverted() const { return inverted_; }
    const ReparamCurve* warp() const { return warp_.get(); }
    bool is_identity() const;

    // Path t -> phi_t^{-1}, realized through backward integration.
    CoIsotopy inverse_path() const;
    // Path t -> phi_{zeta(t)}; flows use the time substitution s = zeta(t).
    CoIsotopy warped(const ReparamCurve& zeta) const;
    CoIsotopy with_steps(int steps) const;
    // The underlying forward path without warp or inversion.
    CoIsotopy base_path() const;
    // rho^{-1} o phi_t o rho for a cosymplectic integer affine rho; the
    // generator becomes F_t o rho and the Reeb part c(z + shift_z, t).
    CoIsotopy conjugated(const AffineMap& rho) const;

    // Underlying forward field X_s at time s (no warp); mu = dc/dz.
    Vec base_field(const Vec& p, double s, double* mu = nullptr) const;
    // Reeb coefficient c(z, s) of the underlying forward field.
    double base_c(double z, double s, double* dcdz = nullptr) const;
    FourierScalar base_generator(double s) const;

    // Velocity field of this path at time t (warp and orientation applied).
    // Inverted paths return -(D phi_s)^{-1} X_s(phi_s(.)) via a Jacobian, so
    // this is only meant for diagnostics.
    Vec field(const Vec& p, double t) const;

    // phi_t(p). When f is given, also returns the conformal exponent f_t(p)
    // with phi_t^* eta = e^{f_t} eta.
    Vec flow(const Vec& p, double t, double* f = nullptr) const;
    // phi_t^{-1}(q); f receives f_t(phi_t^{-1}(q)) of the path.
    Vec inverse_flow(const Vec& q, double t, double* f = nullptr) const;
    // flow() at every time in `times` (any order) sharing one integration pass.
    void flow_times(const Vec& p, const std::vector<double>& times, std::vector<Vec>& out,
                    std::vector<double>* f = nullptr) const;
    // flow() (inverse_flow() when `inverse`) at many points for one time.
    // Points are integrated in lanes sharing the step schedule; results match
    // the single-point calls exactly.
    void flow_many(const std::vector<Vec>& points, double t, std::vector<Vec>& out, bool inverse = false,
                   std::vector<double>* f = nullptr) const;
    // flow_times() for many points; out[i][k] is point i at times[k].
    void flow_times_many(const std::vector<Vec>& points, const std::vector<double>& times,
                         std::vector<std::vector<Vec>>& out) const;

    // Generator of this path at time t as a Fourier series. Inverted paths
    // return -F_s, whose composition with phi_s is the actual generator.
    FourierScalar generator_fourier(double t) const;
    // Pointwise generator value (-F_t o phi_t for inverted paths).
    double generator_value(const Vec& q, double t) const;
    void generator_values(const std::vector<Vec>& qs, double t, std::vector<double>& out) const;
    // Reeb pairing C(Phi, eta)^t(p) = eta(dot phi_t)(phi_t(p)).
    double C_function(double t, const Vec& p) const;
    // C is constant in space (cosymplectic and co-Hamiltonian kinds).
    bool C_spatially_constant() const;
    // sup over M of |C^t| (exact for spatially constant C, else z-grid of 64).
    double C_sup(double t) const;
    // Linear functional int_M C^t eta^omega^n / Vol, z-grid quadrature.
    double C_mean(double t) const;

    // phi_t commutes with z-translations, so sweeps may skip the z axis.
    bool z_equivariant() const;

    // Interior times where the path's time dependence changes regime.
    std::vector<double> breakpoints() const;
    TimeQuadrature quadrature() const;

private:
    struct Core {
        ModelSpec model;
        Kind kind;
        Generator gen;
        std::optional<ReebComponent> reeb;
        int steps;
        // Time coefficients tabulated on the RK4 half-step nodes: per row the
        // (a, b) pairs of `moving` terms, then of the Reeb terms, then z_slope.
        std::vector<int> moving;
        // Nonzero (coordinate, frequency) pairs of each moving term.
        struct Mode {
            int count = 0;
            std::array<int, 2 * kMaxHalfDim> coord{}, k{};
        };
        std::vector<Mode> modes;
        std::vector<double> table;
        int row_size = 0;
        bool frozen = false;  // time independent: a single row
        int kpow = 0;         // largest |k_j|; phases use power tables when small
    };
    static std::shared_ptr<const Core> make_core(const ModelSpec& model, Kind kind, Generator gen,
                                                 std::optional<ReebComponent> reeb, int steps);
    std::shared_ptr<const Core> core_;
    bool inverted_ = false;
    std::shared_ptr<const ReparamCurve> warp_;

    double warp_value(double t) const { return warp_ ? warp_->value(t) : t; }
    double warp_deriv(double t) const { return warp_ ? warp_->deriv(t) : 1.0; }

    // Base (unwarped, forward) integration helpers on augmented state (p, f).
    // Lane-batched RK4 on the tabulated coefficients; defined in the source.
    struct Stepper;
    const double* row(long half_node) const {
        return core_->table.data() + (core_->frozen ? 0 : half_node * core_->row_size);
    }
    Vec base_forward(const Vec& p, double s, double* f) const;
    Vec base_backward(const Vec& q, double s, double* f) const;
};


}  // namespace cokinetic
