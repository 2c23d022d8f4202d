#pragma once

#include <memory>
#include <string>
#include <vector>

namespace cokinetic {

// Smooth curve [0,1] -> R with an evaluable derivative; used as a time
// reparameterization t -> zeta(t).
class ReparamCurve {
public:
    enum class Kind { Identity, Zero, Polynomial, SmoothPlateau, Composed, Blend };

    static ReparamCurve identity();
    static ReparamCurve zero();
    // zeta(t) = sum c_i t^i
    static ReparamCurve polynomial(std::vector<double> coeffs);
    // C-infinity trapezoid integral: 0 on [0,delta], 1 on [1-delta,1].
    static ReparamCurve smooth_plateau(double delta);
    // outer(inner(t))
    static ReparamCurve composed(const ReparamCurve& outer, const ReparamCurve& inner);
    // (1 - s) a + s b; monotone when both are.
    static ReparamCurve blend(const ReparamCurve& a, const ReparamCurve& b, double s);

    Kind kind() const { return kind_; }
    const char* kind_name() const;
    const std::vector<double>& coeffs() const { return coeffs_; }
    // Plateau width, or the blend weight for Blend curves.
    double delta() const { return delta_; }
    // Parts of Composed (outer, inner) and Blend (a, b) curves; null otherwise.
    const ReparamCurve* first() const { return outer_.get(); }
    const ReparamCurve* second() const { return inner_.get(); }

    double value(double t) const;
    double deriv(double t) const;

    // Interior points where the curve changes regime; quadrature refines there.
    std::vector<double> breakpoints() const;

    // Derivative sampled on `nodes`+1 uniform nodes is >= -tol.
    bool monotone(int nodes = 1024, double tol = 1e-12) const;
    bool maps_into_unit(int nodes = 1024, double tol = 1e-12) const;

    // Plateau profile rho_delta and its normalizing integral 1 - 3 delta.
    static double plateau_density(double delta, double t);

private:
    Kind kind_ = Kind::Identity;
    std::vector<double> coeffs_;
    double delta_ = 0.0;
    std::shared_ptr<const ReparamCurve> outer_, inner_;
};

// C-infinity step: 0 for u <= 0, 1 for u >= 1, S(u) + S(1-u) = 1.
double smooth_step(double u);
// Integral of smooth_step over [0, u], u in [0, 1].
double smooth_step_integral(double u);

// ||xi||_C0 on 4096 nodes plus the integral of |xi'|, both refined at breakpoints.
double ham_norm(const ReparamCurve& xi);
// Same norm applied to the pointwise difference xi1 - xi2.
double ham_norm_diff(const ReparamCurve& xi1, const ReparamCurve& xi2);
// sup |xi1 - xi2| on 4096 nodes refined at breakpoints.
double c0_norm_diff(const ReparamCurve& xi1, const ReparamCurve& xi2);

// Quadrature nodes on [0,1]: `base` uniform intervals, with every segment
// between breakpoints subdivided on its own (at least `min_per_segment`
// intervals, even counts) so Simpson never straddles a regime change.
struct TimeQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::string descriptor;
};
TimeQuadrature time_quadrature(std::vector<double> breaks, int base, int min_per_segment = 32);

double flatten_delta(double epsilon);
ReparamCurve flatten_curve(double epsilon);

}  // namespace cokinetic
