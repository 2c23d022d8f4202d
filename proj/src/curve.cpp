#include "cokinetic/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "cokinetic/common.hpp"

namespace cokinetic {

namespace {

constexpr std::array<double, 8> kGlX = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                        -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                        0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlW = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                        0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                        0.2223810344533745, 0.1012285362903763};

double gl_step(double a, double b) {
    const double m = 0.5 * (a + b), r = 0.5 * (b - a);
    double s = 0;
    for (int i = 0; i < 8; ++i) s += kGlW[i] * smooth_step(m + r * kGlX[i]);
    return s * r;
}

constexpr int kTable = 2048;

const std::vector<double>& step_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(kTable + 1, 0.0);
        for (int i = 0; i < kTable; ++i) t[i + 1] = t[i] + gl_step(double(i) / kTable, double(i + 1) / kTable);
        return t;
    }();
    return table;
}

}  // namespace

double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

double smooth_step_integral(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 0.5 + (u - 1.0);
    if (u > 0.5) return u - 0.5 + smooth_step_integral(1.0 - u);
    const auto& t = step_table();
    const int i = std::min(kTable - 1, static_cast<int>(u * kTable));
    return t[i] + gl_step(double(i) / kTable, u);
}

ReparamCurve ReparamCurve::identity() { return ReparamCurve(); }

ReparamCurve ReparamCurve::zero() {
    ReparamCurve c;
    c.kind_ = Kind::Zero;
    return c;
}

ReparamCurve ReparamCurve::polynomial(std::vector<double> coeffs) {
    ReparamCurve c;
    c.kind_ = Kind::Polynomial;
    c.coeffs_ = std::move(coeffs);
    return c;
}

ReparamCurve ReparamCurve::smooth_plateau(double delta) {
    if (!(delta > 0.0 && delta <= 1.0 / 6.0))
        throw Error(ErrorCode::InvalidArgument, "plateau delta must lie in (0, 1/6]");
    ReparamCurve c;
    c.kind_ = Kind::SmoothPlateau;
    c.delta_ = delta;
    return c;
}

ReparamCurve ReparamCurve::composed(const ReparamCurve& outer, const ReparamCurve& inner) {
    if (outer.kind_ == Kind::Identity) return inner;
    if (inner.kind_ == Kind::Identity) return outer;
    ReparamCurve c;
    c.kind_ = Kind::Composed;
    c.outer_ = std::make_shared<const ReparamCurve>(outer);
    c.inner_ = std::make_shared<const ReparamCurve>(inner);
    return c;
}

ReparamCurve ReparamCurve::blend(const ReparamCurve& a, const ReparamCurve& b, double s) {
    if (s == 0.0) return a;
    if (s == 1.0) return b;
    ReparamCurve c;
    c.kind_ = Kind::Blend;
    c.outer_ = std::make_shared<const ReparamCurve>(a);
    c.inner_ = std::make_shared<const ReparamCurve>(b);
    c.delta_ = s;
    return c;
}

const char* ReparamCurve::kind_name() const {
    switch (kind_) {
        case Kind::Identity: return "identity";
        case Kind::Zero: return "zero";
        case Kind::Polynomial: return "polynomial";
        case Kind::SmoothPlateau: return "smooth-plateau";
        case Kind::Composed: return "composed";
        case Kind::Blend: return "blend";
    }
    return "?";
}

double ReparamCurve::plateau_density(double d, double t) {
    if (t > 0.5) t = 1.0 - t;
    if (t <= d) return 0.0;
    if (t < 2 * d) return smooth_step((t - d) / d);
    return 1.0;
}

double ReparamCurve::value(double t) const {
    switch (kind_) {
        case Kind::Identity: return t;
        case Kind::Zero: return 0.0;
        case Kind::Polynomial: {
            double v = 0;
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * t + *it;
            return v;
        }
        case Kind::SmoothPlateau: {
            const double d = delta_, norm = 1.0 - 3.0 * d;
            if (t > 0.5) return 1.0 - ReparamCurve::value(1.0 - t);
            if (t <= d) return 0.0;
            if (t < 2 * d) return d * smooth_step_integral((t - d) / d) / norm;
            return (0.5 * d + (t - 2 * d)) / norm;
        }
        case Kind::Composed: return outer_->value(inner_->value(t));
        case Kind::Blend: return (1.0 - delta_) * outer_->value(t) + delta_ * inner_->value(t);
    }
    return t;
}

double ReparamCurve::deriv(double t) const {
    switch (kind_) {
        case Kind::Identity: return 1.0;
        case Kind::Zero: return 0.0;
        case Kind::Polynomial: {
            double v = 0;
            for (std::size_t i = coeffs_.size(); i-- > 1;) v = v * t + static_cast<double>(i) * coeffs_[i];
            return v;
        }
        case Kind::SmoothPlateau: return plateau_density(delta_, t) / (1.0 - 3.0 * delta_);
        case Kind::Composed: return outer_->deriv(inner_->value(t)) * inner_->deriv(t);
        case Kind::Blend: return (1.0 - delta_) * outer_->deriv(t) + delta_ * inner_->deriv(t);
    }
    return 1.0;
}

std::vector<double> ReparamCurve::breakpoints() const {
    std::vector<double> b;
    if (kind_ == Kind::SmoothPlateau) {
        b = {delta_, 2 * delta_, 0.5, 1 - 2 * delta_, 1 - delta_};
    } else if (kind_ == Kind::Composed) {
        b = inner_->breakpoints();
        // Preimages of the outer breakpoints under a monotone inner curve.
        for (double ob : outer_->breakpoints()) {
            double lo = 0, hi = 1;
            const double v0 = inner_->value(0), v1 = inner_->value(1);
            if ((ob - v0) * (ob - v1) > 0) continue;
            const bool up = v1 >= v0;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((inner_->value(mid) < ob) == up) lo = mid; else hi = mid;
            }
            b.push_back(0.5 * (lo + hi));
        }
    } else if (kind_ == Kind::Blend) {
        b = outer_->breakpoints();
        for (double x : inner_->breakpoints()) b.push_back(x);
    } else if (kind_ == Kind::Polynomial) {
        // Turning points: |zeta'| has a kink there.
        constexpr int kNodes = 1024;
        double prev = deriv(0.0);
        for (int i = 1; i <= kNodes; ++i) {
            const double t = double(i) / kNodes, d = deriv(t);
            if ((prev < 0) != (d < 0) && prev != 0 && d != 0) {
                double lo = double(i - 1) / kNodes, hi = t;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if ((deriv(mid) < 0) == (prev < 0)) lo = mid; else hi = mid;
                }
                b.push_back(0.5 * (lo + hi));
            }
            prev = d;
        }
    }
    return b;
}

bool ReparamCurve::monotone(int nodes, double tol) const {
    for (int i = 0; i <= nodes; ++i)
        if (deriv(double(i) / nodes) < -tol) return false;
    return true;
}

bool ReparamCurve::maps_into_unit(int nodes, double tol) const {
    for (int i = 0; i <= nodes; ++i) {
        const double v = value(double(i) / nodes);
        if (v < -tol || v > 1 + tol) return false;
    }
    return true;
}

TimeQuadrature time_quadrature(std::vector<double> breaks, int base, int min_per_segment) {
    std::vector<double> cuts{0.0};
    std::sort(breaks.begin(), breaks.end());
    for (double b : breaks)
        if (b > 1e-12 && b < 1 - 1e-12 && b - cuts.back() > 1e-12) cuts.push_back(b);
    if (1.0 - cuts.back() <= 1e-12) cuts.back() = 1.0; else cuts.push_back(1.0);
    TimeQuadrature q;
    q.nodes.push_back(0.0);
    q.weights.push_back(0.0);
    const bool uniform = cuts.size() == 2;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a = cuts[s], b = cuts[s + 1];
        int m = uniform ? base : std::max(min_per_segment, static_cast<int>(std::ceil((b - a) * base)));
        if (m % 2) ++m;
        const double h = (b - a) / m;
        for (int i = 1; i <= m; ++i) {
            q.nodes.push_back(i == m ? b : a + i * h);
            q.weights.push_back(0.0);
        }
        const std::size_t off = q.nodes.size() - 1 - m;
        for (int i = 0; i <= m; ++i) {
            const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            q.weights[off + i] += w * h / 3.0;
        }
    }
    std::ostringstream os;
    os << "composite-simpson base=" << base << " segments=" << cuts.size() - 1 << " nodes=" << q.nodes.size();
    q.descriptor = os.str();
    return q;
}

static std::vector<double> merged_breaks(const ReparamCurve& a, const ReparamCurve& b) {
    std::vector<double> br = a.breakpoints();
    for (double x : b.breakpoints()) br.push_back(x);
    return br;
}

double ham_norm(const ReparamCurve& xi) { return ham_norm_diff(xi, ReparamCurve::zero()); }

double ham_norm_diff(const ReparamCurve& xi1, const ReparamCurve& xi2) {
    TimeQuadrature q = time_quadrature(merged_breaks(xi1, xi2), 4096);
    double sup = 0, l1 = 0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double t = q.nodes[i];
        sup = std::max(sup, std::abs(xi1.value(t) - xi2.value(t)));
        l1 += q.weights[i] * std::abs(xi1.deriv(t) - xi2.deriv(t));
    }
    return sup + l1;
}

double c0_norm_diff(const ReparamCurve& xi1, const ReparamCurve& xi2) {
    TimeQuadrature q = time_quadrature(merged_breaks(xi1, xi2), 4096);
    double sup = 0;
    for (double t : q.nodes) sup = std::max(sup, std::abs(xi1.value(t) - xi2.value(t)));
    return sup;
}

double flatten_delta(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::InvalidEpsilon, "epsilon must lie in (0, 1)");
    return std::min(epsilon / 6.0, 1.0 / 13.0);
}

ReparamCurve flatten_curve(double epsilon) { return ReparamCurve::smooth_plateau(flatten_delta(epsilon)); }

}  // namespace cokinetic
