#pragma once

#include <initializer_list>

#include "cokinetic/isotopy.hpp"

namespace testing {

using namespace cokinetic;

inline ModelSpec circle_model(int n = 1) { return ModelSpec{n, ZTopology::Circle}; }
inline ModelSpec line_model(int n = 1) { return ModelSpec{n, ZTopology::Line}; }

inline Vec pt(double x, double y, double z) {
    Vec v = zero_vec();
    v[0] = x;
    v[1] = y;
    v[2] = z;
    return v;
}

inline Freq freq(int kx, int ky, int kz) {
    Freq k{};
    k[0] = kx;
    k[1] = ky;
    k[2] = kz;
    return k;
}

// a*cos + b*sin with constant-in-time amplitudes.
struct Mode {
    Freq k;
    double a = 0.0;
    double b = 0.0;
};

inline Generator generator(std::initializer_list<Mode> modes, int dim = 3) {
    Generator g;
    g.dim = dim;
    for (const auto& m : modes) g.terms.push_back({m.k, PolyT::constant(m.a), PolyT::constant(m.b)});
    return g;
}

inline CoIsotopy coham(std::initializer_list<Mode> modes, const ModelSpec& m = circle_model(), int steps = 1024) {
    return CoIsotopy(m, Kind::CoHamiltonian, generator(modes, m.dim()), std::nullopt, steps);
}

// Reeb coefficient c(z) = c0 + sum over (m, a, b) of a cos(m z) + b sin(m z).
inline ReebComponent reeb_const(double c0) {
    ReebComponent r;
    r.terms.push_back({0, PolyT::constant(c0), PolyT{}});
    return r;
}

inline Vec sin_y_flow(const Vec& p, double t) { return pt(p[0] + t * std::cos(p[1]), p[1], p[2]); }

}  // namespace testing
