#pragma once

#include <random>

#include "cokinetic/isotopy.hpp"

namespace cokinetic {

using Rng = std::mt19937_64;

struct RandomGeneratorSpec {
    int max_terms = 6;
    int kmax = 2;
    double amp = 1.0;     // bound on sup_t |a_k(t)| and sup_t |b_k(t)| per term
    int poly_degree = 2;  // 0 gives autonomous generators
};

struct RandomReebSpec {
    int max_terms = 3;
    int mmax = 2;  // 0 keeps c spatially constant
    double amp = 0.5;
    int poly_degree = 1;
};

// Polynomial on [0,1] with sum |c_i| <= amp, hence |p(t)| <= amp.
PolyT random_poly(Rng& rng, int degree, double amp);
// z-independent trig generator with nonzero (x, y) frequencies only.
Generator random_generator(const ModelSpec& m, const RandomGeneratorSpec& spec, Rng& rng);
ReebComponent random_reeb(const RandomReebSpec& spec, Rng& rng);
CoIsotopy random_cohamiltonian(const ModelSpec& m, const RandomGeneratorSpec& spec, Rng& rng, int steps = 1024);

Vec random_point(const ModelSpec& m, Rng& rng);
// Translation composed with a block SL(2, Z) map on each (x_i, y_i) pair.
AffineMap random_conjugator(const ModelSpec& m, Rng& rng, bool linear_part = true);
// Monotone polynomial curve with zeta(0) = 0, zeta(1) = 1 (nonnegative weights on t^i).
ReparamCurve random_monotone_curve(Rng& rng, int max_degree = 4);

}  // namespace cokinetic
