#include "cokinetic/random.hpp"

namespace cokinetic {

PolyT random_poly(Rng& rng, int degree, double amp) {
    std::uniform_real_distribution<double> u(-1.0, 1.0), scale(0.2, 1.0);
    PolyT p;
    double sum = 0;
    for (int i = 0; i <= degree && i <= kMaxPolyDegree; ++i) {
        p.c[i] = u(rng);
        sum += std::abs(p.c[i]);
    }
    const double s = sum > 0 ? amp * scale(rng) / sum : 0.0;
    for (auto& c : p.c) c *= s;
    return p;
}

Generator random_generator(const ModelSpec& m, const RandomGeneratorSpec& spec, Rng& rng) {
    Generator g;
    g.dim = m.dim();
    g.normalization = Normalization::ZeroMean;
    std::uniform_int_distribution<int> nterms(1, spec.max_terms), freq(-spec.kmax, spec.kmax);
    const int count = nterms(rng);
    for (int i = 0; i < count; ++i) {
        TimeTerm t;
        bool nonzero = false;
        while (!nonzero) {
            for (int j = 0; j < 2 * m.n; ++j) {
                t.k[j] = freq(rng);
                nonzero = nonzero || t.k[j] != 0;
            }
        }
        t.a = random_poly(rng, spec.poly_degree, spec.amp);
        t.b = random_poly(rng, spec.poly_degree, spec.amp);
        g.terms.push_back(t);
    }
    return g;
}

ReebComponent random_reeb(const RandomReebSpec& spec, Rng& rng) {
    ReebComponent r;
    std::uniform_int_distribution<int> nterms(1, spec.max_terms), mode(0, spec.mmax);
    const int count = nterms(rng);
    for (int i = 0; i < count; ++i) {
        ReebTerm t;
        t.m = mode(rng);
        t.a = random_poly(rng, spec.poly_degree, spec.amp / count);
        if (t.m != 0) t.b = random_poly(rng, spec.poly_degree, spec.amp / count);
        r.terms.push_back(t);
    }
    return r;
}

CoIsotopy random_cohamiltonian(const ModelSpec& m, const RandomGeneratorSpec& spec, Rng& rng, int steps) {
    return CoIsotopy(m, Kind::CoHamiltonian, random_generator(m, spec, rng), std::nullopt, steps);
}

Vec random_point(const ModelSpec& m, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, kTwoPi), line(-1.0, 1.0);
    Vec p = zero_vec();
    for (int j = 0; j < m.dim(); ++j) p[j] = m.periodic(j) ? u(rng) : line(rng);
    return p;
}

AffineMap random_conjugator(const ModelSpec& m, Rng& rng, bool linear_part) {
    static const int blocks[4][2][2] = {{{1, 0}, {0, 1}}, {{1, 1}, {0, 1}}, {{1, 0}, {1, 1}}, {{0, -1}, {1, 0}}};
    AffineMap a = AffineMap::translation(m.dim(), random_point(m, rng));
    if (!m.circle()) a.shift[m.zi()] = 0.0;
    if (!linear_part) return a;
    std::uniform_int_distribution<int> pick(0, 3);
    for (int i = 0; i < m.n; ++i) {
        const auto& b = blocks[pick(rng)];
        a.A[i][i] = b[0][0];
        a.A[i][m.n + i] = b[0][1];
        a.A[m.n + i][i] = b[1][0];
        a.A[m.n + i][m.n + i] = b[1][1];
    }
    return a;
}

ReparamCurve random_monotone_curve(Rng& rng, int max_degree) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> c(max_degree + 1, 0.0);
    double sum = 0;
    for (int i = 1; i <= max_degree; ++i) {
        c[i] = u(rng);
        sum += c[i];
    }
    for (auto& x : c) x /= sum;
    return ReparamCurve::polynomial(c);
}

}  // namespace cokinetic
