#include "cokinetic/isotopy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <type_traits>

namespace cokinetic {

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::CoHamiltonian: return "coHamiltonian";
        case Kind::AlmostCoHamiltonian: return "almostCoHamiltonian";
        case Kind::Cosymplectic: return "cosymplectic";
    }
    return "?";
}

FourierScalar Generator::at(double t) const {
    FourierScalar f(dim);
    for (const auto& term : terms) {
        const double a = term.a(t), b = term.b(t);
        if (a != 0.0 || b != 0.0) f.add_term(term.k, a, b);
    }
    return f;
}

bool Generator::autonomous() const {
    for (const auto& term : terms)
        if (!term.a.is_constant() || !term.b.is_constant()) return false;
    return z_slope.is_constant();
}

bool Generator::z_independent() const {
    for (const auto& term : terms)
        if (term.k[dim - 1] != 0 && (!term.a.is_zero() || !term.b.is_zero())) return false;
    return z_slope.is_zero();
}

double ReebComponent::value(double z, double t, double* dcdz) const {
    double v = 0, d = 0;
    for (const auto& term : terms) {
        const double a = term.a(t), b = term.b(t);
        if (term.m == 0) {
            v += a;
            continue;
        }
        const double c = std::cos(term.m * z), s = std::sin(term.m * z);
        v += a * c + b * s;
        d += term.m * (b * c - a * s);
    }
    if (dcdz) *dcdz = d;
    return v;
}

bool ReebComponent::z_independent() const {
    for (const auto& term : terms)
        if (term.m != 0 && (!term.a.is_zero() || !term.b.is_zero())) return false;
    return true;
}

bool ReebComponent::is_zero() const {
    for (const auto& term : terms)
        if (!term.a.is_zero() || (term.m != 0 && !term.b.is_zero())) return false;
    return true;
}

double ReebComponent::abs_bound() const {
    double s = 0;
    for (const auto& term : terms)
        for (int i = 0; i <= kMaxPolyDegree; ++i) s += std::abs(term.a.c[i]) + std::abs(term.b.c[i]);
    return s;
}

// ------------------------------------------------------------------ affine

AffineMap AffineMap::translation(int dim, const Vec& shift) {
    AffineMap m;
    m.dim = dim;
    for (int i = 0; i < dim; ++i) m.A[i][i] = 1;
    m.shift = shift;
    return m;
}

Vec AffineMap::apply(const Vec& p) const {
    Vec q = zero_vec();
    for (int i = 0; i < dim; ++i) {
        double s = shift[i];
        for (int j = 0; j < dim; ++j)
            if (A[i][j]) s += A[i][j] * p[j];
        q[i] = s;
    }
    return q;
}

AffineMap AffineMap::inverse() const {
    Eigen::MatrixXd M(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) M(i, j) = A[i][j];
    Eigen::MatrixXd Mi = M.inverse();
    AffineMap inv;
    inv.dim = dim;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) inv.A[i][j] = static_cast<int>(std::lround(Mi(i, j)));
    Vec s = zero_vec();
    for (int i = 0; i < dim; ++i) {
        double v = 0;
        for (int j = 0; j < dim; ++j) v -= inv.A[i][j] * shift[j];
        s[i] = v;
    }
    inv.shift = s;
    return inv;
}

Vec AffineMap::apply_inverse(const Vec& q) const { return inverse().apply(q); }

bool AffineMap::is_cosymplectic(const ModelSpec& m) const {
    const int n = m.n, d = m.dim();
    if (dim != d) return false;
    for (int j = 0; j < d; ++j) {
        if (A[d - 1][j] != (j == d - 1 ? 1 : 0)) return false;
        if (A[j][d - 1] != (j == d - 1 ? 1 : 0)) return false;
    }
    // A^T J A = J on the (x, y) block.
    for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j) {
            long s = 0;
            for (int a = 0; a < n; ++a) s += long(A[a][i]) * A[n + a][j] - long(A[n + a][i]) * A[a][j];
            const long want = (i < n && j == i + n) ? 1 : (j < n && i == j + n) ? -1 : 0;
            if (s != want) return false;
        }
    return true;
}

// ---------------------------------------------------------------- isotopy

CoIsotopy::CoIsotopy(const ModelSpec& model, Kind kind, Generator gen, std::optional<ReebComponent> reeb, int steps) {
    model.validate();
    if (steps < 1) throw Error(ErrorCode::InvalidArgument, "steps must be positive");
    gen.dim = model.dim();
    for (auto& t : gen.terms)
        for (int j = gen.dim; j < kMaxDim; ++j) t.k[j] = 0;
    for (const auto& t : gen.terms)
        if (t.k[model.zi()] != 0 && (!t.a.is_zero() || !t.b.is_zero()))
            throw Error(ErrorCode::InvalidArgument, kind == Kind::CoHamiltonian
                                                        ? "z-dependence forbidden for co-Hamiltonian kind"
                                                        : "generator must not depend on z");
    if (!gen.z_slope.is_zero() && !(kind == Kind::CoHamiltonian && !model.circle()))
        throw Error(ErrorCode::InvalidArgument, "a linear z term is only admitted for co-Hamiltonian kind on line topology");
    if (reeb && reeb->is_zero()) reeb.reset();
    if (reeb) {
        if (kind == Kind::CoHamiltonian)
            throw Error(ErrorCode::InvalidArgument, "co-Hamiltonian kind takes no separate Reeb component");
        if (kind == Kind::Cosymplectic && !reeb->z_independent())
            throw Error(ErrorCode::InvalidArgument, "cosymplectic kind needs a z-independent Reeb component");
    }
    if (gen.normalization == Normalization::ZeroMean)
        for (const auto& t : gen.terms) {
            bool zero = true;
            for (int j = 0; j < gen.dim; ++j) zero = zero && t.k[j] == 0;
            if (zero && !t.a.is_zero()) throw Error(ErrorCode::NotNormalized, "zero-mean generator with a constant mode");
        }
    core_ = make_core(model, kind, std::move(gen), std::move(reeb), steps);
}

std::shared_ptr<const CoIsotopy::Core> CoIsotopy::make_core(const ModelSpec& model, Kind kind, Generator gen,
                                                           std::optional<ReebComponent> reeb, int steps) {
    Core c{model, kind, std::move(gen), std::move(reeb), steps, {}, {}, {}};
    for (std::size_t i = 0; i < c.gen.terms.size(); ++i) {
        const TimeTerm& t = c.gen.terms[i];
        bool moves = false;
        for (int j = 0; j < 2 * model.n; ++j) {
            moves = moves || t.k[j] != 0;
            c.kpow = std::max(c.kpow, std::abs(t.k[j]));
        }
        if (!moves || (t.a.is_zero() && t.b.is_zero())) continue;
        c.moving.push_back(static_cast<int>(i));
        Core::Mode md;
        for (int j = 0; j < 2 * model.n; ++j)
            if (t.k[j]) {
                md.coord[md.count] = j;
                md.k[md.count++] = t.k[j];
            }
        c.modes.push_back(md);
    }
    const std::size_t nreeb = c.reeb ? c.reeb->terms.size() : 0;
    c.row_size = static_cast<int>(2 * c.moving.size() + 2 * nreeb + 1);
    c.frozen = c.gen.autonomous();
    if (c.reeb)
        for (const auto& t : c.reeb->terms) c.frozen = c.frozen && t.a.is_constant() && t.b.is_constant();
    const long rows = c.frozen ? 1 : 2L * steps + 1;
    c.table.resize(static_cast<std::size_t>(rows * c.row_size));
    for (long r = 0; r < rows; ++r) {
        const double s = static_cast<double>(r) / (2.0 * steps);
        double* out = c.table.data() + r * c.row_size;
        for (int i : c.moving) {
            *out++ = c.gen.terms[i].a(s);
            *out++ = c.gen.terms[i].b(s);
        }
        for (std::size_t i = 0; i < nreeb; ++i) {
            *out++ = c.reeb->terms[i].a(s);
            *out++ = c.reeb->terms[i].b(s);
        }
        *out = c.gen.z_slope(s);
    }
    return std::make_shared<const Core>(std::move(c));
}

CoIsotopy CoIsotopy::identity(const ModelSpec& model, int steps) {
    Generator g;
    g.dim = model.dim();
    g.normalization = Normalization::ZeroMean;
    return CoIsotopy(model, Kind::CoHamiltonian, g, std::nullopt, steps);
}

bool CoIsotopy::is_identity() const {
    for (const auto& t : core_->gen.terms) {
        bool zero = true;
        for (int j = 0; j < core_->gen.dim; ++j) zero = zero && t.k[j] == 0;
        if (zero) continue;  // constants generate no motion
        if (!t.a.is_zero() || !t.b.is_zero()) return false;
    }
    return core_->gen.z_slope.is_zero() && !core_->reeb;
}

CoIsotopy CoIsotopy::inverse_path() const {
    CoIsotopy c = *this;
    c.inverted_ = !inverted_;
    return c;
}

CoIsotopy CoIsotopy::warped(const ReparamCurve& zeta) const {
    CoIsotopy c = *this;
    c.warp_ = std::make_shared<const ReparamCurve>(warp_ ? ReparamCurve::composed(*warp_, zeta) : zeta);
    return c;
}

CoIsotopy CoIsotopy::with_steps(int steps) const {
    CoIsotopy c = *this;
    c.core_ = make_core(core_->model, core_->kind, core_->gen, core_->reeb, steps);
    return c;
}

CoIsotopy CoIsotopy::base_path() const {
    CoIsotopy out = *this;
    out.inverted_ = false;
    out.warp_.reset();
    return out;
}

double CoIsotopy::base_c(double z, double s, double* dcdz) const {
    if (core_->reeb) return core_->reeb->value(z, s, dcdz);
    if (dcdz) *dcdz = 0.0;
    if (!core_->model.circle()) return core_->gen.z_slope(s);
    return 0.0;
}

Vec CoIsotopy::base_field(const Vec& p, double s, double* mu) const {
    const int n = core_->model.n;
    Vec grad{};
    grad.fill(0.0);
    for (const auto& term : core_->gen.terms) {
        const double a = term.a(s), b = term.b(s);
        if (a == 0.0 && b == 0.0) continue;
        double th = 0;
        for (int j = 0; j < 2 * n; ++j)
            if (term.k[j]) th += term.k[j] * p[j];
        const double c = std::cos(th), sn = std::sin(th);
        const double d = b * c - a * sn;
        for (int j = 0; j < 2 * n; ++j)
            if (term.k[j]) grad[j] += term.k[j] * d;
    }
    Vec X = zero_vec();
    for (int i = 0; i < n; ++i) {
        X[i] = grad[n + i];
        X[n + i] = -grad[i];
    }
    X[2 * n] = base_c(p[2 * n], s, mu);
    return X;
}

FourierScalar CoIsotopy::base_generator(double s) const { return core_->gen.at(s); }

namespace {
struct StepPlan {
    long full;
    double rem;
};
StepPlan plan_steps(double s, int steps) {
    long J = static_cast<long>(std::floor(s * steps + 1e-9));
    if (J < 0) J = 0;
    return {J, s - static_cast<double>(J) / steps};
}
constexpr int kLanes = 4;
}  // namespace

struct CoIsotopy::Stepper {
    template <int W>
    using Block = double[kMaxDim][W];

    static void eval_row(const Core& c, double s, double* out) {
        for (int i : c.moving) {
            *out++ = c.gen.terms[i].a(s);
            *out++ = c.gen.terms[i].b(s);
        }
        if (c.reeb)
            for (const auto& t : c.reeb->terms) {
                *out++ = t.a(s);
                *out++ = t.b(s);
            }
        *out = c.gen.z_slope(s);
    }

    template <int W>
    static void field(const Core& c, const Block<W>& P, const double* row, Block<W>& X, double (&mu)[W]) {
        const int n = c.model.n, d2 = 2 * n;
        double grad[2 * kMaxHalfDim][W] = {};
        // Powers e^{i m p_j}, m = 1..kpow, shared by all terms.
        constexpr int kPowMax = 4;
        double pc[2 * kMaxHalfDim][kPowMax + 1][W], ps[2 * kMaxHalfDim][kPowMax + 1][W];
        const bool powers = c.kpow <= kPowMax;
        if (powers && c.kpow > 0)
            for (int j = 0; j < d2; ++j) {
                for (int l = 0; l < W; ++l) sincos_kernel(P[j][l], ps[j][1][l], pc[j][1][l]);
                for (int m = 2; m <= c.kpow; ++m)
                    for (int l = 0; l < W; ++l) {
                        pc[j][m][l] = pc[j][m - 1][l] * pc[j][1][l] - ps[j][m - 1][l] * ps[j][1][l];
                        ps[j][m][l] = pc[j][m - 1][l] * ps[j][1][l] + ps[j][m - 1][l] * pc[j][1][l];
                    }
            }
        const double* coef = row;
        for (const Core::Mode& md : c.modes) {
            const double ca = coef[0], cb = coef[1];
            coef += 2;
            double cs[W], sn[W];
            if (powers) {
                const int j0 = md.coord[0], k0 = md.k[0], a0 = std::abs(k0);
                const double sg0 = k0 > 0 ? 1.0 : -1.0;
                for (int l = 0; l < W; ++l) {
                    cs[l] = pc[j0][a0][l];
                    sn[l] = sg0 * ps[j0][a0][l];
                }
                for (int r = 1; r < md.count; ++r) {
                    const int j = md.coord[r], k = md.k[r], ak = std::abs(k);
                    const double sg = k > 0 ? 1.0 : -1.0;
                    for (int l = 0; l < W; ++l) {
                        const double qc = pc[j][ak][l], qs = sg * ps[j][ak][l];
                        const double nc = cs[l] * qc - sn[l] * qs;
                        sn[l] = cs[l] * qs + sn[l] * qc;
                        cs[l] = nc;
                    }
                }
            } else {
                for (int l = 0; l < W; ++l) {
                    double th = 0;
                    for (int r = 0; r < md.count; ++r) th += md.k[r] * P[md.coord[r]][l];
                    sincos_kernel(th, sn[l], cs[l]);
                }
            }
            for (int r = 0; r < md.count; ++r) {
                const int j = md.coord[r];
                const double k = md.k[r];
                for (int l = 0; l < W; ++l) grad[j][l] += k * (cb * cs[l] - ca * sn[l]);
            }
        }
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < W; ++l) {
                X[i][l] = grad[n + i][l];
                X[n + i][l] = -grad[i][l];
            }
        double zc[W] = {}, dz[W] = {};
        if (c.reeb) {
            for (const auto& term : c.reeb->terms) {
                const double ca = coef[0], cb = coef[1];
                coef += 2;
                if (term.m == 0) {
                    for (int l = 0; l < W; ++l) zc[l] += ca;
                    continue;
                }
                for (int l = 0; l < W; ++l) {
                    double cz, sz;
                    sincos_kernel(term.m * P[d2][l], sz, cz);
                    zc[l] += ca * cz + cb * sz;
                    dz[l] += term.m * (cb * cz - ca * sz);
                }
            }
        } else if (!c.model.circle()) {
            for (int l = 0; l < W; ++l) zc[l] = *coef;
        }
        for (int l = 0; l < W; ++l) {
            X[d2][l] = zc[l];
            mu[l] = dz[l];
        }
    }

    template <int W>
    static void step(const Core& c, Block<W>& P, double (&F)[W], const double* r0, const double* rm, const double* r1,
                     double h) {
        const int d = c.model.dim();
        Block<W> K1, K2, K3, K4, Q;
        double m1[W], m2[W], m3[W], m4[W];
        field<W>(c, P, r0, K1, m1);
        for (int i = 0; i < d; ++i)
            for (int l = 0; l < W; ++l) Q[i][l] = P[i][l] + 0.5 * h * K1[i][l];
        field<W>(c, Q, rm, K2, m2);
        for (int i = 0; i < d; ++i)
            for (int l = 0; l < W; ++l) Q[i][l] = P[i][l] + 0.5 * h * K2[i][l];
        field<W>(c, Q, rm, K3, m3);
        for (int i = 0; i < d; ++i)
            for (int l = 0; l < W; ++l) Q[i][l] = P[i][l] + h * K3[i][l];
        field<W>(c, Q, r1, K4, m4);
        for (int i = 0; i < d; ++i)
            for (int l = 0; l < W; ++l) P[i][l] += h / 6.0 * (K1[i][l] + 2.0 * K2[i][l] + 2.0 * K3[i][l] + K4[i][l]);
        for (int l = 0; l < W; ++l) F[l] += h / 6.0 * (m1[l] + 2.0 * m2[l] + 2.0 * m3[l] + m4[l]);
    }

    // Partial step of length `len` (signed) starting at time s0.
    template <int W>
    static void partial(const CoIsotopy& iso, Block<W>& P, double (&F)[W], double s0, double len) {
        const Core& c = *iso.core_;
        std::vector<double> buf(3 * static_cast<std::size_t>(c.row_size));
        eval_row(c, s0, buf.data());
        eval_row(c, s0 + 0.5 * len, buf.data() + c.row_size);
        eval_row(c, s0 + len, buf.data() + 2 * c.row_size);
        step<W>(c, P, F, buf.data(), buf.data() + c.row_size, buf.data() + 2 * c.row_size, len);
    }

    template <int W>
    static void forward(const CoIsotopy& iso, Block<W>& P, double (&F)[W], double s) {
        const Core& c = *iso.core_;
        const double h = 1.0 / c.steps;
        const StepPlan plan = plan_steps(s, c.steps);
        for (long j = 0; j < plan.full; ++j) step<W>(c, P, F, iso.row(2 * j), iso.row(2 * j + 1), iso.row(2 * j + 2), h);
        if (plan.rem != 0.0) partial<W>(iso, P, F, plan.full * h, plan.rem);
    }

    template <int W>
    static void backward(const CoIsotopy& iso, Block<W>& P, double (&F)[W], double s) {
        const Core& c = *iso.core_;
        const double h = 1.0 / c.steps;
        const StepPlan plan = plan_steps(s, c.steps);
        if (plan.rem != 0.0) partial<W>(iso, P, F, s, -plan.rem);
        for (long j = plan.full; j > 0; --j) step<W>(c, P, F, iso.row(2 * j), iso.row(2 * j - 1), iso.row(2 * j - 2), -h);
    }

    template <int W>
    static void load(Block<W>& P, const Vec* pts, int count) {
        for (int i = 0; i < kMaxDim; ++i)
            for (int l = 0; l < W; ++l) P[i][l] = pts[std::min(l, count - 1)][i];
    }

    template <int W>
    static Vec lane(const Block<W>& P, int l) {
        Vec v;
        for (int i = 0; i < kMaxDim; ++i) v[i] = P[i][l];
        return v;
    }

    // Forward integration of up to W points through sorted base times.
    template <int W>
    static void times(const CoIsotopy& iso, const Vec* pts, int count, const std::vector<double>& s,
                      const std::vector<std::size_t>& order, std::vector<Vec>* out, std::vector<double>* f) {
        const Core& c = *iso.core_;
        const double h = 1.0 / c.steps;
        Block<W> P;
        double F[W] = {};
        load<W>(P, pts, count);
        long node = 0;
        for (std::size_t idx : order) {
            const StepPlan plan = plan_steps(s[idx], c.steps);
            for (; node < plan.full; ++node)
                step<W>(c, P, F, iso.row(2 * node), iso.row(2 * node + 1), iso.row(2 * node + 2), h);
            Block<W> Y;
            double FY[W];
            std::copy(&P[0][0], &P[0][0] + kMaxDim * W, &Y[0][0]);
            std::copy(F, F + W, FY);
            if (plan.rem != 0.0) partial<W>(iso, Y, FY, plan.full * h, plan.rem);
            for (int l = 0; l < count; ++l) {
                out[l][idx] = reduce_point(c.model, lane<W>(Y, l));
                if (f) f[l][idx] = FY[l];
            }
        }
    }
};

Vec CoIsotopy::base_forward(const Vec& p, double s, double* f) const {
    Stepper::Block<1> P;
    double F[1] = {0.0};
    Stepper::load<1>(P, &p, 1);
    Stepper::forward<1>(*this, P, F, s);
    if (f) *f = F[0];
    return reduce_point(core_->model, Stepper::lane<1>(P, 0));
}

Vec CoIsotopy::base_backward(const Vec& q, double s, double* f) const {
    Stepper::Block<1> P;
    double F[1] = {0.0};
    Stepper::load<1>(P, &q, 1);
    Stepper::backward<1>(*this, P, F, s);
    if (f) *f = -F[0];
    return reduce_point(core_->model, Stepper::lane<1>(P, 0));
}

Vec CoIsotopy::flow(const Vec& p, double t, double* f) const {
    const double s = warp_value(t);
    if (!inverted_) return base_forward(p, s, f);
    double fs = 0;
    Vec r = base_backward(p, s, f ? &fs : nullptr);
    if (f) *f = -fs;
    return r;
}

Vec CoIsotopy::inverse_flow(const Vec& q, double t, double* f) const {
    const double s = warp_value(t);
    if (!inverted_) return base_backward(q, s, f);
    double fs = 0;
    Vec r = base_forward(q, s, f ? &fs : nullptr);
    if (f) *f = -fs;
    return r;
}

void CoIsotopy::flow_many(const std::vector<Vec>& points, double t, std::vector<Vec>& out, bool inverse,
                          std::vector<double>* f) const {
    out.assign(points.size(), zero_vec());
    if (f) f->assign(points.size(), 0.0);
    const double s = warp_value(t);
    const bool back = inverse != inverted_;
    for (std::size_t i0 = 0; i0 < points.size(); i0 += kLanes) {
        const int count = static_cast<int>(std::min<std::size_t>(kLanes, points.size() - i0));
        auto run = [&](auto width) {
            constexpr int W = decltype(width)::value;
            Stepper::Block<W> P;
            double F[W] = {};
            Stepper::load<W>(P, &points[i0], count);
            if (back)
                Stepper::backward<W>(*this, P, F, s);
            else
                Stepper::forward<W>(*this, P, F, s);
            for (int l = 0; l < count; ++l) {
                out[i0 + l] = reduce_point(core_->model, Stepper::lane<W>(P, l));
                if (f) (*f)[i0 + l] = inverse ? -F[l] : F[l];
            }
        };
        if (count == 1)
            run(std::integral_constant<int, 1>{});
        else
            run(std::integral_constant<int, kLanes>{});
    }
}

void CoIsotopy::flow_times(const Vec& p, const std::vector<double>& times, std::vector<Vec>& out,
                           std::vector<double>* f) const {
    out.assign(times.size(), zero_vec());
    if (f) f->assign(times.size(), 0.0);
    if (inverted_) {
        for (std::size_t i = 0; i < times.size(); ++i) out[i] = flow(p, times[i], f ? &(*f)[i] : nullptr);
        return;
    }
    std::vector<double> s(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) s[i] = warp_value(times[i]);
    std::vector<std::size_t> order(times.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });
    Stepper::times<1>(*this, &p, 1, s, order, &out, f);
}

void CoIsotopy::flow_times_many(const std::vector<Vec>& points, const std::vector<double>& times,
                                std::vector<std::vector<Vec>>& out) const {
    out.assign(points.size(), std::vector<Vec>(times.size(), zero_vec()));
    if (inverted_) {
        for (std::size_t i = 0; i < points.size(); ++i) flow_times(points[i], times, out[i]);
        return;
    }
    std::vector<double> s(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) s[i] = warp_value(times[i]);
    std::vector<std::size_t> order(times.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });
    for (std::size_t i0 = 0; i0 < points.size(); i0 += kLanes) {
        const int count = static_cast<int>(std::min<std::size_t>(kLanes, points.size() - i0));
        if (count == 1)
            Stepper::times<1>(*this, &points[i0], 1, s, order, &out[i0], nullptr);
        else
            Stepper::times<kLanes>(*this, &points[i0], count, s, order, &out[i0], nullptr);
    }
}

Vec CoIsotopy::field(const Vec& p, double t) const {
    const double s = warp_value(t), w = warp_deriv(t);
    const ModelSpec& m = core_->model;
    if (!inverted_) {
        Vec X = base_field(p, s);
        for (int j = 0; j < m.dim(); ++j) X[j] *= w;
        return X;
    }
    // Y = -(D phi_s(u))^{-1} X_s(p), u = phi_s^{-1}(p)
    const Vec u = base_backward(p, s, nullptr);
    const double hs = 1e-5;
    Eigen::MatrixXd J(m.dim(), m.dim());
    for (int j = 0; j < m.dim(); ++j) {
        Vec a = u, b = u;
        a[j] += hs;
        b[j] -= hs;
        const Vec d = point_diff(m, base_forward(a, s, nullptr), base_forward(b, s, nullptr));
        for (int i = 0; i < m.dim(); ++i) J(i, j) = d[i] / (2 * hs);
    }
    const Vec X = base_field(p, s);
    Eigen::VectorXd xv(m.dim());
    for (int i = 0; i < m.dim(); ++i) xv(i) = X[i];
    Eigen::VectorXd y = -J.partialPivLu().solve(xv);
    Vec Y = zero_vec();
    for (int i = 0; i < m.dim(); ++i) Y[i] = w * y(i);
    return Y;
}

FourierScalar CoIsotopy::generator_fourier(double t) const {
    FourierScalar F = core_->gen.at(warp_value(t)).scaled(warp_deriv(t));
    return inverted_ ? F.scaled(-1.0) : F;
}

double CoIsotopy::generator_value(const Vec& q, double t) const {
    const double s = warp_value(t), w = warp_deriv(t);
    const int zi = core_->model.zi();
    auto F = [&](const Vec& x) { return core_->gen.at(s).value(x) + core_->gen.z_slope(s) * x[zi]; };
    if (!inverted_) return w * F(q);
    return -w * F(base_forward(q, s, nullptr));
}

void CoIsotopy::generator_values(const std::vector<Vec>& qs, double t, std::vector<double>& out) const {
    const double s = warp_value(t), w = warp_deriv(t);
    const int zi = core_->model.zi();
    const FourierScalar G = core_->gen.at(s);
    const double slope = core_->gen.z_slope(s);
    out.resize(qs.size());
    if (!inverted_) {
        for (std::size_t i = 0; i < qs.size(); ++i) out[i] = w * (G.value(qs[i]) + slope * qs[i][zi]);
        return;
    }
    // The inverted path's flow at t is the base backward map; F composes with
    // the base forward map.
    std::vector<Vec> fw;
    base_path().flow_many(qs, s, fw);
    for (std::size_t i = 0; i < qs.size(); ++i) out[i] = -w * (G.value(fw[i]) + slope * fw[i][zi]);
}

bool CoIsotopy::C_spatially_constant() const { return !core_->reeb || core_->reeb->z_independent(); }

bool CoIsotopy::z_equivariant() const { return C_spatially_constant(); }

double CoIsotopy::C_function(double t, const Vec& p) const {
    const double s = warp_value(t), w = warp_deriv(t);
    const int zi = core_->model.zi();
    if (C_spatially_constant()) return (inverted_ ? -w : w) * base_c(0.0, s);
    if (!inverted_) {
        const Vec q = base_forward(p, s, nullptr);
        return w * base_c(q[zi], s);
    }
    double fs = 0;
    base_backward(p, s, &fs);
    return -w * std::exp(-fs) * base_c(p[zi], s);
}

double CoIsotopy::C_sup(double t) const {
    if (C_spatially_constant()) return std::abs(C_function(t, zero_vec()));
    double sup = 0;
    constexpr int kZ = 64;
    for (int i = 0; i < kZ; ++i) {
        Vec p = zero_vec();
        p[core_->model.zi()] = kTwoPi * i / kZ;
        const double s = warp_value(t), w = warp_deriv(t);
        // Forward paths: C^t = c o phi_t ranges over c itself.
        const double v = inverted_ ? C_function(t, p) : w * base_c(p[core_->model.zi()], s);
        sup = std::max(sup, std::abs(v));
    }
    return sup;
}

double CoIsotopy::C_mean(double t) const {
    if (C_spatially_constant()) return C_function(t, zero_vec());
    constexpr int kZ = 64;
    double acc = 0;
    for (int i = 0; i < kZ; ++i) {
        Vec p = zero_vec();
        p[core_->model.zi()] = kTwoPi * i / kZ;
        acc += C_function(t, p);
    }
    return acc / kZ;
}

std::vector<double> CoIsotopy::breakpoints() const { return warp_ ? warp_->breakpoints() : std::vector<double>{}; }

TimeQuadrature CoIsotopy::quadrature() const { return time_quadrature(breakpoints(), core_->steps); }

}  // namespace cokinetic

namespace cokinetic {

namespace {
PolyT lin(const PolyT& a, double ca, const PolyT& b, double cb) {
    PolyT r;
    for (int i = 0; i <= kMaxPolyDegree; ++i) r.c[i] = ca * a.c[i] + cb * b.c[i];
    return r;
}
}  // namespace

CoIsotopy CoIsotopy::conjugated(const AffineMap& rho) const {
    const ModelSpec& m = core_->model;
    if (!rho.is_cosymplectic(m)) throw Error(ErrorCode::InvalidArgument, "conjugator is not a cosymplectic affine map");
    const int d = m.dim();
    Generator g = core_->gen;
    bool shifted_constant = false;
    for (auto& t : g.terms) {
        Freq k{};
        double ph = 0;
        for (int j = 0; j < d; ++j) {
            int s = 0;
            for (int i = 0; i < d; ++i) s += t.k[i] * rho.A[i][j];
            k[j] = s;
            ph += t.k[j] * rho.shift[j];
        }
        const double c = std::cos(ph), sn = std::sin(ph);
        const PolyT a = lin(t.a, c, t.b, sn), b = lin(t.b, c, t.a, -sn);
        t.k = k;
        t.a = a;
        t.b = b;
    }
    if (!g.z_slope.is_zero() && rho.shift[m.zi()] != 0.0) {
        // c0 (z + s) contributes the constant c0 s.
        TimeTerm t;
        t.a = lin(g.z_slope, rho.shift[m.zi()], g.z_slope, 0.0);
        g.terms.push_back(t);
        shifted_constant = true;
    }
    if (shifted_constant) g.normalization = Normalization::Raw;
    std::optional<ReebComponent> r = core_->reeb;
    if (r) {
        const double sz = rho.shift[m.zi()];
        for (auto& t : r->terms) {
            if (t.m == 0) continue;
            const double c = std::cos(t.m * sz), sn = std::sin(t.m * sz);
            const PolyT a = lin(t.a, c, t.b, sn), b = lin(t.b, c, t.a, -sn);
            t.a = a;
            t.b = b;
        }
    }
    CoIsotopy out(m, core_->kind, std::move(g), std::move(r), core_->steps);
    out.inverted_ = inverted_;
    out.warp_ = warp_;
    return out;
}

}  // namespace cokinetic
