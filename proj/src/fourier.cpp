#include "cokinetic/fourier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <map>
#include <queue>

#include "cokinetic/kernels.hpp"

namespace cokinetic {

FourierScalar::FourierScalar(int dim, std::vector<FourierTerm> terms) : dim_(dim), terms_(std::move(terms)) {
    for (auto& t : terms_)
        for (int j = dim_; j < kMaxDim; ++j) t.k[j] = 0;
}

FourierScalar FourierScalar::constant(int dim, double c) {
    FourierScalar f(dim);
    if (c != 0.0) f.add_term(Freq{}, c, 0.0);
    return f;
}

bool FourierScalar::independent_of(int j) const {
    for (const auto& t : terms_)
        if (t.k[j] != 0 && (t.a != 0.0 || t.b != 0.0)) return false;
    return true;
}

static inline double phase(const Freq& k, const Vec& p, int dim) {
    double th = 0.0;
    for (int j = 0; j < dim; ++j)
        if (k[j]) th += k[j] * p[j];
    return th;
}

double FourierScalar::value(const Vec& p) const {
    double v = 0.0;
    for (const auto& t : terms_) {
        const double th = phase(t.k, p, dim_);
        v += t.a * std::cos(th) + t.b * std::sin(th);
    }
    return v;
}

double FourierScalar::value_grad(const Vec& p, Vec& grad) const {
    grad.fill(0.0);
    double v = 0.0;
    for (const auto& t : terms_) {
        const double th = phase(t.k, p, dim_);
        const double c = std::cos(th), s = std::sin(th);
        v += t.a * c + t.b * s;
        const double d = t.b * c - t.a * s;
        for (int j = 0; j < dim_; ++j)
            if (t.k[j]) grad[j] += t.k[j] * d;
    }
    return v;
}

double FourierScalar::value_grad_hess(const Vec& p, Vec& grad, std::array<Vec, kMaxDim>& hess) const {
    grad.fill(0.0);
    for (auto& row : hess) row.fill(0.0);
    double v = 0.0;
    for (const auto& t : terms_) {
        const double th = phase(t.k, p, dim_);
        const double c = std::cos(th), s = std::sin(th);
        const double f = t.a * c + t.b * s;
        v += f;
        const double d = t.b * c - t.a * s;
        for (int i = 0; i < dim_; ++i) {
            if (!t.k[i]) continue;
            grad[i] += t.k[i] * d;
            for (int j = 0; j < dim_; ++j)
                if (t.k[j]) hess[i][j] -= static_cast<double>(t.k[i] * t.k[j]) * f;
        }
    }
    return v;
}

FourierScalar FourierScalar::partial(int j) const {
    FourierScalar out(dim_);
    for (const auto& t : terms_) {
        if (!t.k[j]) continue;
        out.add_term(t.k, t.k[j] * t.b, -t.k[j] * t.a);
    }
    return out;
}

double FourierScalar::mean() const {
    double m = 0.0;
    for (const auto& t : terms_) {
        bool zero = true;
        for (int j = 0; j < dim_; ++j) zero = zero && t.k[j] == 0;
        if (zero) m += t.a;
    }
    return m;
}

FourierScalar FourierScalar::canonical(double drop_tol) const {
    std::map<Freq, std::pair<double, double>> acc;
    for (const auto& t : terms_) {
        Freq k = t.k;
        double a = t.a, b = t.b;
        int first = 0;
        while (first < dim_ && k[first] == 0) ++first;
        if (first == dim_) {
            b = 0.0;
        } else if (k[first] < 0) {
            for (int j = 0; j < dim_; ++j) k[j] = -k[j];
            b = -b;
        }
        auto& slot = acc[k];
        slot.first += a;
        slot.second += b;
    }
    FourierScalar out(dim_);
    for (const auto& [k, ab] : acc)
        if (std::abs(ab.first) > drop_tol || std::abs(ab.second) > drop_tol) out.add_term(k, ab.first, ab.second);
    return out;
}

FourierScalar FourierScalar::translated(const Vec& shift) const {
    FourierScalar out(dim_);
    for (const auto& t : terms_) {
        const double ph = phase(t.k, shift, dim_);
        const double c = std::cos(ph), s = std::sin(ph);
        out.add_term(t.k, t.a * c + t.b * s, t.b * c - t.a * s);
    }
    return out;
}

FourierScalar FourierScalar::affine_pullback(const std::array<std::array<int, kMaxDim>, kMaxDim>& A,
                                             const Vec& shift) const {
    FourierScalar moved(dim_);
    for (const auto& t : terms_) {
        Freq k{};
        for (int j = 0; j < dim_; ++j) {
            int s = 0;
            for (int i = 0; i < dim_; ++i) s += t.k[i] * A[i][j];
            k[j] = s;
        }
        const double ph = phase(t.k, shift, dim_);
        const double c = std::cos(ph), sn = std::sin(ph);
        moved.add_term(k, t.a * c + t.b * sn, t.b * c - t.a * sn);
    }
    return moved;
}

FourierScalar FourierScalar::operator+(const FourierScalar& o) const {
    FourierScalar out(std::max(dim_, o.dim_), terms_);
    for (const auto& t : o.terms_) out.terms_.push_back(t);
    return out;
}

FourierScalar FourierScalar::operator-(const FourierScalar& o) const { return *this + o.scaled(-1.0); }

FourierScalar FourierScalar::scaled(double s) const {
    FourierScalar out(dim_, terms_);
    for (auto& t : out.terms_) {
        t.a *= s;
        t.b *= s;
    }
    return out;
}

static double knorm(const Freq& k, int dim) {
    double s = 0;
    for (int j = 0; j < dim; ++j) s += static_cast<double>(k[j]) * k[j];
    return std::sqrt(s);
}

double FourierScalar::lipschitz_bound() const {
    double s = 0;
    for (const auto& t : terms_) s += knorm(t.k, dim_) * (std::abs(t.a) + std::abs(t.b));
    return s;
}

double FourierScalar::hessian_bound() const {
    double s = 0;
    for (const auto& t : terms_) {
        const double kn = knorm(t.k, dim_);
        s += kn * kn * (std::abs(t.a) + std::abs(t.b));
    }
    return s;
}

double FourierScalar::max_abs_coefficient() const {
    double m = 0;
    for (const auto& t : terms_) m = std::max({m, std::abs(t.a), std::abs(t.b)});
    return m;
}

// ---------------------------------------------------------------- one-forms

OneFormField OneFormField::zero(int dim) {
    OneFormField f;
    f.components.assign(dim, FourierScalar(dim));
    return f;
}

OneFormField OneFormField::constant(const std::vector<double>& coeffs) {
    const int dim = static_cast<int>(coeffs.size());
    OneFormField f;
    for (double c : coeffs) f.components.push_back(FourierScalar::constant(dim, c));
    return f;
}

OneFormField OneFormField::exact(const FourierScalar& F) {
    OneFormField f;
    for (int j = 0; j < F.dim(); ++j) f.components.push_back(F.partial(j));
    return f;
}

Vec OneFormField::evaluate(const Vec& p) const {
    Vec v = zero_vec();
    for (int j = 0; j < dim(); ++j) v[j] = components[j].value(p);
    return v;
}

double OneFormField::closedness_defect() const {
    double defect = 0.0;
    for (int i = 0; i < dim(); ++i)
        for (int j = i + 1; j < dim(); ++j) {
            FourierScalar d = (components[j].partial(i) - components[i].partial(j)).canonical();
            defect = std::max(defect, d.max_abs_coefficient());
        }
    return defect;
}

bool OneFormField::is_closed(double tol) const {
    double scale = 1.0;
    for (const auto& c : components) scale = std::max(scale, c.max_abs_coefficient());
    return closedness_defect() <= tol * scale;
}

bool OneFormField::is_constant() const {
    for (const auto& c : components) {
        FourierScalar cc = c.canonical();
        for (const auto& t : cc.terms())
            for (int j = 0; j < cc.dim(); ++j)
                if (t.k[j] != 0) return false;
    }
    return true;
}

Vec pairing_I(const ModelSpec& m, const Vec& X) {
    Vec cov = zero_vec();
    for (int i = 0; i < m.n; ++i) {
        cov[i] = -X[m.n + i];
        cov[m.n + i] = X[i];
    }
    cov[m.zi()] = X[m.zi()];
    return cov;
}

Vec pairing_I_inverse(const ModelSpec& m, const Vec& cov) {
    Vec X = zero_vec();
    for (int i = 0; i < m.n; ++i) {
        X[i] = cov[m.n + i];
        X[m.n + i] = -cov[i];
    }
    X[m.zi()] = cov[m.zi()];
    return X;
}

// ----------------------------------------------------------- grid evaluation

namespace {

struct GridPlan {
    int N = 0;
    std::vector<int> active;
    std::vector<double> cb, sb;               // cos/sin(2 pi i / N)
    std::vector<std::vector<double>> crow, srow;  // per-term tables along the last active axis
    std::vector<const FourierTerm*> terms;
};

GridPlan make_plan(const FourierScalar& F, int N) {
    if (N < 8) throw Error(ErrorCode::InvalidArgument, "osc resolution must be at least 8");
    GridPlan g;
    g.N = N;
    for (int j = 0; j < F.dim(); ++j)
        if (!F.independent_of(j)) g.active.push_back(j);
    g.cb.resize(N);
    g.sb.resize(N);
    for (int i = 0; i < N; ++i) {
        g.cb[i] = std::cos(kTwoPi * i / N);
        g.sb[i] = std::sin(kTwoPi * i / N);
    }
    for (const auto& t : F.terms())
        if (t.a != 0.0 || t.b != 0.0) g.terms.push_back(&t);
    if (g.active.empty()) return g;
    const int last = g.active.back();
    for (const auto* t : g.terms) {
        const long m = ((t->k[last] % N) + N) % N;
        std::vector<double> c(N), s(N);
        for (int v = 0; v < N; ++v) {
            const long idx = (m * v) % N;
            c[v] = g.cb[idx];
            s[v] = g.sb[idx];
        }
        g.crow.push_back(std::move(c));
        g.srow.push_back(std::move(s));
    }
    return g;
}

// Visits every grid row; fn(row_index, prefix indices, row values).
template <class Fn>
void for_each_row(const GridPlan& g, kernels::Isa isa, Fn&& fn) {
    const int N = g.N;
    const int da = static_cast<int>(g.active.size());
    const int nt = static_cast<int>(g.terms.size());
    long rows = 1;
    for (int d = 0; d + 1 < da; ++d) rows *= N;
    std::vector<double> alpha(nt), beta(nt), row(N);
    std::vector<const double*> cptr(nt), sptr(nt);
    for (int k = 0; k < nt; ++k) {
        cptr[k] = g.crow[k].data();
        sptr[k] = g.srow[k].data();
    }
    std::vector<int> idx(std::max(da - 1, 0), 0);
    auto combine = kernels::row_combine(isa);
    for (long r = 0; r < rows; ++r) {
        long rem = r;
        for (int d = da - 2; d >= 0; --d) {
            idx[d] = static_cast<int>(rem % N);
            rem /= N;
        }
        for (int k = 0; k < nt; ++k) {
            long P = 0;
            for (int d = 0; d + 1 < da; ++d) P += static_cast<long>(g.terms[k]->k[g.active[d]]) * idx[d];
            P = ((P % N) + N) % N;
            const double c = g.cb[P], s = g.sb[P];
            alpha[k] = g.terms[k]->a * c + g.terms[k]->b * s;
            beta[k] = g.terms[k]->b * c - g.terms[k]->a * s;
        }
        combine(nt, alpha.data(), beta.data(), cptr.data(), sptr.data(), N, row.data());
        fn(r, idx, row);
    }
}

double sampling_slack(const FourierScalar& F, int N, int da) {
    if (da == 0) return 0.0;
    const double h = kTwoPi / N;
    const double first = F.lipschitz_bound() * h * std::sqrt(static_cast<double>(da));
    const double r2 = 0.25 * h * h * da;
    const double second = 0.5 * F.hessian_bound() * r2;
    return std::min(first, second);
}

Vec grid_point(const GridPlan& g, const std::vector<int>& idx, int v) {
    Vec p = zero_vec();
    const int da = static_cast<int>(g.active.size());
    for (int d = 0; d + 1 < da; ++d) p[g.active[d]] = kTwoPi * idx[d] / g.N;
    p[g.active.back()] = kTwoPi * v / g.N;
    return p;
}

// Newton ascent of sign*F from p restricted to the active coordinates.
double polish(const FourierScalar& F, const std::vector<int>& active, Vec p, double sign, double step_cap) {
    const int da = static_cast<int>(active.size());
    Vec g;
    std::array<Vec, kMaxDim> H;
    double best = sign * F.value_grad_hess(p, g, H);
    for (int it = 0; it < 200; ++it) {
        Eigen::VectorXd gv(da);
        Eigen::MatrixXd Hm(da, da);
        for (int i = 0; i < da; ++i) {
            gv(i) = sign * g[active[i]];
            for (int j = 0; j < da; ++j) Hm(i, j) = sign * H[active[i]][active[j]];
        }
        if (gv.cwiseAbs().maxCoeff() < 1e-15) break;
        Eigen::VectorXd step;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(-Hm);
        bool newton = ldlt.info() == Eigen::Success && ldlt.isPositive() && ldlt.vectorD().minCoeff() > 0;
        if (newton) {
            step = ldlt.solve(gv);
        } else {
            // Shift the spectrum so the model is concave, then take the regularized step.
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-Hm);
            const double shift = std::max(0.0, -es.eigenvalues().minCoeff()) + 1e-3 + gv.norm();
            step = (-Hm + shift * Eigen::MatrixXd::Identity(da, da)).ldlt().solve(gv);
        }
        if (!step.allFinite() || step.norm() > step_cap) step = step.allFinite() ? step * (step_cap / step.norm()) : gv * (step_cap / gv.norm());
        bool improved = false;
        for (int half = 0; half < 30; ++half) {
            Vec q = p;
            for (int i = 0; i < da; ++i) q[active[i]] += step(i);
            Vec g2;
            std::array<Vec, kMaxDim> H2;
            const double val = sign * F.value_grad_hess(q, g2, H2);
            if (val >= best) {
                improved = val > best || step.norm() < 1e-14;
                p = q;
                g = g2;
                H = H2;
                best = val;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
    }
    return sign * best;
}

struct Candidate {
    double v;
    Vec p;
    bool operator<(const Candidate& o) const { return v > o.v; }  // min-heap on v
};

}  // namespace

std::vector<double> grid_values(const FourierScalar& F, int resolution, int isa, std::vector<int>* active) {
    GridPlan g = make_plan(F, resolution);
    if (active) *active = g.active;
    if (g.active.empty()) return {F.mean()};
    std::vector<double> out;
    for_each_row(g, static_cast<kernels::Isa>(isa), [&](long, const std::vector<int>&, const std::vector<double>& row) {
        out.insert(out.end(), row.begin(), row.end());
    });
    return out;
}

GridExtrema grid_extrema(const FourierScalar& F, int resolution) {
    return grid_extrema(F, resolution, static_cast<int>(kernels::active_isa()));
}

GridExtrema grid_extrema(const FourierScalar& F, int resolution, int isa) {
    GridPlan g = make_plan(F, resolution);
    GridExtrema e;
    e.active_dims = static_cast<int>(g.active.size());
    if (g.active.empty()) {
        e.min = e.max = F.mean();
        return e;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    auto mm = kernels::minmax(static_cast<kernels::Isa>(isa));
    for_each_row(g, static_cast<kernels::Isa>(isa),
                 [&](long, const std::vector<int>&, const std::vector<double>& row) { mm(row.data(), row.size(), &lo, &hi); });
    e.min = lo;
    e.max = hi;
    e.slack = sampling_slack(F, resolution, e.active_dims);
    return e;
}

OscInterval osc(const FourierScalar& F, int resolution) {
    GridPlan g = make_plan(F, resolution);
    OscInterval out;
    out.resolution = resolution;
    out.active_dims = static_cast<int>(g.active.size());
    if (g.active.empty()) {
        out.argmax_value = out.argmin_value = F.mean();
        return out;
    }
    constexpr std::size_t K = 48;
    std::priority_queue<Candidate> top, bottom;  // bottom stores negated values
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const auto isa = kernels::active_isa();
    auto mm = kernels::minmax(isa);
    for_each_row(g, isa, [&](long, const std::vector<int>& idx, const std::vector<double>& row) {
        double rlo = std::numeric_limits<double>::infinity(), rhi = -rlo;
        mm(row.data(), row.size(), &rlo, &rhi);
        lo = std::min(lo, rlo);
        hi = std::max(hi, rhi);
        if (top.size() < K || rhi > top.top().v) {
            for (int v = 0; v < g.N; ++v) {
                if (top.size() < K) {
                    top.push({row[v], grid_point(g, idx, v)});
                } else if (row[v] > top.top().v) {
                    top.pop();
                    top.push({row[v], grid_point(g, idx, v)});
                }
            }
        }
        if (bottom.size() < K || -rlo > bottom.top().v) {
            for (int v = 0; v < g.N; ++v) {
                if (bottom.size() < K) {
                    bottom.push({-row[v], grid_point(g, idx, v)});
                } else if (-row[v] > bottom.top().v) {
                    bottom.pop();
                    bottom.push({-row[v], grid_point(g, idx, v)});
                }
            }
        }
    });
    const double h = kTwoPi / resolution;
    // Best candidates first; starts within a few cells of an earlier start
    // climb the same peak and are skipped.
    auto drain = [&](std::priority_queue<Candidate>& q, double sign, double init) {
        std::vector<Candidate> c;
        for (; !q.empty(); q.pop()) c.push_back(q.top());
        std::reverse(c.begin(), c.end());
        std::vector<Vec> starts;
        double best = init;
        for (const auto& cand : c) {
            bool near = false;
            for (const auto& s : starts) {
                double d = 0;
                for (int j : g.active) d = std::max(d, std::abs(wrap_diff(cand.p[j] - s[j])));
                if (d <= 2.5 * h) {
                    near = true;
                    break;
                }
            }
            if (near) continue;
            starts.push_back(cand.p);
            const double v = polish(F, g.active, cand.p, sign, h);
            best = sign > 0 ? std::max(best, v) : std::min(best, v);
        }
        return best;
    };
    const double pmax = drain(top, 1.0, hi);
    const double pmin = drain(bottom, -1.0, lo);
    const double slack = sampling_slack(F, resolution, out.active_dims);
    out.grid_lo = hi - lo;
    out.lo = pmax - pmin;
    out.hi = std::max(out.lo, (hi + slack) - (lo - slack));
    out.value = out.lo;
    out.argmax_value = pmax;
    out.argmin_value = pmin;
    return out;
}

double sup_abs(const FourierScalar& F, int resolution) {
    GridExtrema e = grid_extrema(F, resolution);
    return std::max(std::abs(e.max), std::abs(e.min)) + e.slack;
}

double integrate(const FourierScalar& F, const ModelSpec& m) {
    if (!m.circle()) throw Error(ErrorCode::UnboundedDomain, "integration over a line-topology model");
    return F.mean() * m.volume();
}

HodgeSplit hodge_split(const OneFormField& alpha) {
    if (!alpha.is_closed()) throw Error(ErrorCode::NotClosed, "hodge_split needs a closed form");
    const int dim = alpha.dim();
    HodgeSplit out;
    std::vector<double> consts(dim, 0.0);
    // frequency -> (chosen component, |k_j|, A, B)
    struct Pick {
        int j = -1;
        int kj = 0;
        double A = 0, B = 0;
    };
    std::map<Freq, Pick> picks;
    for (int j = 0; j < dim; ++j) {
        FourierScalar c = alpha.components[j].canonical();
        for (const auto& t : c.terms()) {
            bool zero = true;
            for (int i = 0; i < dim; ++i) zero = zero && t.k[i] == 0;
            if (zero) {
                consts[j] += t.a;
                continue;
            }
            if (t.k[j] == 0) continue;
            Pick& p = picks[t.k];
            if (std::abs(t.k[j]) > p.kj) {
                p.j = j;
                p.kj = std::abs(t.k[j]);
                p.A = -t.b / t.k[j];
                p.B = t.a / t.k[j];
            }
        }
    }
    out.harmonic = OneFormField::constant(consts);
    out.primitive = FourierScalar(dim);
    for (const auto& [k, p] : picks) out.primitive.add_term(k, p.A, p.B);
    return out;
}

double hodge_reconstruction_error(const OneFormField& alpha, const HodgeSplit& s) {
    double err = 0.0;
    for (int j = 0; j < alpha.dim(); ++j) {
        FourierScalar d = (alpha.components[j] - s.harmonic.components[j] - s.primitive.partial(j)).canonical();
        err = std::max(err, d.max_abs_coefficient());
    }
    return err;
}

double l2_norm_harmonic(const OneFormField& h, const ModelSpec& m) {
    if (!h.is_constant()) throw Error(ErrorCode::NonConstantForm, "harmonic part must have constant coefficients");
    double s = 0;
    for (const auto& c : h.components) {
        const double v = c.mean();
        s += v * v;
    }
    return std::sqrt(m.volume() * s);
}

}  // namespace cokinetic
