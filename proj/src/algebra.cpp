#include "cokinetic/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "cokinetic/random.hpp"

namespace cokinetic {

namespace {

struct Sample {
    Vec p;
    double t;
};

std::vector<Sample> draw_samples(const ModelSpec& m, const SampleOptions& opt) {
    Rng rng(opt.seed);
    std::uniform_real_distribution<double> ut(opt.t_lo, opt.t_hi);
    std::vector<Sample> s(opt.samples);
    for (auto& x : s) {
        x.p = random_point(m, rng);
        x.t = ut(rng);
    }
    return s;
}

// Evaluates fn on every sample in parallel and returns the per-sample values.
std::vector<double> sweep(const std::vector<Sample>& s, const std::function<double(const Sample&)>& fn) {
    std::vector<double> out(s.size(), 0.0);
    parallel_for(s.size(), [&](std::size_t i) { out[i] = fn(s[i]); });
    return out;
}

double vmax(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::isnan(x) ? x : std::max(m, x);
    return m;
}

Eigen::VectorXd to_eigen(const Vec& v, int d) {
    Eigen::VectorXd e(d);
    for (int i = 0; i < d; ++i) e(i) = v[i];
    return e;
}

double dt_for(int steps) { return 1.0 / (4.0 * steps); }

void require_cohamiltonian(const CoIsotopy& iso, const char* what) {
    if (iso.kind() != Kind::CoHamiltonian)
        throw Error(ErrorCode::KindMismatch, std::string(what) + " needs a co-Hamiltonian isotopy");
}

void require_same_model(const CoIsotopy& a, const CoIsotopy& b) {
    if (!(a.model() == b.model())) throw Error(ErrorCode::ModelMismatch, "isotopies live on different models");
}

// z-velocity of the inverse path at x: d/ds z(phi_s^{-1} x).
double inverse_z_speed(const CoIsotopy& a, const Vec& x, double t, double dt) {
    return curve_velocity(a.model(), [&](double s) { return a.inverse_flow(x, s); }, t, dt)[a.model().zi()];
}

double exponent_along(const std::function<Vec(double, double*)>& c, double s) {
    double f = 0;
    c(s, &f);
    return f;
}

}  // namespace

namespace {
std::vector<double> stencil_times(double t, double dt) { return {t - 2 * dt, t - dt, t + dt, t + 2 * dt}; }

// Fourth-order stencil from positions at stencil_times(t, dt), plus an
// optional fifth entry that is ignored.
Vec stencil_velocity(const ModelSpec& m, const std::vector<Vec>& c, double dt) {
    const Vec d1 = point_diff(m, c[2], c[1]), d2 = point_diff(m, c[3], c[0]);
    Vec v = zero_vec();
    for (int j = 0; j < m.dim(); ++j) v[j] = (8.0 * d1[j] - d2[j]) / (12.0 * dt);
    return v;
}

// Forward composite a_t o b_t at the stencil times with one pass for b.
void composite_times(const CoIsotopy& a, const CoIsotopy& b, const Vec& x, const std::vector<double>& times,
                     std::vector<Vec>& out, std::vector<double>* f = nullptr) {
    std::vector<double> fb;
    b.flow_times(x, times, out, f ? &fb : nullptr);
    if (f) f->assign(times.size(), 0.0);
    for (std::size_t i = 0; i < times.size(); ++i) {
        double fa = 0;
        out[i] = a.flow(out[i], times[i], f ? &fa : nullptr);
        if (f) (*f)[i] = fa + fb[i];
    }
}
}  // namespace

Vec vector_field(const CoIsotopy& iso, const Vec& p, double t) { return iso.field(p, t); }

CoIsotopy inverse_isotopy(const CoIsotopy& iso) {
    require_cohamiltonian(iso, "inverse_isotopy");
    return iso.inverse_path();
}

CoIsotopy conjugate_isotopy(const CoIsotopy& iso, const AffineMap& rho) { return iso.conjugated(rho); }

Vec ComposedPath::flow(const Vec& p, double t) const { return a.flow(b.flow(p, t), t); }

Vec ComposedPath::inverse(const Vec& q, double t) const { return b.inverse_flow(a.inverse_flow(q, t), t); }

double ComposedPath::claimed_generator(const Vec& q, double t) const {
    return a.generator_value(q, t) + b.generator_value(a.inverse_flow(q, t), t);
}

PathView ComposedPath::view() const {
    PathView v;
    v.model = a.model();
    v.steps = std::max(a.steps(), b.steps());
    const ComposedPath self = *this;
    v.flow = [self](const Vec& p, double t) { return self.flow(p, t); };
    v.inverse = [self](const Vec& q, double t) { return self.inverse(q, t); };
    v.generator = [self](const Vec& q, double t) { return self.claimed_generator(q, t); };
    v.generator_many = [self](const std::vector<Vec>& qs, double t, std::vector<double>& out) {
        std::vector<double> gb;
        std::vector<Vec> u;
        self.a.generator_values(qs, t, out);
        self.a.flow_many(qs, t, u, true);
        self.b.generator_values(u, t, gb);
        for (std::size_t i = 0; i < qs.size(); ++i) out[i] += gb[i];
    };
    if (!a.inverted() && !b.inverted())
        v.flow_times = [self](const Vec& p, const std::vector<double>& ts, std::vector<Vec>& out) {
            composite_times(self.a, self.b, p, ts, out);
        };
    return v;
}

ComposedPath compose_isotopies(const CoIsotopy& a, const CoIsotopy& b) {
    require_same_model(a, b);
    require_cohamiltonian(a, "compose_isotopies");
    require_cohamiltonian(b, "compose_isotopies");
    return ComposedPath{a, b};
}

PathView path_of(const CoIsotopy& iso) {
    PathView v;
    v.model = iso.model();
    v.steps = iso.steps();
    v.flow = [iso](const Vec& p, double t) { return iso.flow(p, t); };
    v.inverse = [iso](const Vec& q, double t) { return iso.inverse_flow(q, t); };
    v.generator = [iso](const Vec& q, double t) { return iso.generator_value(q, t); };
    v.generator_many = [iso](const std::vector<Vec>& qs, double t, std::vector<double>& out) {
        iso.generator_values(qs, t, out);
    };
    if (!iso.inverted())
        v.flow_times = [iso](const Vec& p, const std::vector<double>& ts, std::vector<Vec>& out) {
            iso.flow_times(p, ts, out);
        };
    return v;
}


Vec path_velocity(const ModelSpec& m, const PointMap& flow, const Vec& p, double t, double dt) {
    return curve_velocity(m, [&](double s) { return flow(p, s); }, t, dt);
}

Vec path_velocity(const CoIsotopy& iso, const Vec& p, double t, double dt) {
    std::vector<Vec> c;
    iso.flow_times(p, stencil_times(t, dt), c);
    return stencil_velocity(iso.model(), c, dt);
}

Vec curve_velocity(const ModelSpec& m, const std::function<Vec(double)>& c, double t, double dt) {
    const Vec d1 = point_diff(m, c(t + dt), c(t - dt)), d2 = point_diff(m, c(t + 2 * dt), c(t - 2 * dt));
    Vec v = zero_vec();
    for (int j = 0; j < m.dim(); ++j) v[j] = (8.0 * d1[j] - d2[j]) / (12.0 * dt);
    return v;
}

double time_derivative(const std::function<double(double)>& g, double t, double dt) {
    return (8.0 * (g(t + dt) - g(t - dt)) - (g(t + 2 * dt) - g(t - 2 * dt))) / (12.0 * dt);
}

Eigen::MatrixXd map_jacobian(const ModelSpec& m, const std::function<Vec(const Vec&)>& f, const Vec& x, double h) {
    const int d = m.dim();
    Eigen::MatrixXd J(d, d);
    for (int j = 0; j < d; ++j) {
        Vec a = x, b = x;
        a[j] += h;
        b[j] -= h;
        const Vec diff = point_diff(m, f(a), f(b));
        for (int i = 0; i < d; ++i) J(i, j) = diff[i] / (2 * h);
    }
    return J;
}

namespace {
// q + h e_j and q - h e_j for every coordinate j, interleaved.
std::vector<Vec> central_stencil(const ModelSpec& m, const Vec& x, double h) {
    std::vector<Vec> pts;
    pts.reserve(2 * m.dim());
    for (int j = 0; j < m.dim(); ++j) {
        Vec a = x, b = x;
        a[j] += h;
        b[j] -= h;
        pts.push_back(a);
        pts.push_back(b);
    }
    return pts;
}
}  // namespace

Eigen::MatrixXd map_jacobian(const ModelSpec& m, const BatchMap& f, const Vec& x, double h) {
    const int d = m.dim();
    std::vector<Vec> img;
    f(central_stencil(m, x, h), img);
    Eigen::MatrixXd J(d, d);
    for (int j = 0; j < d; ++j) {
        const Vec diff = point_diff(m, img[2 * j], img[2 * j + 1]);
        for (int i = 0; i < d; ++i) J(i, j) = diff[i] / (2 * h);
    }
    return J;
}

namespace {
Vec fd_gradient_batch(const ModelSpec& m, const BatchScalar& g, const Vec& q, double h) {
    std::vector<double> v;
    g(central_stencil(m, q, h), v);
    Vec grad = zero_vec();
    for (int j = 0; j < m.dim(); ++j) grad[j] = (v[2 * j] - v[2 * j + 1]) / (2 * h);
    return grad;
}

// Velocities of t -> iso(x) (or its inverse) at every x, fourth-order stencil.
std::vector<Vec> batch_velocities(const CoIsotopy& iso, const std::vector<Vec>& xs, double t, double dt, bool inverse) {
    const ModelSpec& m = iso.model();
    const std::vector<double> ts = stencil_times(t, dt);
    std::vector<std::vector<Vec>> c(xs.size(), std::vector<Vec>(4));
    if (!inverse && !iso.inverted()) {
        iso.flow_times_many(xs, ts, c);
    } else {
        std::vector<Vec> pos;
        for (int k = 0; k < 4; ++k) {
            iso.flow_many(xs, ts[k], pos, inverse);
            for (std::size_t i = 0; i < xs.size(); ++i) c[i][k] = pos[i];
        }
    }
    std::vector<Vec> v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) v[i] = stencil_velocity(m, c[i], dt);
    return v;
}

// Velocities of the forward composite a_t o b_t at every x.
std::vector<Vec> composite_velocities(const CoIsotopy& a, const CoIsotopy& b, const std::vector<Vec>& xs, double t,
                                      double dt) {
    const ModelSpec& m = a.model();
    const std::vector<double> ts = stencil_times(t, dt);
    std::vector<std::vector<Vec>> bt;
    b.flow_times_many(xs, ts, bt);
    std::vector<std::vector<Vec>> c(xs.size(), std::vector<Vec>(4));
    std::vector<Vec> in(xs.size()), out;
    for (int k = 0; k < 4; ++k) {
        for (std::size_t i = 0; i < xs.size(); ++i) in[i] = bt[i][k];
        a.flow_many(in, ts[k], out);
        for (std::size_t i = 0; i < xs.size(); ++i) c[i][k] = out[i];
    }
    std::vector<Vec> v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) v[i] = stencil_velocity(m, c[i], dt);
    return v;
}

Vec fd_gradient(const ModelSpec& m, const std::function<double(const Vec&)>& g, const Vec& q, double h) {
    Vec grad = zero_vec();
    for (int j = 0; j < m.dim(); ++j) {
        Vec a = q, b = q;
        a[j] += h;
        b[j] -= h;
        grad[j] = (g(a) - g(b)) / (2 * h);
    }
    return grad;
}
}  // namespace

VerificationReport verify_generator_identity(const PathView& path, const SampleOptions& opt) {
    VerificationReport rep("generator-identity");
    const ModelSpec& m = path.model;
    const double dt = dt_for(path.steps);
    const auto samples = draw_samples(m, opt);
    const auto res = sweep(samples, [&](const Sample& s) {
        Vec q, vel;
        if (path.flow_times) {
            std::vector<double> ts = stencil_times(s.t, dt);
            ts.push_back(s.t);
            std::vector<Vec> c;
            path.flow_times(s.p, ts, c);
            q = c[4];
            vel = stencil_velocity(m, c, dt);
        } else {
            q = path.flow(s.p, s.t);
            vel = path_velocity(m, path.flow, s.p, s.t, dt);
        }
        const Vec I = pairing_I(m, vel);
        const Vec dg = path.generator_many
                           ? fd_gradient_batch(
                                 m, [&](const std::vector<Vec>& xs, std::vector<double>& out) { path.generator_many(xs, s.t, out); },
                                 q, opt.h)
                           : fd_gradient(m, [&](const Vec& x) { return path.generator(x, s.t); }, q, opt.h);
        double r = 0;
        for (int j = 0; j < m.dim(); ++j) r = std::max(r, std::abs(I[j] - dg[j]));
        return r;
    });
    rep.check_le("max_residual", vmax(res), opt.tol, "suite tolerance");
    rep.data()["samples"] = opt.samples;
    rep.data()["dt"] = dt;
    rep.data()["h"] = opt.h;
    return rep;
}

VerificationReport verify_fact1(const CoIsotopy& a, const SampleOptions& opt) {
    VerificationReport rep = verify_generator_identity(path_of(inverse_isotopy(a)), opt);
    rep.set_name("fact1-inverse-generator");
    // Round trip through the inverse path.
    const auto samples = draw_samples(a.model(), opt);
    const CoIsotopy inv = a.inverse_path();
    const auto rt = sweep(samples, [&](const Sample& s) {
        return flat_distance(a.model(), inv.flow(a.flow(s.p, s.t), s.t), s.p);
    });
    rep.check_le("round_trip", vmax(rt), 1e-8, "tol_flow");
    return rep;
}

VerificationReport verify_fact2(const CoIsotopy& a, const AffineMap& rho, const SampleOptions& opt) {
    require_cohamiltonian(a, "fact 2");
    const ModelSpec& m = a.model();
    const AffineMap rinv = rho.inverse();
    PathView v;
    v.model = m;
    v.steps = a.steps();
    v.flow = [&](const Vec& p, double t) { return reduce_point(m, rinv.apply(a.flow(rho.apply(p), t))); };
    v.generator = [&](const Vec& q, double t) { return a.generator_value(rho.apply(q), t); };
    if (!a.inverted())
        v.flow_times = [&](const Vec& p, const std::vector<double>& ts, std::vector<Vec>& out) {
            a.flow_times(rho.apply(p), ts, out);
            for (auto& x : out) x = reduce_point(m, rinv.apply(x));
        };
    VerificationReport rep = verify_generator_identity(v, opt);
    rep.set_name("fact2-conjugation");
    // The Fourier-level conjugate must integrate to the same maps.
    const CoIsotopy conj = a.conjugated(rho);
    const auto samples = draw_samples(m, opt);
    const auto fr = sweep(samples, [&](const Sample& s) { return flat_distance(m, conj.flow(s.p, s.t), v.flow(s.p, s.t)); });
    rep.check_le("conjugate_flow_consistency", vmax(fr), 1e-8, "tol_flow");
    const auto gr = sweep(samples, [&](const Sample& s) {
        return std::abs(conj.generator_value(s.p, s.t) - v.generator(s.p, s.t));
    });
    rep.check_le("conjugate_generator_consistency", vmax(gr), 1e-10, "coefficient rotation");
    return rep;
}

VerificationReport verify_fact3(const CoIsotopy& a, const CoIsotopy& b, const SampleOptions& opt) {
    VerificationReport rep = verify_generator_identity(compose_isotopies(a, b).view(), opt);
    rep.set_name("fact3-composition-generator");
    return rep;
}

VerificationReport verify_fact4(const CoIsotopy& a, const SampleOptions& opt) {
    require_cohamiltonian(a, "fact 4");
    VerificationReport rep("fact4-inverse-pullback");
    const ModelSpec& m = a.model();
    const int d = m.dim();
    const double dt = dt_for(a.steps());
    const auto samples = draw_samples(m, opt);
    const auto res = sweep(samples, [&](const Sample& s) {
        const Vec& r = s.p;
        const Vec q = a.flow(r, s.t);
        const Vec lhs = pairing_I(m, path_velocity(m, [&](const Vec& x, double u) { return a.inverse_flow(x, u); }, q, s.t, dt));
        const Eigen::MatrixXd J = map_jacobian(
            m, BatchMap([&](const std::vector<Vec>& xs, std::vector<Vec>& out) { a.flow_many(xs, s.t, out); }), r, opt.h);
        const Eigen::VectorXd rhs = -J.transpose() * to_eigen(pairing_I(m, a.field(q, s.t)), d);
        double e = 0;
        for (int j = 0; j < d; ++j) e = std::max(e, std::abs(lhs[j] - rhs(j)));
        return e;
    });
    rep.check_le("max_residual", vmax(res), opt.tol, "suite tolerance");
    return rep;
}

VerificationReport verify_fact5(const CoIsotopy& a, const CoIsotopy& b, const SampleOptions& opt) {
    const ComposedPath c = compose_isotopies(a, b);
    VerificationReport rep("fact5-composition-pullback");
    const ModelSpec& m = a.model();
    const int d = m.dim();
    const double dt = dt_for(std::max(a.steps(), b.steps()));
    const auto samples = draw_samples(m, opt);
    const PointMap cf = [&](const Vec& p, double t) { return c.flow(p, t); };
    const auto res = sweep(samples, [&](const Sample& s) {
        Vec q, vel;
        if (!a.inverted() && !b.inverted()) {
            std::vector<double> ts = stencil_times(s.t, dt);
            ts.push_back(s.t);
            std::vector<Vec> pos;
            composite_times(a, b, s.p, ts, pos);
            q = pos[4];
            vel = stencil_velocity(m, pos, dt);
        } else {
            q = c.flow(s.p, s.t);
            vel = path_velocity(m, cf, s.p, s.t, dt);
        }
        const Vec lhs = pairing_I(m, vel);
        const Vec u = a.inverse_flow(q, s.t);
        const Eigen::MatrixXd Jinv = map_jacobian(
            m, BatchMap([&](const std::vector<Vec>& xs, std::vector<Vec>& out) { a.flow_many(xs, s.t, out, true); }), q,
            opt.h);
        const Eigen::VectorXd rhs =
            to_eigen(pairing_I(m, a.field(q, s.t)), d) + Jinv.transpose() * to_eigen(pairing_I(m, b.field(u, s.t)), d);
        double e = 0;
        for (int j = 0; j < d; ++j) e = std::max(e, std::abs(lhs[j] - rhs(j)));
        return e;
    });
    rep.check_le("max_residual", vmax(res), opt.tol, "suite tolerance");
    return rep;
}

namespace {
// max over j != z of |d_j Zz| and |d_z Zz - rate| for a scalar field Zz near
// y, by central differences on a batch. The spatial step must stay well above
// the rounding floor of the inner time stencil.
double conformal_gap(const ModelSpec& m, const BatchScalar& Zz, const Vec& y, double rate, double h) {
    const Vec g = fd_gradient_batch(m, Zz, y, h);
    double e = std::abs(g[m.zi()] - rate);
    for (int j = 0; j < m.zi(); ++j) e = std::max(e, std::abs(g[j]));
    return e;
}
}  // namespace

VerificationReport verify_fact6(const CoIsotopy& a, const SampleOptions& opt) {
    VerificationReport rep("fact6-inverse-conformal");
    const ModelSpec& m = a.model();
    const double dt = dt_for(a.steps());
    const auto samples = draw_samples(m, opt);
    const auto res = sweep(samples, [&](const Sample& s) {
        const Vec x = a.flow(s.p, s.t);
        // vartheta = -d/ds f_s(phi_s^{-1} x) at s = t
        const double vartheta = -time_derivative(
            [&](double u) { return exponent_along([&](double v, double* f) { return a.inverse_flow(x, v, f); }, u); }, s.t, dt);
        auto Yz = [&](const std::vector<Vec>& rs, std::vector<double>& out) {
            std::vector<Vec> xs;
            a.flow_many(rs, s.t, xs);
            const auto v = batch_velocities(a, xs, s.t, dt, true);
            out.resize(rs.size());
            for (std::size_t i = 0; i < rs.size(); ++i) out[i] = v[i][m.zi()];
        };
        return conformal_gap(m, Yz, s.p, vartheta, opt.nested_h);
    });
    rep.check_le("max_residual", vmax(res), opt.tol, "suite tolerance");
    return rep;
}

VerificationReport verify_fact7(const CoIsotopy& a, const CoIsotopy& b, const SampleOptions& opt) {
    require_same_model(a, b);
    VerificationReport rep("fact7-composition-conformal");
    const ModelSpec& m = a.model();
    const double dt = dt_for(std::max(a.steps(), b.steps()));
    const auto samples = draw_samples(m, opt);
    auto total_exponent = [&](const Vec& x, double s) {
        double q = 0, f = 0;
        a.flow(b.flow(x, s, &q), s, &f);
        return f + q;
    };
    const PointMap comp = [&](const Vec& x, double s) { return a.flow(b.flow(x, s), s); };
    const bool forward = !a.inverted() && !b.inverted();
    const auto res = sweep(samples, [&](const Sample& s) {
        const Vec y = comp(s.p, s.t);
        double varrho;
        if (forward) {
            std::vector<Vec> pos;
            std::vector<double> f;
            composite_times(a, b, s.p, stencil_times(s.t, dt), pos, &f);
            varrho = (8.0 * (f[2] - f[1]) - (f[3] - f[0])) / (12.0 * dt);
        } else {
            varrho = time_derivative([&](double u) { return total_exponent(s.p, u); }, s.t, dt);
        }
        auto Zz = [&](const std::vector<Vec>& ys, std::vector<double>& out) {
            std::vector<Vec> u, xs;
            a.flow_many(ys, s.t, u, true);
            b.flow_many(u, s.t, xs, true);
            out.resize(ys.size());
            if (forward) {
                const auto v = composite_velocities(a, b, xs, s.t, dt);
                for (std::size_t i = 0; i < ys.size(); ++i) out[i] = v[i][m.zi()];
            } else {
                for (std::size_t i = 0; i < ys.size(); ++i) out[i] = path_velocity(m, comp, xs[i], s.t, dt)[m.zi()];
            }
        };
        return conformal_gap(m, Zz, y, varrho, opt.nested_h);
    });
    rep.check_le("max_residual", vmax(res), opt.tol, "suite tolerance");
    return rep;
}

VerificationReport verify_fact8(const CoIsotopy& a, const Vec& shift, const SampleOptions& opt) {
    VerificationReport rep("fact8-conjugation-conformal");
    const ModelSpec& m = a.model();
    const AffineMap rho = AffineMap::translation(m.dim(), shift), rinv = rho.inverse();
    const double dt = dt_for(a.steps());
    const auto samples = draw_samples(m, opt);
    const PointMap conj = [&](const Vec& x, double s) { return reduce_point(m, rinv.apply(a.flow(rho.apply(x), s))); };
    const auto res = sweep(samples, [&](const Sample& s) {
        const Vec y = conj(s.p, s.t);
        // d/dt f_t evaluated at rho(x), x = (rho^{-1} phi_t rho)^{-1}(y) = s.p
        const Vec rp = rho.apply(s.p);
        std::vector<Vec> pos;
        std::vector<double> f;
        a.flow_times(rp, stencil_times(s.t, dt), pos, &f);
        const double H = (8.0 * (f[2] - f[1]) - (f[3] - f[0])) / (12.0 * dt);
        auto Zz = [&](const std::vector<Vec>& ys, std::vector<double>& out) {
            // Translations leave velocities unchanged, so the conjugate's
            // velocity at x is a's velocity at rho(x).
            std::vector<Vec> r(ys.size()), u;
            for (std::size_t i = 0; i < ys.size(); ++i) r[i] = rho.apply(ys[i]);
            a.flow_many(r, s.t, u, true);
            const auto v = batch_velocities(a, u, s.t, dt, false);
            out.resize(ys.size());
            for (std::size_t i = 0; i < ys.size(); ++i) out[i] = v[i][m.zi()];
        };
        return conformal_gap(m, Zz, y, H, opt.nested_h);
    });
    rep.check_le("max_residual", vmax(res), opt.tol, "suite tolerance");
    const CoIsotopy c = a.conjugated(rho);
    const auto fr = sweep(samples, [&](const Sample& s) { return flat_distance(m, c.flow(s.p, s.t), conj(s.p, s.t)); });
    rep.check_le("conjugate_flow_consistency", vmax(fr), 1e-8, "tol_flow");
    return rep;
}

VerificationReport verify_fact9(const CoIsotopy& a, const CoIsotopy& b, const SampleOptions& opt) {
    require_same_model(a, b);
    VerificationReport rep("fact9-c-composition");
    const ModelSpec& m = a.model();
    const double dt = dt_for(std::max(a.steps(), b.steps()));
    const auto samples = draw_samples(m, opt);
    const PointMap comp = [&](const Vec& x, double s) { return a.flow(b.flow(x, s), s); };
    const auto res = sweep(samples, [&](const Sample& s) {
        const double lhs = path_velocity(m, comp, s.p, s.t, dt)[m.zi()];
        const Vec w = b.flow(s.p, s.t);
        double f = 0;
        a.flow(w, s.t, &f);
        const double rhs = a.C_function(s.t, w) + std::exp(f) * b.C_function(s.t, s.p);
        return std::abs(lhs - rhs);
    });
    rep.check_le("max_residual", vmax(res), opt.tol, "suite tolerance");
    return rep;
}

VerificationReport verify_fact10(const CoIsotopy& a, const SampleOptions& opt) {
    VerificationReport rep("fact10-c-inverse");
    const ModelSpec& m = a.model();
    const double dt = dt_for(a.steps());
    const auto samples = draw_samples(m, opt);
    std::vector<double> literal(samples.size(), 0.0);
    const auto res = sweep(samples, [&](const Sample& s) {
        const Vec& x = s.p;
        const double lhs = inverse_z_speed(a, x, s.t, dt);
        double finv = 0;
        const Vec u = a.inverse_flow(x, s.t, &finv);  // finv = f_t(phi_t^{-1} x)
        const double c_at = a.C_function(s.t, u);
        // The inverse path's own exponent at x is -f_t(phi_t^{-1} x).
        const double derived = -std::exp(-finv) * c_at;
        double fx = 0;
        a.flow(x, s.t, &fx);
        const double lit = -std::exp(fx) * c_at;
        literal[&s - samples.data()] = std::abs(lhs - lit);
        return std::abs(lhs - derived);
    });
    rep.check_le("max_residual", vmax(res), opt.tol, "suite tolerance");
    rep.data()["literal_form_residual"] = vmax(literal);
    return rep;
}

// ------------------------------------------------------------ Lie checks

FourierVectorField field_fourier(const CoIsotopy& iso, double t) {
    if (iso.inverted()) throw Error(ErrorCode::InvalidArgument, "inverted paths have no Fourier field");
    const ModelSpec& m = iso.model();
    const int n = m.n, d = m.dim();
    const FourierScalar F = iso.generator_fourier(t);
    const double w = iso.warp() ? iso.warp()->deriv(t) : 1.0;
    const double s = iso.warp() ? iso.warp()->value(t) : t;
    FourierVectorField X;
    X.components.assign(d, FourierScalar(d));
    for (int i = 0; i < n; ++i) {
        X.components[i] = F.partial(n + i);
        X.components[n + i] = F.partial(i).scaled(-1.0);
    }
    FourierScalar c(d);
    if (iso.reeb()) {
        for (const auto& term : iso.reeb()->terms) {
            Freq k{};
            k[m.zi()] = term.m;
            c.add_term(k, w * term.a(s), term.m == 0 ? 0.0 : w * term.b(s));
        }
    } else if (!m.circle()) {
        c.add_term(Freq{}, w * iso.generator().z_slope(s), 0.0);
    }
    X.components[m.zi()] = c;
    return X;
}

LieResiduals lie_residuals(const FourierVectorField& X) {
    const int d = static_cast<int>(X.components.size());
    const int n = (d - 1) / 2;
    OneFormField iw;
    iw.components.assign(d, FourierScalar(d));
    for (int i = 0; i < n; ++i) {
        iw.components[i] = X.components[n + i].scaled(-1.0);
        iw.components[n + i] = X.components[i];
    }
    LieResiduals r;
    r.lie_omega = iw.closedness_defect();
    for (int j = 0; j < d; ++j) {
        const double c = X.components[d - 1].partial(j).canonical().max_abs_coefficient();
        r.lie_eta = std::max(r.lie_eta, c);
        if (j < d - 1) r.conformal = std::max(r.conformal, c);
        else r.mu_max = c;
    }
    return r;
}

VerificationReport check_cosymplectic_field(const FourierVectorField& X, Kind declared) {
    VerificationReport rep("check-cosymplectic");
    const LieResiduals r = lie_residuals(X);
    rep.check_le("lie_omega", r.lie_omega, 0.0, "exact on coefficients");
    if (declared == Kind::AlmostCoHamiltonian) rep.check_le("lie_eta_minus_mu_eta", r.conformal, 0.0, "exact on coefficients");
    else rep.check_le("lie_eta", r.lie_eta, 0.0, "exact on coefficients");
    rep.data()["mu_max_coefficient"] = r.mu_max;
    return rep;
}

VerificationReport check_cosymplectic(const CoIsotopy& iso, int samples) {
    VerificationReport rep("check-cosymplectic");
    LieResiduals worst;
    for (int i = 0; i <= samples; ++i) {
        const double t = samples ? double(i) / samples : 0.0;
        const LieResiduals r = lie_residuals(field_fourier(iso, t));
        worst.lie_omega = std::max(worst.lie_omega, r.lie_omega);
        worst.lie_eta = std::max(worst.lie_eta, r.lie_eta);
        worst.conformal = std::max(worst.conformal, r.conformal);
        worst.mu_max = std::max(worst.mu_max, r.mu_max);
    }
    rep.check_le("lie_omega", worst.lie_omega, 0.0, "exact on coefficients");
    if (iso.kind() == Kind::AlmostCoHamiltonian)
        rep.check_le("lie_eta_minus_mu_eta", worst.conformal, 0.0, "exact on coefficients");
    else
        rep.check_le("lie_eta", worst.lie_eta, 0.0, "exact on coefficients");
    rep.data()["kind"] = kind_name(iso.kind());
    rep.data()["mu_max_coefficient"] = worst.mu_max;
    rep.data()["time_samples"] = samples + 1;
    return rep;
}

// ---------------------------------------------------------------- energy

std::vector<EnergySample> orbit_energy_profile(const CoIsotopy& iso, const Vec& p, const std::vector<double>& times) {
    require_cohamiltonian(iso, "orbit_energy_profile");
    if (!iso.generator().autonomous() || iso.warp() || iso.inverted())
        throw Error(ErrorCode::NonAutonomous, "energy profile needs an autonomous generator");
    std::vector<Vec> pts;
    iso.flow_times(p, times, pts);
    const double G0 = iso.generator_value(p, 0.0);
    std::vector<EnergySample> out;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        // int_0^t C^s(p)^2 ds, Simpson at the flow resolution
        int m = std::max(2, 2 * static_cast<int>(std::ceil(t * iso.steps() / 2.0)));
        std::vector<double> f(m + 1);
        for (int k = 0; k <= m; ++k) {
            const double c = iso.C_function(t * k / m, p);
            f[k] = c * c;
        }
        const double integral = t > 0 ? simpson(f, 0.0, t) : 0.0;
        out.push_back({t, iso.generator_value(pts[i], t), G0 + integral});
    }
    return out;
}

// --------------------------------------------------------------- winding

std::vector<std::vector<double>> winding_values(const CoIsotopy& iso, const std::vector<OneFormField>& alphas,
                                                const std::vector<Vec>& points) {
    for (const auto& a : alphas)
        if (!a.is_closed()) throw Error(ErrorCode::NotClosed, "winding needs a closed form");
    const TimeQuadrature q = iso.quadrature();
    std::vector<std::vector<double>> out(points.size(), std::vector<double>(alphas.size(), 0.0));
    const ModelSpec& m = iso.model();
    parallel_blocks(points.size(), kFlowBlock, [&](std::size_t lo, std::size_t hi) {
        const std::vector<Vec> sub(points.begin() + lo, points.begin() + hi);
        std::vector<std::vector<Vec>> trajs;
        iso.flow_times_many(sub, q.nodes, trajs);
        for (std::size_t i = lo; i < hi; ++i) {
            const auto& traj = trajs[i - lo];
            for (std::size_t k = 0; k < q.nodes.size(); ++k) {
                const Vec X = iso.field(traj[k], q.nodes[k]);
                for (std::size_t a = 0; a < alphas.size(); ++a) {
                    const Vec al = alphas[a].evaluate(traj[k]);
                    double s = 0;
                    for (int j = 0; j < m.dim(); ++j) s += al[j] * X[j];
                    out[i][a] += q.weights[k] * s;
                }
            }
        }
    });
    return out;
}

double winding(const CoIsotopy& iso, const OneFormField& alpha, const Vec& p) {
    return winding_values(iso, {alpha}, {p})[0][0];
}

std::vector<Vec> grid_points(const ModelSpec& m, int res, bool skip_z) {
    const int d = m.dim();
    const int active = skip_z ? d - 1 : d;
    std::size_t total = 1;
    for (int j = 0; j < active; ++j) total *= res;
    std::vector<Vec> pts(total, zero_vec());
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t r = idx;
        for (int j = active - 1; j >= 0; --j) {
            pts[idx][j] = kTwoPi * static_cast<double>(r % res) / res;
            r /= res;
        }
    }
    return pts;
}

FluxResult flux_identity_residual(const CoIsotopy& iso, const OneFormField& alpha, int res) {
    require_cohamiltonian(iso, "flux_identity_residual");
    const ModelSpec& m = iso.model();
    if (!m.circle()) throw Error(ErrorCode::UnboundedDomain, "flux integrals need circle topology");
    if (!alpha.is_closed()) throw Error(ErrorCode::NotClosed, "flux identity needs a closed form");
    bool skip_z = iso.z_equivariant();
    for (const auto& c : alpha.components) skip_z = skip_z && c.independent_of(m.zi());
    const auto pts = grid_points(m, res, skip_z);
    OneFormField eta = OneFormField::zero(m.dim());
    eta.components[m.zi()] = FourierScalar::constant(m.dim(), 1.0);
    const auto vals = winding_values(iso, {eta, alpha}, pts);
    FluxResult r;
    r.resolution = res;
    r.z_collapsed = skip_z;
    // alpha ^ omega^n keeps only the dz coefficient of alpha.
    for (std::size_t i = 0; i < pts.size(); ++i) {
        r.lhs += vals[i][0] * alpha.components[m.zi()].value(pts[i]);
        r.rhs += vals[i][1];
    }
    r.lhs /= static_cast<double>(pts.size());
    r.rhs /= static_cast<double>(pts.size());
    r.residual = std::abs(r.lhs - r.rhs);
    return r;
}

OrderResult rk4_order(const CoIsotopy& iso, const std::vector<Vec>& points, int base_steps) {
    const CoIsotopy a = iso.with_steps(base_steps), b = iso.with_steps(2 * base_steps), c = iso.with_steps(4 * base_steps);
    OrderResult r;
    for (const Vec& p : points) {
        const Vec pa = a.flow(p, 1.0), pb = b.flow(p, 1.0), pc = c.flow(p, 1.0);
        r.e1 = std::max(r.e1, flat_distance(iso.model(), pa, pb));
        r.e2 = std::max(r.e2, flat_distance(iso.model(), pb, pc));
    }
    r.exact = r.e2 < 1e-13;
    r.order = r.exact ? 0.0 : std::log2(r.e1 / r.e2);
    return r;
}

}  // namespace cokinetic
