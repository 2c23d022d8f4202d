#include "cokinetic/lift.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "cokinetic/random.hpp"

namespace cokinetic {

LiftedIsotopy::LiftedIsotopy(CoIsotopy base) : base_(std::move(base)) {
    if (!base_.model().circle()) throw Error(ErrorCode::UnsupportedModel, "the lift needs circle topology");
}

LiftedIsotopy lift_isotopy(const CoIsotopy& iso) { return LiftedIsotopy(iso); }

double LiftedIsotopy::rotation_integral(const Vec& x, double t) const {
    if (t == 0.0) return 0.0;
    const int m = std::max(2, 2 * static_cast<int>(std::ceil(std::abs(t) * base_.steps() / 2.0)));
    std::vector<double> nodes(m + 1), f(m + 1);
    for (int k = 0; k <= m; ++k) nodes[k] = t * k / m;
    if (base_.C_spatially_constant()) {
        for (int k = 0; k <= m; ++k) f[k] = base_.C_function(nodes[k], x);
    } else {
        std::vector<Vec> traj;
        base_.flow_times(x, nodes, traj);
        for (int k = 0; k <= m; ++k) f[k] = base_.C_function(nodes[k], traj[k]);
    }
    return simpson(f, 0.0, t);
}

LiftedPoint LiftedIsotopy::flow(const LiftedPoint& lp, double t) const {
    return {base_.flow(lp.base, t), reduce_angle(lp.theta - rotation_integral(lp.base, t))};
}

void LiftedIsotopy::flow_times(const LiftedPoint& lp, const std::vector<double>& times,
                               std::vector<LiftedPoint>& out) const {
    std::vector<Vec> pts;
    base_.flow_times(lp.base, times, pts);
    out.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        out[i] = {pts[i], reduce_angle(lp.theta - rotation_integral(lp.base, times[i]))};
}

void LiftedIsotopy::flow_times_many(const std::vector<LiftedPoint>& lps, const std::vector<double>& times,
                                    std::vector<std::vector<LiftedPoint>>& out) const {
    std::vector<Vec> bases(lps.size());
    for (std::size_t i = 0; i < lps.size(); ++i) bases[i] = lps[i].base;
    std::vector<std::vector<Vec>> pts;
    base_.flow_times_many(bases, times, pts);
    out.assign(lps.size(), std::vector<LiftedPoint>(times.size()));
    // A spatially constant C gives one rotation per time for every point.
    std::vector<double> shared;
    if (base_.C_spatially_constant())
        for (double t : times) shared.push_back(rotation_integral(zero_vec(), t));
    for (std::size_t i = 0; i < lps.size(); ++i)
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double rot = shared.empty() ? rotation_integral(lps[i].base, times[k]) : shared[k];
            out[i][k] = {pts[i][k], reduce_angle(lps[i].theta - rot)};
        }
}

LiftedHamiltonianValue lifted_hamiltonian(const CoIsotopy& iso, double t, const LiftedPoint& lp) {
    if (iso.kind() != Kind::CoHamiltonian) throw Error(ErrorCode::KindMismatch, "lifted Hamiltonian needs co-Hamiltonian kind");
    LiftedHamiltonianValue v;
    v.theta_coefficient = iso.field(lp.base, t)[iso.model().zi()];
    v.value = iso.generator_value(lp.base, t) + v.theta_coefficient * lp.theta;
    return v;
}

namespace {

// Coordinates (x, y, z, theta) packed into a dim+1 vector.
Eigen::VectorXd lifted_diff(const ModelSpec& m, const LiftedPoint& a, const LiftedPoint& b) {
    const Vec d = point_diff(m, a.base, b.base);
    Eigen::VectorXd v(m.dim() + 1);
    for (int j = 0; j < m.dim(); ++j) v(j) = d[j];
    v(m.dim()) = wrap_diff(a.theta - b.theta);
    return v;
}

Eigen::MatrixXd lifted_form(const ModelSpec& m) {
    const int D = m.dim() + 1;
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(D, D);
    for (int i = 0; i < m.n; ++i) {
        W(i, m.n + i) = 1.0;
        W(m.n + i, i) = -1.0;
    }
    W(m.zi(), D - 1) = 1.0;
    W(D - 1, m.zi()) = -1.0;
    return W;
}

}  // namespace

VerificationReport check_symplectic(const LiftedIsotopy& li, int samples, const std::vector<double>& times,
                                    std::uint64_t seed, double tol) {
    VerificationReport rep("check-symplectic");
    const ModelSpec& m = li.base().model();
    const int D = m.dim() + 1;
    const double h = 1e-5;
    const Eigen::MatrixXd W = lifted_form(m);
    Rng rng(seed);
    std::uniform_real_distribution<double> ut(0.0, kTwoPi);
    std::vector<LiftedPoint> pts(samples);
    for (auto& p : pts) {
        p.base = random_point(m, rng);
        p.theta = ut(rng);
    }
    // residual[sample][time]
    std::vector<std::vector<double>> res(samples, std::vector<double>(times.size(), 0.0));
    parallel_for(pts.size(), [&](std::size_t s) {
        std::vector<LiftedPoint> start;
        for (int j = 0; j < D; ++j) {
            LiftedPoint a = pts[s], b = pts[s];
            if (j < m.dim()) {
                a.base[j] += h;
                b.base[j] -= h;
            } else {
                a.theta += h;
                b.theta -= h;
            }
            start.push_back(a);
            start.push_back(b);
        }
        std::vector<std::vector<LiftedPoint>> moved;
        li.flow_times_many(start, times, moved);
        std::vector<std::vector<LiftedPoint>> plus(D), minus(D);
        for (int j = 0; j < D; ++j) {
            plus[j] = std::move(moved[2 * j]);
            minus[j] = std::move(moved[2 * j + 1]);
        }
        for (std::size_t k = 0; k < times.size(); ++k) {
            Eigen::MatrixXd J(D, D);
            for (int j = 0; j < D; ++j) J.col(j) = lifted_diff(m, plus[j][k], minus[j][k]) / (2 * h);
            res[s][k] = (J.transpose() * W * J - W).cwiseAbs().maxCoeff();
        }
    });
    double worst = 0;
    Json per_time = Json::array();
    for (std::size_t k = 0; k < times.size(); ++k) {
        double w = 0;
        for (int s = 0; s < samples; ++s) w = std::max(w, res[s][k]);
        worst = std::max(worst, w);
        per_time.push_back({{"t", times[k]}, {"max_residual", w}});
    }
    rep.check_le("max_symplectic_residual", worst, tol, "suite tolerance");
    rep.data()["per_time_breakdown"] = per_time;
    rep.data()["samples"] = samples;
    return rep;
}

VerificationReport section_consistency(const CoIsotopy& iso, double t, int samples, int sections, std::uint64_t seed) {
    VerificationReport rep("section-consistency");
    const ModelSpec& m = iso.model();
    const double h = 1e-5;
    Rng rng(seed);
    double worst = 0;
    for (int s = 0; s < samples; ++s) {
        const Vec x = random_point(m, rng);
        auto grad = [&](double l) {
            Vec g = zero_vec();
            for (int j = 0; j < m.dim(); ++j) {
                LiftedPoint a{x, l}, b{x, l};
                a.base[j] += h;
                b.base[j] -= h;
                g[j] = (lifted_hamiltonian(iso, t, a).value - lifted_hamiltonian(iso, t, b).value) / (2 * h);
            }
            return g;
        };
        const Vec g0 = grad(0.0);
        for (int l = 1; l < sections; ++l) {
            const Vec gl = grad(kTwoPi * l / sections);
            for (int j = 0; j < m.dim(); ++j) worst = std::max(worst, std::abs(gl[j] - g0[j]));
        }
    }
    // On circle topology the restrictions coincide as functions.
    rep.check_le("max_differential_gap", worst, m.circle() ? 0.0 : 1e-9, m.circle() ? "exact" : "finite differences");
    return rep;
}

VerificationReport fixed_point_correspondence(const LiftedIsotopy& li, const Vec& z, double tol) {
    const ModelSpec& m = li.base().model();
    const double base_disp = flat_distance(m, li.base().flow(z, 1.0), z);
    if (base_disp > 10 * tol) throw Error(ErrorCode::NotAFixedPoint, "point is not fixed by the time-1 map");
    VerificationReport rep("fixed-point-correspondence");
    double worst = base_disp;
    for (int k = 0; k < 16; ++k) {
        const LiftedPoint lp{z, kTwoPi * k / 16};
        const LiftedPoint q = li.flow(lp, 1.0);
        worst = std::max(worst, std::hypot(flat_distance(m, q.base, z), wrap_diff(q.theta - lp.theta)));
    }
    rep.check_le("max_displacement", worst, tol, "caller tolerance");
    rep.data()["rotation_integral"] = li.rotation_integral(z, 1.0);
    return rep;
}

double max_theta_shift(const LiftedIsotopy& li, int samples, const std::vector<double>& times, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> ut(0.0, kTwoPi);
    double worst = 0;
    for (int s = 0; s < samples; ++s) {
        LiftedPoint lp{random_point(li.base().model(), rng), ut(rng)};
        std::vector<LiftedPoint> out;
        li.flow_times(lp, times, out);
        for (const auto& q : out) worst = std::max(worst, std::abs(wrap_diff(q.theta - lp.theta)));
    }
    return worst;
}

}  // namespace cokinetic
