#include "cokinetic/reparam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cokinetic/algebra.hpp"

namespace cokinetic {

namespace {

constexpr double kInflate = 1.25;

LengthReport kind_distance(const CoIsotopy& a, const CoIsotopy& b, Flavor f, int osc_res) {
    return a.kind() == Kind::CoHamiltonian ? distance_CH(a, b, f, osc_res) : distance_AH(a, b, f, osc_res);
}

void require_flattenable(const CoIsotopy& iso) {
    if (iso.kind() == Kind::Cosymplectic)
        throw Error(ErrorCode::KindMismatch, "flattening needs co-Hamiltonian or almost co-Hamiltonian kind");
}

// sup over z of |eta(X_t)| and |d/dz eta(X_t)| for the field of the path.
void reeb_field_sup(const CoIsotopy& iso, double t, double& c_sup, double& mu_sup) {
    const double s = iso.warp() ? iso.warp()->value(t) : t;
    const double w = iso.warp() ? iso.warp()->deriv(t) : 1.0;
    c_sup = mu_sup = 0;
    constexpr int kZ = 64;
    for (int i = 0; i < kZ; ++i) {
        double mu = 0;
        const double c = iso.base_c(kTwoPi * i / kZ, s, &mu);
        c_sup = std::max(c_sup, std::abs(w * c));
        mu_sup = std::max(mu_sup, std::abs(w * mu));
    }
}

double time1_mismatch(const CoIsotopy& a, const CoIsotopy& b, int res) {
    const std::vector<Vec> pts = grid_points(a.model(), res, a.z_equivariant() && b.z_equivariant());
    double worst = 0;
    for (const auto& p : pts) worst = std::max(worst, flat_distance(a.model(), a.flow(p, 1.0), b.flow(p, 1.0)));
    return worst;
}

}  // namespace

CoIsotopy reparametrize(const CoIsotopy& iso, const ReparamCurve& zeta) {
    if (!zeta.maps_into_unit()) throw Error(ErrorCode::RangeViolation, "curve leaves [0, 1]");
    if (zeta.kind() == ReparamCurve::Kind::Identity) return iso;
    return iso.warped(zeta);
}

bool is_boundary_flat(const CoIsotopy& iso, double delta, int osc_res) {
    if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::InvalidArgument, "delta must lie in (0, 1)");
    constexpr int kSamples = 64;
    for (int side = 0; side < 2; ++side)
        for (int i = 0; i < kSamples; ++i) {
            const double u = delta * i / kSamples;
            const double t = side == 0 ? u : 1.0 - u;
            const FourierScalar F = iso.generator_fourier(t).canonical();
            if (!F.empty() && osc(F, osc_res).hi > 1e-12) return false;
            double c_sup = 0, mu_sup = 0;
            reeb_field_sup(iso, t, c_sup, mu_sup);
            if (iso.kind() == Kind::AlmostCoHamiltonian && mu_sup > 1e-12) return false;
            const double w = iso.warp() ? iso.warp()->deriv(t) : 1.0;
            if (std::abs(w * iso.generator().z_slope(t)) > 1e-12) return false;
        }
    return true;
}

Json LipschitzData::to_json() const {
    return {{"k0", k0}, {"c0", c0}, {"maxosc", maxosc}, {"maxC", maxC}, {"C_of_F_eta", C_of_F_eta},
            {"estimator", estimator}};
}

LipschitzData lipschitz_constants(const CoIsotopy& iso, int pairs, int osc_res) {
    LipschitzData d;
    std::vector<double> t(pairs + 1);
    for (int i = 0; i <= pairs; ++i) t[i] = double(i) / pairs;
    const bool frozen = iso.generator().autonomous() && !iso.warp();
    std::vector<FourierScalar> F(pairs + 1);
    for (int i = 0; i <= pairs; ++i) F[i] = iso.generator_fourier(t[i]).canonical();
    if (frozen) {
        d.maxosc = F[0].empty() ? 0.0 : osc(F[0], osc_res).hi;
    } else {
        std::vector<double> o(pairs + 1, 0.0), k(pairs, 0.0);
        parallel_for(pairs + 1, [&](std::size_t i) {
            o[i] = F[i].empty() ? 0.0 : osc(F[i], osc_res).hi;
            if (i < static_cast<std::size_t>(pairs)) {
                const FourierScalar D = (F[i + 1] - F[i]).canonical();
                k[i] = D.empty() ? 0.0 : sup_abs(D, osc_res) * pairs;
            }
        });
        d.maxosc = *std::max_element(o.begin(), o.end());
        d.k0 = kInflate * *std::max_element(k.begin(), k.end());
    }
    std::vector<double> C(pairs + 1);
    if (iso.kind() == Kind::AlmostCoHamiltonian) {
        C = c_mean_profile(iso, t);
        d.estimator = "difference quotients over uniform time pairs, x1.25; Reeb part via the space average of C^t";
    } else {
        for (int i = 0; i <= pairs; ++i) C[i] = iso.C_function(t[i], zero_vec());
        d.estimator = "difference quotients over uniform time pairs, x1.25";
    }
    for (int i = 0; i <= pairs; ++i) d.maxC = std::max(d.maxC, std::abs(C[i]));
    double c0 = 0;
    for (int i = 0; i < pairs; ++i) c0 = std::max(c0, std::abs(C[i + 1] - C[i]) * pairs);
    d.c0 = kInflate * c0;
    d.C_of_F_eta = 4.0 * std::max(std::max(d.c0, d.maxC), 2.0 * std::max(d.k0, d.maxosc));
    return d;
}

double flow_lipschitz(const CoIsotopy& iso, int resolution, int time_nodes) {
    const ModelSpec& m = iso.model();
    const std::vector<Vec> pts = grid_points(m, resolution, iso.z_equivariant());
    std::vector<double> times(time_nodes);
    for (int k = 0; k < time_nodes; ++k) times[k] = double(k) / (time_nodes - 1);
    std::vector<double> speed(pts.size(), 0.0);
    const CoIsotopy inv = iso.inverse_path();
    parallel_blocks(pts.size(), kFlowBlock, [&](std::size_t lo, std::size_t hi) {
        const std::vector<Vec> sub(pts.begin() + lo, pts.begin() + hi);
        std::vector<std::vector<Vec>> fwd, bwd;
        iso.flow_times_many(sub, times, fwd);
        inv.flow_times_many(sub, times, bwd);
        for (std::size_t i = lo; i < hi; ++i) {
            double s = 0;
            for (int k = 0; k + 1 < time_nodes; ++k) {
                const double dt = times[k + 1] - times[k];
                s = std::max(s, flat_distance(m, fwd[i - lo][k + 1], fwd[i - lo][k]) / dt);
                s = std::max(s, flat_distance(m, bwd[i - lo][k + 1], bwd[i - lo][k]) / dt);
            }
            speed[i] = s;
        }
    });
    return kInflate * (speed.empty() ? 0.0 : *std::max_element(speed.begin(), speed.end()));
}

FlattenResult boundary_flatten(const CoIsotopy& iso, double epsilon, const ReparamOptions& opt) {
    if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidEpsilon, "epsilon must be positive");
    require_flattenable(iso);
    const LipschitzData lip = opt.lip ? *opt.lip : lipschitz_constants(iso, opt.lip_pairs, opt.osc_res);
    const double l0 = opt.l0 ? *opt.l0 : flow_lipschitz(iso, opt.c0.resolution, opt.c0.time_nodes);
    double target = epsilon;
    if (lip.C_of_F_eta > 0) target = std::min(target, epsilon / lip.C_of_F_eta);
    if (l0 > 0) target = std::min(target, epsilon / l0);
    double eps_prime = std::min(target, 0.99);
    constexpr int kRounds = 8;
    for (int round = 1; round <= kRounds; ++round, eps_prime *= 0.5) {
        const ReparamCurve chi = flatten_curve(eps_prime);
        const double ham = ham_norm_diff(chi, ReparamCurve::identity());
        if (ham > target) continue;
        FlattenResult r{reparametrize(iso, chi), VerificationReport("boundary-flatten"), eps_prime, chi.delta(), round};
        VerificationReport& rep = r.report;
        rep.check_le("endpoint_mismatch", time1_mismatch(iso, r.iso, opt.c0.resolution), 1e-8, "construction");
        rep.flag("boundary_flat", is_boundary_flat(r.iso, r.delta, opt.osc_res));
        rep.check_lt("D_L1inf", kind_distance(iso, r.iso, Flavor::L1inf, opt.osc_res).value, epsilon, "epsilon");
        const PathDistance pd = path_distance(iso, r.iso, opt.c0);
        rep.check_lt("dbar", pd.value, epsilon, "epsilon");
        rep.data()["epsilon"] = epsilon;
        rep.data()["epsilon_prime"] = eps_prime;
        rep.data()["delta"] = r.delta;
        rep.data()["ham_distance_to_identity"] = ham;
        rep.data()["ham_target"] = target;
        rep.data()["lipschitz"] = lip.to_json();
        rep.data()["l0"] = l0;
        rep.data()["dbar_estimate"] = pd.to_json();
        rep.data()["rounds"] = round;
        if (rep.pass()) return r;
    }
    throw Error(ErrorCode::ConstructionFailed, "flattening did not certify within 8 rounds");
}

FlattenResult normalized_flatten(const CoIsotopy& iso, double epsilon, const ReparamOptions& opt) {
    require_flattenable(iso);
    for (const auto& t : iso.generator().terms) {
        bool zero = true;
        for (int j = 0; j < iso.generator().dim; ++j) zero = zero && t.k[j] == 0;
        if (zero && !t.a.is_zero()) throw Error(ErrorCode::NotNormalized, "generator has a nonzero space average");
    }
    const ReparamCurve chi = flatten_curve(epsilon);
    FlattenResult r{reparametrize(iso, chi), VerificationReport("normalized-flatten"), epsilon, chi.delta(), 1};
    VerificationReport& rep = r.report;
    const LipschitzData lip = opt.lip ? *opt.lip : lipschitz_constants(iso, opt.lip_pairs, opt.osc_res);
    const double C = 4.0 * (lip.k0 + lip.c0);
    const double l0 = opt.l0 ? *opt.l0 : flow_lipschitz(iso, opt.c0.resolution, opt.c0.time_nodes);

    rep.flag("item1_boundary_flat", is_boundary_flat(r.iso, r.delta, opt.osc_res));
    const TimeQuadrature q = r.iso.quadrature();
    double mean = 0;
    for (double t : q.nodes) mean = std::max(mean, std::abs(r.iso.generator_fourier(t).mean()));
    rep.check_le("item2_max_abs_mean", mean, 1e-12, "exact zero-mean");
    rep.check_le("item3_endpoint_mismatch", time1_mismatch(iso, r.iso, opt.c0.resolution), 1e-8, "construction");
    const CoIsotopy id = CoIsotopy::identity(iso.model(), iso.steps());
    const double dFH = kind_distance(iso, r.iso, Flavor::Linf, opt.osc_res).value;
    const double dFI = kind_distance(iso, id, Flavor::Linf, opt.osc_res).value;
    const double dHI = kind_distance(r.iso, id, Flavor::Linf, opt.osc_res).value;
    // Non-strict: the bounds collapse to 0 < 0 when F = 0.
    rep.check_le("item4_D_F_H", dFH, 2 * dFI + C * epsilon + 1e-12, "2 D(F, Id) + C eps");
    rep.check_le("item5_D_H_Id", dHI, 3 * dFI + C * epsilon + 1e-12, "3 D(F, Id) + C eps");
    const PathDistance pd = path_distance(iso, r.iso, opt.c0);
    const double chi_c0 = c0_norm_diff(chi, ReparamCurve::identity());
    rep.check_le("item6_dbar", pd.value, l0 * chi_c0 + 1e-12, "l0 |chi - id|_C0");
    rep.data()["C"] = C;
    rep.data()["K0"] = lip.k0;
    rep.data()["L0"] = lip.c0;
    rep.data()["l0"] = l0;
    rep.data()["chi_c0_distance"] = chi_c0;
    rep.data()["delta"] = r.delta;
    rep.data()["D_F_Id"] = dFI;
    rep.data()["dbar_estimate"] = pd.to_json();
    return r;
}

VerificationReport verify_rl2(const CoIsotopy& iso, const ReparamCurve& xi1, const ReparamCurve& xi2,
                              const ReparamOptions& opt) {
    for (const ReparamCurve* xi : {&xi1, &xi2})
        if (!xi->monotone()) throw Error(ErrorCode::InvalidArgument, "reparameterization curves must be monotone");
    const CoIsotopy a = reparametrize(iso, xi1), b = reparametrize(iso, xi2);
    const LipschitzData lip = opt.lip ? *opt.lip : lipschitz_constants(iso, opt.lip_pairs, opt.osc_res);
    const double ham = ham_norm_diff(xi1, xi2);
    const double lhs = kind_distance(a, b, Flavor::L1inf, opt.osc_res).value;
    const double rhs = lip.C_of_F_eta * ham;
    VerificationReport rep("rl2");
    rep.check_le("distance", lhs, rhs, "C(F, eta) |xi1 - xi2|_ham");
    rep.data()["lhs"] = lhs;
    rep.data()["rhs"] = rhs;
    rep.data()["ham_norm_diff"] = ham;
    rep.data()["lipschitz"] = lip.to_json();
    return rep;
}

VerificationReport verify_rl3(const std::vector<CoIsotopy>& seq, const ReparamCurve& xi1, const ReparamCurve& xi2,
                              double epsilon, const ReparamOptions& opt, int window) {
    if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidEpsilon, "epsilon must be positive");
    if (seq.size() < 2) throw Error(ErrorCode::NotCauchy, "a sequence needs at least two isotopies");
    const std::size_t N = seq.size();
    const SequenceDiagnostics diag = cauchy_report(seq, Flavor::L1inf, opt.c0, false);
    std::size_t j0 = N;
    for (std::size_t j = 0; j + 1 < N && j0 == N; ++j) {
        double tail = 0;
        for (std::size_t i = j; i < N; ++i) tail = std::max(tail, diag.pairwise_D[i][j]);
        if (tail < epsilon / 3) j0 = j;
    }
    if (j0 == N) throw Error(ErrorCode::NotCauchy, "no index has a tail within epsilon/3");

    VerificationReport rep("rl3");
    const CoIsotopy& Fj = seq[j0];
    const LipschitzData lip = lipschitz_constants(Fj, opt.lip_pairs, opt.osc_res);
    const double inf = std::numeric_limits<double>::infinity();
    const double delta = lip.C_of_F_eta > 0 ? epsilon / (3 * lip.C_of_F_eta) : inf;
    ReparamCurve x2 = xi2;
    const double ham = ham_norm_diff(xi1, xi2);
    double blend = 1.0;
    if (ham >= delta) {
        // Pull xi2 toward xi1 so the lemma's hypothesis holds.
        blend = 0.9 * delta / ham;
        x2 = ReparamCurve::blend(xi1, xi2, blend);
    }
    const std::size_t last = std::min(N - 1, j0 + static_cast<std::size_t>(window));
    double item1 = 0;
    for (std::size_t i = j0; i <= last; ++i)
        item1 = std::max(item1, kind_distance(reparametrize(seq[i], xi1), reparametrize(seq[i], x2), Flavor::L1inf,
                                              opt.osc_res).value);
    rep.check_lt("item1_max_distance", item1, epsilon, "epsilon");

    // Item 2 with translations lambda, mu at distance 0.9 tau; the generators
    // become F o lambda and F o mu.
    const ModelSpec& m = Fj.model();
    double lip_space = 0;
    for (int k = 0; k <= 64; ++k) lip_space = std::max(lip_space, Fj.generator_fourier(k / 64.0).lipschitz_bound());
    const double tau = lip_space > 0 ? epsilon / (6 * kInflate * lip_space) : inf;
    const double sep = std::isfinite(tau) ? 0.9 * tau : 0.5;
    Vec v = zero_vec(), w = zero_vec();
    v[0] = 0.37;
    w = v;
    for (int j = 0; j < 2 * m.n; ++j) w[j] += sep / std::sqrt(2.0 * m.n);
    const AffineMap lam = AffineMap::translation(m.dim(), v), mu = AffineMap::translation(m.dim(), w);
    double item2 = 0;
    for (std::size_t i = j0; i <= last; ++i)
        item2 = std::max(item2, kind_distance(seq[i].conjugated(lam), seq[i].conjugated(mu), Flavor::L1inf,
                                              opt.osc_res).value);
    rep.check_lt("item2_max_distance", item2, epsilon, "epsilon");

    rep.data()["j0"] = j0;
    rep.data()["window_end"] = last;
    rep.data()["delta"] = std::isfinite(delta) ? Json(delta) : Json("inf");
    rep.data()["tau"] = std::isfinite(tau) ? Json(tau) : Json("inf");
    rep.data()["translation_separation"] = sep;
    rep.data()["ham_norm_diff"] = ham;
    rep.data()["xi2_blend"] = blend;
    rep.data()["C_of_F_eta"] = lip.C_of_F_eta;
    rep.data()["cauchy_margin"] = diag.cauchy_margin;
    return rep;
}

}  // namespace cokinetic
