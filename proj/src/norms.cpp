#include "cokinetic/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cokinetic {

const char* flavor_name(Flavor f) { return f == Flavor::L1inf ? "L1inf" : "Linf"; }

Json LengthReport::to_json(bool with_breakdown) const {
    Json j;
    j["value"] = value;
    j["flavor"] = flavor_name(flavor);
    j["value_lo"] = value_lo;
    j["value_hi"] = value_hi;
    j["quadrature"] = quadrature;
    j["reeb_term"] = reeb_term;
    j["nodes"] = breakdown.size();
    if (with_breakdown) {
        Json b = Json::array();
        for (const auto& n : breakdown) b.push_back({n.t, n.osc, n.osc_lo, n.osc_hi, n.reeb});
        j["breakdown_columns"] = {"t", "osc", "osc_lo", "osc_hi", "reeb"};
        j["breakdown"] = b;
    }
    return j;
}

std::string LengthReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "t,osc,osc_lo,osc_hi,reeb\n";
    for (const auto& n : breakdown) os << n.t << ',' << n.osc << ',' << n.osc_lo << ',' << n.osc_hi << ',' << n.reeb << '\n';
    return os.str();
}

namespace {

enum class ReebMode { Sup, Mean, Theta };

struct Side {
    const CoIsotopy* iso;
    double sign;
};

bool poly_equal(const PolyT& a, const PolyT& b) { return a.c == b.c; }

bool same_generator(const Generator& a, const Generator& b) {
    if (a.dim != b.dim || a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        const auto &x = a.terms[i], &y = b.terms[i];
        if (x.k != y.k || !poly_equal(x.a, y.a) || !poly_equal(x.b, y.b)) return false;
    }
    return true;
}

// The generator has no spatially varying part.
bool generator_trivial(const CoIsotopy& iso) {
    for (const auto& t : iso.generator().terms) {
        bool zero = true;
        for (int j = 0; j < iso.generator().dim; ++j) zero = zero && t.k[j] == 0;
        if (!zero && (!t.a.is_zero() || !t.b.is_zero())) return false;
    }
    return true;
}

double warp_value(const CoIsotopy& iso, double t) { return iso.warp() ? iso.warp()->value(t) : t; }
double warp_deriv(const CoIsotopy& iso, double t) { return iso.warp() ? iso.warp()->deriv(t) : 1.0; }
double orientation(const CoIsotopy& iso) { return iso.inverted() ? -1.0 : 1.0; }

// Space average of C^t at every node. For spatially varying C the forward
// orbits of 64 z-levels are integrated once; an inverted path uses the change
// of variables x = phi_s(r), whose Jacobian cancels the conformal factor.
std::vector<double> c_means(const CoIsotopy& iso, const std::vector<double>& nodes) {
    std::vector<double> out(nodes.size(), 0.0);
    if (iso.C_spatially_constant()) {
        for (std::size_t k = 0; k < nodes.size(); ++k) out[k] = iso.C_function(nodes[k], zero_vec());
        return out;
    }
    const CoIsotopy base = iso.base_path();
    const int zi = iso.model().zi();
    std::vector<double> s(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) s[k] = warp_value(iso, nodes[k]);
    constexpr int kZ = 64;
    std::vector<std::vector<double>> partial(kZ, std::vector<double>(nodes.size(), 0.0));
    parallel_blocks(kZ, kFlowBlock, [&](std::size_t lo, std::size_t hi) {
        std::vector<Vec> ps(hi - lo, zero_vec());
        for (std::size_t i = lo; i < hi; ++i) ps[i - lo][zi] = kTwoPi * static_cast<double>(i) / kZ;
        std::vector<std::vector<Vec>> traj;
        base.flow_times_many(ps, s, traj);
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t k = 0; k < nodes.size(); ++k) partial[i][k] = base.base_c(traj[i - lo][k][zi], s[k]);
    });
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        double acc = 0;
        for (int i = 0; i < kZ; ++i) acc += partial[i][k];
        out[k] = orientation(iso) * warp_deriv(iso, nodes[k]) * acc / kZ;
    }
    return out;
}

// Average over z of eta(X_t) for the field itself (no composition with phi_t).
double field_theta(const CoIsotopy& iso, double t) {
    const double s = warp_value(iso, t);
    constexpr int kZ = 64;
    double acc = 0;
    for (int i = 0; i < kZ; ++i) acc += iso.base_c(kTwoPi * i / kZ, s);
    return warp_deriv(iso, t) * acc / kZ;
}

LengthReport aggregate(const std::vector<Side>& sides, Flavor flavor, ReebMode mode, int osc_res) {
    const ModelSpec& m = sides.front().iso->model();
    std::vector<double> breaks;
    int steps = 1;
    for (const auto& sd : sides) {
        if (!(sd.iso->model() == m)) throw Error(ErrorCode::ModelMismatch, "isotopies live on different models");
        for (double b : sd.iso->breakpoints()) breaks.push_back(b);
        steps = std::max(steps, sd.iso->steps());
    }
    const TimeQuadrature q = time_quadrature(breaks, steps);
    const std::size_t N = q.nodes.size();

    std::vector<Side> movers;
    for (const auto& sd : sides)
        if (!generator_trivial(*sd.iso)) movers.push_back(sd);
    bool shared = !movers.empty();
    for (const auto& sd : movers)
        shared = shared && sd.iso->generator().autonomous() && same_generator(sd.iso->generator(), movers[0].iso->generator());
    // Autonomous movers sharing one warp: G_t = w(t) * sum of signed bases.
    bool common = !movers.empty() && !shared;
    for (const auto& sd : movers)
        common = common && sd.iso->generator().autonomous() && !sd.iso->inverted() && sd.iso->warp() == movers[0].iso->warp();
    if (movers.size() > 1 && !shared && !common)
        for (const auto& sd : movers)
            if (sd.iso->inverted())
                throw Error(ErrorCode::InvalidArgument, "an inverted path can only be compared with an identity path");

    std::vector<LengthNode> nodes(N);
    for (std::size_t k = 0; k < N; ++k) nodes[k].t = q.nodes[k];
    if (shared) {
        const OscInterval base = osc(movers[0].iso->base_generator(0.0), osc_res);
        for (std::size_t k = 0; k < N; ++k) {
            double coef = 0;
            for (const auto& sd : movers) coef += sd.sign * orientation(*sd.iso) * warp_deriv(*sd.iso, q.nodes[k]);
            const double a = std::abs(coef);
            nodes[k].osc = a * base.value;
            nodes[k].osc_lo = a * base.lo;
            nodes[k].osc_hi = a * base.hi;
        }
    } else if (common) {
        FourierScalar B(m.dim());
        for (const auto& sd : movers) B = B + sd.iso->base_generator(0.0).scaled(sd.sign);
        B = B.canonical();
        const OscInterval base = B.empty() ? OscInterval{} : osc(B, osc_res);
        for (std::size_t k = 0; k < N; ++k) {
            const double a = std::abs(warp_deriv(*movers[0].iso, q.nodes[k]));
            nodes[k].osc = a * base.value;
            nodes[k].osc_lo = a * base.lo;
            nodes[k].osc_hi = a * base.hi;
        }
    } else if (!movers.empty()) {
        parallel_for(N, [&](std::size_t k) {
            FourierScalar G(m.dim());
            for (const auto& sd : movers) G = G + sd.iso->generator_fourier(q.nodes[k]).scaled(sd.sign);
            const OscInterval o = osc(G.canonical(), osc_res);
            nodes[k].osc = o.value;
            nodes[k].osc_lo = o.lo;
            nodes[k].osc_hi = o.hi;
        });
    }

    std::string reeb_term;
    if (mode == ReebMode::Sup) {
        reeb_term = "sup over M of |C^t|";
        bool constant = true;
        for (const auto& sd : sides) constant = constant && sd.iso->C_spatially_constant();
        for (std::size_t k = 0; k < N; ++k) {
            const double t = q.nodes[k];
            double sup = 0;
            const int levels = constant ? 1 : 64;
            for (int i = 0; i < levels; ++i) {
                Vec p = zero_vec();
                p[m.zi()] = kTwoPi * i / levels;
                double v = 0;
                for (const auto& sd : sides) v += sd.sign * sd.iso->C_function(t, p);
                sup = std::max(sup, std::abs(v));
            }
            nodes[k].reeb = sup;
        }
    } else if (mode == ReebMode::Mean) {
        reeb_term = "|space average of C^t|";
        std::vector<double> acc(N, 0.0);
        for (const auto& sd : sides) {
            const auto cm = c_means(*sd.iso, q.nodes);
            for (std::size_t k = 0; k < N; ++k) acc[k] += sd.sign * cm[k];
        }
        for (std::size_t k = 0; k < N; ++k) nodes[k].reeb = std::abs(acc[k]);
    } else {
        reeb_term = "|space average of eta(X_t)|";
        for (std::size_t k = 0; k < N; ++k) {
            double v = 0;
            for (const auto& sd : sides) v += sd.sign * field_theta(*sd.iso, q.nodes[k]);
            nodes[k].reeb = std::abs(v);
        }
    }

    for (std::size_t k = 0; k < N; ++k) nodes[k].weight = q.weights[k];
    LengthReport r;
    r.quadrature = q.descriptor;
    r.reeb_term = reeb_term;
    r.breakdown = std::move(nodes);
    return reflavor(r, flavor);
}

void require_kind(const CoIsotopy& iso, Kind k, const char* what) {
    if (iso.kind() != k) throw Error(ErrorCode::KindMismatch, std::string(what) + " needs " + kind_name(k) + " kind");
}

}  // namespace

LengthReport reflavor(const LengthReport& in, Flavor flavor) {
    LengthReport r = in;
    r.flavor = flavor;
    r.value = r.value_lo = r.value_hi = 0;
    for (const auto& n : r.breakdown) {
        if (flavor == Flavor::L1inf) {
            r.value += n.weight * (n.osc + n.reeb);
            r.value_lo += n.weight * (n.osc_lo + n.reeb);
            r.value_hi += n.weight * (n.osc_hi + n.reeb);
        } else {
            r.value = std::max(r.value, n.osc + n.reeb);
            r.value_lo = std::max(r.value_lo, n.osc_lo + n.reeb);
            r.value_hi = std::max(r.value_hi, n.osc_hi + n.reeb);
        }
    }
    return r;
}

LengthReport length(const CoIsotopy& iso, Flavor flavor, int osc_res) {
    require_kind(iso, Kind::CoHamiltonian, "co-Hofer length");
    return aggregate({{&iso, 1.0}}, flavor, ReebMode::Sup, osc_res);
}

LengthReport length_L1inf(const CoIsotopy& iso, int osc_res) { return length(iso, Flavor::L1inf, osc_res); }
LengthReport length_Linf(const CoIsotopy& iso, int osc_res) { return length(iso, Flavor::Linf, osc_res); }

LengthReport distance_CH(const CoIsotopy& a, const CoIsotopy& b, Flavor flavor, int osc_res) {
    if (!(a.model() == b.model())) throw Error(ErrorCode::ModelMismatch, "isotopies live on different models");
    require_kind(a, Kind::CoHamiltonian, "co-Hofer distance");
    require_kind(b, Kind::CoHamiltonian, "co-Hofer distance");
    return aggregate({{&a, 1.0}, {&b, -1.0}}, flavor, ReebMode::Sup, osc_res);
}

CosymplecticFieldData field_data(const CoIsotopy& iso, double t) {
    if (iso.inverted()) throw Error(ErrorCode::InvalidArgument, "field data of an inverted path is not a Fourier field");
    const ModelSpec& m = iso.model();
    CosymplecticFieldData d;
    d.model = m;
    d.iota_omega = OneFormField::exact(iso.generator_fourier(t));
    const double s = warp_value(iso, t), w = warp_deriv(iso, t);
    d.eta_x = FourierScalar(m.dim());
    if (iso.reeb()) {
        for (const auto& rt : iso.reeb()->terms) {
            Freq k{};
            k[m.zi()] = rt.m;
            d.eta_x.add_term(k, w * rt.a(s), w * rt.b(s));
        }
    }
    if (!iso.generator().z_slope.is_zero()) d.eta_x.add_term(Freq{}, w * iso.generator().z_slope(s), 0.0);
    d.eta_x = d.eta_x.canonical();
    return d;
}

CosymplecticFieldData reeb_field_data(const ModelSpec& m) {
    CosymplecticFieldData d;
    d.model = m;
    d.iota_omega = OneFormField::zero(m.dim());
    d.eta_x = FourierScalar::constant(m.dim(), 1.0);
    return d;
}

double theta_of_field(const CosymplecticFieldData& X) { return std::abs(X.eta_x.mean()); }

AcoTerms aco_norm(const CosymplecticFieldData& X, int osc_res) {
    if (X.iota_omega.closedness_defect() > 1e-10)
        throw Error(ErrorCode::NotCosymplectic, "i_X omega is not closed");
    const HodgeSplit s = hodge_split(X.iota_omega);
    AcoTerms a;
    a.harmonic_l2 = l2_norm_harmonic(s.harmonic, X.model);
    a.nu_b = s.primitive.empty() ? 0.0 : osc(s.primitive, osc_res).value;
    a.theta = theta_of_field(X);
    a.total = a.harmonic_l2 + a.nu_b + a.theta;
    return a;
}

LengthReport almost_length(const CoIsotopy& iso, Flavor flavor, AlmostVariant variant, int osc_res) {
    if (variant == AlmostVariant::AH) {
        require_kind(iso, Kind::AlmostCoHamiltonian, "almost co-Hofer length");
        return aggregate({{&iso, 1.0}}, flavor, ReebMode::Mean, osc_res);
    }
    if (iso.kind() == Kind::CoHamiltonian)
        throw Error(ErrorCode::KindMismatch, "the Aco length needs almost co-Hamiltonian or cosymplectic kind");
    if (iso.inverted()) throw Error(ErrorCode::InvalidArgument, "the Aco length needs a forward path");
    // i_X omega = dF_t is exact, so the harmonic term vanishes and nu^B = osc(F_t).
    return aggregate({{&iso, 1.0}}, flavor, ReebMode::Theta, osc_res);
}

LengthReport distance_AH(const CoIsotopy& a, const CoIsotopy& b, Flavor flavor, int osc_res) {
    if (!(a.model() == b.model())) throw Error(ErrorCode::ModelMismatch, "isotopies live on different models");
    require_kind(a, Kind::AlmostCoHamiltonian, "almost co-Hofer distance");
    require_kind(b, Kind::AlmostCoHamiltonian, "almost co-Hofer distance");
    return aggregate({{&a, 1.0}, {&b, -1.0}}, flavor, ReebMode::Mean, osc_res);
}

std::vector<double> c_mean_profile(const CoIsotopy& iso, const std::vector<double>& times) {
    return c_means(iso, times);
}

LengthReport kind_length(const CoIsotopy& iso, Flavor flavor, int osc_res) {
    switch (iso.kind()) {
        case Kind::CoHamiltonian: return length(iso, flavor, osc_res);
        case Kind::AlmostCoHamiltonian: return almost_length(iso, flavor, AlmostVariant::AH, osc_res);
        case Kind::Cosymplectic: return almost_length(iso, flavor, AlmostVariant::Aco, osc_res);
    }
    return {};
}

double c0_distance(const ModelSpec& m, const std::function<Vec(const Vec&)>& f,
                   const std::function<Vec(const Vec&)>& finv, const std::function<Vec(const Vec&)>& g,
                   const std::function<Vec(const Vec&)>& ginv, const std::vector<Vec>& points) {
    std::vector<double> d(points.size(), 0.0);
    parallel_for(points.size(), [&](std::size_t i) {
        const Vec& p = points[i];
        d[i] = std::max(flat_distance(m, f(p), g(p)), flat_distance(m, finv(p), ginv(p)));
    });
    return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

Json PathDistance::to_json() const {
    return {{"value", value}, {"estimate", "grid lower estimate"}, {"resolution", resolution},
            {"time_nodes", time_nodes}, {"z_collapsed", z_collapsed}};
}

namespace {

std::vector<double> c0_times(const std::vector<double>& breaks, int uniform) {
    std::vector<double> t;
    for (int i = 0; i < uniform; ++i) t.push_back(uniform == 1 ? 1.0 : double(i) / (uniform - 1));
    for (double b : breaks) t.push_back(b);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

}  // namespace

PathDistance path_distance(const CoIsotopy& a, const CoIsotopy& b, const C0Options& opt) {
    if (!(a.model() == b.model())) throw Error(ErrorCode::ModelMismatch, "isotopies live on different models");
    const ModelSpec& m = a.model();
    std::vector<double> br = a.breakpoints();
    for (double x : b.breakpoints()) br.push_back(x);
    const std::vector<double> times = c0_times(br, opt.time_nodes);
    PathDistance r;
    r.resolution = opt.resolution;
    r.time_nodes = static_cast<int>(times.size());
    r.z_collapsed = a.z_equivariant() && b.z_equivariant();
    const std::vector<Vec> pts = grid_points(m, opt.resolution, r.z_collapsed);
    const bool same = a.is_identity() && b.is_identity();
    if (same) return r;
    std::vector<double> d(pts.size(), 0.0);
    parallel_blocks(pts.size(), kFlowBlock, [&](std::size_t lo, std::size_t hi) {
        const std::vector<Vec> sub(pts.begin() + lo, pts.begin() + hi);
        std::vector<std::vector<Vec>> fa, fb;
        a.flow_times_many(sub, times, fa);
        b.flow_times_many(sub, times, fb);
        std::vector<Vec> ia = sub, ib = sub;
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (!a.is_identity()) a.flow_many(sub, times[k], ia, true);
            if (!b.is_identity()) b.flow_many(sub, times[k], ib, true);
            for (std::size_t i = lo; i < hi; ++i)
                d[i] = std::max({d[i], flat_distance(m, fa[i - lo][k], fb[i - lo][k]), flat_distance(m, ia[i - lo], ib[i - lo])});
        }
    });
    r.value = d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
    return r;
}

PathDistance path_distance(const PathView& a, const PathView& b, const std::vector<double>& times,
                           const C0Options& opt, bool skip_z) {
    PathDistance r;
    r.resolution = opt.resolution;
    r.time_nodes = static_cast<int>(times.size());
    r.z_collapsed = skip_z;
    const std::vector<Vec> pts = grid_points(a.model, opt.resolution, skip_z);
    for (double t : times) {
        const double d = c0_distance(
            a.model, [&](const Vec& p) { return a.flow(p, t); }, [&](const Vec& p) { return a.inverse(p, t); },
            [&](const Vec& p) { return b.flow(p, t); }, [&](const Vec& p) { return b.inverse(p, t); }, pts);
        r.value = std::max(r.value, d);
    }
    return r;
}

EnergyBound energy_upper_bound(const CoIsotopy& target, const std::vector<CoIsotopy>& candidates, double c0_tol,
                               int resolution) {
    EnergyBound e;
    const ModelSpec& m = target.model();
    for (const auto& c : candidates) {
        if (!(c.model() == m)) throw Error(ErrorCode::ModelMismatch, "candidate lives on a different model");
        const bool skip = target.z_equivariant() && c.z_equivariant();
        const std::vector<Vec> pts = grid_points(m, resolution, skip);
        std::vector<double> dv(pts.size(), 0.0);
        parallel_blocks(pts.size(), kFlowBlock, [&](std::size_t lo, std::size_t hi) {
            const std::vector<Vec> sub(pts.begin() + lo, pts.begin() + hi);
            std::vector<Vec> f1, f2, g1, g2;
            target.flow_many(sub, 1.0, f1);
            target.flow_many(sub, 1.0, f2, true);
            c.flow_many(sub, 1.0, g1);
            c.flow_many(sub, 1.0, g2, true);
            for (std::size_t i = lo; i < hi; ++i)
                dv[i] = std::max(flat_distance(m, f1[i - lo], g1[i - lo]), flat_distance(m, f2[i - lo], g2[i - lo]));
        });
        const double d = dv.empty() ? 0.0 : *std::max_element(dv.begin(), dv.end());
        e.c0_mismatch.push_back(d);
        if (d <= c0_tol) {
            const double l = kind_length(c, Flavor::L1inf).value;
            e.lengths.push_back(l);
            if (e.best < 0 || l < e.value) {
                e.best = static_cast<int>(e.lengths.size()) - 1;
                e.value = l;
            }
        } else {
            e.lengths.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    if (e.best < 0) throw Error(ErrorCode::NoValidCandidate, "no candidate's time-1 map matches the target");
    return e;
}

Json SequenceDiagnostics::to_json() const {
    return {{"pairwise_D", pairwise_D}, {"pairwise_c0", pairwise_c0}, {"tail_profile", tail_profile},
            {"cauchy_margin", cauchy_margin}};
}

SequenceDiagnostics cauchy_report(const std::vector<CoIsotopy>& seq, Flavor flavor, const C0Options& opt,
                                  bool with_c0) {
    if (seq.size() < 2) throw Error(ErrorCode::InvalidArgument, "a sequence needs at least two isotopies");
    const std::size_t N = seq.size();
    bool all_ch = true;
    for (const auto& s : seq) all_ch = all_ch && s.kind() == Kind::CoHamiltonian;
    SequenceDiagnostics d;
    d.pairwise_D.assign(N, std::vector<double>(N, 0.0));
    d.pairwise_c0.assign(N, std::vector<double>(N, 0.0));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) {
            const double D = all_ch ? distance_CH(seq[i], seq[j], flavor).value : distance_AH(seq[i], seq[j], flavor).value;
            d.pairwise_D[i][j] = d.pairwise_D[j][i] = D;
            if (with_c0) {
                const double c = path_distance(seq[i], seq[j], opt).value;
                d.pairwise_c0[i][j] = d.pairwise_c0[j][i] = c;
            }
        }
    d.tail_profile.assign(N, 0.0);
    for (std::size_t k = N; k-- > 0;) {
        double v = k + 1 < N ? d.tail_profile[k + 1] : 0.0;
        for (std::size_t j = k; j < N; ++j) v = std::max(v, d.pairwise_D[k][j]);
        d.tail_profile[k] = v;
    }
    d.cauchy_margin = d.tail_profile[N / 2];
    return d;
}

}  // namespace cokinetic
