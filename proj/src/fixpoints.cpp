#include "cokinetic/fixpoints.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cokinetic/algebra.hpp"

namespace cokinetic {

Json FixedPointSet::to_json() const {
    Json comps = Json::array();
    for (const auto& c : components) {
        Json p = Json::array();
        for (int j = 0; j < dim; ++j) p.push_back(c.representative[j]);
        comps.push_back({{"representative", p}, {"cluster_size", c.cluster_size}, {"residual", c.residual}});
    }
    return {{"count", components.size()}, {"identity_map", identity_map}, {"grid_resolution", grid_resolution},
            {"newton_tol", newton_tol},   {"merge_radius", merge_radius}, {"z_collapsed", z_collapsed},
            {"seeds", seeds},             {"converged", converged},       {"components", comps}};
}

std::string FixedPointSet::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "component,cluster_size,residual,coords\n";
    for (std::size_t i = 0; i < components.size(); ++i) {
        os << i << ',' << components[i].cluster_size << ',' << components[i].residual << ',';
        for (int j = 0; j < dim; ++j) os << (j ? ";" : "") << components[i].representative[j];
        os << '\n';
    }
    return os.str();
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

struct NewtonResult {
    Vec p{};
    double residual = 0.0;
    bool ok = false;
    bool degenerate = false;  // Jacobian of the displacement is rank deficient
};

// Gauss-Newton on p -> phi_1(p) - p over the active coordinates.
NewtonResult refine(const CoIsotopy& iso, Vec p, int active, double tol) {
    const ModelSpec& m = iso.model();
    auto residual = [&](const Vec& x) {
        const Vec d = point_diff(m, iso.flow(x, 1.0), x);
        Eigen::VectorXd r(active);
        for (int j = 0; j < active; ++j) r(j) = d[j];
        return r;
    };
    NewtonResult out;
    Eigen::VectorXd r = residual(p);
    double prev = r.norm(), ratio = 1.0;
    const double first = prev;
    const double h = 1e-6;
    Eigen::MatrixXd J(active, active);
    auto jacobian = [&](const Vec& x) {
        std::vector<Vec> st, img;
        for (int j = 0; j < active; ++j) {
            Vec a = x, b = x;
            a[j] += h;
            b[j] -= h;
            st.push_back(a);
            st.push_back(b);
        }
        iso.flow_many(st, 1.0, img);
        for (int j = 0; j < active; ++j) {
            const Vec da = point_diff(m, img[2 * j], st[2 * j]), db = point_diff(m, img[2 * j + 1], st[2 * j + 1]);
            for (int i = 0; i < active; ++i) J(i, j) = (da[i] - db[i]) / (2 * h);
        }
    };
    for (int it = 0; it < 30 && prev > tol / 10; ++it) {
        jacobian(p);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
        cod.setThreshold(1e-8);
        const Eigen::VectorXd step = cod.solve(-r);
        out.degenerate = cod.rank() < active;
        for (int j = 0; j < active; ++j) p[j] += step(j);
        r = residual(p);
        const double cur = r.norm();
        ratio = prev > 0 ? cur / prev : 0.0;
        prev = cur;
        if (!std::isfinite(cur) || cur > 1.0) return out;
    }
    if (out.degenerate == false && first <= tol / 10) {
        // Already converged at the seed; still classify the Jacobian.
        jacobian(p);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
        cod.setThreshold(1e-8);
        out.degenerate = cod.rank() < active;
    }
    out.p = reduce_point(m, p);
    out.residual = flat_distance(m, iso.flow(out.p, 1.0), out.p);
    out.ok = out.residual <= tol && (first <= tol || ratio <= 0.1);
    return out;
}

// Every point on the wrapped segment a -> b is fixed.
bool segment_fixed(const CoIsotopy& iso, const Vec& a, const Vec& b) {
    const ModelSpec& m = iso.model();
    const Vec d = point_diff(m, b, a);
    constexpr int kPts = 16;
    // Midpoint first so failures exit early.
    std::vector<int> order(kPts - 1);
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [](int x, int y) { return std::abs(x - kPts / 2) < std::abs(y - kPts / 2); });
    for (int i : order) {
        Vec q = a;
        for (int j = 0; j < m.dim(); ++j) q[j] += d[j] * i / kPts;
        if (flat_distance(m, iso.flow(q, 1.0), q) > 1e-8) return false;
    }
    return true;
}

}  // namespace

FixedPointSet find_fixed_points(const CoIsotopy& iso, int grid_resolution, double newton_tol) {
    if (grid_resolution < 16) throw Error(ErrorCode::InvalidArgument, "grid resolution must be at least 16");
    const ModelSpec& m = iso.model();
    FixedPointSet set;
    set.dim = iso.model().dim();
    set.grid_resolution = grid_resolution;
    set.newton_tol = newton_tol;
    set.merge_radius = 4 * std::sqrt(newton_tol);
    set.z_collapsed = iso.z_equivariant();
    if (!m.circle() && !set.z_collapsed)
        throw Error(ErrorCode::UnsupportedModel, "fixed-point search on line topology needs z-equivariant flows");
    if (iso.is_identity()) {
        set.identity_map = true;
        set.components.push_back({zero_vec(), 1, 0.0});
        return set;
    }
    const int active = set.z_collapsed ? m.dim() - 1 : m.dim();
    const std::vector<Vec> pts = grid_points(m, grid_resolution, set.z_collapsed);
    std::vector<double> disp(pts.size());
    parallel_blocks(pts.size(), kFlowBlock, [&](std::size_t lo, std::size_t hi) {
        const std::vector<Vec> sub(pts.begin() + lo, pts.begin() + hi);
        std::vector<Vec> img;
        iso.flow_many(sub, 1.0, img);
        for (std::size_t i = lo; i < hi; ++i) disp[i] = flat_distance(m, img[i - lo], pts[i]);
    });

    std::vector<double> sorted = disp;
    std::sort(sorted.begin(), sorted.end());
    const double threshold = 10 * sorted[sorted.size() / 10];
    // Grid local minima under the threshold, lowest first.
    std::vector<std::size_t> seeds;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (disp[i] > threshold) continue;
        bool minimum = true;
        std::size_t stride = 1;
        for (int j = active - 1; j >= 0 && minimum; --j, stride *= grid_resolution) {
            const std::size_t digit = (i / stride) % grid_resolution;
            const std::size_t up = i - digit * stride + ((digit + 1) % grid_resolution) * stride;
            const std::size_t dn = i - digit * stride + ((digit + grid_resolution - 1) % grid_resolution) * stride;
            minimum = disp[i] <= disp[up] && disp[i] <= disp[dn];
        }
        if (minimum) seeds.push_back(i);
    }
    std::stable_sort(seeds.begin(), seeds.end(), [&](std::size_t a, std::size_t b) { return disp[a] < disp[b]; });
    if (seeds.size() > 128) seeds.resize(128);
    set.seeds = static_cast<int>(seeds.size());

    std::vector<NewtonResult> res(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t s) { res[s] = refine(iso, pts[seeds[s]], active, newton_tol); });
    std::vector<NewtonResult> conv;
    for (auto& r : res)
        if (r.ok) conv.push_back(r);
    std::sort(conv.begin(), conv.end(), [](const NewtonResult& a, const NewtonResult& b) { return a.p < b.p; });
    set.converged = static_cast<int>(conv.size());

    const int K = static_cast<int>(conv.size());
    UnionFind uf(K);
    struct Pair {
        double d;
        int i, j;
    };
    std::vector<Pair> pairs;
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) pairs.push_back({flat_distance(m, conv[i].p, conv[j].p), i, j});
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d < b.d; });
    for (const auto& pr : pairs) {
        if (uf.find(pr.i) == uf.find(pr.j)) continue;
        if (pr.d <= set.merge_radius) {
            uf.unite(pr.i, pr.j);
            continue;
        }
        // Non-isolated fixed points may belong to one fixed curve or torus.
        if (conv[pr.i].degenerate && conv[pr.j].degenerate && segment_fixed(iso, conv[pr.i].p, conv[pr.j].p))
            uf.unite(pr.i, pr.j);
    }
    for (int i = 0; i < K; ++i) {
        const int root = uf.find(i);
        if (root == i) {
            set.components.push_back({conv[i].p, 1, conv[i].residual});
        } else {
            for (auto& c : set.components)
                if (c.representative == conv[root].p) ++c.cluster_size;
        }
    }
    return set;
}

Json GammaBound::to_json() const {
    Json j{{"lower", lower}, {"model", model}};
    j["upper"] = upper ? Json(*upper) : Json(nullptr);
    return j;
}

GammaBound gamma_bound_for_factor(const std::string& factor, int k) {
    GammaBound g;
    if (factor == "circle") {
        g.upper = 2;
        g.model = "second factor S^1";
    } else if (factor == "interval") {
        g.upper = 1;
        g.model = "second factor [-1, 1]";
    } else if (factor == "torus") {
        if (k < 1) throw Error(ErrorCode::InvalidArgument, "torus factor needs k >= 1");
        g.upper = 2 * k + 1;
        g.model = "second factor T^" + std::to_string(2 * k);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown factor '" + factor + "'");
    }
    return g;
}

GammaBound gamma_lower_bound(const ModelSpec& m) {
    m.validate();
    GammaBound g = gamma_bound_for_factor("circle");
    g.model = "T^" + std::to_string(m.dim()) + " x S^1";
    return g;
}

VerificationReport check_fix_lower_bound(const CoIsotopy& iso, int grid_resolution, double newton_tol) {
    if (iso.kind() != Kind::CoHamiltonian) throw Error(ErrorCode::KindMismatch, "fixed-point bound needs co-Hamiltonian kind");
    if (!iso.model().circle()) throw Error(ErrorCode::UnsupportedModel, "fixed-point bound needs circle topology");
    const FixedPointSet set = find_fixed_points(iso, grid_resolution, newton_tol);
    const GammaBound g = gamma_lower_bound(iso.model());
    VerificationReport rep("fix-lower-bound");
    rep.check_ge("components", static_cast<double>(set.components.size()), g.lower, "gamma lower bound");
    double worst = 0;
    for (const auto& c : set.components) worst = std::max(worst, c.residual);
    rep.check_le("max_residual", worst, newton_tol, "newton tolerance");
    rep.data()["fixed_points"] = set.to_json();
    rep.data()["gamma"] = g.to_json();
    return rep;
}

VerificationReport winding_at_fixed_points(const CoIsotopy& iso, const FixedPointSet& set, double tol) {
    const ModelSpec& m = iso.model();
    std::vector<OneFormField> basis;
    for (int j = 0; j < m.dim(); ++j) {
        std::vector<double> c(m.dim(), 0.0);
        c[j] = 1.0;
        basis.push_back(OneFormField::constant(c));
    }
    std::vector<Vec> reps;
    for (const auto& c : set.components) reps.push_back(c.representative);
    VerificationReport rep("winding-at-fixed-points");
    rep.check_ge("representatives", static_cast<double>(reps.size()), 1.0, "a fixed point is needed");
    double worst = 0;
    if (!reps.empty()) {
        const auto vals = winding_values(iso, basis, reps);
        for (const auto& row : vals)
            for (double v : row) worst = std::max(worst, std::abs(v));
    }
    rep.check_le("max_abs_winding", worst, tol, "winding tolerance");
    rep.data()["forms"] = "dx_i, dy_i, dz";
    rep.data()["identity_map"] = set.identity_map;
    return rep;
}

VerificationReport winding_at_fixed_points(const CoIsotopy& iso, double tol) {
    return winding_at_fixed_points(iso, find_fixed_points(iso), tol);
}

VerificationReport mean_winding_integral(const CoIsotopy& iso, const OneFormField& alpha, int resolution,
                                         double tol_quad) {
    if (iso.kind() != Kind::CoHamiltonian) throw Error(ErrorCode::KindMismatch, "mean winding needs co-Hamiltonian kind");
    const ModelSpec& m = iso.model();
    if (!m.circle()) throw Error(ErrorCode::UnboundedDomain, "space averages need circle topology");
    if (!alpha.is_closed()) throw Error(ErrorCode::NotClosed, "winding needs a closed form");
    bool skip_z = iso.z_equivariant();
    for (const auto& c : alpha.components) skip_z = skip_z && c.independent_of(m.zi());
    const int active = skip_z ? m.dim() - 1 : m.dim();
    if (active > 3) throw Error(ErrorCode::InvalidArgument, "grid quadrature is capped at three dimensions");
    const std::vector<Vec> pts = grid_points(m, resolution, skip_z);
    const auto vals = winding_values(iso, {alpha}, pts);
    double sum = 0, lo = vals[0][0], hi = vals[0][0];
    for (const auto& row : vals) {
        sum += row[0];
        lo = std::min(lo, row[0]);
        hi = std::max(hi, row[0]);
    }
    const double mean = sum / static_cast<double>(vals.size());
    VerificationReport rep("mean-winding");
    rep.check_le("abs_mean", std::abs(mean), tol_quad, "quadrature tolerance");
    rep.check_le("min", lo, 1e-8, "sign bracketing slack");
    rep.check_ge("max", hi, -1e-8, "sign bracketing slack");
    // A loop returns to the identity; its windings must then vanish.
    double loop_gap = 0;
    for (const auto& p : grid_points(m, 8, iso.z_equivariant()))
        loop_gap = std::max(loop_gap, flat_distance(m, iso.flow(p, 1.0), p));
    const bool loop = loop_gap <= 1e-8;
    if (loop) rep.check_le("loop_max_abs", std::max(std::abs(lo), std::abs(hi)), tol_quad, "contractible orbits");
    rep.data()["mean"] = mean;
    rep.data()["min"] = lo;
    rep.data()["max"] = hi;
    rep.data()["resolution"] = resolution;
    rep.data()["z_collapsed"] = skip_z;
    rep.data()["loop"] = loop;
    return rep;
}

}  // namespace cokinetic
