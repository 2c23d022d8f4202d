#include "cokinetic/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cokinetic/algebra.hpp"
#include "cokinetic/fixpoints.hpp"
#include "cokinetic/kernels.hpp"
#include "cokinetic/lift.hpp"
#include "cokinetic/norms.hpp"
#include "cokinetic/random.hpp"
#include "cokinetic/reparam.hpp"
#include "cokinetic/suites.hpp"

namespace cokinetic {

// ------------------------------------------------------------ serialization

Json model_to_json(const ModelSpec& m) {
    return {{"n", m.n}, {"z_topology", m.circle() ? "circle" : "line"}};
}

Json poly_to_json(const PolyT& p) {
    int deg = kMaxPolyDegree;
    while (deg > 0 && p.c[deg] == 0.0) --deg;
    if (deg == 0) return p.c[0];
    Json a = Json::array();
    for (int i = 0; i <= deg; ++i) a.push_back(p.c[i]);
    return a;
}

namespace {

Json freq_to_json(const Freq& k, int dim) {
    Json a = Json::array();
    for (int j = 0; j < dim; ++j) a.push_back(k[j]);
    return a;
}

}  // namespace

Json generator_to_json(const Generator& g) {
    Json terms = Json::array();
    for (const auto& t : g.terms) terms.push_back({{"k", freq_to_json(t.k, g.dim)}, {"a", poly_to_json(t.a)}, {"b", poly_to_json(t.b)}});
    Json j{{"terms", terms}};
    if (!g.z_slope.is_zero()) j["z_slope"] = poly_to_json(g.z_slope);
    j["normalization"] = g.normalization == Normalization::ZeroMean ? "zeroMean" : "raw";
    return j;
}

Json reeb_to_json(const ReebComponent& r) {
    Json terms = Json::array();
    for (const auto& t : r.terms) terms.push_back({{"m", t.m}, {"a", poly_to_json(t.a)}, {"b", poly_to_json(t.b)}});
    return {{"terms", terms}};
}

Json curve_to_json(const ReparamCurve& c) {
    Json j{{"kind", c.kind_name()}};
    switch (c.kind()) {
        case ReparamCurve::Kind::Identity:
        case ReparamCurve::Kind::Zero: j["params"] = Json::object(); break;
        case ReparamCurve::Kind::Polynomial: j["params"] = {{"coeffs", c.coeffs()}}; break;
        case ReparamCurve::Kind::SmoothPlateau: j["params"] = {{"delta", c.delta()}}; break;
        case ReparamCurve::Kind::Composed:
            j["params"] = {{"outer", curve_to_json(*c.first())}, {"inner", curve_to_json(*c.second())}};
            break;
        case ReparamCurve::Kind::Blend:
            j["params"] = {{"a", curve_to_json(*c.first())}, {"b", curve_to_json(*c.second())}, {"s", c.delta()}};
            break;
    }
    return j;
}

Json affine_to_json(const AffineMap& a) {
    Json A = Json::array(), shift = Json::array();
    for (int i = 0; i < a.dim; ++i) {
        Json row = Json::array();
        for (int j = 0; j < a.dim; ++j) row.push_back(a.A[i][j]);
        A.push_back(row);
        shift.push_back(a.shift[i]);
    }
    return {{"A", A}, {"shift", shift}};
}

Json isotopy_to_json(const CoIsotopy& iso) {
    Json j{{"kind", kind_name(iso.kind())}, {"steps", iso.steps()}, {"generator", generator_to_json(iso.generator())}};
    if (iso.reeb()) j["reeb"] = reeb_to_json(*iso.reeb());
    return j;
}

Json Tolerances::to_json() const {
    return {{"tol_flow", tol_flow}, {"tol_quad", tol_quad}, {"tol_residual", tol_residual}, {"tol_newton", tol_newton},
            {"tol_winding", tol_winding}, {"steps", steps},   {"osc", osc},   {"grid", grid}, {"samples", samples}};
}

// ------------------------------------------------------------------ parsing

std::uint64_t derived_seed(std::uint64_t scenario_seed, const std::string& name) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : name) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    // splitmix64 finalizer so nearby seeds decorrelate
    std::uint64_t z = scenario_seed ^ h;
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

const CoIsotopy& Scenario::isotopy(const std::string& n) const {
    auto it = isotopies.find(n);
    if (it == isotopies.end()) throw Error(ErrorCode::ReferenceError, "unknown isotopy '" + n + "'");
    return it->second;
}

const ReparamCurve& Scenario::curve(const std::string& n) const {
    auto it = curves.find(n);
    if (it == curves.end()) throw Error(ErrorCode::ReferenceError, "unknown curve '" + n + "'");
    return it->second;
}

namespace {

// JSON pointer under construction.
struct Ptr {
    std::string s;
    Ptr operator/(const std::string& key) const {
        std::string k;
        for (char c : key) {
            if (c == '~') k += "~0";
            else if (c == '/') k += "~1";
            else k += c;
        }
        return {s + "/" + k};
    }
    Ptr operator/(std::size_t i) const { return {s + "/" + std::to_string(i)}; }
    std::string str() const { return s.empty() ? "/" : s; }
};

[[noreturn]] void schema_error(const Ptr& p, const std::string& msg) {
    throw Error(ErrorCode::SchemaError, p.str() + ": " + msg);
}

void expect_keys(const Json& j, const Ptr& p, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) schema_error(p, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) schema_error(p / it.key(), "unknown key '" + it.key() + "'");
    }
}

const Json& required(const Json& j, const Ptr& p, const char* key) {
    if (!j.contains(key)) schema_error(p / key, "missing required key");
    return j.at(key);
}

double as_number(const Json& j, const Ptr& p) {
    if (!j.is_number()) schema_error(p, "expected a number");
    return j.get<double>();
}

long long as_int(const Json& j, const Ptr& p) {
    if (!j.is_number_integer()) schema_error(p, "expected an integer");
    return j.get<long long>();
}

std::string as_string(const Json& j, const Ptr& p) {
    if (!j.is_string()) schema_error(p, "expected a string");
    return j.get<std::string>();
}

const Json& as_array(const Json& j, const Ptr& p) {
    if (!j.is_array()) schema_error(p, "expected an array");
    return j;
}

std::vector<double> as_numbers(const Json& j, const Ptr& p) {
    std::vector<double> v;
    std::size_t i = 0;
    for (const auto& e : as_array(j, p)) v.push_back(as_number(e, p / i++));
    return v;
}

PolyT parse_poly(const Json& j, const Ptr& p) {
    PolyT out;
    if (j.is_number()) return PolyT::constant(j.get<double>());
    if (!j.is_array()) schema_error(p, "a polynomial is a number or an array of coefficients");
    if (j.size() > static_cast<std::size_t>(kMaxPolyDegree + 1))
        schema_error(p, "polynomial degree exceeds " + std::to_string(kMaxPolyDegree));
    for (std::size_t i = 0; i < j.size(); ++i) out.c[i] = as_number(j[i], p / i);
    return out;
}

Freq parse_freq(const Json& j, const Ptr& p, int dim) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        schema_error(p, "frequency must be an integer array of length " + std::to_string(dim));
    Freq k{};
    for (int i = 0; i < dim; ++i) {
        const long long v = as_int(j[i], p / static_cast<std::size_t>(i));
        if (v < -1000 || v > 1000) schema_error(p / static_cast<std::size_t>(i), "frequency out of range");
        k[i] = static_cast<int>(v);
    }
    return k;
}

Kind parse_kind(const Json& j, const Ptr& p) {
    const std::string s = as_string(j, p);
    if (s == "coHamiltonian") return Kind::CoHamiltonian;
    if (s == "almostCoHamiltonian") return Kind::AlmostCoHamiltonian;
    if (s == "cosymplectic") return Kind::Cosymplectic;
    schema_error(p, "unknown kind '" + s + "'");
}

Generator parse_generator(const Json& j, const Ptr& p, const ModelSpec& m, Kind kind) {
    expect_keys(j, p, {"terms", "z_slope", "normalization"});
    Generator g;
    g.dim = m.dim();
    if (j.contains("terms")) {
        const Json& terms = as_array(j["terms"], p / "terms");
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const Ptr q = p / "terms" / i;
            expect_keys(terms[i], q, {"k", "a", "b"});
            TimeTerm t;
            t.k = parse_freq(required(terms[i], q, "k"), q / "k", m.dim());
            if (terms[i].contains("a")) t.a = parse_poly(terms[i]["a"], q / "a");
            if (terms[i].contains("b")) t.b = parse_poly(terms[i]["b"], q / "b");
            if (t.k[m.zi()] != 0 && (!t.a.is_zero() || !t.b.is_zero()))
                schema_error(q / "k", kind == Kind::CoHamiltonian ? "z-dependence forbidden for co-Hamiltonian kind"
                                                                  : "generator must not depend on z");
            g.terms.push_back(t);
        }
    }
    if (j.contains("z_slope")) g.z_slope = parse_poly(j["z_slope"], p / "z_slope");
    if (j.contains("normalization")) {
        const std::string s = as_string(j["normalization"], p / "normalization");
        if (s == "zeroMean") g.normalization = Normalization::ZeroMean;
        else if (s != "raw") schema_error(p / "normalization", "expected 'raw' or 'zeroMean'");
    }
    return g;
}

ReebComponent parse_reeb(const Json& j, const Ptr& p) {
    expect_keys(j, p, {"terms"});
    ReebComponent r;
    const Json& terms = as_array(required(j, p, "terms"), p / "terms");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const Ptr q = p / "terms" / i;
        expect_keys(terms[i], q, {"m", "a", "b"});
        ReebTerm t;
        const long long m = as_int(required(terms[i], q, "m"), q / "m");
        if (m < 0 || m > 1000) schema_error(q / "m", "Reeb frequency must lie in [0, 1000]");
        t.m = static_cast<int>(m);
        if (terms[i].contains("a")) t.a = parse_poly(terms[i]["a"], q / "a");
        if (terms[i].contains("b")) t.b = parse_poly(terms[i]["b"], q / "b");
        r.terms.push_back(t);
    }
    return r;
}

AffineMap parse_affine(const Json& j, const Ptr& p, const ModelSpec& m) {
    expect_keys(j, p, {"A", "shift"});
    AffineMap a = AffineMap::identity(m.dim());
    if (j.contains("A")) {
        const Json& A = as_array(j["A"], p / "A");
        if (static_cast<int>(A.size()) != m.dim()) schema_error(p / "A", "matrix must have " + std::to_string(m.dim()) + " rows");
        for (int r = 0; r < m.dim(); ++r) {
            const Ptr q = p / "A" / static_cast<std::size_t>(r);
            if (!A[r].is_array() || static_cast<int>(A[r].size()) != m.dim()) schema_error(q, "row has the wrong length");
            for (int c = 0; c < m.dim(); ++c) a.A[r][c] = static_cast<int>(as_int(A[r][c], q / static_cast<std::size_t>(c)));
        }
    }
    if (j.contains("shift")) {
        const auto s = as_numbers(j["shift"], p / "shift");
        if (static_cast<int>(s.size()) != m.dim()) schema_error(p / "shift", "shift must have length " + std::to_string(m.dim()));
        for (int i = 0; i < m.dim(); ++i) a.shift[i] = s[i];
    }
    if (!a.is_cosymplectic(m)) schema_error(p, "conjugator is not a cosymplectic integer affine map");
    return a;
}

// A one-form: per coordinate a constant or a list of Fourier terms {k, a, b}.
OneFormField parse_form(const Json& j, const Ptr& p, const ModelSpec& m) {
    if (!j.is_array() || static_cast<int>(j.size()) != m.dim())
        schema_error(p, "a form has one entry per coordinate (" + std::to_string(m.dim()) + ")");
    OneFormField f = OneFormField::zero(m.dim());
    for (int c = 0; c < m.dim(); ++c) {
        const Ptr q = p / static_cast<std::size_t>(c);
        if (j[c].is_number()) {
            f.components[c] = FourierScalar::constant(m.dim(), j[c].get<double>());
            continue;
        }
        const Json& terms = as_array(j[c], q);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            expect_keys(terms[i], q / i, {"k", "a", "b"});
            const Freq k = parse_freq(required(terms[i], q / i, "k"), q / i / "k", m.dim());
            const double a = terms[i].contains("a") ? as_number(terms[i]["a"], q / i / "a") : 0.0;
            const double b = terms[i].contains("b") ? as_number(terms[i]["b"], q / i / "b") : 0.0;
            f.components[c].add_term(k, a, b);
        }
    }
    return f;
}

Vec parse_point(const Json& j, const Ptr& p, const ModelSpec& m) {
    const auto v = as_numbers(j, p);
    if (static_cast<int>(v.size()) != m.dim()) schema_error(p, "a point has " + std::to_string(m.dim()) + " coordinates");
    Vec x = zero_vec();
    for (int i = 0; i < m.dim(); ++i) x[i] = v[i];
    return x;
}

void parse_tolerances(const Json& j, const Ptr& p, Tolerances& t, bool* steps_set) {
    expect_keys(j, p, {"tol_flow", "tol_quad", "tol_residual", "tol_newton", "tol_winding", "steps", "osc", "grid", "samples"});
    auto real = [&](const char* key, double& dst) {
        if (!j.contains(key)) return;
        dst = as_number(j[key], p / key);
        if (!(dst > 0.0)) schema_error(p / key, "tolerances must be positive");
    };
    auto count = [&](const char* key, int& dst, int lo, int hi) {
        if (!j.contains(key)) return;
        const long long v = as_int(j[key], p / key);
        if (v < lo || v > hi) schema_error(p / key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        dst = static_cast<int>(v);
    };
    real("tol_flow", t.tol_flow);
    real("tol_quad", t.tol_quad);
    real("tol_residual", t.tol_residual);
    real("tol_newton", t.tol_newton);
    real("tol_winding", t.tol_winding);
    count("steps", t.steps, 1, 1 << 20);
    count("osc", t.osc, 8, 4096);
    count("grid", t.grid, 4, 512);
    count("samples", t.samples, 1, 100000);
    if (steps_set) *steps_set = j.contains("steps");
}

ReparamCurve parse_curve(const Json& j, const Ptr& p, const Scenario& sc, const std::string& name);

// A curve argument: the name of a declared curve or an inline {kind, params}.
ReparamCurve curve_ref(const Json& j, const Ptr& p, const Scenario& sc) {
    if (j.is_string()) return sc.curve(j.get<std::string>());
    return parse_curve(j, p, sc, "");
}

ReparamCurve parse_curve(const Json& j, const Ptr& p, const Scenario& sc, const std::string& name) {
    expect_keys(j, p, {"name", "kind", "params"});
    const std::string kind = as_string(required(j, p, "kind"), p / "kind");
    const Json params = j.contains("params") ? j["params"] : Json::object();
    const Ptr q = p / "params";
    ReparamCurve c;
    if (kind == "identity" || kind == "zero") {
        expect_keys(params, q, {});
        c = kind == "identity" ? ReparamCurve::identity() : ReparamCurve::zero();
    } else if (kind == "polynomial") {
        expect_keys(params, q, {"coeffs"});
        c = ReparamCurve::polynomial(as_numbers(required(params, q, "coeffs"), q / "coeffs"));
    } else if (kind == "smooth-plateau") {
        expect_keys(params, q, {"delta"});
        const double d = as_number(required(params, q, "delta"), q / "delta");
        if (!(d > 0.0 && d < 1.0 / 3.0)) schema_error(q / "delta", "delta must lie in (0, 1/3)");
        c = ReparamCurve::smooth_plateau(d);
    } else if (kind == "flatten") {
        expect_keys(params, q, {"epsilon"});
        const double e = as_number(required(params, q, "epsilon"), q / "epsilon");
        if (!(e > 0.0)) schema_error(q / "epsilon", "epsilon must be positive");
        c = flatten_curve(e);
    } else if (kind == "composed") {
        expect_keys(params, q, {"outer", "inner"});
        c = ReparamCurve::composed(curve_ref(required(params, q, "outer"), q / "outer", sc),
                                   curve_ref(required(params, q, "inner"), q / "inner", sc));
    } else if (kind == "blend") {
        expect_keys(params, q, {"a", "b", "s"});
        const double s = as_number(required(params, q, "s"), q / "s");
        if (!(s >= 0.0 && s <= 1.0)) schema_error(q / "s", "blend weight must lie in [0, 1]");
        c = ReparamCurve::blend(curve_ref(required(params, q, "a"), q / "a", sc),
                                curve_ref(required(params, q, "b"), q / "b", sc), s);
    } else if (kind == "random-monotone") {
        expect_keys(params, q, {"max_degree"});
        const long long d = params.contains("max_degree") ? as_int(params["max_degree"], q / "max_degree") : 4;
        if (d < 1 || d > 12) schema_error(q / "max_degree", "must lie in [1, 12]");
        Rng rng(derived_seed(sc.seed, "curve/" + name));
        c = random_monotone_curve(rng, static_cast<int>(d));
    } else {
        schema_error(p / "kind", "unknown curve kind '" + kind + "'");
    }
    return c;
}

std::string declared_name(const Json& j, const Ptr& p, std::set<std::string>& seen) {
    const std::string n = as_string(required(j, p, "name"), p / "name");
    if (n.empty()) schema_error(p / "name", "names must be nonempty");
    if (!seen.insert(n).second) schema_error(p / "name", "duplicate name '" + n + "'");
    return n;
}

// Wraps construction errors of the model objects with the pointer.
template <typename F>
auto guarded(const Ptr& p, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::SchemaError || e.code() == ErrorCode::ReferenceError) throw;
        schema_error(p, e.what());
    }
}

CoIsotopy parse_isotopy(const Json& j, const Ptr& p, const Scenario& sc, const std::string& name) {
    expect_keys(j, p, {"name", "kind", "generator", "reeb", "steps", "from", "inverse", "warp", "reparametrize",
                       "conjugate", "random", "identity"});
    int steps = sc.defaults.steps;
    if (j.contains("steps")) {
        const long long s = as_int(j["steps"], p / "steps");
        if (s < 1 || s > (1 << 20)) schema_error(p / "steps", "steps must lie in [1, 2^20]");
        steps = static_cast<int>(s);
    }
    const ModelSpec& m = sc.model;
    int forms = 0;
    for (const char* k : {"generator", "from", "random", "identity"}) forms += j.contains(k) ? 1 : 0;
    if (forms != 1) schema_error(p, "an isotopy needs exactly one of generator, from, random or identity");

    if (j.contains("identity")) {
        if (!j["identity"].is_boolean() || !j["identity"].get<bool>()) schema_error(p / "identity", "expected true");
        return CoIsotopy::identity(m, steps);
    }
    if (j.contains("generator")) {
        const Kind kind = parse_kind(required(j, p, "kind"), p / "kind");
        Generator g = parse_generator(j["generator"], p / "generator", m, kind);
        std::optional<ReebComponent> reeb;
        if (j.contains("reeb")) reeb = parse_reeb(j["reeb"], p / "reeb");
        return guarded(p, [&] { return CoIsotopy(m, kind, g, reeb, steps); });
    }
    if (j.contains("random")) {
        const Json& r = j["random"];
        const Ptr q = p / "random";
        expect_keys(r, q, {"kind", "max_terms", "kmax", "amp", "poly_degree", "reeb"});
        const Kind kind = r.contains("kind") ? parse_kind(r["kind"], q / "kind") : Kind::CoHamiltonian;
        RandomGeneratorSpec gs;
        auto ival = [&](const Json& o, const Ptr& at, const char* key, int& dst, int lo, int hi) {
            if (!o.contains(key)) return;
            const long long v = as_int(o[key], at / key);
            if (v < lo || v > hi) schema_error(at / key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            dst = static_cast<int>(v);
        };
        auto amp = [&](const Json& o, const Ptr& at, double& dst) {
            if (!o.contains("amp")) return;
            dst = as_number(o["amp"], at / "amp");
            if (!(dst >= 0.0)) schema_error(at / "amp", "amplitude must be nonnegative");
        };
        ival(r, q, "max_terms", gs.max_terms, 1, 64);
        ival(r, q, "kmax", gs.kmax, 1, 16);
        ival(r, q, "poly_degree", gs.poly_degree, 0, kMaxPolyDegree);
        amp(r, q, gs.amp);
        Rng rng(derived_seed(sc.seed, "isotopy/" + name));
        Generator g = random_generator(m, gs, rng);
        std::optional<ReebComponent> reeb;
        if (kind != Kind::CoHamiltonian) {
            RandomReebSpec rs;
            if (kind == Kind::Cosymplectic) rs.mmax = 0;
            if (r.contains("reeb")) {
                const Ptr rq = q / "reeb";
                expect_keys(r["reeb"], rq, {"max_terms", "mmax", "amp", "poly_degree"});
                ival(r["reeb"], rq, "max_terms", rs.max_terms, 1, 64);
                ival(r["reeb"], rq, "mmax", rs.mmax, 0, 16);
                ival(r["reeb"], rq, "poly_degree", rs.poly_degree, 0, kMaxPolyDegree);
                amp(r["reeb"], rq, rs.amp);
                if (kind == Kind::Cosymplectic && rs.mmax != 0) schema_error(rq / "mmax", "cosymplectic kind needs mmax 0");
            }
            reeb = random_reeb(rs, rng);
        } else if (r.contains("reeb")) {
            schema_error(q / "reeb", "co-Hamiltonian kind takes no separate Reeb component");
        }
        return guarded(p, [&] { return CoIsotopy(m, kind, g, reeb, steps); });
    }

    // Derived path.
    const std::string from = as_string(j["from"], p / "from");
    if (!sc.isotopies.count(from)) throw Error(ErrorCode::ReferenceError, "unknown isotopy '" + from + "' at " + (p / "from").str());
    CoIsotopy base = sc.isotopy(from);
    int ops = 0;
    for (const char* k : {"inverse", "warp", "reparametrize", "conjugate"}) ops += j.contains(k) ? 1 : 0;
    if (ops > 1) schema_error(p, "a derived isotopy takes at most one of inverse, warp, reparametrize or conjugate");
    if (j.contains("steps")) base = base.with_steps(steps);
    if (j.contains("inverse")) {
        if (!j["inverse"].is_boolean() || !j["inverse"].get<bool>()) schema_error(p / "inverse", "expected true");
        return base.inverse_path();
    }
    if (j.contains("warp")) {
        const ReparamCurve c = curve_ref(j["warp"], p / "warp", sc);
        if (!c.maps_into_unit()) schema_error(p / "warp", "curve leaves [0, 1]");
        return guarded(p, [&] { return base.warped(c); });
    }
    if (j.contains("reparametrize")) {
        const ReparamCurve c = curve_ref(j["reparametrize"], p / "reparametrize", sc);
        return guarded(p, [&] { return reparametrize(base, c); });
    }
    if (j.contains("conjugate")) {
        const AffineMap a = parse_affine(j["conjugate"], p / "conjugate", m);
        return guarded(p, [&] { return base.conjugated(a); });
    }
    return base;
}

// ------------------------------------------------------------ command table

enum class Arg { Iso, IsoList, Curve, Couple, Num, Int, Str, Bool, Form, Point, NumList, Affine };

struct ArgSpec {
    const char* name;
    Arg type;
    bool required;
};

struct CommandSpec {
    const char* name;
    std::vector<ArgSpec> args;
};

const std::vector<CommandSpec>& command_table() {
    static const std::vector<CommandSpec> t = {
        {"length", {{"isotopy", Arg::Iso, true}, {"flavor", Arg::Str, false}, {"variant", Arg::Str, false}, {"expect", Arg::Num, false}}},
        {"distance", {{"a", Arg::Iso, true}, {"b", Arg::Iso, true}, {"flavor", Arg::Str, false}, {"expect", Arg::Num, false}}},
        {"path-distance",
         {{"a", Arg::Iso, true}, {"b", Arg::Iso, true}, {"resolution", Arg::Int, false}, {"time_nodes", Arg::Int, false},
          {"max", Arg::Num, false}}},
        {"osc", {{"isotopy", Arg::Iso, true}, {"t", Arg::Num, false}, {"expect", Arg::Num, false}}},
        {"check-cosymplectic", {{"isotopy", Arg::Iso, true}}},
        {"fact",
         {{"fact", Arg::Int, true}, {"a", Arg::Iso, true}, {"b", Arg::Iso, false}, {"conjugator", Arg::Affine, false},
          {"shift", Arg::Point, false}}},
        {"energy-profile",
         {{"isotopy", Arg::Iso, true}, {"point", Arg::Point, false}, {"nodes", Arg::Int, false}, {"slope", Arg::Num, false}}},
        {"winding", {{"isotopy", Arg::Iso, true}, {"form", Arg::Form, true}, {"point", Arg::Point, true}, {"expect", Arg::Num, false}}},
        {"mean-winding", {{"isotopy", Arg::Iso, true}, {"form", Arg::Form, true}, {"resolution", Arg::Int, false}}},
        {"flux", {{"isotopy", Arg::Iso, true}, {"form", Arg::Form, true}, {"resolution", Arg::Int, false}}},
        {"fixed-points",
         {{"isotopy", Arg::Iso, true}, {"resolution", Arg::Int, false}, {"count", Arg::Int, false}, {"min_count", Arg::Int, false}}},
        {"fix-lower-bound", {{"isotopy", Arg::Iso, true}, {"resolution", Arg::Int, false}}},
        {"winding-at-fixed-points", {{"isotopy", Arg::Iso, true}, {"resolution", Arg::Int, false}}},
        {"gamma", {{"factor", Arg::Str, false}, {"k", Arg::Int, false}}},
        {"lift-symplectic", {{"isotopy", Arg::Iso, true}, {"times", Arg::NumList, false}}},
        {"section-consistency", {{"isotopy", Arg::Iso, true}, {"t", Arg::Num, false}, {"sections", Arg::Int, false}}},
        {"boundary-flatten",
         {{"isotopy", Arg::Iso, true}, {"epsilon", Arg::Num, true}, {"resolution", Arg::Int, false}, {"time_nodes", Arg::Int, false}}},
        {"normalized-flatten",
         {{"isotopy", Arg::Iso, true}, {"epsilon", Arg::Num, true}, {"resolution", Arg::Int, false}, {"time_nodes", Arg::Int, false}}},
        {"rl2", {{"isotopy", Arg::Iso, true}, {"xi1", Arg::Curve, true}, {"xi2", Arg::Curve, true}}},
        {"rl3",
         {{"sequence", Arg::IsoList, true}, {"xi1", Arg::Curve, true}, {"xi2", Arg::Curve, true}, {"epsilon", Arg::Num, true},
          {"window", Arg::Int, false}}},
        {"cauchy", {{"sequence", Arg::IsoList, true}, {"flavor", Arg::Str, false}, {"with_c0", Arg::Bool, false}}},
        {"energy-bound", {{"target", Arg::Iso, true}, {"candidates", Arg::IsoList, true}}},
        {"rk4-order", {{"isotopy", Arg::Iso, true}, {"points", Arg::Int, false}, {"base_steps", Arg::Int, false}, {"min_order", Arg::Num, false}}},
        {"hodge", {{"form", Arg::Form, true}}},
        {"couple", {{"couple", Arg::Couple, true}}},
        {"verify-suite",
         {{"suite", Arg::Str, true}, {"trials", Arg::Int, false}, {"samples", Arg::Int, false}, {"osc_res", Arg::Int, false}}},
    };
    return t;
}

const CommandSpec* find_command(const std::string& name) {
    for (const auto& c : command_table())
        if (name == c.name) return &c;
    return nullptr;
}

void check_iso_ref(const Json& j, const Ptr& p, const Scenario& sc) {
    const std::string n = as_string(j, p);
    if (!sc.isotopies.count(n)) throw Error(ErrorCode::ReferenceError, "unknown isotopy '" + n + "' at " + p.str());
}

void validate_arguments(const CommandSpec& spec, const Json& args, const Ptr& p, const Scenario& sc) {
    if (!args.is_object()) schema_error(p, "expected an object");
    for (auto it = args.begin(); it != args.end(); ++it) {
        bool known = false;
        for (const auto& a : spec.args) known = known || it.key() == a.name;
        if (!known) schema_error(p / it.key(), "unknown argument '" + it.key() + "' for command '" + spec.name + "'");
    }
    for (const auto& a : spec.args) {
        if (!args.contains(a.name)) {
            if (a.required) schema_error(p / a.name, "missing required argument");
            continue;
        }
        const Json& v = args[a.name];
        const Ptr q = p / a.name;
        switch (a.type) {
            case Arg::Iso: check_iso_ref(v, q, sc); break;
            case Arg::IsoList: {
                std::size_t i = 0;
                for (const auto& e : as_array(v, q)) check_iso_ref(e, q / i++, sc);
                break;
            }
            case Arg::Curve:
                if (v.is_string() && !sc.curves.count(v.get<std::string>()))
                    throw Error(ErrorCode::ReferenceError, "unknown curve '" + v.get<std::string>() + "' at " + q.str());
                curve_ref(v, q, sc);
                break;
            case Arg::Couple: {
                const std::string n = as_string(v, q);
                if (!sc.couples.count(n)) throw Error(ErrorCode::ReferenceError, "unknown couple '" + n + "' at " + q.str());
                break;
            }
            case Arg::Num: as_number(v, q); break;
            case Arg::Int: as_int(v, q); break;
            case Arg::Str: as_string(v, q); break;
            case Arg::Bool:
                if (!v.is_boolean()) schema_error(q, "expected a boolean");
                break;
            case Arg::Form: parse_form(v, q, sc.model); break;
            case Arg::Point: parse_point(v, q, sc.model); break;
            case Arg::NumList: as_numbers(v, q); break;
            case Arg::Affine: parse_affine(v, q, sc.model); break;
        }
    }
}

}  // namespace

std::vector<std::string> command_names() {
    std::vector<std::string> out;
    for (const auto& c : command_table()) out.push_back(c.name);
    return out;
}

Scenario parse_scenario(const Json& doc) {
    const Ptr root;
    expect_keys(doc, root, {"schema", "name", "seed", "model", "tolerances", "couples", "curves", "isotopies", "tasks"});
    const std::string schema = as_string(required(doc, root, "schema"), root / "schema");
    if (schema != kScenarioSchema) schema_error(root / "schema", "expected \"" + std::string(kScenarioSchema) + "\"");
    Scenario sc;
    if (doc.contains("name")) sc.name = as_string(doc["name"], root / "name");
    {
        const Json& s = required(doc, root, "seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            schema_error(root / "seed", "seed must be a nonnegative integer");
        sc.seed = s.get<std::uint64_t>();
    }
    {
        const Json& m = required(doc, root, "model");
        const Ptr p = root / "model";
        expect_keys(m, p, {"n", "z_topology"});
        const long long n = as_int(required(m, p, "n"), p / "n");
        if (n < 1 || n > kMaxHalfDim) schema_error(p / "n", "n must lie in [1, " + std::to_string(kMaxHalfDim) + "]");
        sc.model.n = static_cast<int>(n);
        if (m.contains("z_topology")) {
            const std::string z = as_string(m["z_topology"], p / "z_topology");
            if (z == "line") sc.model.z_topology = ZTopology::Line;
            else if (z != "circle") schema_error(p / "z_topology", "expected 'circle' or 'line'");
        }
    }
    if (doc.contains("tolerances")) parse_tolerances(doc["tolerances"], root / "tolerances", sc.defaults, nullptr);

    std::set<std::string> seen;
    if (doc.contains("couples")) {
        const Json& arr = as_array(doc["couples"], root / "couples");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const Ptr p = root / "couples" / i;
            expect_keys(arr[i], p, {"name", "dim", "b", "L"});
            const std::string n = declared_name(arr[i], p, seen);
            const long long d = as_int(required(arr[i], p, "dim"), p / "dim");
            if (d < 1 || d > 64) schema_error(p / "dim", "dim must lie in [1, 64]");
            const auto b = as_numbers(required(arr[i], p, "b"), p / "b");
            const auto L = as_numbers(required(arr[i], p, "L"), p / "L");
            if (static_cast<long long>(b.size()) != d * d) schema_error(p / "b", "b needs dim*dim entries (row-major)");
            if (static_cast<long long>(L.size()) != d) schema_error(p / "L", "L needs dim entries");
            Eigen::MatrixXd B(d, d);
            Eigen::VectorXd Lv(d);
            for (long long r = 0; r < d; ++r) {
                Lv(r) = L[r];
                for (long long c = 0; c < d; ++c) B(r, c) = b[r * d + c];
            }
            sc.couples.emplace(n, guarded(p, [&] { return CosymplecticCouple(B, Lv); }));
        }
    }
    if (doc.contains("curves")) {
        const Json& arr = as_array(doc["curves"], root / "curves");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const Ptr p = root / "curves" / i;
            const std::string n = declared_name(arr[i], p, seen);
            sc.curves.emplace(n, parse_curve(arr[i], p, sc, n));
        }
    }
    if (doc.contains("isotopies")) {
        const Json& arr = as_array(doc["isotopies"], root / "isotopies");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const Ptr p = root / "isotopies" / i;
            const std::string n = declared_name(arr[i], p, seen);
            sc.isotopies.emplace(n, parse_isotopy(arr[i], p, sc, n));
            sc.isotopy_order.push_back(n);
        }
    }
    if (doc.contains("tasks")) {
        const Json& arr = as_array(doc["tasks"], root / "tasks");
        std::set<std::string> task_names;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const Ptr p = root / "tasks" / i;
            expect_keys(arr[i], p, {"name", "command", "arguments", "tolerances"});
            Task t;
            t.name = as_string(required(arr[i], p, "name"), p / "name");
            if (t.name.empty()) schema_error(p / "name", "names must be nonempty");
            if (!task_names.insert(t.name).second) schema_error(p / "name", "duplicate task name '" + t.name + "'");
            t.command = as_string(required(arr[i], p, "command"), p / "command");
            const CommandSpec* spec = find_command(t.command);
            if (!spec) schema_error(p / "command", "unknown command '" + t.command + "'");
            if (arr[i].contains("arguments")) t.arguments = arr[i]["arguments"];
            validate_arguments(*spec, t.arguments, p / "arguments", sc);
            t.tol = sc.defaults;
            if (arr[i].contains("tolerances")) parse_tolerances(arr[i]["tolerances"], p / "tolerances", t.tol, &t.steps_override);
            t.seed = derived_seed(sc.seed, "task/" + t.name);
            sc.tasks.push_back(std::move(t));
        }
    }
    return sc;
}

Scenario parse_scenario_text(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return parse_scenario(doc);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str());
}

// ------------------------------------------------------------------ running

Json TaskResult::to_json() const {
    Json j{{"name", name}, {"command", command}, {"pass", pass}};
    if (!error_code.empty()) j["error"] = {{"code", error_code}, {"message", error_message}};
    else j["result"] = result;
    return j;
}

Json RunReport::to_json(bool with_environment) const {
    Json j{{"schema", kReportSchema}, {"scenario", scenario}, {"seed", seed}, {"pass", pass}};
    Json arr = Json::array();
    for (const auto& t : tasks) arr.push_back(t.to_json());
    j["tasks"] = arr;
    if (with_environment) j["environment"] = environment;
    return j;
}

std::string RunReport::summary_csv() const {
    std::ostringstream o;
    o << "task,command,pass,error_code\n";
    for (const auto& t : tasks) o << t.name << ',' << t.command << ',' << (t.pass ? 1 : 0) << ',' << t.error_code << '\n';
    return o.str();
}

int exit_code(const RunReport& r) { return r.pass ? 0 : 1; }

namespace {

Flavor parse_flavor(const Json& args) {
    if (!args.contains("flavor")) return Flavor::L1inf;
    const std::string f = args["flavor"].get<std::string>();
    if (f == "L1inf") return Flavor::L1inf;
    if (f == "Linf") return Flavor::Linf;
    throw Error(ErrorCode::InvalidArgument, "flavor must be 'L1inf' or 'Linf'");
}

int int_arg(const Json& args, const char* key, int fallback, int lo, int hi) {
    if (!args.contains(key)) return fallback;
    const long long v = args[key].get<long long>();
    if (v < lo || v > hi)
        throw Error(ErrorCode::InvalidArgument,
                    std::string(key) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
}

double num_arg(const Json& args, const char* key, double fallback) {
    return args.contains(key) ? args[key].get<double>() : fallback;
}

struct Ctx {
    const Scenario& sc;
    const Task& task;
    const Json& args;

    CoIsotopy iso(const char* key) const { return resolve(args[key].get<std::string>()); }
    CoIsotopy resolve(const std::string& name) const {
        const CoIsotopy& i = sc.isotopy(name);
        return task.steps_override ? i.with_steps(task.tol.steps) : i;
    }
    std::vector<CoIsotopy> list(const char* key) const {
        std::vector<CoIsotopy> v;
        for (const auto& e : args[key]) v.push_back(resolve(e.get<std::string>()));
        return v;
    }
    ReparamCurve curve(const char* key) const { return curve_ref(args[key], Ptr{} / "arguments" / key, sc); }
    OneFormField form(const char* key) const { return parse_form(args[key], Ptr{} / "arguments" / key, sc.model); }
    Vec point(const char* key) const { return parse_point(args[key], Ptr{} / "arguments" / key, sc.model); }
    SampleOptions samples() const {
        SampleOptions o;
        o.samples = task.tol.samples;
        o.seed = task.seed;
        o.tol = task.tol.tol_residual;
        return o;
    }
};

// A measured value matches an expectation when it lies in the enclosure
// widened by tol.
void expect_in(VerificationReport& rep, const char* name, double expect, double lo, double hi, double tol) {
    const double gap = expect < lo ? lo - expect : (expect > hi ? expect - hi : 0.0);
    rep.check_le(name, gap, tol, "tol_quad");
    rep.data()["expected"] = expect;
}

TaskResult run_task(const Scenario& sc, const Task& task) {
    TaskResult out;
    out.name = task.name;
    out.command = task.command;
    const Ctx c{sc, task, task.arguments};
    const Json& a = task.arguments;
    const Tolerances& tol = task.tol;
    const std::string& cmd = task.command;
    VerificationReport rep(task.name);
    Json& res = out.result;

    if (cmd == "length") {
        const CoIsotopy iso = c.iso("isotopy");
        const Flavor fl = parse_flavor(a);
        LengthReport L;
        if (a.contains("variant")) {
            const std::string v = a["variant"].get<std::string>();
            if (v == "CH") L = length(iso, fl, tol.osc);
            else if (v == "AH") L = almost_length(iso, fl, AlmostVariant::AH, tol.osc);
            else if (v == "Aco") L = almost_length(iso, fl, AlmostVariant::Aco, tol.osc);
            else throw Error(ErrorCode::InvalidArgument, "variant must be 'CH', 'AH' or 'Aco'");
        } else {
            L = kind_length(iso, fl, tol.osc);
        }
        if (a.contains("expect")) expect_in(rep, "expected_value", a["expect"].get<double>(), L.value_lo, L.value_hi, tol.tol_quad);
        res["length"] = L.to_json();
        out.csv = L.to_csv();
    } else if (cmd == "distance") {
        const CoIsotopy x = c.iso("a"), y = c.iso("b");
        const Flavor fl = parse_flavor(a);
        const LengthReport D = x.kind() == Kind::CoHamiltonian ? distance_CH(x, y, fl, tol.osc) : distance_AH(x, y, fl, tol.osc);
        if (a.contains("expect")) expect_in(rep, "expected_value", a["expect"].get<double>(), D.value_lo, D.value_hi, tol.tol_quad);
        res["distance"] = D.to_json();
        out.csv = D.to_csv();
    } else if (cmd == "path-distance") {
        C0Options o;
        o.resolution = int_arg(a, "resolution", o.resolution, 2, 256);
        o.time_nodes = int_arg(a, "time_nodes", o.time_nodes, 2, 4097);
        const PathDistance d = path_distance(c.iso("a"), c.iso("b"), o);
        if (a.contains("max")) rep.check_le("dbar", d.value, a["max"].get<double>(), "task bound");
        res["path_distance"] = d.to_json();
    } else if (cmd == "osc") {
        const CoIsotopy iso = c.iso("isotopy");
        const double t = num_arg(a, "t", 0.0);
        if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in [0, 1]");
        const OscInterval o = osc(iso.generator_fourier(t), tol.osc);
        if (a.contains("expect")) expect_in(rep, "expected_value", a["expect"].get<double>(), o.lo, o.hi, tol.tol_quad);
        res["osc"] = {{"value", o.value}, {"lo", o.lo}, {"hi", o.hi}, {"width", o.width()}, {"resolution", o.resolution}};
    } else if (cmd == "check-cosymplectic") {
        rep.absorb(check_cosymplectic(c.iso("isotopy")));
    } else if (cmd == "fact") {
        const int f = int_arg(a, "fact", 1, 1, 10);
        const CoIsotopy x = c.iso("a");
        const SampleOptions so = c.samples();
        auto second = [&] {
            if (!a.contains("b")) throw Error(ErrorCode::InvalidArgument, "fact " + std::to_string(f) + " needs a second isotopy 'b'");
            return c.iso("b");
        };
        Rng rng(task.seed);
        switch (f) {
            case 1: rep.absorb(verify_fact1(x, so)); break;
            case 2: {
                const AffineMap rho = a.contains("conjugator") ? parse_affine(a["conjugator"], Ptr{} / "conjugator", sc.model)
                                                               : random_conjugator(sc.model, rng);
                res["conjugator"] = affine_to_json(rho);
                rep.absorb(verify_fact2(x, rho, so));
                break;
            }
            case 3: rep.absorb(verify_fact3(x, second(), so)); break;
            case 4: rep.absorb(verify_fact4(x, so)); break;
            case 5: rep.absorb(verify_fact5(x, second(), so)); break;
            case 6: rep.absorb(verify_fact6(x, so)); break;
            case 7: rep.absorb(verify_fact7(x, second(), so)); break;
            case 8: {
                const Vec shift = a.contains("shift") ? c.point("shift") : random_point(sc.model, rng);
                rep.absorb(verify_fact8(x, shift, so));
                break;
            }
            case 9: rep.absorb(verify_fact9(x, second(), so)); break;
            case 10: rep.absorb(verify_fact10(x, so)); break;
        }
    } else if (cmd == "energy-profile") {
        const CoIsotopy iso = c.iso("isotopy");
        Rng rng(task.seed);
        const Vec p = a.contains("point") ? c.point("point") : random_point(sc.model, rng);
        const int nodes = int_arg(a, "nodes", 64, 1, 4096);
        std::vector<double> times;
        for (int k = 0; k <= nodes; ++k) times.push_back(static_cast<double>(k) / nodes);
        const auto prof = orbit_energy_profile(iso, p, times);
        double gap = 0, drift = 0;
        std::ostringstream csv;
        csv.precision(17);
        csv << "t,value,predicted\n";
        for (const auto& s : prof) {
            gap = std::max(gap, std::abs(s.value - s.predicted));
            drift = std::max(drift, std::abs(s.value - prof.front().value));
            csv << s.t << ',' << s.value << ',' << s.predicted << '\n';
        }
        rep.check_le("max_profile_gap", gap, tol.tol_flow, "tol_flow");
        if (a.contains("slope")) {
            const double slope = (prof.back().value - prof.front().value) / (prof.back().t - prof.front().t);
            rep.check_le("slope_error", std::abs(slope - a["slope"].get<double>()), tol.tol_flow, "tol_flow");
            res["slope"] = slope;
        }
        res["drift"] = drift;
        res["start"] = std::vector<double>(p.begin(), p.begin() + sc.model.dim());
        out.csv = csv.str();
    } else if (cmd == "winding") {
        const double w = winding(c.iso("isotopy"), c.form("form"), c.point("point"));
        if (a.contains("expect")) expect_in(rep, "expected_value", a["expect"].get<double>(), w, w, tol.tol_quad);
        res["winding"] = w;
    } else if (cmd == "mean-winding") {
        rep.absorb(mean_winding_integral(c.iso("isotopy"), c.form("form"), int_arg(a, "resolution", tol.grid, 4, 512), tol.tol_quad));
    } else if (cmd == "flux") {
        const FluxResult f = flux_identity_residual(c.iso("isotopy"), c.form("form"), int_arg(a, "resolution", tol.grid, 4, 512));
        rep.check_le("flux_residual", f.residual, tol.tol_residual, "tol_residual");
        res["flux"] = {{"lhs", f.lhs}, {"rhs", f.rhs}, {"residual", f.residual}, {"resolution", f.resolution}, {"z_collapsed", f.z_collapsed}};
    } else if (cmd == "fixed-points") {
        const FixedPointSet s = find_fixed_points(c.iso("isotopy"), int_arg(a, "resolution", 16, 16, 512), tol.tol_newton);
        double worst = 0;
        for (const auto& comp : s.components) worst = std::max(worst, comp.residual);
        rep.check_le("max_residual", worst, tol.tol_newton, "tol_newton");
        const double n = static_cast<double>(s.components.size());
        if (a.contains("count")) {
            const double want = a["count"].get<double>();
            rep.check_le("count_above", n, want, "expected count");
            rep.check_ge("count_below", n, want, "expected count");
        }
        if (a.contains("min_count")) rep.check_ge("count", n, a["min_count"].get<double>(), "expected minimum");
        res["fixed_points"] = s.to_json();
        out.csv = s.to_csv();
    } else if (cmd == "fix-lower-bound") {
        rep.absorb(check_fix_lower_bound(c.iso("isotopy"), int_arg(a, "resolution", 16, 16, 512), tol.tol_newton));
    } else if (cmd == "winding-at-fixed-points") {
        const CoIsotopy iso = c.iso("isotopy");
        rep.absorb(winding_at_fixed_points(iso, find_fixed_points(iso, int_arg(a, "resolution", 16, 16, 512), tol.tol_newton),
                                           tol.tol_winding));
    } else if (cmd == "gamma") {
        const GammaBound g = a.contains("factor") ? gamma_bound_for_factor(a["factor"].get<std::string>(), int_arg(a, "k", 1, 1, 64))
                                                  : gamma_lower_bound(sc.model);
        res["gamma"] = g.to_json();
    } else if (cmd == "lift-symplectic") {
        const CoIsotopy iso = c.iso("isotopy");
        std::vector<double> times;
        if (a.contains("times")) times = a["times"].get<std::vector<double>>();
        else
            for (int k = 1; k <= 8; ++k) times.push_back(k / 8.0);
        for (double t : times)
            if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "times must lie in [0, 1]");
        const LiftedIsotopy li = lift_isotopy(iso);
        rep.absorb(check_symplectic(li, tol.samples, times, task.seed, tol.tol_residual));
        if (iso.kind() == Kind::CoHamiltonian)
            rep.check_le("theta_shift", max_theta_shift(li, tol.samples, times, task.seed), 1e-14, "co-Hamiltonian lift");
    } else if (cmd == "section-consistency") {
        const double t = num_arg(a, "t", 0.5);
        if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in [0, 1]");
        rep.absorb(section_consistency(c.iso("isotopy"), t, tol.samples, int_arg(a, "sections", 16, 2, 1024), task.seed));
    } else if (cmd == "boundary-flatten" || cmd == "normalized-flatten") {
        ReparamOptions o;
        o.osc_res = tol.osc;
        o.c0.resolution = int_arg(a, "resolution", o.c0.resolution, 2, 256);
        o.c0.time_nodes = int_arg(a, "time_nodes", o.c0.time_nodes, 2, 4097);
        const double eps = a["epsilon"].get<double>();
        const FlattenResult r = cmd == "boundary-flatten" ? boundary_flatten(c.iso("isotopy"), eps, o)
                                                          : normalized_flatten(c.iso("isotopy"), eps, o);
        rep.absorb(r.report);
        res["flattened"] = {{"delta", r.delta}, {"epsilon_prime", r.epsilon_prime}, {"rounds", r.rounds}};
    } else if (cmd == "rl2") {
        ReparamOptions o;
        o.osc_res = tol.osc;
        rep.absorb(verify_rl2(c.iso("isotopy"), c.curve("xi1"), c.curve("xi2"), o));
    } else if (cmd == "rl3") {
        ReparamOptions o;
        o.osc_res = tol.osc;
        rep.absorb(verify_rl3(c.list("sequence"), c.curve("xi1"), c.curve("xi2"), a["epsilon"].get<double>(), o,
                              int_arg(a, "window", 8, 1, 1024)));
    } else if (cmd == "cauchy") {
        const bool with_c0 = a.contains("with_c0") ? a["with_c0"].get<bool>() : true;
        res["cauchy"] = cauchy_report(c.list("sequence"), parse_flavor(a), {}, with_c0).to_json();
    } else if (cmd == "energy-bound") {
        const EnergyBound e = energy_upper_bound(c.iso("target"), c.list("candidates"), tol.tol_flow * 100);
        Json lengths = Json::array();
        for (double l : e.lengths) lengths.push_back(std::isnan(l) ? Json(nullptr) : Json(l));
        res["energy_bound"] = {{"value", e.value}, {"best", a["candidates"][e.best]}, {"lengths", lengths}, {"c0_mismatch", e.c0_mismatch}};
    } else if (cmd == "rk4-order") {
        const CoIsotopy iso = c.iso("isotopy");
        Rng rng(task.seed);
        std::vector<Vec> pts;
        for (int i = 0, n = int_arg(a, "points", 8, 1, 4096); i < n; ++i) pts.push_back(random_point(sc.model, rng));
        const OrderResult r = rk4_order(iso, pts, int_arg(a, "base_steps", 16, 2, 1 << 16));
        if (r.exact) rep.flag("order", true, "differences at rounding level");
        else rep.check_ge("order", r.order, num_arg(a, "min_order", 3.8), "minimum order");
        res["order"] = {{"order", r.order}, {"e1", r.e1}, {"e2", r.e2}, {"exact", r.exact}};
    } else if (cmd == "hodge") {
        const OneFormField f = c.form("form");
        if (!f.is_closed()) throw Error(ErrorCode::NotClosed, "Hodge split needs a closed form");
        const HodgeSplit s = hodge_split(f);
        const double err = hodge_reconstruction_error(f, s);
        rep.check_le("reconstruction_error", err, 1e-13, "exact on coefficients");
        Json h = Json::array();
        for (const auto& comp : s.harmonic.components) h.push_back(comp.mean());
        res["hodge"] = {{"harmonic", h}, {"primitive_terms", s.primitive.canonical().terms().size()}};
    } else if (cmd == "couple") {
        const CosymplecticCouple& cp = sc.couples.at(a["couple"].get<std::string>());
        const bool ok = is_cosymplectic(cp);
        res["is_cosymplectic"] = ok;
        const PairingMatrix P = build_pairing(cp);
        Json rows = Json::array();
        for (int r = 0; r < P.A.rows(); ++r) {
            Json row = Json::array();
            for (int k = 0; k < P.A.cols(); ++k) row.push_back(P.A(r, k));
            rows.push_back(row);
        }
        res["pairing"] = rows;
        try {
            const Eigen::VectorXd xi = reeb_vector(cp);
            res["reeb_vector"] = std::vector<double>(xi.data(), xi.data() + xi.size());
        } catch (const Error& e) {
            res["reeb_vector"] = nullptr;
            res["reeb_error"] = error_name(e.code());
        }
    } else if (cmd == "verify-suite") {
        SuiteOptions o;
        o.seed = task.seed;
        o.steps = tol.steps;
        o.trials = int_arg(a, "trials", 0, 0, 100000);
        o.samples = int_arg(a, "samples", 0, 0, 100000);
        o.osc_res = int_arg(a, "osc_res", 0, 0, 4096);
        rep.absorb(run_suite(a["suite"].get<std::string>(), o));
    }
    res["report"] = rep.to_json();
    if (out.csv.empty()) out.csv = rep.to_csv();
    out.pass = rep.pass();
    return out;
}

Json environment_stamp(const Scenario& sc, const std::vector<TaskResult>& tasks, double seconds) {
    Json times = Json::object();
    for (const auto& t : tasks) times[t.name] = t.seconds;
    return {{"version", kVersion},
#if defined(__VERSION__)
            {"compiler", __VERSION__},
#endif
            {"cxx_standard", static_cast<long>(__cplusplus)},
            {"threads", worker_count()},
            {"isa", kernels::isa_name(kernels::active_isa())},
            {"seed", sc.seed},
            {"model", model_to_json(sc.model)},
            {"defaults", sc.defaults.to_json()},
            {"wall_seconds", seconds},
            {"task_seconds", times}};
}

}  // namespace

RunReport run_scenario(const Scenario& sc, const std::vector<std::string>& only) {
    for (const auto& f : only) {
        bool hit = false;
        for (const auto& t : sc.tasks) hit = hit || t.name == f || t.command == f;
        if (!hit) throw Error(ErrorCode::ReferenceError, "no task or command named '" + f + "'");
    }
    RunReport r;
    r.scenario = sc.name;
    r.seed = sc.seed;
    const auto start = std::chrono::steady_clock::now();
    for (const auto& t : sc.tasks) {
        if (!only.empty()) {
            bool keep = false;
            for (const auto& f : only) keep = keep || t.name == f || t.command == f;
            if (!keep) continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        TaskResult tr;
        try {
            tr = run_task(sc, t);
        } catch (const Error& e) {
            tr = TaskResult{};
            tr.error_code = error_name(e.code());
            tr.error_message = e.what();
        } catch (const std::exception& e) {
            tr = TaskResult{};
            tr.error_code = "InternalError";
            tr.error_message = e.what();
        }
        tr.name = t.name;
        tr.command = t.command;
        if (!tr.error_code.empty()) {
            tr.pass = false;
            std::string msg = tr.error_message;
            std::replace(msg.begin(), msg.end(), '"', '\'');
            tr.csv = "error_code,message\n" + tr.error_code + ",\"" + msg + "\"\n";
        }
        tr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.pass = r.pass && tr.pass;
        r.tasks.push_back(std::move(tr));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.environment = environment_stamp(sc, r.tasks, secs);
    return r;
}

RunReport run_scenario(const Scenario& sc, const std::string& only) {
    return only.empty() ? run_scenario(sc, std::vector<std::string>{}) : run_scenario(sc, std::vector<std::string>{only});
}

}  // namespace cokinetic
