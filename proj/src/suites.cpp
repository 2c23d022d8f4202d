#include "cokinetic/suites.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "cokinetic/algebra.hpp"
#include "cokinetic/fixpoints.hpp"
#include "cokinetic/lift.hpp"
#include "cokinetic/norms.hpp"
#include "cokinetic/random.hpp"
#include "cokinetic/reparam.hpp"
#include "cokinetic/scenario.hpp"

namespace cokinetic {

namespace {

int pick(int v, int fallback) { return v > 0 ? v : fallback; }

// Folds per-trial reports into worst-case checks. A check whose bound is the
// same in every trial keeps its relation and reports the worst value; one
// with a trial-dependent bound reports its failure count instead.
class Trials {
public:
    explicit Trials(std::string name) : out_(std::move(name)) {}

    void add(int trial, const VerificationReport& r) {
        for (const Check& c : r.checks()) {
            auto [it, fresh] = acc_.try_emplace(c.name);
            Acc& a = it->second;
            if (fresh) {
                order_.push_back(c.name);
                a.proto = c;
                a.worst = c.value;
                a.worst_trial = trial;
            } else {
                if (c.bound != a.proto.bound || c.relation != a.proto.relation) a.varying = true;
                const bool lower = c.relation == ">=";
                if (lower ? c.value < a.worst : c.value > a.worst) {
                    a.worst = c.value;
                    a.worst_trial = trial;
                }
            }
            ++a.count;
            if (!c.pass) {
                ++a.fails;
                if (a.first_fail < 0) a.first_fail = trial;
            }
        }
    }

    // Runs fn and records an error instead of propagating it.
    template <typename F>
    void guard(int trial, const std::string& what, F&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            ++errors_;
            if (error_log_.size() < 8)
                error_log_.push_back({{"trial", trial}, {"check", what}, {"message", e.what()}});
        }
    }

    VerificationReport finish(int trials) {
        Json worst = Json::object();
        for (const auto& name : order_) {
            const Acc& a = acc_.at(name);
            if (a.varying || a.proto.relation == "flag") {
                out_.check_le(name + ".failures", a.fails, 0.0, "all trials");
            } else {
                Check c = a.proto;
                if (c.relation == "<=") out_.check_le(name, a.worst, c.bound, c.tolerance_source);
                else if (c.relation == "<") out_.check_lt(name, a.worst, c.bound, c.tolerance_source);
                else out_.check_ge(name, a.worst, c.bound, c.tolerance_source);
            }
            Json w{{"worst", a.worst}, {"worst_trial", a.worst_trial}, {"count", a.count}, {"failures", a.fails}};
            if (a.first_fail >= 0) w["first_failing_trial"] = a.first_fail;
            worst[name] = w;
        }
        out_.check_le("errors", errors_, 0.0, "no trial may throw");
        out_.data()["trials"] = trials;
        out_.data()["per_check"] = worst;
        if (!error_log_.empty()) out_.data()["error_log"] = error_log_;
        return out_;
    }

    VerificationReport& extra() { return out_; }

private:
    struct Acc {
        Check proto;
        double worst = 0.0;
        int worst_trial = -1;
        int count = 0;
        int fails = 0;
        int first_fail = -1;
        bool varying = false;
    };
    VerificationReport out_;
    std::map<std::string, Acc> acc_;
    std::vector<std::string> order_;
    int errors_ = 0;
    Json error_log_ = Json::array();
};

// Renames a report so its checks land under `prefix/` in the aggregate.
VerificationReport prefixed(const std::string& prefix, const VerificationReport& r) {
    VerificationReport o;
    VerificationReport wrapped(prefix);
    wrapped.absorb(r);
    for (Check c : wrapped.checks()) {
        if (c.relation == "<=") o.check_le(c.name, c.value, c.bound, c.tolerance_source);
        else if (c.relation == "<") o.check_lt(c.name, c.value, c.bound, c.tolerance_source);
        else if (c.relation == ">=") o.check_ge(c.name, c.value, c.bound, c.tolerance_source);
        else o.flag(c.name, c.pass, c.tolerance_source);
    }
    return o;
}

std::vector<double> eighths() {
    std::vector<double> t;
    for (int k = 1; k <= 8; ++k) t.push_back(k / 8.0);
    return t;
}

Generator single_term(const ModelSpec& m, std::initializer_list<std::pair<Freq, std::pair<double, double>>> terms) {
    Generator g;
    g.dim = m.dim();
    for (const auto& [k, ab] : terms) {
        TimeTerm t;
        t.k = k;
        t.a = PolyT::constant(ab.first);
        t.b = PolyT::constant(ab.second);
        g.terms.push_back(t);
    }
    return g;
}

Freq freq(int kx, int ky) {
    Freq k{};
    k[0] = kx;
    k[1] = ky;
    return k;
}

OneFormField basis_form(const ModelSpec& m, int j) {
    std::vector<double> c(m.dim(), 0.0);
    c[j] = 1.0;
    return OneFormField::constant(c);
}

}  // namespace

VerificationReport suite_algebra(const SuiteOptions& opt) {
    const int trials = pick(opt.trials, 100);
    const ModelSpec m;
    RandomGeneratorSpec spec;
    spec.max_terms = 6;
    spec.amp = 1.0;
    SampleOptions so;
    so.samples = pick(opt.samples, 64);
    Rng rng(opt.seed);
    Trials agg("algebra");
    for (int i = 0; i < trials; ++i) {
        const CoIsotopy a = random_cohamiltonian(m, spec, rng, opt.steps);
        const CoIsotopy b = random_cohamiltonian(m, spec, rng, opt.steps);
        const AffineMap rho = random_conjugator(m, rng);
        so.seed = opt.seed + static_cast<std::uint64_t>(i);
        agg.guard(i, "fact1", [&] { agg.add(i, prefixed("fact1", verify_fact1(a, so))); });
        agg.guard(i, "fact2", [&] { agg.add(i, prefixed("fact2", verify_fact2(a, rho, so))); });
        agg.guard(i, "fact3", [&] { agg.add(i, prefixed("fact3", verify_fact3(a, b, so))); });
        agg.guard(i, "fact4", [&] { agg.add(i, prefixed("fact4", verify_fact4(a, so))); });
        agg.guard(i, "fact5", [&] { agg.add(i, prefixed("fact5", verify_fact5(a, b, so))); });
    }
    agg.extra().data()["samples"] = so.samples;
    agg.extra().data()["steps"] = opt.steps;
    return agg.finish(trials);
}

VerificationReport suite_conformal(const SuiteOptions& opt) {
    const int trials = pick(opt.trials, 50);
    const ModelSpec m;
    RandomGeneratorSpec gs;
    RandomReebSpec rs;
    SampleOptions so;
    so.samples = pick(opt.samples, 32);
    Rng rng(opt.seed);
    // c(z, t) must actually depend on z.
    auto reeb = [&] {
        for (;;) {
            ReebComponent r = random_reeb(rs, rng);
            if (!r.z_independent()) return r;
        }
    };
    Trials agg("conformal");
    for (int i = 0; i < trials; ++i) {
        const CoIsotopy a(m, Kind::AlmostCoHamiltonian, random_generator(m, gs, rng), reeb(), opt.steps);
        const CoIsotopy b(m, Kind::AlmostCoHamiltonian, random_generator(m, gs, rng), reeb(), opt.steps);
        const Vec shift = random_point(m, rng);
        so.seed = opt.seed + static_cast<std::uint64_t>(i);
        agg.guard(i, "fact6", [&] { agg.add(i, prefixed("fact6", verify_fact6(a, so))); });
        agg.guard(i, "fact7", [&] { agg.add(i, prefixed("fact7", verify_fact7(a, b, so))); });
        agg.guard(i, "fact8", [&] { agg.add(i, prefixed("fact8", verify_fact8(a, shift, so))); });
        agg.guard(i, "fact9", [&] { agg.add(i, prefixed("fact9", verify_fact9(a, b, so))); });
        agg.guard(i, "fact10", [&] { agg.add(i, prefixed("fact10", verify_fact10(a, so))); });
    }
    agg.extra().data()["samples"] = so.samples;
    agg.extra().data()["steps"] = opt.steps;
    return agg.finish(trials);
}

VerificationReport suite_energy(const SuiteOptions& opt) {
    const int trials = pick(opt.trials, 10);
    const int points = pick(opt.samples, 4);
    constexpr double kTol = 1e-8;
    std::vector<double> times;
    for (int k = 0; k <= 64; ++k) times.push_back(k / 64.0);
    Rng rng(opt.seed);
    Trials agg("energy");

    const ModelSpec circle;
    RandomGeneratorSpec spec;
    spec.poly_degree = 0;
    for (int i = 0; i < trials; ++i) {
        const CoIsotopy iso = random_cohamiltonian(circle, spec, rng, opt.steps);
        for (int p = 0; p < points; ++p) {
            const Vec x = random_point(circle, rng);
            agg.guard(i, "circle", [&] {
                const auto prof = orbit_energy_profile(iso, x, times);
                double drift = 0;
                for (const auto& s : prof) drift = std::max(drift, std::abs(s.value - prof.front().value));
                VerificationReport r;
                r.check_le("circle/max_drift", drift, kTol, "energy drift");
                agg.add(i, r);
            });
        }
    }

    // G = sin(y) + 0.3 z on the line model gains eta(X)^2 = 0.09 per unit time.
    ModelSpec line;
    line.z_topology = ZTopology::Line;
    Generator g = single_term(line, {{freq(0, 1), {0.0, 1.0}}});
    g.z_slope = PolyT::constant(0.3);
    const CoIsotopy iso(line, Kind::CoHamiltonian, g, std::nullopt, opt.steps);
    for (int p = 0; p < points; ++p) {
        const Vec x = random_point(line, rng);
        agg.guard(p, "line", [&] {
            const auto prof = orbit_energy_profile(iso, x, times);
            double gap = 0;
            for (const auto& s : prof) gap = std::max(gap, std::abs(s.value - s.predicted));
            const double slope = (prof.back().value - prof.front().value) / (prof.back().t - prof.front().t);
            VerificationReport r;
            r.check_le("line/slope_error", std::abs(slope - 0.09), kTol, "profile slope 0.09");
            r.check_le("line/max_profile_gap", gap, kTol, "predicted profile");
            agg.add(p, r);
        });
    }
    agg.extra().data()["points_per_scenario"] = points;
    return agg.finish(trials);
}

VerificationReport suite_lengths(const SuiteOptions& opt) {
    const int trials = pick(opt.trials, 10);
    const int res = pick(opt.osc_res, 64);
    constexpr double kTol = 1e-6, kSlack = 1e-8;
    const ModelSpec m;
    RandomGeneratorSpec spec;
    Rng rng(opt.seed);
    Trials agg("lengths");
    for (int i = 0; i < trials; ++i) {
        const CoIsotopy a = random_cohamiltonian(m, spec, rng, opt.steps);
        const AffineMap rho = random_conjugator(m, rng);
        const ReparamCurve zeta = random_monotone_curve(rng);
        agg.guard(i, "axioms", [&] {
            VerificationReport r;
            for (Flavor f : {Flavor::L1inf, Flavor::Linf}) {
                const std::string tag = flavor_name(f);
                const double l = length(a, f, res).value;
                r.check_le(tag + "/symmetry", std::abs(length(a.inverse_path(), f, res).value - l), kTol, "symmetry");
                r.check_le(tag + "/conjugation", std::abs(length(a.conjugated(rho), f, res).value - l), kTol, "conjugation");
            }
            const CoIsotopy w = reparametrize(a, zeta);
            r.check_le("L1inf/reparametrization",
                       std::abs(length(w, Flavor::L1inf, res).value - length(a, Flavor::L1inf, res).value), kTol,
                       "increasing reparametrization");
            double max_rate = 0;
            for (int k = 0; k <= 4096; ++k) max_rate = std::max(max_rate, zeta.deriv(k / 4096.0));
            const double lw = length(w, Flavor::Linf, res).value, lb = max_rate * length(a, Flavor::Linf, res).value;
            r.check_le("Linf/reparametrization_excess", lw - lb, kSlack, "max zeta' bound");
            agg.add(i, r);
        });
    }
    // F = sin(y) has osc 2 at every time.
    agg.guard(-1, "anchor", [&] {
        const CoIsotopy s(m, Kind::CoHamiltonian, single_term(m, {{freq(0, 1), {0.0, 1.0}}}), std::nullopt, opt.steps);
        VerificationReport r;
        for (Flavor f : {Flavor::L1inf, Flavor::Linf}) {
            const LengthReport L = length(s, f, 256);
            const std::string tag = std::string("anchor/") + flavor_name(f);
            r.flag(tag + "/contains_2", L.value_lo <= 2.0 && 2.0 <= L.value_hi, "certified enclosure");
            r.check_le(tag + "/width", L.value_hi - L.value_lo, 1e-3, "enclosure width at 256");
            agg.extra().data()[tag] = {{"value", L.value}, {"lo", L.value_lo}, {"hi", L.value_hi}};
        }
        agg.add(-1, r);
    });
    agg.extra().data()["osc_resolution"] = res;
    return agg.finish(trials);
}

VerificationReport suite_rl2(const SuiteOptions& opt) {
    const int trials = pick(opt.trials, 100);
    const ModelSpec m;
    RandomGeneratorSpec spec;
    ReparamOptions ro;
    ro.osc_res = pick(opt.osc_res, 64);
    Rng rng(opt.seed);
    Trials agg("rl2");
    double worst_ratio = 0;
    for (int i = 0; i < trials; ++i) {
        const CoIsotopy a = random_cohamiltonian(m, spec, rng, opt.steps);
        const ReparamCurve x1 = random_monotone_curve(rng), x2 = random_monotone_curve(rng);
        agg.guard(i, "rl2", [&] {
            const VerificationReport r = verify_rl2(a, x1, x2, ro);
            const double lhs = r.data()["lhs"].get<double>(), rhs = r.data()["rhs"].get<double>();
            if (rhs > 0) worst_ratio = std::max(worst_ratio, lhs / rhs);
            agg.add(i, r);
        });
    }
    agg.extra().data()["worst_ratio"] = worst_ratio;
    agg.extra().data()["osc_resolution"] = ro.osc_res;
    return agg.finish(trials);
}

VerificationReport suite_reparam(const SuiteOptions& opt) {
    const int trials = pick(opt.trials, 10);
    const ModelSpec m;
    RandomGeneratorSpec spec;
    ReparamOptions ro;
    ro.osc_res = pick(opt.osc_res, 64);
    ro.c0.resolution = 6;
    ro.c0.time_nodes = 13;
    Rng rng(opt.seed);
    Trials agg("reparam");
    Json constants = Json::array();
    for (int i = 0; i < trials; ++i) {
        const CoIsotopy a = random_cohamiltonian(m, spec, rng, opt.steps);
        agg.guard(i, "constructions", [&] {
            ReparamOptions o = ro;
            o.lip = lipschitz_constants(a, o.lip_pairs, o.osc_res);
            o.l0 = flow_lipschitz(a, o.c0.resolution, o.c0.time_nodes);
            for (double eps : {0.1, 0.01}) {
                const std::string tag = eps == 0.1 ? "eps0.1/" : "eps0.01/";
                agg.guard(i, tag + "boundary", [&] { agg.add(i, prefixed(tag + "boundary", boundary_flatten(a, eps, o).report)); });
                agg.guard(i, tag + "normalized", [&] {
                    const FlattenResult r = normalized_flatten(a, eps, o);
                    if (eps == 0.1) constants.push_back(r.report.data()["C"]);
                    agg.add(i, prefixed(tag + "normalized", r.report));
                });
            }
        });
    }
    agg.extra().data()["measured_C"] = constants;
    agg.extra().data()["c0_grid"] = {{"resolution", ro.c0.resolution}, {"time_nodes", ro.c0.time_nodes}};
    return agg.finish(trials);
}

VerificationReport suite_lift(const SuiteOptions& opt) {
    const int trials = pick(opt.trials, 20);
    const int samples = pick(opt.samples, 32);
    const ModelSpec m;
    RandomGeneratorSpec gs;
    RandomReebSpec rs;
    rs.mmax = 0;
    const std::vector<double> times = eighths();
    Rng rng(opt.seed);
    Trials agg("lift");
    for (int i = 0; i < trials; ++i) {
        const bool coham = i % 2 == 0;
        const CoIsotopy iso = coham ? random_cohamiltonian(m, gs, rng, opt.steps)
                                    : CoIsotopy(m, Kind::Cosymplectic, random_generator(m, gs, rng), random_reeb(rs, rng), opt.steps);
        const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(i);
        agg.guard(i, "symplectic", [&] {
            const LiftedIsotopy li = lift_isotopy(iso);
            VerificationReport r;
            const VerificationReport s = check_symplectic(li, samples, times, seed);
            r.check_le("max_symplectic_residual", s.max_value("max_symplectic_residual"), 1e-5, "suite tolerance");
            if (coham) {
                r.check_le("coHamiltonian/theta_shift", max_theta_shift(li, samples, times, seed), 1e-14, "identity theta part");
                r.absorb(prefixed("coHamiltonian", section_consistency(iso, 0.5, 8, 16, seed)));
            }
            agg.add(i, r);
        });
    }
    agg.extra().data()["samples"] = samples;
    agg.extra().data()["times"] = times;
    return agg.finish(trials);
}

VerificationReport suite_fixpoints(const SuiteOptions& opt) {
    const int trials = pick(opt.trials, 25);
    const ModelSpec m;
    constexpr double kNewton = 1e-10;
    Trials agg("fixpoints");
    agg.guard(-1, "anchor", [&] {
        const CoIsotopy a(m, Kind::CoHamiltonian, single_term(m, {{freq(1, 0), {0.1, 0.0}}, {freq(0, 1), {0.1, 0.0}}}),
                          std::nullopt, opt.steps);
        const FixedPointSet s = find_fixed_points(a, 16, kNewton);
        double worst = 0;
        for (const auto& c : s.components) worst = std::max(worst, c.residual);
        VerificationReport r;
        r.check_le("anchor/components_above_4", static_cast<double>(s.components.size()), 4.0, "exactly 4");
        r.check_ge("anchor/components_below_4", static_cast<double>(s.components.size()), 4.0, "exactly 4");
        r.check_le("anchor/max_residual", worst, kNewton, "newton tolerance");
        agg.extra().data()["anchor"] = s.to_json();
        agg.add(-1, r);
    });
    RandomGeneratorSpec spec;
    spec.max_terms = 3;
    spec.amp = 0.1;
    spec.poly_degree = 0;
    Rng rng(opt.seed);
    Json counts = Json::array();
    for (int i = 0; i < trials; ++i) {
        const CoIsotopy a = random_cohamiltonian(m, spec, rng, opt.steps);
        agg.guard(i, "random", [&] {
            const FixedPointSet s = find_fixed_points(a, 16, kNewton);
            double worst = 0;
            for (const auto& c : s.components) worst = std::max(worst, c.residual);
            VerificationReport r;
            r.check_ge("random/components", static_cast<double>(s.components.size()), 1.0, "gamma lower bound");
            r.check_le("random/max_residual", worst, kNewton, "newton tolerance");
            counts.push_back(s.components.size());
            agg.add(i, r);
        });
    }
    agg.extra().data()["component_counts"] = counts;
    agg.extra().data()["gamma"] = gamma_lower_bound(m).to_json();
    return agg.finish(trials);
}

VerificationReport suite_winding(const SuiteOptions& opt) {
    const int trials = pick(opt.trials, 4);
    const int res = pick(opt.osc_res, 64);
    const ModelSpec m;
    Rng rng(opt.seed);
    RandomGeneratorSpec small;
    small.max_terms = 3;
    small.amp = 0.1;
    small.poly_degree = 0;
    RandomGeneratorSpec general;
    Trials agg("winding");
    for (int i = 0; i < trials; ++i) {
        // Trial 0 is the two-well anchor; the last trial is time dependent
        // with unit amplitudes, the others small and autonomous.
        const bool anchor = i == 0, rough = trials > 1 && i == trials - 1;
        const CoIsotopy iso =
            anchor ? CoIsotopy(m, Kind::CoHamiltonian, single_term(m, {{freq(1, 0), {0.1, 0.0}}, {freq(0, 1), {0.1, 0.0}}}),
                               std::nullopt, opt.steps)
                   : random_cohamiltonian(m, rough ? general : small, rng, opt.steps);
        for (int j = 0; j < 2 * m.n; ++j) {
            const OneFormField alpha = basis_form(m, j);
            const std::string tag = j < m.n ? "dx" : "dy";
            agg.guard(i, tag + "/mean", [&] { agg.add(i, prefixed(tag, mean_winding_integral(iso, alpha, res, 1e-5))); });
            agg.guard(i, tag + "/flux", [&] {
                VerificationReport r;
                r.check_le(tag + "/flux_residual", flux_identity_residual(iso, alpha, res).residual, 1e-5, "flux identity");
                agg.add(i, r);
            });
        }
        if (!rough)
            agg.guard(i, "fixed", [&] { agg.add(i, prefixed("fixed_points", winding_at_fixed_points(iso, 1e-6))); });
    }
    agg.extra().data()["grid"] = res;
    return agg.finish(trials);
}

VerificationReport suite_infrastructure(const SuiteOptions& opt) {
    const int trials = pick(opt.trials, 5);
    const ModelSpec m;
    Rng rng(opt.seed);
    Trials agg("infrastructure");

    agg.guard(-1, "determinism", [&] {
        Json doc = {
            {"schema", kScenarioSchema},
            {"name", "determinism"},
            {"seed", opt.seed},
            {"model", {{"n", 1}, {"z_topology", "circle"}}},
            {"tolerances", {{"osc", 64}, {"samples", 8}}},
            {"curves", Json::array({{{"name", "zeta"}, {"kind", "random-monotone"}, {"params", Json::object()}}})},
            {"isotopies",
             Json::array({{{"name", "R"}, {"random", {{"kind", "coHamiltonian"}, {"max_terms", 3}}}, {"steps", 128}},
                          {{"name", "A"}, {"random", {{"kind", "almostCoHamiltonian"}}}, {"steps", 128}},
                          {{"name", "W"}, {"from", "R"}, {"warp", "zeta"}}})},
            {"tasks", Json::array({{{"name", "len"}, {"command", "length"}, {"arguments", {{"isotopy", "W"}}}},
                                   {{"name", "f1"}, {"command", "fact"}, {"arguments", {{"fact", 1}, {"a", "R"}}}},
                                   {{"name", "f2"}, {"command", "fact"}, {"arguments", {{"fact", 2}, {"a", "R"}}}},
                                   {{"name", "f9"}, {"command", "fact"}, {"arguments", {{"fact", 9}, {"a", "A"}, {"b", "A"}}}},
                                   {{"name", "order"}, {"command", "rk4-order"}, {"arguments", {{"isotopy", "R"}}}}})}};
        const std::string text = doc.dump();
        const std::string first = run_scenario(parse_scenario_text(text)).to_json(false).dump();
        const std::string second = run_scenario(parse_scenario_text(text)).to_json(false).dump();
        // Serialize the random isotopy and declare it explicitly.
        const Scenario sc = parse_scenario_text(text);
        Json decl = isotopy_to_json(sc.isotopy("R"));
        decl["name"] = "R";
        doc["isotopies"][0] = decl;
        const std::string third = run_scenario(parse_scenario(doc)).to_json(false).dump();
        VerificationReport r;
        r.flag("determinism/repeat_identical", first == second, "byte-identical reports");
        r.flag("determinism/roundtrip_identical", first == third, "serialized isotopy reproduces the report");
        agg.add(-1, r);
    });

    RandomGeneratorSpec spec;
    Json orders = Json::array();
    for (int i = 0; i < trials; ++i) {
        const CoIsotopy a = random_cohamiltonian(m, spec, rng, opt.steps);
        std::vector<Vec> pts;
        for (int k = 0; k < 4; ++k) pts.push_back(random_point(m, rng));
        agg.guard(i, "order", [&] {
            const OrderResult o = rk4_order(a, pts, 16);
            VerificationReport r;
            r.check_ge("rk4_order", o.exact ? 4.0 : o.order, 3.8, "observed order");
            orders.push_back(o.order);
            agg.add(i, r);
        });
        // Closed form: harmonic constants plus the differential of a random scalar.
        const FourierScalar F = random_generator(m, spec, rng).at(0.37);
        OneFormField alpha = OneFormField::exact(F);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& c : alpha.components) c = c + FourierScalar::constant(m.dim(), u(rng));
        agg.guard(i, "hodge", [&] {
            VerificationReport r;
            r.check_le("hodge_reconstruction", hodge_reconstruction_error(alpha, hodge_split(alpha)), 1e-13, "exact");
            agg.add(i, r);
        });
    }
    agg.extra().data()["orders"] = orders;
    return agg.finish(trials);
}

std::vector<std::string> suite_names() {
    return {"algebra", "conformal", "energy", "lengths", "rl2", "reparam", "lift", "fixpoints", "winding", "infrastructure"};
}

VerificationReport run_suite(const std::string& name, const SuiteOptions& opt) {
    if (name == "algebra") return suite_algebra(opt);
    if (name == "conformal") return suite_conformal(opt);
    if (name == "energy") return suite_energy(opt);
    if (name == "lengths") return suite_lengths(opt);
    if (name == "rl2") return suite_rl2(opt);
    if (name == "reparam") return suite_reparam(opt);
    if (name == "lift") return suite_lift(opt);
    if (name == "fixpoints") return suite_fixpoints(opt);
    if (name == "winding") return suite_winding(opt);
    if (name == "infrastructure") return suite_infrastructure(opt);
    throw Error(ErrorCode::ReferenceError, "unknown suite '" + name + "'");
}

}  // namespace cokinetic
