// Acceptance run: one line per criterion with the tightest check and the
// wall time against its budget. Pass a subset of criterion numbers to run
// only those. Exit 0 iff every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "cokinetic/common.hpp"
#include "cokinetic/suites.hpp"

using namespace cokinetic;

namespace {

struct Criterion {
    int id;
    const char* suite;
    const char* what;
    double budget_seconds;
};

const std::vector<Criterion> kCriteria = {
    {1, "algebra", "group facts, 100 trials, residual <= 1e-5", 60},
    {2, "conformal", "conformal facts, 50 trials, residual <= 1e-5", 60},
    {3, "energy", "energy drift <= 1e-8, line slope 0.09 within 1e-8", 5},
    {4, "lengths", "length invariances <= 1e-6, Linf bound, sin y anchor", 30},
    {5, "rl2", "reparameterization lemma, 100 trials, no failures", 120},
    {6, "reparam", "flattening lemmas, eps in {0.1, 0.01}, 10 generators", 60},
    {7, "lift", "lifted symplectic residual <= 1e-5, sections, theta shift <= 1e-14", 60},
    {8, "fixpoints", "two-well count 4, residual <= 1e-10, 25 random >= 1", 90},
    {9, "winding", "mean winding and flux <= 1e-5, fixed-point windings <= 1e-6", 90},
    {10, "infrastructure", "byte-identical reports, RK4 order >= 3.8, Hodge <= 1e-13", 30},
};

// The check closest to (or furthest past) its bound, as "name value rel bound".
std::string tightest(const VerificationReport& rep) {
    const Check* best = nullptr;
    double best_ratio = -1.0;
    for (const auto& c : rep.checks()) {
        if (c.relation == "flag") {
            if (!c.pass) return c.name + " flag failed";
            continue;
        }
        double ratio = 0.0;
        if (c.relation == "<=" || c.relation == "<") ratio = c.bound > 0 ? c.value / c.bound : (c.value > 0 ? 1e300 : 0.0);
        else ratio = c.value > 0 ? c.bound / c.value : (c.bound > 0 ? 1e300 : 0.0);
        if (!c.pass) ratio = 1e300;
        if (std::isnan(ratio) || ratio > best_ratio) {
            best_ratio = std::isnan(ratio) ? 1e300 : ratio;
            best = &c;
        }
    }
    if (!best) return "no checks";
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s %.3g %s %.3g", best->name.c_str(), best->value, best->relation.c_str(), best->bound);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failed = 0, run = 0;
    std::printf("acceptance: %d worker threads\n", worker_count());
    for (const auto& c : kCriteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        ++run;
        const auto t0 = std::chrono::steady_clock::now();
        VerificationReport rep;
        std::string error;
        try {
            rep = run_suite(c.suite);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool checks_ok = error.empty() && rep.pass();
        const bool time_ok = secs <= c.budget_seconds;
        const bool ok = checks_ok && time_ok;
        failed += !ok;
        std::printf("[%s] %2d %-14s %s | checks %zu, failed %d | tightest: %s | %.1f s (budget %.0f s%s)\n",
                    ok ? "PASS" : "FAIL", c.id, c.suite, c.what, rep.checks().size(), rep.failures(),
                    error.empty() ? tightest(rep).c_str() : error.c_str(), secs, c.budget_seconds,
                    time_ok ? "" : ", over budget");
        std::fflush(stdout);
    }
    std::printf("acceptance: %d of %d criteria passed\n", run - failed, run);
    return failed == 0 ? 0 : 1;
}
