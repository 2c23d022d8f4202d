#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cokinetic/report.hpp"

namespace cokinetic {

// Zero fields keep the suite's own default.
struct SuiteOptions {
    int trials = 0;
    int samples = 0;
    int osc_res = 0;
    int steps = 1024;
    std::uint64_t seed = 20240611;
};

// Packaged property suites. Each aggregates its trials into one report:
// per check the worst value over trials, plus failure and error counts.
VerificationReport suite_algebra(const SuiteOptions& opt = {});
VerificationReport suite_conformal(const SuiteOptions& opt = {});
VerificationReport suite_energy(const SuiteOptions& opt = {});
VerificationReport suite_lengths(const SuiteOptions& opt = {});
VerificationReport suite_rl2(const SuiteOptions& opt = {});
VerificationReport suite_reparam(const SuiteOptions& opt = {});
VerificationReport suite_lift(const SuiteOptions& opt = {});
VerificationReport suite_fixpoints(const SuiteOptions& opt = {});
VerificationReport suite_winding(const SuiteOptions& opt = {});
VerificationReport suite_infrastructure(const SuiteOptions& opt = {});

std::vector<std::string> suite_names();
// Throws ReferenceError for an unknown name.
VerificationReport run_suite(const std::string& name, const SuiteOptions& opt = {});

}  // namespace cokinetic
