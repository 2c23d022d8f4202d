#include "cokinetic/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

namespace cokinetic {

const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidDimension: return "InvalidDimension";
        case ErrorCode::NoReebVector: return "NoReebVector";
        case ErrorCode::NotCosymplectic: return "NotCosymplectic";
        case ErrorCode::SingularChangeOfBasis: return "SingularChangeOfBasis";
        case ErrorCode::UnboundedDomain: return "UnboundedDomain";
        case ErrorCode::NotClosed: return "NotClosed";
        case ErrorCode::NonConstantForm: return "NonConstantForm";
        case ErrorCode::KindMismatch: return "KindMismatch";
        case ErrorCode::ModelMismatch: return "ModelMismatch";
        case ErrorCode::NonAutonomous: return "NonAutonomous";
        case ErrorCode::UnsupportedModel: return "UnsupportedModel";
        case ErrorCode::NotAFixedPoint: return "NotAFixedPoint";
        case ErrorCode::NoValidCandidate: return "NoValidCandidate";
        case ErrorCode::RangeViolation: return "RangeViolation";
        case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
        case ErrorCode::ConstructionFailed: return "ConstructionFailed";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::NotCauchy: return "NotCauchy";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::ReferenceError: return "ReferenceError";
    }
    return "Error";
}

double ModelSpec::volume() const {
    if (!circle()) throw Error(ErrorCode::UnboundedDomain, "volume of a line-topology model");
    return std::pow(kTwoPi, dim());
}

void ModelSpec::validate() const {
    if (n < 1 || n > kMaxHalfDim)
        throw Error(ErrorCode::InvalidDimension, "n must lie in [1, " + std::to_string(kMaxHalfDim) + "]");
}

Vec reduce_point(const ModelSpec& m, const Vec& p) {
    Vec r = p;
    for (int j = 0; j < m.dim(); ++j)
        if (m.periodic(j)) r[j] = reduce_angle(p[j]);
    return r;
}

Vec point_diff(const ModelSpec& m, const Vec& a, const Vec& b) {
    Vec d = zero_vec();
    for (int j = 0; j < m.dim(); ++j) d[j] = m.periodic(j) ? wrap_diff(a[j] - b[j]) : a[j] - b[j];
    return d;
}

double flat_distance(const ModelSpec& m, const Vec& a, const Vec& b) {
    Vec d = point_diff(m, a, b);
    double s = 0;
    for (int j = 0; j < m.dim(); ++j) s += d[j] * d[j];
    return std::sqrt(s);
}

double max_abs(const ModelSpec& m, const Vec& v) {
    double r = 0;
    for (int j = 0; j < m.dim(); ++j) r = std::max(r, std::abs(v[j]));
    return r;
}

double simpson(const std::vector<double>& f, double a, double b) {
    const std::size_t m = f.size();
    if (m < 2) return 0.0;
    const std::size_t intervals = m - 1;
    const double h = (b - a) / static_cast<double>(intervals);
    if (intervals == 1) return 0.5 * h * (f[0] + f[1]);
    std::size_t even = intervals % 2 == 0 ? intervals : intervals - 3;
    double s = 0;
    if (even > 0) {
        double acc = f[0] + f[even];
        for (std::size_t i = 1; i < even; ++i) acc += (i % 2 ? 4.0 : 2.0) * f[i];
        s = acc * h / 3.0;
    }
    if (even != intervals) {
        std::size_t i = even;
        s += 3.0 * h / 8.0 * (f[i] + 3 * f[i + 1] + 3 * f[i + 2] + f[i + 3]);
    }
    return s;
}

namespace {
std::atomic<int> g_worker_override{0};
}

void set_worker_override(int workers) { g_worker_override = std::max(0, workers); }

int worker_count() {
    if (int forced = g_worker_override.load()) return forced;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("COKINETIC_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const int workers = static_cast<int>(std::min<std::size_t>(worker_count(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                const std::size_t lo = w * chunk, hi = std::min(count, lo + chunk);
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void parallel_blocks(std::size_t count, std::size_t block, const std::function<void(std::size_t, std::size_t)>& fn) {
    const std::size_t blocks = (count + block - 1) / block;
    parallel_for(blocks, [&](std::size_t b) { fn(b * block, std::min(count, (b + 1) * block)); });
}

}  // namespace cokinetic
