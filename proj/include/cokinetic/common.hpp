#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cokinetic {

// Largest supported half-dimension; coordinates are (x_1..x_n, y_1..y_n, z).
inline constexpr int kMaxHalfDim = 4;
inline constexpr int kMaxDim = 2 * kMaxHalfDim + 1;

using Vec = std::array<double, kMaxDim>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383279;

enum class ErrorCode {
    InvalidDimension,
    NoReebVector,
    NotCosymplectic,
    SingularChangeOfBasis,
    UnboundedDomain,
    NotClosed,
    NonConstantForm,
    KindMismatch,
    ModelMismatch,
    NonAutonomous,
    UnsupportedModel,
    NotAFixedPoint,
    NoValidCandidate,
    RangeViolation,
    InvalidEpsilon,
    ConstructionFailed,
    NotNormalized,
    NotCauchy,
    InvalidArgument,
    ParseError,
    SchemaError,
    ReferenceError,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(error_name(code)) + ": " + msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

enum class ZTopology { Circle, Line };

struct ModelSpec {
    int n = 1;
    ZTopology z_topology = ZTopology::Circle;

    int dim() const { return 2 * n + 1; }
    int zi() const { return 2 * n; }
    bool circle() const { return z_topology == ZTopology::Circle; }
    // Coordinate j lives on a circle of circumference 2*pi.
    bool periodic(int j) const { return j < 2 * n || circle(); }
    double volume() const;
    void validate() const;
    bool operator==(const ModelSpec& o) const { return n == o.n && z_topology == o.z_topology; }
};

inline Vec zero_vec() {
    Vec v{};
    v.fill(0.0);
    return v;
}

// sin and cos together: Cody-Waite reduction by pi/2 and the fdlibm minimax
// kernels, within 1 ulp of libm for |x| < 1e5. Branch free so lane loops
// vectorize; callers keep |x| in that range.
inline void sincos_kernel(double x, double& s, double& c) {
    constexpr double kInvPio2 = 6.36619772367581382433e-01;
    constexpr double kPio2a = 1.57079632673412561417e+00;
    constexpr double kPio2b = 6.07710050630396597660e-11;
    constexpr double kPio2c = 2.02226624871116645580e-21;
    const double k = std::nearbyint(x * kInvPio2);
    const double r = ((x - k * kPio2a) - k * kPio2b) - k * kPio2c;
    const double z = r * r;
    const double ps = 8.33333333332248946124e-03 +
                      z * (-1.98412698298579493134e-04 +
                           z * (2.75573137070700676789e-06 + z * (-2.50507602534068634195e-08 + z * 1.58969099521155010221e-10)));
    const double sr = r + r * z * (-1.66666666666666324348e-01 + z * ps);
    const double pc =
        z * (4.16666666666666019037e-02 +
             z * (-1.38888888888741095749e-03 +
                  z * (2.48015872894767294178e-05 +
                       z * (-2.75573143513906633035e-07 + z * (2.08757232129817482790e-09 + z * -1.13596475577881948265e-11)))));
    const double hz = 0.5 * z, w = 1.0 - hz;
    const double cr = w + (((1.0 - w) - hz) + z * pc);
    const int q = static_cast<int>(k) & 3;
    const double ss = (q & 1) ? cr : sr, cc = (q & 1) ? sr : cr;
    s = (q & 2) ? -ss : ss;
    c = ((q + 1) & 2) ? -cc : cc;
}

// sincos_kernel with a libm fallback for large arguments.
inline void fast_sincos(double x, double& s, double& c) {
    if (!(std::abs(x) < 1e5)) {
        s = std::sin(x);
        c = std::cos(x);
        return;
    }
    sincos_kernel(x, s, c);
}

// Reduce an angle to [0, 2pi).
inline double reduce_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

// Signed representative of a in (-pi, pi].
inline double wrap_diff(double a) {
    double r = std::remainder(a, kTwoPi);
    return r == -kPi ? kPi : r;
}

Vec reduce_point(const ModelSpec& m, const Vec& p);

// Coordinate difference a - b, wrapped on circle coordinates.
Vec point_diff(const ModelSpec& m, const Vec& a, const Vec& b);

// Flat distance: per-coordinate circular distance combined in Euclidean norm.
double flat_distance(const ModelSpec& m, const Vec& a, const Vec& b);

double max_abs(const ModelSpec& m, const Vec& v);

// Composite Simpson on uniform nodes over [a, b]; an odd interval count
// finishes with a 3/8 panel.
double simpson(const std::vector<double>& f, double a, double b);

// Number of worker threads: hardware concurrency capped by COKINETIC_THREADS.
int worker_count();
// Forces an exact worker count regardless of hardware; 0 restores the default.
// Process-wide; meant for tests of ordered reductions.
void set_worker_override(int workers);

// Runs fn(i) for i in [0, count) on worker_count() threads with static
// contiguous chunks. Callers write results by index so reductions stay ordered.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);
// parallel_for over consecutive blocks [lo, hi) of at most `block` indices,
// so each call can batch its flows.
void parallel_blocks(std::size_t count, std::size_t block, const std::function<void(std::size_t, std::size_t)>& fn);
inline constexpr std::size_t kFlowBlock = 16;

}  // namespace cokinetic
