#include "qkd3/keyrate.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "qkd3/errors.hpp"
#include "qkd3/numeric.hpp"
#include "qkd3/sweeps.hpp"

namespace qkd3 {

namespace {

constexpr double kRootTolerance = 1e-6;
// Bisection stops well below the reporting tolerance.
constexpr double kBisectTolerance = 1e-10;
constexpr int kBisectIterations = 200;
constexpr double kNearZero = 1e-12;

// Largest e in [0, 1/2] with rate(e) >= 0, assuming a single sign change.
double rate_root(const std::function<double(double)>& rate) {
    if (rate(kNearZero) < 0.0) return 0.0;
    if (rate(0.5) >= 0.0) return 0.5;
    return numeric::bisect_last_true([&](double e) { return rate(e) >= 0.0; }, 0.0, 0.5,
                                     kBisectTolerance, kBisectIterations);
}

void check_rate_method(BoundMethod method) {
    if (method != BoundMethod::exact && method != BoundMethod::approximate)
        throw std::invalid_argument("key rate method must be exact or approximate");
}

}  // namespace

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("binary entropy needs x in [0, 1]; got " + std::to_string(x));
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

KeyRatePoint key_rate_single_photon(double e_b, double alpha, BoundMethod method) {
    check_rate_method(method);
    KeyRatePoint p{e_b, alpha, phase_error_bound(e_b, alpha, method), 0.0};
    p.rate = 1.0 - binary_entropy(e_b) - binary_entropy(p.e_p_used);
    return p;
}

double tolerable_eb(double alpha, BoundMethod method) {
    check_rate_method(method);
    if (!(alpha >= 0.0 && alpha <= 0.5)) throw DomainError("alpha must be in [0, 1/2]");
    static_assert(kBisectTolerance < kRootTolerance);
    return rate_root([&](double e) { return key_rate_single_photon(e, alpha, method).rate; });
}

double tolerable_eb_diagonal(BoundMethod method) {
    check_rate_method(method);
    if (method == BoundMethod::approximate) {
        return rate_root([](double e) {
            return 1.0 - binary_entropy(e) - binary_entropy(std::min(5.0 * e, 0.5));
        });
    }
    return rate_root([](double e) { return key_rate_single_photon(e, e, BoundMethod::exact).rate; });
}

double bb84_tolerable_eb() {
    return rate_root([](double e) { return 1.0 - 2.0 * binary_entropy(e); });
}

std::vector<FrontierPoint> secure_region_frontier(int alpha_steps, BoundMethod method) {
    return kernels::region_sweep(alpha_steps, method);
}

}  // namespace qkd3
