#include "qkd3/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "qkd3/attack_model.hpp"

namespace qkd3::kernels {

namespace {

// Runs body(i) for i in [0, n) across threads; rethrows the first exception.
template <class Body>
void parallel_for(std::int64_t n, Body&& body) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical(qkd3_parallel_for_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

template <class Body>
void serial_for(std::int64_t n, Body&& body) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
}

void check_steps(int steps) {
    if (steps < 2) throw std::invalid_argument("steps must be at least 2");
}

Fig1Row fig1_row(double eb_max, int steps, std::int64_t k) {
    const double e = eb_max * static_cast<double>(k) / (steps - 1);
    return {e, exact_bound(e, e).ep_max, approx_bound(e, e), simple_bound(e, e)};
}

FrontierPoint frontier_point(int steps, BoundMethod method, std::int64_t k) {
    const double alpha = 0.5 * static_cast<double>(k) / (steps - 1);
    return {alpha, tolerable_eb(alpha, method)};
}

DecoyRow decoy_row(const ChannelParams& params, Protocol protocol, double distance) {
    DecoyRow row;
    row.distance_km = distance;
    const OptimalMu best = optimal_mu(params, distance, protocol);
    row.mu = best.mu;
    row.rate = best.rate;
    row.obs = channel_observables(params, distance, best.mu);
    row.e_p = single_photon_phase_error(row.obs, protocol);
    return row;
}

struct AttackCheck {
    bool violated = false;
    double ratio = 0.0;
};

AttackCheck check_attack(std::uint64_t seed, double rel_tol) {
    const KrausCoefficients k = random_attack(seed, AttackRegion::bounded_rates);
    const ErrorRates r = rates_of(k);
    const double bound = exact_bound(r.e_b, r.alpha).ep_uncapped;
    AttackCheck c;
    c.violated = r.e_p > bound * (1.0 + rel_tol);
    c.ratio = bound > 0.0 ? r.e_p / bound : (r.e_p > 0.0 ? INFINITY : 0.0);
    return c;
}

SoundnessSummary summarize(const std::vector<AttackCheck>& checks) {
    SoundnessSummary s;
    s.checked = static_cast<std::int64_t>(checks.size());
    for (const auto& c : checks) {
        s.violations += c.violated;
        s.worst_ratio = std::max(s.worst_ratio, c.ratio);
    }
    return s;
}

}  // namespace

int apply_thread_limit_from_env() {
    const char* env = std::getenv("QKD3_THREADS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n <= 0) return 0;
    omp_set_num_threads(static_cast<int>(n));
    return static_cast<int>(n);
}

std::vector<Fig1Row> fig1_sweep(double eb_max, int steps) {
    check_steps(steps);
    std::vector<Fig1Row> rows(static_cast<std::size_t>(steps));
    parallel_for(steps, [&](std::int64_t k) { rows[k] = fig1_row(eb_max, steps, k); });
    return rows;
}

std::vector<Fig1Row> fig1_sweep_serial(double eb_max, int steps) {
    check_steps(steps);
    std::vector<Fig1Row> rows(static_cast<std::size_t>(steps));
    serial_for(steps, [&](std::int64_t k) { rows[k] = fig1_row(eb_max, steps, k); });
    return rows;
}

std::vector<FrontierPoint> region_sweep(int alpha_steps, BoundMethod method) {
    check_steps(alpha_steps);
    std::vector<FrontierPoint> pts(static_cast<std::size_t>(alpha_steps));
    parallel_for(alpha_steps, [&](std::int64_t k) { pts[k] = frontier_point(alpha_steps, method, k); });
    return pts;
}

std::vector<FrontierPoint> region_sweep_serial(int alpha_steps, BoundMethod method) {
    check_steps(alpha_steps);
    std::vector<FrontierPoint> pts(static_cast<std::size_t>(alpha_steps));
    serial_for(alpha_steps, [&](std::int64_t k) { pts[k] = frontier_point(alpha_steps, method, k); });
    return pts;
}

std::vector<double> distance_grid(double l_min, double l_max, double l_step) {
    if (!(l_min >= 0.0) || !(l_max >= l_min) || !(l_step > 0.0))
        throw std::invalid_argument("distance range needs 0 <= L_min <= L_max and L_step > 0");
    std::vector<double> out;
    // Index-based so accumulated rounding cannot drop or add the last point.
    const auto count = static_cast<std::int64_t>(std::floor((l_max - l_min) / l_step + 1e-9)) + 1;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) out.push_back(l_min + static_cast<double>(k) * l_step);
    return out;
}

std::vector<DecoyRow> decoy_sweep(const ChannelParams& params, Protocol protocol,
                                  const std::vector<double>& distances) {
    params.validate();
    std::vector<DecoyRow> rows(distances.size());
    parallel_for(static_cast<std::int64_t>(distances.size()),
                 [&](std::int64_t k) { rows[k] = decoy_row(params, protocol, distances[k]); });
    return rows;
}

std::vector<DecoyRow> decoy_sweep_serial(const ChannelParams& params, Protocol protocol,
                                         const std::vector<double>& distances) {
    params.validate();
    std::vector<DecoyRow> rows(distances.size());
    serial_for(static_cast<std::int64_t>(distances.size()),
               [&](std::int64_t k) { rows[k] = decoy_row(params, protocol, distances[k]); });
    return rows;
}

SoundnessSummary soundness_scan(std::uint64_t seed_begin, std::int64_t count, double rel_tol) {
    std::vector<AttackCheck> checks(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
    parallel_for(count, [&](std::int64_t k) {
        checks[k] = check_attack(seed_begin + static_cast<std::uint64_t>(k), rel_tol);
    });
    return summarize(checks);
}

SoundnessSummary soundness_scan_serial(std::uint64_t seed_begin, std::int64_t count, double rel_tol) {
    std::vector<AttackCheck> checks(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
    serial_for(count, [&](std::int64_t k) {
        checks[k] = check_attack(seed_begin + static_cast<std::uint64_t>(k), rel_tol);
    });
    return summarize(checks);
}

}  // namespace qkd3::kernels
