#pragma once

// Data-parallel sweeps behind the CLI curves and the soundness scan.
// Each kernel has an OpenMP version and a sequential reference (suffix
// _serial); both return identical rows in parameter order.

#include <cstdint>
#include <vector>

#include "qkd3/decoy.hpp"
#include "qkd3/epbound.hpp"
#include "qkd3/keyrate.hpp"

namespace qkd3::kernels {

/// Caps OpenMP threads from QKD3_THREADS when set to a positive integer.
/// Returns the cap applied, or 0 if none.
int apply_thread_limit_from_env();

struct Fig1Row {
    double eb = 0.0;
    double ep_exact = 0.0;
    double ep_approx = 0.0;
    double ep_5eb = 0.0;
};

/// Diagonal e_b = alpha on `steps` uniform points of [0, eb_max].
std::vector<Fig1Row> fig1_sweep(double eb_max, int steps);
std::vector<Fig1Row> fig1_sweep_serial(double eb_max, int steps);

std::vector<FrontierPoint> region_sweep(int alpha_steps, BoundMethod method);
std::vector<FrontierPoint> region_sweep_serial(int alpha_steps, BoundMethod method);

struct DecoyRow {
    double distance_km = 0.0;
    double mu = 0.0;
    DecoyObservables obs;
    double e_p = 0.0;
    double rate = 0.0;  ///< raw optimal rate (may be negative)

    double exported_rate() const noexcept { return rate > 0.0 ? rate : 0.0; }
};

/// Distances L_min, L_min + step, ... <= L_max.
std::vector<double> distance_grid(double l_min, double l_max, double l_step);

std::vector<DecoyRow> decoy_sweep(const ChannelParams& params, Protocol protocol,
                                  const std::vector<double>& distances);
std::vector<DecoyRow> decoy_sweep_serial(const ChannelParams& params, Protocol protocol,
                                         const std::vector<double>& distances);

struct SoundnessSummary {
    std::int64_t checked = 0;
    std::int64_t violations = 0;
    double worst_ratio = 0.0;  ///< max e_p / exact uncapped bound
};

/// Seeds [seed_begin, seed_begin + count) through random_attack(bounded_rates);
/// counts attacks with e_p > bound (1 + rel_tol).
SoundnessSummary soundness_scan(std::uint64_t seed_begin, std::int64_t count, double rel_tol);
SoundnessSummary soundness_scan_serial(std::uint64_t seed_begin, std::int64_t count, double rel_tol);

}  // namespace qkd3::kernels
