#pragma once

// Monte Carlo run of the prepare-and-measure three-state protocol (transmit,
// measure, sift, choose check bits, estimate QBERs) under a collective attack.
//
// Rounds are i.i.d.: each round draws from the single-pair outcome
// distribution induced by the attack. Round i consumes one Philox block with
// counter (i_lo, i_hi, kRoundStream, 0) under key = seed, so rounds can be
// generated in any order or in parallel with identical results.

#include <cstdint>
#include <span>
#include <vector>

#include "qkd3/attack_model.hpp"

namespace qkd3 {

struct SimConfig {
    std::int64_t n = 1;  ///< data bits N
    double delta = 0.1;  ///< oversampling: 8N(1 + delta) rounds are sent
    KrausCoefficients attack{1.0, 0.0, 0.0, 0.0};
    std::uint64_t seed = 0;

    void validate() const;
    std::int64_t transmitted_rounds() const;
};

struct ProtocolStats {
    std::int64_t transmitted = 0;
    std::int64_t sifted = 0;
    std::int64_t sifted_z = 0;
    std::int64_t sifted_x = 0;
    std::int64_t z_check_errors = 0;
    std::int64_t z_check_total = 0;
    std::int64_t z_data_errors = 0;  ///< revealed only for the sampling diagnostics
    std::int64_t z_data_total = 0;
    std::int64_t x_check_errors = 0;  ///< c_{+-}
    std::int64_t x_check_total = 0;   ///< c_{+-} + c_{++}
    double observed_eb = 0.0;
    double observed_alpha = 0.0;

    friend bool operator==(const ProtocolStats&, const ProtocolStats&) = default;
};

/// Per-round outcome after sifting.
enum class RoundOutcome : std::uint8_t {
    discarded = 0,
    z_ok = 1,
    z_error = 2,
    x_ok = 3,
    x_error = 4,
};

/// Single-pair outcome probabilities induced by an attack.
struct RoundProbabilities {
    double z_flip = 0.0;   ///< bit flip on |0_z>/|1_z>
    double x_minus = 0.0;  ///< Bob finds |-> when |+> was sent
};

RoundProbabilities round_probabilities(const KrausCoefficients& attack);

/// Outcome of round `index`; pure function of (seed, index, probabilities).
RoundOutcome simulate_round(std::uint64_t seed, std::uint64_t index, const RoundProbabilities& p) noexcept;

/// Parallel (OpenMP) protocol run.
ProtocolStats run_protocol(const SimConfig& config);
/// Sequential reference with identical output.
ProtocolStats run_protocol_serial(const SimConfig& config);

struct AzumaReport {
    double p_error = 0.0;       ///< analytic p_{+-}
    double p_no_error = 0.0;    ///< analytic p_{++}
    double dev_error = 0.0;     ///< |c_{+-}/N_x - p_{+-}|
    double dev_no_error = 0.0;  ///< |c_{++}/N_x - p_{++}|
    double tolerance = 0.0;     ///< 5 sqrt(p (1-p) / N_x)
    bool error_within = false;
    bool no_error_within = false;
    double alpha_analytic = 0.0;
    double alpha_deviation = 0.0;
};

AzumaReport azuma_check(const ProtocolStats& stats, const KrausCoefficients& attack);

struct SamplingSplit {
    double rate_check = 0.0;
    double rate_data = 0.0;
    double gap = 0.0;
};

/// Uniform random split of 2N error indicators into two N-sets (seeded).
SamplingSplit sampling_check(std::span<const std::uint8_t> errors, std::uint64_t seed);

/// Seeded uniform choice of k of n positions; returns a mask of length n with k ones.
std::vector<std::uint8_t> random_subset_mask(std::size_t n, std::size_t k, std::uint64_t seed,
                                             std::uint32_t stream_tag);

}  // namespace qkd3
