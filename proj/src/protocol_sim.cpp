#include "qkd3/protocol_sim.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qkd3/errors.hpp"
#include "qkd3/philox.hpp"

namespace qkd3 {

namespace {

constexpr std::uint32_t kRoundStream = 0x52D0u;
constexpr std::uint32_t kCheckSplitStream = 0x5E1Cu;
constexpr std::uint32_t kSamplingStream = 0x5A3Fu;
constexpr double kSigmaWidth = 5.0;

ProtocolStats tally(const SimConfig& config, std::span<const RoundOutcome> rounds) {
    const auto two_n = static_cast<std::size_t>(2 * config.n);
    ProtocolStats s;
    s.transmitted = static_cast<std::int64_t>(rounds.size());

    std::vector<std::uint8_t> z_errors;
    z_errors.reserve(two_n);
    for (const RoundOutcome r : rounds) {
        switch (r) {
            case RoundOutcome::discarded: break;
            case RoundOutcome::z_ok:
            case RoundOutcome::z_error:
                ++s.sifted_z;
                if (z_errors.size() < two_n) z_errors.push_back(r == RoundOutcome::z_error);
                break;
            case RoundOutcome::x_ok:
            case RoundOutcome::x_error:
                ++s.sifted_x;
                if (s.x_check_total < static_cast<std::int64_t>(two_n)) {
                    ++s.x_check_total;
                    s.x_check_errors += r == RoundOutcome::x_error;
                }
                break;
        }
    }
    s.sifted = s.sifted_z + s.sifted_x;
    if (z_errors.size() < two_n || s.x_check_total < static_cast<std::int64_t>(two_n))
        throw InsufficientSift("insufficient sift: " + std::to_string(s.sifted_z) + " Z and " +
                               std::to_string(s.sifted_x) + " X rounds, need " +
                               std::to_string(two_n) + " of each");

    const auto check = random_subset_mask(two_n, two_n / 2, config.seed, kCheckSplitStream);
    for (std::size_t i = 0; i < two_n; ++i) {
        if (check[i]) {
            ++s.z_check_total;
            s.z_check_errors += z_errors[i];
        } else {
            ++s.z_data_total;
            s.z_data_errors += z_errors[i];
        }
    }
    s.observed_eb = static_cast<double>(s.z_check_errors) / static_cast<double>(s.z_check_total);
    s.observed_alpha = static_cast<double>(s.x_check_errors) / static_cast<double>(s.x_check_total);
    return s;
}

}  // namespace

void SimConfig::validate() const {
    if (n < 1) throw std::invalid_argument("N must be at least 1");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be positive");
    attack.validate();
    if (attack.check_fail_weight() + attack.check_pass_weight() == 0.0)
        throw DegenerateAttack("attack has no defined check-state outcome");
}

std::int64_t SimConfig::transmitted_rounds() const {
    return static_cast<std::int64_t>(std::llround(8.0 * static_cast<double>(n) * (1.0 + delta)));
}

RoundProbabilities round_probabilities(const KrausCoefficients& attack) {
    const ErrorRates r = rates_of(attack);
    return {r.e_b, r.alpha};
}

RoundOutcome simulate_round(std::uint64_t seed, std::uint64_t index,
                            const RoundProbabilities& p) noexcept {
    const PhiloxBlock b = philox4x32_10(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), kRoundStream, 0u},
        philox_key(seed));
    const bool alice_x = (b[0] >> 31) != 0;
    const bool bob_x = ((b[0] >> 30) & 1u) != 0;
    if (alice_x != bob_x) return RoundOutcome::discarded;
    // The Z-basis bit value (b[0] bit 29) does not change the flip probability.
    const double u = uniform01(b[2], b[3]);
    if (!alice_x) return u < p.z_flip ? RoundOutcome::z_error : RoundOutcome::z_ok;
    return u < p.x_minus ? RoundOutcome::x_error : RoundOutcome::x_ok;
}

ProtocolStats run_protocol(const SimConfig& config) {
    config.validate();
    const RoundProbabilities p = round_probabilities(config.attack);
    const std::int64_t total = config.transmitted_rounds();
    std::vector<RoundOutcome> rounds(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < total; ++i)
        rounds[static_cast<std::size_t>(i)] = simulate_round(config.seed, static_cast<std::uint64_t>(i), p);
    return tally(config, rounds);
}

ProtocolStats run_protocol_serial(const SimConfig& config) {
    config.validate();
    const RoundProbabilities p = round_probabilities(config.attack);
    const std::int64_t total = config.transmitted_rounds();
    std::vector<RoundOutcome> rounds;
    rounds.reserve(static_cast<std::size_t>(total));
    for (std::int64_t i = 0; i < total; ++i)
        rounds.push_back(simulate_round(config.seed, static_cast<std::uint64_t>(i), p));
    return tally(config, rounds);
}

AzumaReport azuma_check(const ProtocolStats& stats, const KrausCoefficients& attack) {
    if (stats.x_check_total <= 0) throw std::invalid_argument("stats carry no X-basis checks");
    AzumaReport rep;
    const double n_x = static_cast<double>(stats.x_check_total);
    rep.alpha_analytic = rates_of(attack).alpha;
    rep.p_error = rep.alpha_analytic;
    rep.p_no_error = 1.0 - rep.p_error;
    const double c_err = static_cast<double>(stats.x_check_errors);
    const double c_ok = n_x - c_err;
    rep.dev_error = std::abs(c_err / n_x - rep.p_error);
    rep.dev_no_error = std::abs(c_ok / n_x - rep.p_no_error);
    rep.tolerance = kSigmaWidth * std::sqrt(rep.p_error * rep.p_no_error / n_x);
    rep.error_within = rep.dev_error <= rep.tolerance;
    rep.no_error_within = rep.dev_no_error <= rep.tolerance;
    rep.alpha_deviation = std::abs(stats.observed_alpha - rep.alpha_analytic);
    return rep;
}

std::vector<std::uint8_t> random_subset_mask(std::size_t n, std::size_t k, std::uint64_t seed,
                                             std::uint32_t stream_tag) {
    if (k > n) throw std::invalid_argument("subset larger than population");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    PhiloxStream rng(seed, stream_tag);
    // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(order[i], order[j]);
    }
    std::vector<std::uint8_t> mask(n, 0);
    for (std::size_t i = 0; i < k; ++i) mask[order[i]] = 1;
    return mask;
}

SamplingSplit sampling_check(std::span<const std::uint8_t> errors, std::uint64_t seed) {
    if (errors.size() % 2 != 0) throw std::invalid_argument("sampling_check needs an even length");
    if (errors.empty()) throw std::invalid_argument("sampling_check needs at least two bits");
    const std::size_t half = errors.size() / 2;
    const auto mask = random_subset_mask(errors.size(), half, seed, kSamplingStream);
    std::size_t check = 0, data = 0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        const bool e = errors[i] != 0;
        (mask[i] ? check : data) += e;
    }
    SamplingSplit out;
    out.rate_check = static_cast<double>(check) / static_cast<double>(half);
    out.rate_data = static_cast<double>(data) / static_cast<double>(half);
    out.gap = std::abs(out.rate_check - out.rate_data);
    return out;
}

}  // namespace qkd3
