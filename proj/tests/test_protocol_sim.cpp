#include "qkd3/protocol_sim.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "qkd3/epbound.hpp"
#include "qkd3/errors.hpp"

using namespace qkd3;

namespace {

// e_b = 0.05, alpha = 0.02 realized by the exact-bound witness, normalized.
KrausCoefficients reference_attack() {
    KrausCoefficients k = exact_bound(0.05, 0.02).witness;
    const double s = 1.0 / std::sqrt(k.total_weight());
    return {k.a_i * s, k.a_x * s, k.a_y * s, k.a_z * s};
}

SimConfig config(std::int64_t n, std::uint64_t seed) {
    SimConfig c;
    c.n = n;
    c.seed = seed;
    c.attack = reference_attack();
    return c;
}

}  // namespace

TEST(SimConfig, validation) {
    SimConfig c;
    EXPECT_NO_THROW(c.validate());
    c.n = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.n = 10;
    c.delta = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.delta = 0.1;
    c.attack = {0.0, 1.0, 0.0, 0.0};  // X alone is fine
    EXPECT_NO_THROW(c.validate());
    c.attack = {0.0, 0.0, 0.0, 0.0};
    EXPECT_THROW(c.validate(), std::exception);
    c.n = 1000;
    c.delta = 0.25;
    EXPECT_EQ(c.transmitted_rounds(), 10000);
}

TEST(RoundProbabilities, match_rates) {
    const KrausCoefficients k = reference_attack();
    const RoundProbabilities p = round_probabilities(k);
    EXPECT_NEAR(p.z_flip, 0.05, 1e-9);
    EXPECT_NEAR(p.x_minus, 0.02, 1e-9);
}

TEST(SimulateRound, deterministic_and_sift_fraction) {
    const RoundProbabilities p{0.1, 0.2};
    std::int64_t z = 0, x = 0, zerr = 0, xerr = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const RoundOutcome r = simulate_round(7, static_cast<std::uint64_t>(i), p);
        ASSERT_EQ(r, simulate_round(7, static_cast<std::uint64_t>(i), p));
        z += r == RoundOutcome::z_ok || r == RoundOutcome::z_error;
        x += r == RoundOutcome::x_ok || r == RoundOutcome::x_error;
        zerr += r == RoundOutcome::z_error;
        xerr += r == RoundOutcome::x_error;
    }
    const double sd = std::sqrt(0.25 * 0.75 / n);
    EXPECT_NEAR(static_cast<double>(z) / n, 0.25, 5 * sd);
    EXPECT_NEAR(static_cast<double>(x) / n, 0.25, 5 * sd);
    EXPECT_NEAR(static_cast<double>(zerr) / z, 0.1, 5 * std::sqrt(0.09 / z));
    EXPECT_NEAR(static_cast<double>(xerr) / x, 0.2, 5 * std::sqrt(0.16 / x));
}

TEST(RunProtocol, serial_matches_parallel) {
    for (std::uint64_t seed : {1u, 2u, 99u}) {
        const SimConfig c = config(20000, seed);
        EXPECT_EQ(run_protocol(c), run_protocol_serial(c));
    }
}

TEST(RunProtocol, deterministic_and_seed_sensitive) {
    const SimConfig c = config(20000, 5);
    EXPECT_EQ(run_protocol(c), run_protocol(c));
    EXPECT_NE(run_protocol(c), run_protocol(config(20000, 6)));
}

TEST(RunProtocol, counts_are_consistent) {
    const SimConfig c = config(10000, 3);
    const ProtocolStats s = run_protocol(c);
    EXPECT_EQ(s.transmitted, c.transmitted_rounds());
    EXPECT_EQ(s.sifted, s.sifted_z + s.sifted_x);
    EXPECT_EQ(s.z_check_total, c.n);
    EXPECT_EQ(s.z_data_total, c.n);
    EXPECT_EQ(s.x_check_total, 2 * c.n);
    EXPECT_DOUBLE_EQ(s.observed_eb, static_cast<double>(s.z_check_errors) / c.n);
    EXPECT_DOUBLE_EQ(s.observed_alpha, static_cast<double>(s.x_check_errors) / (2.0 * c.n));
}

TEST(RunProtocol, insufficient_sift) {
    SimConfig c = config(1, 0);
    c.delta = 0.01;  // 8 rounds, need 2 Z and 2 X sifted
    bool threw = false;
    for (std::uint64_t seed = 0; seed < 50 && !threw; ++seed) {
        c.seed = seed;
        try {
            run_protocol(c);
        } catch (const InsufficientSift&) {
            threw = true;
        }
    }
    EXPECT_TRUE(threw);
}

TEST(RunProtocol, identity_attack_has_no_errors) {
    SimConfig c;
    c.n = 5000;
    c.seed = 11;
    const ProtocolStats s = run_protocol(c);
    EXPECT_EQ(s.z_check_errors + s.z_data_errors + s.x_check_errors, 0);
}

TEST(Azuma, most_seeds_within_five_sigma) {
    int within = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const SimConfig c = config(20000, seed);
        const AzumaReport rep = azuma_check(run_protocol(c), c.attack);
        within += rep.error_within && rep.no_error_within;
        EXPECT_NEAR(rep.p_error + rep.p_no_error, 1.0, 1e-15);
    }
    EXPECT_GE(within, 29);
}

TEST(Azuma, no_checks_rejected) {
    EXPECT_THROW(azuma_check(ProtocolStats{}, reference_attack()), std::invalid_argument);
}

TEST(SubsetMask, size_and_determinism) {
    const auto m = random_subset_mask(1000, 300, 4, 1);
    EXPECT_EQ(std::accumulate(m.begin(), m.end(), 0), 300);
    EXPECT_EQ(m, random_subset_mask(1000, 300, 4, 1));
    EXPECT_NE(m, random_subset_mask(1000, 300, 4, 2));
    EXPECT_THROW(random_subset_mask(3, 4, 0, 0), std::invalid_argument);
}

TEST(SubsetMask, positions_equally_likely) {
    std::vector<int> hits(10, 0);
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        const auto m = random_subset_mask(10, 3, static_cast<std::uint64_t>(t), 9);
        for (int i = 0; i < 10; ++i) hits[i] += m[i];
    }
    const double expect = trials * 0.3, sd = std::sqrt(trials * 0.3 * 0.7);
    for (int h : hits) EXPECT_NEAR(h, expect, 5 * sd);
}

TEST(Sampling, gap_concentrates) {
    std::vector<std::uint8_t> errors(20000);
    for (std::size_t i = 0; i < errors.size(); ++i) errors[i] = i % 10 == 0;  // 10% errors
    const SamplingSplit s = sampling_check(errors, 17);
    EXPECT_NEAR((s.rate_check + s.rate_data) / 2, 0.1, 1e-15);
    EXPECT_DOUBLE_EQ(s.gap, std::abs(s.rate_check - s.rate_data));
    EXPECT_LT(s.gap, 5 * std::sqrt(2 * 0.09 / 10000));
}

TEST(Sampling, bad_lengths) {
    std::vector<std::uint8_t> odd(3), empty;
    EXPECT_THROW(sampling_check(odd, 0), std::invalid_argument);
    EXPECT_THROW(sampling_check(empty, 0), std::invalid_argument);
}

TEST(Sampling, data_error_rate_respects_bound_with_margin) {
    // Observed data-half error rate stays below the bound evaluated at
    // observed rates shifted by 5 sigma.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SimConfig c = config(20000, seed);
        const ProtocolStats s = run_protocol(c);
        const double eb = s.observed_eb + 5 * std::sqrt(0.05 * 0.95 / s.z_check_total);
        const double al = s.observed_alpha + 5 * std::sqrt(0.02 * 0.98 / s.x_check_total);
        const double data = static_cast<double>(s.z_data_errors) / s.z_data_total;
        EXPECT_LE(data, eb + 1e-12);
        EXPECT_LE(rates_of(c.attack).e_p, exact_bound(eb, al).ep_max);
    }
}
