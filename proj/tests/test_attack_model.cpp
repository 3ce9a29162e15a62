#include "qkd3/attack_model.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "qkd3/errors.hpp"

using namespace qkd3;

namespace {

constexpr Amplitude kI{0.0, 1.0};

void expect_rates_near(const ErrorRates& got, const ErrorRates& want, double tol) {
    EXPECT_NEAR(got.e_b, want.e_b, tol);
    EXPECT_NEAR(got.alpha, want.alpha, tol);
    EXPECT_NEAR(got.e_p, want.e_p, tol);
}

AttackEnsemble random_ensemble(std::uint64_t seed, std::size_t size) {
    AttackEnsemble e;
    for (std::size_t k = 0; k < size; ++k) e.push_back(random_attack(seed * 1000 + k));
    return e;
}

}  // namespace

TEST(Rates, identity_channel) {
    expect_rates_near(rates_of({1.0, 0.0, 0.0, 0.0}), {0.0, 0.0, 0.0}, 0.0);
}

TEST(Rates, pure_phase_flip) {
    expect_rates_near(rates_of({0.0, 0.0, 0.0, 1.0}), {0.0, 1.0, 1.0}, 0.0);
}

TEST(Rates, partial_phase_flip) {
    const KrausCoefficients k{std::sqrt(0.9), 0.0, 0.0, kI * std::sqrt(0.1)};
    expect_rates_near(rates_of(k), {0.0, 0.1, 0.1}, 1e-15);
}

TEST(Rates, two_element_sums) {
    const AttackEnsemble e{{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}};
    expect_rates_near(rates_from_ensemble(e), {0.5, 0.0, 0.0}, 1e-15);
}

TEST(Rates, empty_ensemble_is_argument_error) {
    EXPECT_THROW(rates_from_ensemble({}), std::invalid_argument);
}

TEST(Rates, zero_attack_is_degenerate) {
    EXPECT_THROW(rates_of({}), DegenerateAttack);
}

TEST(Rates, zero_check_denominator_is_degenerate) {
    // a_I = -a_X and a_Z = i a_Y: both check-state weights vanish.
    EXPECT_THROW(rates_of({1.0, -1.0, 1.0, kI}), DegenerateAttack);
}

TEST(Rates, non_finite_rejected) {
    EXPECT_THROW(rates_of({NAN, 0.0, 0.0, 0.0}), DegenerateAttack);
}

TEST(Rates, components_in_unit_interval_and_phase_invariant) {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        KrausCoefficients k = random_attack(seed);
        const ErrorRates r = rates_of(k);
        for (double v : {r.e_b, r.alpha, r.e_p}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
        const Amplitude phase = std::polar(1.0, 0.37 * static_cast<double>(seed));
        k.a_i *= phase;
        k.a_x *= phase;
        k.a_y *= phase;
        k.a_z *= phase;
        expect_rates_near(rates_of(k), r, 1e-13);
    }
}

TEST(CombinePair, orthogonal_paulis) {
    InterferenceCosines c;
    const KrausCoefficients out = combine_pair({1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, c);
    EXPECT_NEAR(std::abs(out.a_i), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(out.a_x), 1.0, 1e-15);
    EXPECT_EQ(std::abs(out.a_y), 0.0);
    EXPECT_EQ(std::abs(out.a_z), 0.0);
    EXPECT_EQ(c.c_ix, 0.0);
    EXPECT_NEAR(out.a_i.real(), 0.0, 1e-15);
    EXPECT_NEAR(out.a_i.imag(), 1.0, 1e-15);
    EXPECT_EQ(out.a_x, Amplitude(1.0));
    EXPECT_NEAR(out.check_pass_weight(), 2.0, 1e-15);
}

TEST(CombinePair, self_combination_scales_magnitudes) {
    const KrausCoefficients s = random_attack(42);
    const InterferenceCosines own = interference_cosines(s);
    InterferenceCosines c;
    const KrausCoefficients out = combine_pair(s, s, c);
    EXPECT_NEAR(std::abs(out.a_i), std::sqrt(2.0) * std::abs(s.a_i), 1e-14);
    EXPECT_NEAR(std::abs(out.a_x), std::sqrt(2.0) * std::abs(s.a_x), 1e-14);
    EXPECT_NEAR(std::abs(out.a_y), std::sqrt(2.0) * std::abs(s.a_y), 1e-14);
    EXPECT_NEAR(std::abs(out.a_z), std::sqrt(2.0) * std::abs(s.a_z), 1e-14);
    EXPECT_NEAR(c.c_ix, own.c_ix, 1e-12);
    EXPECT_NEAR(c.c_yz, own.c_yz, 1e-12);
    const AttackEnsemble pair{s, s};
    expect_rates_near(rates_of(out), rates_from_ensemble(pair), 1e-12);
}

TEST(CombinePair, degenerate_input_rejected) {
    EXPECT_THROW(combine_pair({}, {1.0, 0.0, 0.0, 0.0}), DegenerateAttack);
}

TEST(CombinePair, preserves_rates_and_weights_on_random_pairs) {
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        const KrausCoefficients a = random_attack(2 * seed);
        const KrausCoefficients b = random_attack(2 * seed + 1);
        InterferenceCosines c;
        const KrausCoefficients out = combine_pair(a, b, c);
        EXPECT_LE(std::abs(c.c_ix), 1.0);
        EXPECT_LE(std::abs(c.c_yz), 1.0);
        EXPECT_NEAR(std::norm(out.a_i), std::norm(a.a_i) + std::norm(b.a_i), 1e-13);
        EXPECT_NEAR(std::norm(out.a_y), std::norm(a.a_y) + std::norm(b.a_y), 1e-13);
        EXPECT_NEAR(out.check_pass_weight(), a.check_pass_weight() + b.check_pass_weight(), 1e-12);
        EXPECT_NEAR(out.check_fail_weight(), a.check_fail_weight() + b.check_fail_weight(), 1e-12);
        const AttackEnsemble pair{a, b};
        expect_rates_near(rates_of(out), rates_from_ensemble(pair), 1e-12);
    }
}

TEST(ReduceEnsemble, singleton_unchanged) {
    const KrausCoefficients s = random_attack(5);
    const AttackEnsemble e{s};
    EXPECT_EQ(reduce_ensemble(e), s);
}

TEST(ReduceEnsemble, two_elements_match_combine_pair) {
    const AttackEnsemble e{{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}};
    EXPECT_EQ(reduce_ensemble(e), combine_pair(e[0], e[1]));
}

TEST(ReduceEnsemble, empty_rejected) {
    EXPECT_THROW(reduce_ensemble({}), std::invalid_argument);
}

TEST(ReduceEnsemble, random_ensembles_keep_rates) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto ensemble = random_ensemble(seed, 2 + seed % 63);
        expect_rates_near(rates_of(reduce_ensemble(ensemble)), rates_from_ensemble(ensemble), 1e-12);
    }
}

TEST(ReduceEnsemble, sixty_four_elements) {
    const auto ensemble = random_ensemble(99, 64);
    expect_rates_near(rates_of(reduce_ensemble(ensemble)), rates_from_ensemble(ensemble), 1e-12);
}

TEST(RandomAttack, deterministic_per_seed) {
    EXPECT_EQ(random_attack(123), random_attack(123));
    EXPECT_NE(random_attack(123), random_attack(124));
}

TEST(RandomAttack, unit_total_weight) {
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        EXPECT_NEAR(random_attack(seed).total_weight(), 1.0, 1e-12);
}

TEST(RandomAttack, bounded_region_respected) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const ErrorRates r = rates_of(random_attack(seed, AttackRegion::bounded_rates));
        EXPECT_LE(r.e_b, 0.5);
        EXPECT_LE(r.alpha, 0.5);
    }
}

TEST(AttackText, round_trip_is_bit_exact) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const KrausCoefficients k = random_attack(seed);
        EXPECT_EQ(parse_attack(format_attack(k)), k);
    }
}

TEST(AttackText, parses_field_order) {
    const KrausCoefficients k = parse_attack("1, 2,3,4 ,5,6,7,+8");
    EXPECT_EQ(k.a_i, Amplitude(1, 2));
    EXPECT_EQ(k.a_x, Amplitude(3, 4));
    EXPECT_EQ(k.a_y, Amplitude(5, 6));
    EXPECT_EQ(k.a_z, Amplitude(7, 8));
}

TEST(AttackText, malformed_rejected) {
    EXPECT_THROW(parse_attack("1,0,0,0"), ParseError);
    EXPECT_THROW(parse_attack("1,0,0,0,0,0,0,x"), ParseError);
    EXPECT_THROW(parse_attack("1,0,0,0,0,0,0,0,0"), ParseError);
    EXPECT_THROW(parse_attack("0,0,0,0,0,0,0,0"), DegenerateAttack);
}
