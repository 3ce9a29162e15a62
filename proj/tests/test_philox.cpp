#include "qkd3/philox.hpp"

#include <set>

#include "gtest/gtest.h"

using namespace qkd3;

// Known-answer vectors from the Random123 distribution (kat_vectors, philox4x32 R=10).
TEST(Philox, known_answer_vectors) {
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
              (PhiloxBlock{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                            {0xffffffffu, 0xffffffffu}),
              (PhiloxBlock{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                            {0xa4093822u, 0x299f31d0u}),
              (PhiloxBlock{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, uniform01_range) {
    EXPECT_EQ(uniform01(0, 0), 0.0);
    EXPECT_LT(uniform01(0xffffffffu, 0xffffffffu), 1.0);
}

TEST(Philox, stream_below_is_in_range_and_covers) {
    PhiloxStream s(7, 1);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto v = s.below(10);
        ASSERT_LT(v, 10u);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 10u);
}

TEST(Philox, streams_with_different_tags_differ) {
    PhiloxStream a(7, 1), b(7, 2);
    EXPECT_NE(a.next_u32(), b.next_u32());
}
