#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "bmf/bitset.hpp"

using namespace bmf;

namespace {

Ordering order(std::initializer_list<const char*> ids) {
    std::vector<std::string> v(ids.begin(), ids.end());
    return Ordering(std::move(v));
}

std::set<std::string> as_set(const ItemSet& v) { return {v.begin(), v.end()}; }

} // namespace

TEST(Bitset, SetTestCount) {
    Bitset b(130);
    EXPECT_EQ(b.size(), 130u);
    EXPECT_TRUE(b.none());
    b.set(0);
    b.set(64);
    b.set(129);
    EXPECT_TRUE(b.test(64));
    EXPECT_FALSE(b.test(63));
    EXPECT_EQ(b.count(), 3u);
    EXPECT_EQ(b.highest_set_plus_one(), 130u);
    b.reset(129);
    EXPECT_EQ(b.highest_set_plus_one(), 65u);
    EXPECT_EQ(b.ones(), (std::vector<std::size_t>{0, 64}));
}

TEST(Bitset, OutOfRangeIsAnError) {
    Bitset b(5);
    EXPECT_THROW(b.test(5), std::out_of_range);
    EXPECT_THROW(b.set(100), std::out_of_range);
    Bitset other(6);
    EXPECT_THROW(b |= other, std::invalid_argument);
}

TEST(Bitset, SetAllKeepsTailClear) {
    Bitset b(70, true);
    EXPECT_EQ(b.count(), 70u);
    b.reset_all();
    b.set_all();
    EXPECT_EQ(b.count(), 70u);
}

TEST(Bitset, StringRoundTrip) {
    EXPECT_EQ(Bitset::from_string("10100").to_string(), "10100");
    EXPECT_THROW(Bitset::from_string("10x"), std::invalid_argument);
}

TEST(Encode, WorkedExample) {
    const Ordering pi = order({"e1", "e2", "e3"});
    EXPECT_EQ(encode(pi, std::vector<std::string>{"e1", "e3"}).to_string(), "101");
    EXPECT_EQ(encode(pi, std::vector<std::string>{}).to_string(), "000");
}

TEST(Encode, ReorderedItems) {
    const Ordering pi = order({"e2", "e5", "e4", "e3", "e1"});
    EXPECT_EQ(encode(pi, std::vector<std::string>{"e2", "e4"}).to_string(), "10100");
}

TEST(Encode, UnknownItemNamesTheId) {
    const Ordering pi = order({"e1", "e2"});
    try {
        encode(pi, std::vector<std::string>{"e1", "ghost"});
        FAIL() << "expected UnknownItemError";
    } catch (const UnknownItemError& e) {
        EXPECT_EQ(e.item(), "ghost");
        EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
    }
}

TEST(Decode, WorkedExample) {
    const Ordering pi = order({"e1", "e2", "e3"});
    EXPECT_EQ(as_set(decode(pi, Bitset::from_string("011"))), (std::set<std::string>{"e2", "e3"}));
    EXPECT_TRUE(decode(pi, Bitset::from_string("000")).empty());
    const std::vector<std::string> all{"e1", "e2", "e3"};
    EXPECT_EQ(as_set(decode(pi, encode(pi, all))), as_set(all));
}

TEST(Decode, LengthMismatch) {
    const Ordering pi = order({"e1", "e2", "e3"});
    EXPECT_THROW(decode(pi, Bitset(4)), std::invalid_argument);
}

TEST(Ordering, Bijection) {
    const Ordering pi = order({"a", "b", "c"});
    for (std::size_t i = 0; i < pi.size(); ++i) EXPECT_EQ(pi.index_of(pi.item(i)), i);
    EXPECT_THROW(order({"a", "a"}), std::invalid_argument);
    EXPECT_THROW(pi.index_of("z"), UnknownItemError);
}

// Every subset of a 12-item universe survives encode -> decode, and encode is
// monotone under inclusion.
TEST(EncodeDecode, ExhaustiveRoundTripAndMonotone) {
    std::vector<std::string> ids;
    for (int i = 0; i < 12; ++i) ids.push_back("i" + std::to_string(i));
    std::vector<std::string> shuffled = ids;
    std::mt19937 rng(3);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const Ordering pi(shuffled);

    for (std::uint32_t mask = 0; mask < (1u << 12); ++mask) {
        std::vector<std::string> subset;
        for (int i = 0; i < 12; ++i) {
            if (mask & (1u << i)) subset.push_back(ids[i]);
        }
        const Bitset enc = encode(pi, subset);
        ASSERT_EQ(as_set(decode(pi, enc)), as_set(subset)) << "mask " << mask;

        // A random superset T of S: enc(S) & enc(T) == enc(S).
        const std::uint32_t super = mask | static_cast<std::uint32_t>(rng() & 0xFFF);
        std::vector<std::string> superset;
        for (int i = 0; i < 12; ++i) {
            if (super & (1u << i)) superset.push_back(ids[i]);
        }
        Bitset both = enc;
        both &= encode(pi, superset);
        ASSERT_EQ(both, enc);
    }
}

TEST(Sparse, DropsTrailingZeros) {
    SparseRow r = sparsify(Bitset::from_string("10100"));
    EXPECT_EQ(r.logical_length(), 5u);
    EXPECT_EQ(r.stored_length(), 3u);
    EXPECT_TRUE(r.test(0));
    EXPECT_FALSE(r.test(1));
    EXPECT_TRUE(r.test(2));
    EXPECT_FALSE(r.test(4));
    EXPECT_THROW(r.test(5), std::out_of_range);

    EXPECT_EQ(sparsify(Bitset::from_string("00000")).stored_length(), 0u);
    EXPECT_EQ(sparsify(Bitset::from_string("00001")).stored_length(), 5u);
}

TEST(Sparse, RoundTripRandom) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = rng() % 200;
        Bitset b(n);
        const std::size_t density = 1 + rng() % 8;
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() % density == 0) b.set(i);
        }
        const SparseRow s = sparsify(b);
        ASSERT_EQ(densify(s), b);
        ASSERT_EQ(sparsify(densify(s)), s);
        ASSERT_LE(s.stored_length(), s.logical_length());
        if (s.stored_length() > 0) ASSERT_TRUE(s.test(s.stored_length() - 1));
    }
}

TEST(Sparse, OrGrowsStoredPrefix) {
    SparseRow r(10);
    r |= Bitset::from_string("0010000000");
    EXPECT_EQ(r.stored_length(), 3u);
    r |= Bitset::from_string("1000000100");
    EXPECT_EQ(r.stored_length(), 8u);
    EXPECT_EQ(densify(r).to_string(), "1010000100");
    r |= Bitset::from_string("0000000000");
    EXPECT_EQ(r.stored_length(), 8u);
}

TEST(Sparse, AndIntoClearsPastStoredPrefix) {
    Bitset acc(100, true);
    Bitset row(100);
    row.set(3);
    and_into(acc, sparsify(row));
    EXPECT_EQ(acc.ones(), (std::vector<std::size_t>{3}));
    EXPECT_THROW(and_into(acc, SparseRow(99)), std::invalid_argument);
    Bitset acc2(4, true);
    and_into(acc2, sparsify(Bitset::from_string("0110")));
    EXPECT_EQ(acc2.to_string(), "0110");
}

TEST(Sparse, BuilderRejectsTrailingZero) {
    EXPECT_THROW(SparseRowBuilder::make(10, 3, {0b011}), std::invalid_argument);
    EXPECT_THROW(SparseRowBuilder::make(2, 3, {0b111}), std::invalid_argument);
    EXPECT_EQ(SparseRowBuilder::make(10, 3, {0b101}).stored_length(), 3u);
}
