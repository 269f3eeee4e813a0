#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "bmf/bloom_matrix.hpp"
#include "random_datasets.hpp"
#include "worked_examples.hpp"

using namespace bmf;
using namespace bmf::fixtures;

namespace {

const std::vector<std::string> kAltOrder{"e2", "e5", "e4", "e3", "e1"};

std::set<std::pair<std::size_t, std::size_t>> set_bits(const BloomMatrix& m) {
    std::set<std::pair<std::size_t, std::size_t>> bits;
    for (std::size_t r = 0; r < m.m(); ++r) {
        for (std::size_t c : m.row(r).ones()) bits.emplace(r, c);
    }
    return bits;
}

} // namespace

TEST(BloomMatrixExample, FirstLabelSetsFourBits) {
    BloomMatrix m(8, HashFamily::fixed(2, matrix_example_hashes()), Ordering(five_items()));
    m.add_label("l1", std::vector<std::string>{"e2", "e4"});
    const std::set<std::pair<std::size_t, std::size_t>> expected{{0, 1}, {7, 1}, {0, 3}, {7, 3}};
    EXPECT_EQ(set_bits(m), expected);
}

TEST(BloomMatrixExample, FullMatrixRows) {
    const BloomMatrix m = matrix_example();
    EXPECT_EQ(m.row(0).to_string(), "01010");
    EXPECT_EQ(m.row(2).to_string(), "11101");
    EXPECT_EQ(m.row(4).to_string(), "11001");
    EXPECT_EQ(m.row(7).to_string(), "01111");
    for (std::size_t r : {1u, 3u, 5u, 6u}) EXPECT_TRUE(m.row(r).none());
}

TEST(BloomMatrixExample, Lookups) {
    for (MatrixLayout layout : {MatrixLayout::Dense, MatrixLayout::Sparse}) {
        const BloomMatrix m = matrix_example(layout);
        EXPECT_EQ(sorted(m.lookup("l1")), (ItemSet{"e2", "e4"}));
        EXPECT_EQ(sorted(m.lookup("l2")), (ItemSet{"e1", "e2", "e5"}));
        EXPECT_EQ(sorted(m.lookup("l3")), (ItemSet{"e2", "e3", "e5"}));
        EXPECT_EQ(sorted(m.lookup(std::vector<std::string>{"l1", "l2"}, LookupMode::And)), (ItemSet{"e2"}));
        EXPECT_EQ(sorted(m.lookup(std::vector<std::string>{"l1", "l3"}, LookupMode::Or)),
                  (ItemSet{"e2", "e3", "e4", "e5"}));
        EXPECT_THROW(m.lookup(std::vector<std::string>{}, LookupMode::And), std::invalid_argument);
        for (const char* l : {"l1", "l2", "l3"}) {
            const std::vector<std::string> one{l};
            EXPECT_EQ(m.lookup(one, LookupMode::And), m.lookup(l));
            EXPECT_EQ(m.lookup(one, LookupMode::Or), m.lookup(l));
        }
    }
}

TEST(BloomMatrix, FreshMatrixFindsNothing) {
    BloomMatrix m(16, HashFamily::seeded(3), Ordering(five_items()));
    EXPECT_TRUE(m.lookup("anything").empty());
    EXPECT_EQ(m.stored_bits(), 16u * 5u);
    BloomMatrix s(16, HashFamily::seeded(3), Ordering(five_items()), MatrixLayout::Sparse);
    EXPECT_EQ(s.stored_bits(), 0u);
}

TEST(BloomMatrix, AddEmptyAndRepeatedAdd) {
    BloomMatrix m = matrix_example();
    const auto before = set_bits(m);
    m.add_label("l9", std::vector<std::string>{});
    EXPECT_EQ(set_bits(m), before);
    m.add_label("l1", std::vector<std::string>{"e2", "e4"});
    EXPECT_EQ(set_bits(m), before);
}

TEST(BloomMatrix, UnknownItemAsksForRebuild) {
    BloomMatrix m = matrix_example();
    try {
        m.add_label("l1", std::vector<std::string>{"e6"});
        FAIL();
    } catch (const UnknownItemError& e) {
        EXPECT_EQ(e.item(), "e6");
        EXPECT_NE(std::string(e.what()).find("rebuild"), std::string::npos);
    }
}

TEST(BloomMatrix, TheoreticalFpr) {
    const BloomMatrix m = matrix_example();
    const std::vector<std::string> labels{"l1", "l3", "never"};
    const FpReport r = m.theoretical_fpr(labels);
    const double one = 3.0 * std::pow(1.0 - std::pow(0.875, 4.0), 2.0);
    EXPECT_NEAR(one, 0.51373690, 1e-8);
    EXPECT_NEAR(r.per_label[0].second, one, 1e-12);
    EXPECT_NEAR(r.per_label[1].second, one, 1e-12);
    EXPECT_EQ(r.per_label[2].second, 0.0);
    EXPECT_NEAR(r.average, 2.0 * one / 3.0, 1e-12);

    BloomMatrix fresh(8, HashFamily::seeded(2), Ordering(five_items()));
    EXPECT_EQ(fresh.theoretical_fpr(labels).average, 0.0);

    BloomMatrix full(8, HashFamily::seeded(2), Ordering(five_items()));
    full.add_label("all", five_items());
    EXPECT_EQ(full.theoretical_fpr(std::vector<std::string>{"all"}).average, 0.0);
}

TEST(SparseOrdering, Examples) {
    EXPECT_EQ(sparse_ordering(matrix_example_dataset()).items(),
              (std::vector<std::string>{"e2", "e5", "e1", "e3", "e4"}));
    Dataset flat;
    for (const char* e : {"c", "a", "b"}) flat.add_row(e, {"x"});
    EXPECT_EQ(sparse_ordering(flat).items(), (std::vector<std::string>{"c", "a", "b"}));
    Dataset one;
    one.add_row("only", {});
    EXPECT_EQ(sparse_ordering(one).items(), (std::vector<std::string>{"only"}));
}

TEST(SparseStorage, ExplicitOrderingSparesTwoBits) {
    const BloomMatrix input = matrix_example(MatrixLayout::Sparse);
    const BloomMatrix alt = matrix_example(MatrixLayout::Sparse, Ordering(kAltOrder));
    EXPECT_EQ(input.stored_bits(), 19u);
    EXPECT_EQ(alt.stored_bits(), 17u);
    EXPECT_EQ(input.stored_bits() - alt.stored_bits(), 2u);
    EXPECT_EQ(matrix_example(MatrixLayout::Dense).stored_bits(), 40u);
    EXPECT_EQ(sorted(alt.lookup("l3")), (ItemSet{"e2", "e3", "e5"}));
}

TEST(BloomMatrixBuild, SingleItemSingleLabel) {
    Dataset d;
    d.add_row("e1", {"l1"});
    const BloomMatrix m = BloomMatrix::build(d, 0.5);
    EXPECT_EQ(m.m(), 2u);
    EXPECT_EQ(m.k(), 1u);
    EXPECT_EQ(m.item_count(), 1u);
    const auto rows = m.family().neighborhood("l1", 2);
    std::size_t ones = 0;
    for (std::size_t r = 0; r < 2; ++r) {
        const bool in = std::find(rows.begin(), rows.end(), r) != rows.end();
        EXPECT_EQ(m.row(r).test(0), in);
        ones += m.row(r).count();
    }
    EXPECT_EQ(ones, rows.size());
    EXPECT_EQ(m.lookup("l1"), (ItemSet{"e1"}));
}

TEST(BloomMatrixBuild, AverageSizingRule) {
    // 7 pairs over 5 items -> ceil(1.4) = 2 labels per item.
    const BloomMatrix m = BloomMatrix::build(matrix_example_dataset(), 0.01);
    EXPECT_EQ(m.m(), size_for(2, 0.01).m);
    EXPECT_EQ(m.k(), size_for(2, 0.01).k);
    const BloomMatrix s = BloomMatrix::build(matrix_example_dataset(), 0.01, {.layout = MatrixLayout::Sparse});
    EXPECT_EQ(s.ordering().items(), sparse_ordering(matrix_example_dataset()).items());
    MatrixBuildOptions explicit_mk;
    explicit_mk.explicit_mk = std::pair<std::size_t, std::size_t>{8, 2};
    explicit_mk.fixed_table = matrix_example_hashes();
    const BloomMatrix fixed = BloomMatrix::build(matrix_example_dataset(), 0.5, explicit_mk);
    EXPECT_EQ(set_bits(fixed), set_bits(matrix_example()));
    EXPECT_THROW(BloomMatrix::build(Dataset{}, 0.01), std::invalid_argument);
}

TEST(BloomMatrixBuild, RestoreRowsValidates) {
    BloomMatrix m(4, HashFamily::seeded(1), Ordering(five_items()));
    EXPECT_THROW(m.restore_rows(std::vector<Bitset>(3, Bitset(5))), std::invalid_argument);
    EXPECT_THROW(m.restore_rows(std::vector<Bitset>(4, Bitset(6))), std::invalid_argument);
    EXPECT_THROW(m.restore_rows(std::vector<SparseRow>(4, SparseRow(5))), std::logic_error);
}

// Random datasets and random (m, k): every added pair is found, AND lookups
// factor into single-label intersections, both layouts agree, and the sparse
// layout never stores more than the dense one.
TEST(BloomMatrixProperty, RandomDatasets) {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const Dataset d = random_dataset(rng, 64, 24);
        MatrixBuildOptions opts;
        opts.explicit_mk = std::pair<std::size_t, std::size_t>{1 + rng() % 48, 1 + rng() % 5};
        const BloomMatrix dense = BloomMatrix::build(d, 0.5, opts);
        opts.layout = MatrixLayout::Sparse;
        const BloomMatrix sparse = BloomMatrix::build(d, 0.5, opts);
        ASSERT_LE(sparse.stored_bits(), dense.stored_bits());

        const ExactIndex truth(d);
        for (const auto& l : truth.labels()) {
            const ItemSet hit = dense.lookup(l);
            ASSERT_TRUE(includes(hit, truth.inverted(l))) << l;
            ASSERT_EQ(sorted(hit), sorted(sparse.lookup(l)));
        }
        const auto& labels = truth.labels();
        if (labels.empty()) continue;
        for (int q = 0; q < 10; ++q) {
            std::vector<std::string> query;
            const std::size_t size = 1 + rng() % 4;
            for (std::size_t i = 0; i < size; ++i) query.push_back(labels[rng() % labels.size()]);
            query.push_back("absent" + std::to_string(rng() % 3));
            if (rng() % 2) query.pop_back();
            ItemSet expected = dense.lookup(query.front());
            for (const auto& l : query) expected = intersect(expected, dense.lookup(l));
            ASSERT_EQ(sorted(dense.lookup(query, LookupMode::And)), expected);
            ASSERT_EQ(sorted(sparse.lookup(query, LookupMode::And)), expected);
        }
    }
}
