// Small random relations for property checks.
#ifndef BMF_TESTS_RANDOM_DATASETS_HPP
#define BMF_TESTS_RANDOM_DATASETS_HPP

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "bmf/dataset.hpp"

namespace bmf::fixtures {

/// 1..max_items items, 1..max_labels labels, each pair present with a
/// per-dataset density drawn from [0.02, 0.6].
inline Dataset random_dataset(std::mt19937_64& rng, std::size_t max_items, std::size_t max_labels) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = 1 + rng() % max_items;
    const std::size_t l = 1 + rng() % max_labels;
    const double density = 0.02 + 0.58 * unit(rng);
    Dataset d;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> labels;
        for (std::size_t j = 0; j < l; ++j) {
            if (unit(rng) < density) labels.push_back("l" + std::to_string(j));
        }
        d.add_row("e" + std::to_string(i), std::move(labels));
    }
    return d;
}

inline ItemSet intersect(ItemSet a, ItemSet b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    ItemSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool includes(ItemSet super, ItemSet sub) {
    std::sort(super.begin(), super.end());
    std::sort(sub.begin(), sub.end());
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

} // namespace bmf::fixtures

#endif // BMF_TESTS_RANDOM_DATASETS_HPP
