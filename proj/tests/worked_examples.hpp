// Hand-worked fixtures with pinned hash neighborhoods.
#ifndef BMF_TESTS_WORKED_EXAMPLES_HPP
#define BMF_TESTS_WORKED_EXAMPLES_HPP

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "bmf/bloom_matrix.hpp"
#include "bmf/bloom_vector.hpp"
#include "bmf/dataset.hpp"
#include "bmf/hashing.hpp"

namespace bmf::fixtures {

inline std::vector<std::string> sorted(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
}

inline const std::vector<std::string>& five_items() {
    static const std::vector<std::string> items{"e1", "e2", "e3", "e4", "e5"};
    return items;
}

/// Three labels over five items: f(l1)={e2,e4}, f(l2)={e1,e2,e5},
/// f(l3)={e3,e5}; two functions over 8 rows.
inline Dataset matrix_example_dataset() {
    Dataset d;
    d.add_row("e1", {"l2"});
    d.add_row("e2", {"l1", "l2"});
    d.add_row("e3", {"l3"});
    d.add_row("e4", {"l1"});
    d.add_row("e5", {"l2", "l3"});
    return d;
}

inline std::shared_ptr<const FixedHashTable> matrix_example_hashes() {
    auto t = std::make_shared<FixedHashTable>();
    t->set("l1", 8, {0, 7});
    t->set("l2", 8, {2, 4});
    t->set("l3", 8, {2, 7});
    return t;
}

inline BloomMatrix matrix_example(MatrixLayout layout = MatrixLayout::Dense,
                                  std::optional<Ordering> ordering = std::nullopt) {
    Ordering order = ordering ? *ordering : Ordering(five_items());
    BloomMatrix m(8, HashFamily::fixed(2, matrix_example_hashes()), std::move(order), layout);
    m.add_label("l1", std::vector<std::string>{"e2", "e4"});
    m.add_label("l2", std::vector<std::string>{"e1", "e2", "e5"});
    m.add_label("l3", std::vector<std::string>{"e3", "e5"});
    return m;
}

/// Two labels over five items: f(l1)={e1,e2,e5}, f(l2)={e3,e5}. Row e1 has
/// 6 bits, the others 8; two functions each.
inline Dataset vector_example_dataset() {
    Dataset d;
    d.add_row("e1", {"l1"});
    d.add_row("e2", {"l1"});
    d.add_row("e3", {"l2"});
    d.add_row("e4", {});
    d.add_row("e5", {"l1", "l2"});
    return d;
}

inline std::shared_ptr<const FixedHashTable> vector_example_hashes() {
    auto t = std::make_shared<FixedHashTable>();
    t->set("l1", 6, {2, 5});
    t->set("l1", 8, {2, 6});
    t->set("l2", 6, {2, 5});
    t->set("l2", 8, {2, 7});
    return t;
}

inline BloomVector vector_example() {
    BloomVector v(vector_example_hashes());
    v.add_sized_item("e1", 6, 2);
    for (const char* e : {"e2", "e3", "e4", "e5"}) v.add_sized_item(e, 8, 2);
    v.add_label("l1", std::vector<std::string>{"e1", "e2", "e5"});
    v.add_label("l2", std::vector<std::string>{"e3", "e5"});
    return v;
}

} // namespace bmf::fixtures

#endif // BMF_TESTS_WORKED_EXAMPLES_HPP
