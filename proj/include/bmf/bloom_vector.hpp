#ifndef BMF_BLOOM_VECTOR_HPP
#define BMF_BLOOM_VECTOR_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bmf/bitset.hpp"
#include "bmf/bloom_filter.hpp"
#include "bmf/bloom_matrix.hpp"
#include "bmf/dataset.hpp"
#include "bmf/hashing.hpp"

namespace bmf {

struct VectorBuildOptions {
    /// Same (m, k) for every item instead of per-item sizing.
    std::optional<std::pair<std::size_t, std::size_t>> explicit_mk;
    std::shared_ptr<const FixedHashTable> fixed_table;
    /// Remember which rows each label touched, for theoretical_fpr().
    bool track_insertions = true;
};

/**
 * One Bloom filter per item, each sized for that item's own label count.
 * All filters share the hash algorithm and differ only in range and k.
 */
class BloomVector {
  public:
    /// Empty vector; items arrive through add_item().
    explicit BloomVector(std::shared_ptr<const FixedHashTable> fixed_table = nullptr, bool track_insertions = true);

    /// Row i gets size_for(|labels(e_i)|, p), or the explicit (m, k).
    static BloomVector build(const Dataset& dataset, double target_fp, const VectorBuildOptions& options = {});

    std::size_t item_count() const noexcept { return ordering_.size(); }
    const Ordering& ordering() const noexcept { return ordering_; }
    const BloomFilter& filter(std::size_t i) const { return filters_.at(i); }
    const std::vector<BloomFilter>& filters() const noexcept { return filters_; }

    /// Appends an item with a filter sized by size_for(expected_labels, p).
    void add_item(std::string item, std::size_t expected_labels, double target_fp);
    /// Appends an item with an explicitly sized filter.
    void add_sized_item(std::string item, std::size_t m, std::size_t k);
    /// Appends a restored filter.
    void add_item(std::string item, BloomFilter filter);

    void add_label(std::string_view label, std::span<const std::string> items);

    ItemSet lookup(std::string_view label) const;
    ItemSet lookup(std::span<const std::string> labels, LookupMode mode) const;
    Bitset lookup_bits(std::string_view label) const;

    /// Per label: sum over touched rows i of (1 - (1 - 1/m_i)^{k_i n_i})^{k_i}.
    FpReport theoretical_fpr(std::span<const std::string> labels) const;

    /// Row positions touched by add_label(label, ...), ascending.
    std::vector<std::size_t> touched_rows(std::string_view label) const;

    std::size_t stored_bits() const noexcept;

  private:
    HashFamily family_for(std::size_t k) const;

    Ordering ordering_;
    std::vector<BloomFilter> filters_;
    std::shared_ptr<const FixedHashTable> fixed_table_;
    std::size_t max_k_ = 0;
    bool track_insertions_;
    std::unordered_map<std::string, std::vector<std::size_t>> touched_;
};

} // namespace bmf

#endif // BMF_BLOOM_VECTOR_HPP
