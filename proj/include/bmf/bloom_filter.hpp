#ifndef BMF_BLOOM_FILTER_HPP
#define BMF_BLOOM_FILTER_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "bmf/bitset.hpp"
#include "bmf/hashing.hpp"

namespace bmf {

struct FilterParams {
    std::size_t m = 1;
    std::size_t k = 1;
    double target_fp = 0.0;
    std::size_t capacity = 0;
};

/// m = ceil(-n ln p / ln^2 2) (at least 1), k = max(1, round(-log2 p)).
FilterParams size_for(std::size_t n, double p);

/// (1 - e^{-kn/m})^k
double theoretical_fp(std::size_t m, std::size_t k, std::size_t n);

/**
 * Standard Bloom filter: m bits and k hash functions. Supports add and lookup
 * only; removing a label would admit false negatives.
 */
class BloomFilter {
  public:
    BloomFilter(std::size_t m, HashFamily family);
    explicit BloomFilter(const FilterParams& params) : BloomFilter(params.m, HashFamily::seeded(params.k)) {}

    /// Restores a filter from persisted state.
    BloomFilter(Bitset bits, HashFamily family, std::size_t inserted);

    std::size_t m() const noexcept { return bits_.size(); }
    std::size_t k() const noexcept { return family_.k(); }
    std::size_t inserted_count() const noexcept { return inserted_; }
    const Bitset& bits() const noexcept { return bits_; }
    const HashFamily& family() const noexcept { return family_; }

    void add(std::string_view label);
    bool lookup(std::string_view label) const;
    /// True iff every label looks up true. Throws on an empty label set.
    bool lookup_all(std::span<const std::string> labels) const;

    /// Variants over labels hashed once by `family().prepare(label, >= k())`.
    void add(const PreparedLabel& label);
    bool lookup(const PreparedLabel& label) const;

    double theoretical_fp() const { return bmf::theoretical_fp(m(), k(), inserted_); }

  private:
    Bitset bits_;
    HashFamily family_;
    std::size_t inserted_ = 0;
};

} // namespace bmf

#endif // BMF_BLOOM_FILTER_HPP
