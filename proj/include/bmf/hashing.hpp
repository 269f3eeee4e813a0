#ifndef BMF_HASHING_HPP
#define BMF_HASHING_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bmf {

/// MurmurHash3_x86_32 over the raw bytes of `data`.
std::uint32_t murmur3_32(std::string_view data, std::uint32_t seed) noexcept;

/// Maps a 32-bit hash into [0, range) as floor(h / 2^32 * range).
inline std::size_t ranged(std::uint32_t hash, std::size_t range) noexcept {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(hash) * range) >> 32);
}

enum class HashKind : std::uint8_t { SeededMurmur = 0, FixedTable = 1 };

/// Distinct indices produced by the k functions for one label at one range,
/// sorted ascending.
using HashNeighborhood = std::vector<std::size_t>;

/**
 * Pinned neighborhoods keyed by (label, range). Each entry lists the output of
 * h_1..h_k in function order. Used to reproduce hand-worked fixtures where a
 * real hash cannot be steered to the required indices.
 */
class FixedHashTable {
  public:
    void set(std::string label, std::size_t range, std::vector<std::size_t> indices);
    const std::vector<std::size_t>* find(std::string_view label, std::size_t range) const;

    const std::map<std::pair<std::string, std::size_t>, std::vector<std::size_t>>& entries() const noexcept {
        return entries_;
    }

  private:
    std::map<std::pair<std::string, std::size_t>, std::vector<std::size_t>> entries_;
};

/// Per-label hash state computed once and reused across filters of
/// different ranges (Bloom Vector rows).
class PreparedLabel {
  public:
    std::string_view label() const noexcept { return label_; }
    const std::vector<std::uint32_t>& raw() const noexcept { return raw_; }

  private:
    friend class HashFamily;
    std::string_view label_;
    std::vector<std::uint32_t> raw_;
};

/**
 * k hash functions. The seeded kind runs 32-bit MurmurHash3 with seeds 1..k
 * over the label's UTF-8 bytes and reduces into a range with `ranged`.
 */
class HashFamily {
  public:
    static HashFamily seeded(std::size_t k);
    static HashFamily fixed(std::size_t k, std::shared_ptr<const FixedHashTable> table);

    HashKind kind() const noexcept { return kind_; }
    std::size_t k() const noexcept { return k_; }
    const std::shared_ptr<const FixedHashTable>& table() const noexcept { return table_; }

    /// Same algorithm and table, different number of functions.
    HashFamily with_k(std::size_t k) const;

    HashNeighborhood neighborhood(std::string_view label, std::size_t range) const;

    /// Hashes `label` for up to `max_k` functions. The returned object refers
    /// to `label`, which must outlive it.
    PreparedLabel prepare(std::string_view label, std::size_t max_k) const;
    HashNeighborhood neighborhood(const PreparedLabel& label, std::size_t range) const;

  private:
    HashFamily(HashKind kind, std::size_t k, std::shared_ptr<const FixedHashTable> table);

    HashKind kind_;
    std::size_t k_;
    std::shared_ptr<const FixedHashTable> table_;
};

} // namespace bmf

#endif // BMF_HASHING_HPP
