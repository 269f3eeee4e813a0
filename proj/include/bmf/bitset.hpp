#ifndef BMF_BITSET_HPP
#define BMF_BITSET_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bmf {

/// Raised when an item id is not part of an ordering.
class UnknownItemError : public std::invalid_argument {
  public:
    explicit UnknownItemError(const std::string& item, const std::string& hint = {});

    const std::string& item() const noexcept { return item_; }

  private:
    std::string item_;
};

/**
 * Fixed-length bitset addressed by position. Positions outside [0, size())
 * are rejected by the checked accessors; the word-level view is exposed for
 * the row operations of the multifilters.
 */
class Bitset {
  public:
    using word_type = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    Bitset() = default;
    explicit Bitset(std::size_t length, bool value = false);

    std::size_t size() const noexcept { return length_; }
    bool empty() const noexcept { return length_ == 0; }

    bool test(std::size_t pos) const;
    void set(std::size_t pos);
    void reset(std::size_t pos);
    void set_all();
    void reset_all();

    /// Unchecked read, for hot loops that already validated `pos`.
    bool test_unchecked(std::size_t pos) const noexcept {
        return (words_[pos / kWordBits] >> (pos % kWordBits)) & 1U;
    }
    void set_unchecked(std::size_t pos) noexcept {
        words_[pos / kWordBits] |= word_type{1} << (pos % kWordBits);
    }

    std::size_t count() const noexcept;
    bool none() const noexcept;
    /// Index of the highest set bit + 1, or 0 when no bit is set.
    std::size_t highest_set_plus_one() const noexcept;
    /// Positions of all set bits in increasing order.
    std::vector<std::size_t> ones() const;

    Bitset& operator|=(const Bitset& other);
    Bitset& operator&=(const Bitset& other);

    std::span<const word_type> words() const noexcept { return words_; }
    std::span<word_type> words() noexcept { return words_; }

    /// "10100" style rendering, position 0 first.
    std::string to_string() const;
    static Bitset from_string(std::string_view bits);

    friend bool operator==(const Bitset&, const Bitset&) = default;

  private:
    void check(std::size_t pos) const;
    void check_same_size(const Bitset& other) const;
    void clear_tail() noexcept;

    std::size_t length_ = 0;
    std::vector<word_type> words_;
};

/**
 * A row of logical width N that stores only up to its last 1-bit.
 * Reads past the stored prefix return 0.
 */
class SparseRow {
  public:
    SparseRow() = default;
    explicit SparseRow(std::size_t logical_length) : logical_length_(logical_length) {}

    std::size_t logical_length() const noexcept { return logical_length_; }
    std::size_t stored_length() const noexcept { return stored_length_; }

    bool test(std::size_t pos) const;

    /// OR a dense row of the same logical width into this one, growing the
    /// stored prefix as needed.
    SparseRow& operator|=(const Bitset& other);

    std::span<const Bitset::word_type> words() const noexcept { return words_; }

    friend bool operator==(const SparseRow&, const SparseRow&) = default;

  private:
    friend SparseRow sparsify(const Bitset& bits);
    friend Bitset densify(const SparseRow& row);
    friend class SparseRowBuilder;

    std::size_t logical_length_ = 0;
    std::size_t stored_length_ = 0;
    std::vector<Bitset::word_type> words_;
};

/// Restores a SparseRow from its stored form; validates the no-trailing-zero
/// normal form.
class SparseRowBuilder {
  public:
    static SparseRow make(std::size_t logical_length, std::size_t stored_length,
                          std::vector<Bitset::word_type> words);
};

SparseRow sparsify(const Bitset& bits);
Bitset densify(const SparseRow& row);

/// acc[i] &= row[i] for every position; positions past the stored prefix clear.
void and_into(Bitset& acc, const SparseRow& row);

/// Bijection between item identifiers and positions [0, N).
class Ordering {
  public:
    Ordering() = default;
    explicit Ordering(std::vector<std::string> items);

    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }

    const std::string& item(std::size_t pos) const { return items_.at(pos); }
    const std::vector<std::string>& items() const noexcept { return items_; }

    bool contains(std::string_view item) const;
    /// Throws UnknownItemError for ids outside the ordering.
    std::size_t index_of(std::string_view item) const;
    const std::size_t* find(std::string_view item) const;

    /// Appends a new item at position size(); duplicates are rejected.
    std::size_t push_back(std::string item);

  private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };
    std::vector<std::string> items_;
    std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

using ItemSet = std::vector<std::string>;

/// Bit i is 1 iff ordering.item(i) is in `items`. Unknown ids throw.
Bitset encode(const Ordering& ordering, std::span<const std::string> items);

/// Items at the 1-positions of `bits`, in position order. Length must be N.
ItemSet decode(const Ordering& ordering, const Bitset& bits);

} // namespace bmf

#endif // BMF_BITSET_HPP
