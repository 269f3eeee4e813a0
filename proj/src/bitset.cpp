#include "bmf/bitset.hpp"

#include <algorithm>
#include <bit>

namespace bmf {

namespace {

std::size_t words_for(std::size_t bits) {
    return (bits + Bitset::kWordBits - 1) / Bitset::kWordBits;
}

} // namespace

UnknownItemError::UnknownItemError(const std::string& item, const std::string& hint)
    : std::invalid_argument("unknown item '" + item + "'" + (hint.empty() ? "" : ": " + hint)),
      item_(item) {}

Bitset::Bitset(std::size_t length, bool value)
    : length_(length), words_(words_for(length), value ? ~word_type{0} : word_type{0}) {
    clear_tail();
}

void Bitset::check(std::size_t pos) const {
    if (pos >= length_) {
        throw std::out_of_range("bit position " + std::to_string(pos) + " outside bitset of length " +
                                std::to_string(length_));
    }
}

void Bitset::check_same_size(const Bitset& other) const {
    if (other.length_ != length_) {
        throw std::invalid_argument("bitset length mismatch: " + std::to_string(length_) + " vs " +
                                    std::to_string(other.length_));
    }
}

void Bitset::clear_tail() noexcept {
    const std::size_t rem = length_ % kWordBits;
    if (rem != 0 && !words_.empty()) {
        words_.back() &= (word_type{1} << rem) - 1;
    }
}

bool Bitset::test(std::size_t pos) const {
    check(pos);
    return test_unchecked(pos);
}

void Bitset::set(std::size_t pos) {
    check(pos);
    set_unchecked(pos);
}

void Bitset::reset(std::size_t pos) {
    check(pos);
    words_[pos / kWordBits] &= ~(word_type{1} << (pos % kWordBits));
}

void Bitset::set_all() {
    std::fill(words_.begin(), words_.end(), ~word_type{0});
    clear_tail();
}

void Bitset::reset_all() { std::fill(words_.begin(), words_.end(), word_type{0}); }

std::size_t Bitset::count() const noexcept {
    std::size_t total = 0;
    for (word_type w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

bool Bitset::none() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](word_type w) { return w == 0; });
}

std::size_t Bitset::highest_set_plus_one() const noexcept {
    for (std::size_t i = words_.size(); i-- > 0;) {
        if (words_[i] != 0) {
            return i * kWordBits + (kWordBits - static_cast<std::size_t>(std::countl_zero(words_[i])));
        }
    }
    return 0;
}

std::vector<std::size_t> Bitset::ones() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        word_type w = words_[i];
        while (w != 0) {
            out.push_back(i * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

Bitset& Bitset::operator|=(const Bitset& other) {
    check_same_size(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
}

Bitset& Bitset::operator&=(const Bitset& other) {
    check_same_size(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
}

std::string Bitset::to_string() const {
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
        if (test_unchecked(i)) s[i] = '1';
    }
    return s;
}

Bitset Bitset::from_string(std::string_view bits) {
    Bitset b(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            b.set_unchecked(i);
        } else if (bits[i] != '0') {
            throw std::invalid_argument("bit string may only contain '0' and '1'");
        }
    }
    return b;
}

bool SparseRow::test(std::size_t pos) const {
    if (pos >= logical_length_) {
        throw std::out_of_range("bit position " + std::to_string(pos) + " outside row of length " +
                                std::to_string(logical_length_));
    }
    if (pos >= stored_length_) return false;
    return (words_[pos / Bitset::kWordBits] >> (pos % Bitset::kWordBits)) & 1U;
}

SparseRow& SparseRow::operator|=(const Bitset& other) {
    if (other.size() != logical_length_) {
        throw std::invalid_argument("row width mismatch: " + std::to_string(logical_length_) + " vs " +
                                    std::to_string(other.size()));
    }
    const std::size_t top = other.highest_set_plus_one();
    if (top > stored_length_) {
        stored_length_ = top;
        words_.resize(words_for(top), 0);
    }
    auto src = other.words();
    const std::size_t n = words_for(top);
    for (std::size_t i = 0; i < n; ++i) words_[i] |= src[i];
    return *this;
}

SparseRow SparseRowBuilder::make(std::size_t logical_length, std::size_t stored_length,
                                 std::vector<Bitset::word_type> words) {
    if (stored_length > logical_length) {
        throw std::invalid_argument("sparse row stores more bits than its logical length");
    }
    if (words.size() != words_for(stored_length)) {
        throw std::invalid_argument("sparse row payload size does not match stored length");
    }
    SparseRow row(logical_length);
    row.stored_length_ = stored_length;
    row.words_ = std::move(words);
    if (stored_length > 0) {
        const std::size_t last = stored_length - 1;
        const std::size_t rem = stored_length % Bitset::kWordBits;
        if (rem != 0) row.words_.back() &= (Bitset::word_type{1} << rem) - 1;
        if (((row.words_[last / Bitset::kWordBits] >> (last % Bitset::kWordBits)) & 1U) == 0) {
            throw std::invalid_argument("sparse row has a stored trailing zero");
        }
    }
    return row;
}

SparseRow sparsify(const Bitset& bits) {
    SparseRow row(bits.size());
    row.stored_length_ = bits.highest_set_plus_one();
    auto src = bits.words();
    row.words_.assign(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(words_for(row.stored_length_)));
    return row;
}

Bitset densify(const SparseRow& row) {
    Bitset bits(row.logical_length_);
    auto dst = bits.words();
    std::copy(row.words_.begin(), row.words_.end(), dst.begin());
    return bits;
}

void and_into(Bitset& acc, const SparseRow& row) {
    if (acc.size() != row.logical_length()) {
        throw std::invalid_argument("row width mismatch in AND");
    }
    auto dst = acc.words();
    auto src = row.words();
    std::size_t i = 0;
    for (; i < src.size(); ++i) dst[i] &= src[i];
    for (; i < dst.size(); ++i) dst[i] = 0;
}

Ordering::Ordering(std::vector<std::string> items) {
    items_.reserve(items.size());
    index_.reserve(items.size());
    for (auto& item : items) push_back(std::move(item));
}

bool Ordering::contains(std::string_view item) const { return index_.find(item) != index_.end(); }

const std::size_t* Ordering::find(std::string_view item) const {
    auto it = index_.find(item);
    return it == index_.end() ? nullptr : &it->second;
}

std::size_t Ordering::index_of(std::string_view item) const {
    auto it = index_.find(item);
    if (it == index_.end()) throw UnknownItemError(std::string(item));
    return it->second;
}

std::size_t Ordering::push_back(std::string item) {
    const std::size_t pos = items_.size();
    auto [it, inserted] = index_.emplace(item, pos);
    if (!inserted) throw std::invalid_argument("duplicate item '" + item + "' in ordering");
    items_.push_back(std::move(item));
    return pos;
}

Bitset encode(const Ordering& ordering, std::span<const std::string> items) {
    Bitset bits(ordering.size());
    for (const auto& item : items) bits.set_unchecked(ordering.index_of(item));
    return bits;
}

ItemSet decode(const Ordering& ordering, const Bitset& bits) {
    if (bits.size() != ordering.size()) {
        throw std::invalid_argument("decode: bitset length " + std::to_string(bits.size()) +
                                    " does not match ordering size " + std::to_string(ordering.size()));
    }
    ItemSet out;
    for (std::size_t pos : bits.ones()) out.push_back(ordering.item(pos));
    return out;
}

} // namespace bmf
