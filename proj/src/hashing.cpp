#include "bmf/hashing.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace bmf {

std::uint32_t murmur3_32(std::string_view data, std::uint32_t seed) noexcept {
    constexpr std::uint32_t c1 = 0xcc9e2d51;
    constexpr std::uint32_t c2 = 0x1b873593;

    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    const std::size_t len = data.size();
    const std::size_t nblocks = len / 4;
    std::uint32_t h = seed;

    for (std::size_t i = 0; i < nblocks; ++i) {
        const unsigned char* p = bytes + i * 4;
        std::uint32_t k = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                          (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
        k *= c1;
        k = std::rotl(k, 15);
        k *= c2;
        h ^= k;
        h = std::rotl(h, 13);
        h = h * 5 + 0xe6546b64;
    }

    const unsigned char* tail = bytes + nblocks * 4;
    std::uint32_t k = 0;
    switch (len & 3U) {
    case 3:
        k ^= static_cast<std::uint32_t>(tail[2]) << 16;
        [[fallthrough]];
    case 2:
        k ^= static_cast<std::uint32_t>(tail[1]) << 8;
        [[fallthrough]];
    case 1:
        k ^= tail[0];
        k *= c1;
        k = std::rotl(k, 15);
        k *= c2;
        h ^= k;
    }

    h ^= static_cast<std::uint32_t>(len);
    h ^= h >> 16;
    h *= 0x85ebca6b;
    h ^= h >> 13;
    h *= 0xc2b2ae35;
    h ^= h >> 16;
    return h;
}

void FixedHashTable::set(std::string label, std::size_t range, std::vector<std::size_t> indices) {
    if (range == 0) throw std::invalid_argument("fixed hash table: range must be >= 1");
    if (indices.empty()) throw std::invalid_argument("fixed hash table: entry needs at least one index");
    for (std::size_t idx : indices) {
        if (idx >= range) {
            throw std::invalid_argument("fixed hash table: index " + std::to_string(idx) + " outside range " +
                                        std::to_string(range) + " for label '" + label + "'");
        }
    }
    entries_[{std::move(label), range}] = std::move(indices);
}

const std::vector<std::size_t>* FixedHashTable::find(std::string_view label, std::size_t range) const {
    auto it = entries_.find(std::pair<std::string, std::size_t>{std::string(label), range});
    return it == entries_.end() ? nullptr : &it->second;
}

HashFamily::HashFamily(HashKind kind, std::size_t k, std::shared_ptr<const FixedHashTable> table)
    : kind_(kind), k_(k), table_(std::move(table)) {
    if (k_ == 0) throw std::invalid_argument("hash family needs k >= 1");
}

HashFamily HashFamily::seeded(std::size_t k) { return HashFamily(HashKind::SeededMurmur, k, nullptr); }

HashFamily HashFamily::fixed(std::size_t k, std::shared_ptr<const FixedHashTable> table) {
    if (!table) throw std::invalid_argument("fixed hash family needs a table");
    return HashFamily(HashKind::FixedTable, k, std::move(table));
}

HashFamily HashFamily::with_k(std::size_t k) const { return HashFamily(kind_, k, table_); }

PreparedLabel HashFamily::prepare(std::string_view label, std::size_t max_k) const {
    PreparedLabel out;
    out.label_ = label;
    if (kind_ == HashKind::SeededMurmur) {
        out.raw_.resize(max_k);
        for (std::size_t i = 0; i < max_k; ++i) {
            out.raw_[i] = murmur3_32(label, static_cast<std::uint32_t>(i + 1));
        }
    }
    return out;
}

HashNeighborhood HashFamily::neighborhood(const PreparedLabel& label, std::size_t range) const {
    if (range == 0) throw std::invalid_argument("hash range must be >= 1");
    HashNeighborhood out;
    if (kind_ == HashKind::SeededMurmur) {
        if (label.raw_.size() < k_) {
            throw std::logic_error("prepared label carries fewer hashes than the family's k");
        }
        out.reserve(k_);
        for (std::size_t i = 0; i < k_; ++i) out.push_back(ranged(label.raw_[i], range));
    } else {
        const auto* entry = table_->find(label.label_, range);
        if (entry == nullptr) {
            throw std::out_of_range("fixed hash table has no entry for label '" + std::string(label.label_) +
                                    "' at range " + std::to_string(range));
        }
        const std::size_t n = std::min(k_, entry->size());
        out.assign(entry->begin(), entry->begin() + static_cast<std::ptrdiff_t>(n));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

HashNeighborhood HashFamily::neighborhood(std::string_view label, std::size_t range) const {
    return neighborhood(prepare(label, k_), range);
}

} // namespace bmf
