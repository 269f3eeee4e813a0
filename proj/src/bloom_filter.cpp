#include "bmf/bloom_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bmf {

FilterParams size_for(std::size_t n, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("target false-positive probability must lie in (0, 1), got " +
                                    std::to_string(p));
    }
    const double ln2 = std::numbers::ln2;
    const double bits = -static_cast<double>(n) * std::log(p) / (ln2 * ln2);
    const double hashes = std::floor(-std::log2(p) + 0.5);

    FilterParams params;
    params.m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(bits)));
    params.k = std::max<std::size_t>(1, static_cast<std::size_t>(hashes));
    params.target_fp = p;
    params.capacity = n;
    return params;
}

double theoretical_fp(std::size_t m, std::size_t k, std::size_t n) {
    if (m == 0 || k == 0) throw std::invalid_argument("theoretical_fp needs m >= 1 and k >= 1");
    const double kd = static_cast<double>(k);
    return std::pow(1.0 - std::exp(-kd * static_cast<double>(n) / static_cast<double>(m)), kd);
}

BloomFilter::BloomFilter(std::size_t m, HashFamily family) : bits_(m), family_(std::move(family)) {
    if (m == 0) throw std::invalid_argument("bloom filter needs m >= 1");
}

BloomFilter::BloomFilter(Bitset bits, HashFamily family, std::size_t inserted)
    : bits_(std::move(bits)), family_(std::move(family)), inserted_(inserted) {
    if (bits_.size() == 0) throw std::invalid_argument("bloom filter needs m >= 1");
}

void BloomFilter::add(std::string_view label) { add(family_.prepare(label, k())); }

bool BloomFilter::lookup(std::string_view label) const { return lookup(family_.prepare(label, k())); }

void BloomFilter::add(const PreparedLabel& label) {
    if (family_.kind() == HashKind::SeededMurmur) {
        const auto& raw = label.raw();
        if (raw.size() < k()) throw std::logic_error("prepared label carries fewer hashes than k");
        for (std::size_t i = 0; i < k(); ++i) bits_.set_unchecked(ranged(raw[i], m()));
    } else {
        for (std::size_t idx : family_.neighborhood(label, m())) bits_.set_unchecked(idx);
    }
    ++inserted_;
}

bool BloomFilter::lookup(const PreparedLabel& label) const {
    if (family_.kind() == HashKind::SeededMurmur) {
        const auto& raw = label.raw();
        if (raw.size() < k()) throw std::logic_error("prepared label carries fewer hashes than k");
        for (std::size_t i = 0; i < k(); ++i) {
            if (!bits_.test_unchecked(ranged(raw[i], m()))) return false;
        }
        return true;
    }
    const auto hood = family_.neighborhood(label, m());
    return std::all_of(hood.begin(), hood.end(), [&](std::size_t idx) { return bits_.test_unchecked(idx); });
}

bool BloomFilter::lookup_all(std::span<const std::string> labels) const {
    if (labels.empty()) throw std::invalid_argument("lookup_all needs at least one label");
    return std::all_of(labels.begin(), labels.end(), [&](const std::string& l) { return lookup(l); });
}

} // namespace bmf
