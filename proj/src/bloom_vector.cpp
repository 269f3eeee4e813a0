#include "bmf/bloom_vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bmf {

BloomVector::BloomVector(std::shared_ptr<const FixedHashTable> fixed_table, bool track_insertions)
    : fixed_table_(std::move(fixed_table)), track_insertions_(track_insertions) {}

HashFamily BloomVector::family_for(std::size_t k) const {
    return fixed_table_ ? HashFamily::fixed(k, fixed_table_) : HashFamily::seeded(k);
}

BloomVector BloomVector::build(const Dataset& dataset, double target_fp, const VectorBuildOptions& options) {
    if (dataset.empty()) throw std::invalid_argument("cannot build a bloom vector from an empty dataset");
    BloomVector vector(options.fixed_table, options.track_insertions);
    for (const auto& row : dataset.rows()) {
        if (options.explicit_mk) {
            vector.add_sized_item(row.item, options.explicit_mk->first, options.explicit_mk->second);
        } else {
            vector.add_item(row.item, row.labels.size(), target_fp);
        }
    }

    // Each filter only ever sees its own item's labels, so adding row by row
    // sets the same bits as adding label by label.
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        BloomFilter& f = vector.filters_[i];
        for (const auto& label : dataset.row(i).labels) {
            f.add(f.family().prepare(label, f.k()));
            if (vector.track_insertions_) vector.touched_[label].push_back(i);
        }
    }
    return vector;
}

void BloomVector::add_item(std::string item, std::size_t expected_labels, double target_fp) {
    const FilterParams params = size_for(expected_labels, target_fp);
    add_sized_item(std::move(item), params.m, params.k);
}

void BloomVector::add_sized_item(std::string item, std::size_t m, std::size_t k) {
    add_item(std::move(item), BloomFilter(m, family_for(k)));
}

void BloomVector::add_item(std::string item, BloomFilter filter) {
    if (ordering_.contains(item)) throw std::invalid_argument("item '" + item + "' already present");
    max_k_ = std::max(max_k_, filter.k());
    ordering_.push_back(std::move(item));
    filters_.push_back(std::move(filter));
}

void BloomVector::add_label(std::string_view label, std::span<const std::string> items) {
    Bitset encoded(ordering_.size());
    for (const auto& item : items) {
        const std::size_t* pos = ordering_.find(item);
        if (pos == nullptr) throw UnknownItemError(item, "add it with add_item first");
        encoded.set_unchecked(*pos);
    }
    const auto rows = encoded.ones();
    if (rows.empty()) return;
    const PreparedLabel prepared = family_for(std::max<std::size_t>(max_k_, 1)).prepare(label, max_k_);
    for (std::size_t i : rows) filters_[i].add(prepared);
    if (track_insertions_) {
        auto& touched = touched_[std::string(label)];
        touched.insert(touched.end(), rows.begin(), rows.end());
    }
}

Bitset BloomVector::lookup_bits(std::string_view label) const {
    Bitset hits(ordering_.size());
    if (filters_.empty()) return hits;
    const PreparedLabel prepared = family_for(max_k_).prepare(label, max_k_);
    for (std::size_t i = 0; i < filters_.size(); ++i) {
        if (filters_[i].lookup(prepared)) hits.set_unchecked(i);
    }
    return hits;
}

ItemSet BloomVector::lookup(std::string_view label) const { return decode(ordering_, lookup_bits(label)); }

ItemSet BloomVector::lookup(std::span<const std::string> labels, LookupMode mode) const {
    if (labels.empty()) throw std::invalid_argument("lookup needs at least one label");
    Bitset acc(ordering_.size());
    if (filters_.empty()) return {};
    std::vector<PreparedLabel> prepared;
    prepared.reserve(labels.size());
    const HashFamily hasher = family_for(max_k_);
    for (const auto& l : labels) prepared.push_back(hasher.prepare(l, max_k_));

    for (std::size_t i = 0; i < filters_.size(); ++i) {
        const BloomFilter& f = filters_[i];
        bool hit;
        if (mode == LookupMode::And) {
            hit = std::all_of(prepared.begin(), prepared.end(), [&](const PreparedLabel& p) { return f.lookup(p); });
        } else {
            hit = std::any_of(prepared.begin(), prepared.end(), [&](const PreparedLabel& p) { return f.lookup(p); });
        }
        if (hit) acc.set_unchecked(i);
    }
    return decode(ordering_, acc);
}

std::vector<std::size_t> BloomVector::touched_rows(std::string_view label) const {
    auto it = touched_.find(std::string(label));
    if (it == touched_.end()) return {};
    std::vector<std::size_t> rows = it->second;
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
}

FpReport BloomVector::theoretical_fpr(std::span<const std::string> labels) const {
    FpReport report;
    double total = 0.0;
    for (const auto& l : labels) {
        double value = 0.0;
        for (std::size_t i : touched_rows(l)) {
            const BloomFilter& f = filters_[i];
            const double kd = static_cast<double>(f.k());
            const double keep = 1.0 - 1.0 / static_cast<double>(f.m());
            value += std::pow(1.0 - std::pow(keep, kd * static_cast<double>(f.inserted_count())), kd);
        }
        report.per_label.emplace_back(l, value);
        total += value;
    }
    if (!labels.empty()) report.average = total / static_cast<double>(labels.size());
    return report;
}

std::size_t BloomVector::stored_bits() const noexcept {
    std::size_t total = 0;
    for (const auto& f : filters_) total += f.m();
    return total;
}

} // namespace bmf
