#include "bmf/bloom_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bmf/bloom_filter.hpp"

namespace bmf {

Ordering sparse_ordering(const Dataset& dataset) {
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dataset.row(a).labels.size() > dataset.row(b).labels.size();
    });
    std::vector<std::string> items;
    items.reserve(order.size());
    for (std::size_t pos : order) items.push_back(dataset.row(pos).item);
    return Ordering(std::move(items));
}

BloomMatrix::BloomMatrix(std::size_t m, HashFamily family, Ordering ordering, MatrixLayout layout,
                         bool track_insertions)
    : m_(m), family_(std::move(family)), ordering_(std::move(ordering)), layout_(layout),
      track_insertions_(track_insertions) {
    if (m_ == 0) throw std::invalid_argument("bloom matrix needs m >= 1");
    if (layout_ == MatrixLayout::Dense) {
        dense_.assign(m_, Bitset(ordering_.size()));
    } else {
        sparse_.assign(m_, SparseRow(ordering_.size()));
    }
}

BloomMatrix BloomMatrix::build(const Dataset& dataset, double target_fp, const MatrixBuildOptions& options) {
    if (dataset.empty()) throw std::invalid_argument("cannot build a bloom matrix from an empty dataset");

    std::size_t m = 0;
    std::size_t k = 0;
    if (options.explicit_mk) {
        std::tie(m, k) = *options.explicit_mk;
    } else {
        const std::size_t n = dataset.size();
        const std::size_t avg = (dataset.total_pairs() + n - 1) / n;
        const FilterParams params = size_for(avg, target_fp);
        m = params.m;
        k = params.k;
    }
    HashFamily family = options.fixed_table ? HashFamily::fixed(k, options.fixed_table) : HashFamily::seeded(k);

    Ordering ordering;
    if (options.ordering) {
        ordering = *options.ordering;
    } else if (options.layout == MatrixLayout::Sparse) {
        ordering = sparse_ordering(dataset);
    } else {
        ordering = dataset.input_ordering();
    }
    if (ordering.size() != dataset.size()) {
        throw std::invalid_argument("ordering does not cover the dataset's items");
    }

    BloomMatrix matrix(m, std::move(family), std::move(ordering), options.layout, options.track_insertions);

    // Dataset position -> column.
    std::vector<std::size_t> column(dataset.size());
    for (std::size_t pos = 0; pos < dataset.size(); ++pos) {
        column[pos] = matrix.ordering_.index_of(dataset.row(pos).item);
    }

    const ExactIndex index(dataset);
    Bitset encoded(dataset.size());
    for (std::size_t id = 0; id < index.label_count(); ++id) {
        encoded.reset_all();
        const auto& positions = index.inverted_at(id);
        for (std::size_t pos : positions) encoded.set_unchecked(column[pos]);
        const std::string& label = index.labels()[id];
        for (std::size_t r : matrix.family_.neighborhood(label, m)) {
            if (matrix.layout_ == MatrixLayout::Dense) {
                matrix.dense_[r] |= encoded;
            } else {
                matrix.sparse_[r] |= encoded;
            }
        }
        if (matrix.track_insertions_) matrix.insertions_[label] += positions.size();
    }
    return matrix;
}

void BloomMatrix::add_label(std::string_view label, std::span<const std::string> items) {
    Bitset encoded(ordering_.size());
    for (const auto& item : items) {
        const std::size_t* pos = ordering_.find(item);
        if (pos == nullptr) {
            throw UnknownItemError(item, "a bloom matrix cannot take new items; rebuild it with the item included");
        }
        encoded.set_unchecked(*pos);
    }
    if (!encoded.none()) {
        for (std::size_t r : family_.neighborhood(label, m_)) {
            if (layout_ == MatrixLayout::Dense) {
                dense_[r] |= encoded;
            } else {
                sparse_[r] |= encoded;
            }
        }
    }
    if (track_insertions_) insertions_[std::string(label)] += items.size();
}

void BloomMatrix::and_row(Bitset& acc, std::size_t r) const {
    if (layout_ == MatrixLayout::Dense) {
        acc &= dense_[r];
    } else {
        and_into(acc, sparse_[r]);
    }
}

Bitset BloomMatrix::and_rows(const HashNeighborhood& rows) const {
    Bitset acc(ordering_.size(), true);
    for (std::size_t r : rows) {
        and_row(acc, r);
        if (acc.none()) break;
    }
    return acc;
}

Bitset BloomMatrix::lookup_bits(std::string_view label) const { return and_rows(family_.neighborhood(label, m_)); }

ItemSet BloomMatrix::lookup(std::string_view label) const { return decode(ordering_, lookup_bits(label)); }

ItemSet BloomMatrix::lookup(std::span<const std::string> labels, LookupMode mode) const {
    if (labels.empty()) throw std::invalid_argument("lookup needs at least one label");
    if (mode == LookupMode::And) {
        HashNeighborhood rows;
        for (const auto& l : labels) {
            auto hood = family_.neighborhood(l, m_);
            rows.insert(rows.end(), hood.begin(), hood.end());
        }
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        return decode(ordering_, and_rows(rows));
    }
    // Union of per-label results; OR-ing raw rows would mix labels' columns.
    Bitset acc(ordering_.size());
    for (const auto& l : labels) acc |= lookup_bits(l);
    return decode(ordering_, acc);
}

FpReport BloomMatrix::theoretical_fpr(std::span<const std::string> labels) const {
    FpReport report;
    const double kd = static_cast<double>(k());
    const double keep = 1.0 - 1.0 / static_cast<double>(m_);
    const std::size_t n_items = ordering_.size();
    double total = 0.0;
    for (const auto& l : labels) {
        auto it = insertions_.find(l);
        const std::size_t n = it == insertions_.end() ? 0 : it->second;
        const double term = std::pow(1.0 - std::pow(keep, static_cast<double>(n) * kd), kd);
        const std::size_t negatives = n >= n_items ? 0 : n_items - n;
        const double value = static_cast<double>(negatives) * term;
        report.per_label.emplace_back(l, value);
        total += value;
    }
    if (!labels.empty()) report.average = total / static_cast<double>(labels.size());
    return report;
}

std::size_t BloomMatrix::stored_bits() const noexcept {
    if (layout_ == MatrixLayout::Dense) return m_ * ordering_.size();
    std::size_t total = 0;
    for (const auto& row : sparse_) total += row.stored_length();
    return total;
}

Bitset BloomMatrix::row(std::size_t r) const {
    if (r >= m_) throw std::out_of_range("row " + std::to_string(r) + " outside matrix of " + std::to_string(m_));
    return layout_ == MatrixLayout::Dense ? dense_[r] : densify(sparse_[r]);
}

void BloomMatrix::restore_rows(std::vector<Bitset> rows) {
    if (layout_ != MatrixLayout::Dense) throw std::logic_error("dense rows restored into a sparse matrix");
    if (rows.size() != m_) throw std::invalid_argument("row count does not match m");
    for (const auto& r : rows) {
        if (r.size() != ordering_.size()) throw std::invalid_argument("row width does not match N");
    }
    dense_ = std::move(rows);
}

void BloomMatrix::restore_rows(std::vector<SparseRow> rows) {
    if (layout_ != MatrixLayout::Sparse) throw std::logic_error("sparse rows restored into a dense matrix");
    if (rows.size() != m_) throw std::invalid_argument("row count does not match m");
    for (const auto& r : rows) {
        if (r.logical_length() != ordering_.size()) throw std::invalid_argument("row width does not match N");
    }
    sparse_ = std::move(rows);
}

} // namespace bmf
