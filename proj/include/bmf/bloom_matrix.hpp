#ifndef BMF_BLOOM_MATRIX_HPP
#define BMF_BLOOM_MATRIX_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bmf/bitset.hpp"
#include "bmf/dataset.hpp"
#include "bmf/hashing.hpp"

namespace bmf {

enum class LookupMode { And, Or };

enum class MatrixLayout : std::uint8_t { Dense = 0, Sparse = 1 };

/// Expected false-positive measure per queried label and their mean.
struct FpReport {
    std::vector<std::pair<std::string, double>> per_label;
    double average = 0.0;
};

struct MatrixBuildOptions {
    MatrixLayout layout = MatrixLayout::Dense;
    /// Explicit (m, k); when unset both come from the average-labels-per-item rule.
    std::optional<std::pair<std::size_t, std::size_t>> explicit_mk;
    /// Fixed-table hashing for fixtures; seeded MurmurHash3 when null.
    std::shared_ptr<const FixedHashTable> fixed_table;
    /// Keep per-label insertion tallies for theoretical_fpr().
    bool track_insertions = true;
    /// Overrides the layout's default item ordering.
    std::optional<Ordering> ordering;
};

/// Items sorted by label count descending; ties keep dataset order.
Ordering sparse_ordering(const Dataset& dataset);

/**
 * m x N bit matrix. A label's hash neighborhood selects rows; items are
 * columns under the ordering. Adding ORs the encoded item set into every
 * selected row; lookup ANDs them and decodes.
 *
 * The sparse layout stores each row only up to its last 1-bit. Lookups are
 * identical across layouts.
 */
class BloomMatrix {
  public:
    BloomMatrix(std::size_t m, HashFamily family, Ordering ordering, MatrixLayout layout = MatrixLayout::Dense,
                bool track_insertions = true);

    /// m, k from size_for(ceil(total pairs / N), p) unless explicit; every
    /// label of the dataset added once with its full item set.
    static BloomMatrix build(const Dataset& dataset, double target_fp, const MatrixBuildOptions& options = {});

    std::size_t m() const noexcept { return m_; }
    std::size_t k() const noexcept { return family_.k(); }
    std::size_t item_count() const noexcept { return ordering_.size(); }
    MatrixLayout layout() const noexcept { return layout_; }
    const Ordering& ordering() const noexcept { return ordering_; }
    const HashFamily& family() const noexcept { return family_; }

    /// Items must already be in the ordering; new items need a rebuild.
    void add_label(std::string_view label, std::span<const std::string> items);

    ItemSet lookup(std::string_view label) const;
    ItemSet lookup(std::span<const std::string> labels, LookupMode mode) const;

    /// AND of the rows selected by `label`, before decoding.
    Bitset lookup_bits(std::string_view label) const;

    /// Per label: (N - |f(l)|) * (1 - (1 - 1/m)^{|f(l)| k})^k.
    FpReport theoretical_fpr(std::span<const std::string> labels) const;

    /// Dense: m * N. Sparse: sum of stored row prefixes.
    std::size_t stored_bits() const noexcept;

    /// Row r as a dense bitset (either layout).
    Bitset row(std::size_t r) const;

    const std::vector<Bitset>& dense_rows() const noexcept { return dense_; }
    const std::vector<SparseRow>& sparse_rows() const noexcept { return sparse_; }

    /// Restores persisted rows; sizes are validated against m and N.
    void restore_rows(std::vector<Bitset> rows);
    void restore_rows(std::vector<SparseRow> rows);

  private:
    void and_row(Bitset& acc, std::size_t r) const;
    Bitset and_rows(const HashNeighborhood& rows) const;

    std::size_t m_;
    HashFamily family_;
    Ordering ordering_;
    MatrixLayout layout_;
    std::vector<Bitset> dense_;
    std::vector<SparseRow> sparse_;
    bool track_insertions_;
    std::unordered_map<std::string, std::size_t> insertions_;
};

} // namespace bmf

#endif // BMF_BLOOM_MATRIX_HPP
