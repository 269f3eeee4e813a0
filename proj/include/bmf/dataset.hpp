#ifndef BMF_DATASET_HPP
#define BMF_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "bmf/bitset.hpp"

namespace bmf {

struct DatasetRow {
    std::string item;
    std::vector<std::string> labels;

    friend bool operator==(const DatasetRow&, const DatasetRow&) = default;
};

/**
 * Ground-truth relation stored item-major: each row names an item and the
 * distinct labels assigned to it. Row order is the input ordering.
 */
class Dataset {
  public:
    Dataset() = default;

    /// Throws on a duplicate item id or a repeated label within the row.
    void add_row(std::string item, std::vector<std::string> labels);

    std::size_t size() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }
    const std::vector<DatasetRow>& rows() const noexcept { return rows_; }
    const DatasetRow& row(std::size_t i) const { return rows_.at(i); }

    std::size_t total_pairs() const noexcept { return total_pairs_; }
    /// Distinct labels in order of first appearance.
    std::vector<std::string> label_universe() const;
    Ordering input_ordering() const;

    /// Free-form provenance, e.g. the generator comment line.
    const std::string& description() const noexcept { return description_; }
    void set_description(std::string d) { description_ = std::move(d); }

  private:
    std::vector<DatasetRow> rows_;
    std::unordered_map<std::string, std::size_t> item_index_;
    std::size_t total_pairs_ = 0;
    std::string description_;
};

struct CsvLoadStats {
    std::size_t duplicate_labels = 0; // dropped repeats within a row
    std::size_t empty_fields = 0;     // blank label fields skipped
    std::size_t lines = 0;
};

/**
 * Reads `item,label,label,...` rows. Lines starting with '#' and blank lines
 * are skipped. Duplicate item ids and files without rows are errors.
 */
Dataset load_csv(const std::filesystem::path& path, CsvLoadStats* stats = nullptr);
Dataset read_csv(std::istream& in, CsvLoadStats* stats = nullptr);

/// Writes the dataset, preceded by `# <description>` when one is set.
void write_csv(const Dataset& dataset, std::ostream& out);
void save_csv(const Dataset& dataset, const std::filesystem::path& path);

struct UniformDist {
    double p = 0.5;
};

struct ZipfDist {
    double s = 0.8;
    double scale = 1.0;
};

struct GenConfig {
    std::size_t items = 500;
    std::size_t labels = 10000;
    std::variant<UniformDist, ZipfDist> distribution = UniformDist{};
    std::uint64_t seed = 0;
};

/// Every (item, label) pair is drawn independently with probability p.
Dataset generate_uniform(const GenConfig& config);

/// The item at rank r receives each label with probability
/// min(1, scale * zipf_weight(r, s, N)).
Dataset generate_zipf(const GenConfig& config);

Dataset generate(const GenConfig& config);

/// Generalized harmonic number sum_{i=1..n} 1/i^s.
double harmonic(std::size_t n, double s);
/// (1/r^s) / H(n, s) for rank r in [1, n].
double zipf_weight(std::size_t rank, double s, std::size_t n);

/// Seeded PRNG used by generators and samplers; the algorithm is pinned so
/// outputs are reproducible across standard libraries.
class Rng {
  public:
    static constexpr std::string_view kAlgorithm = "mt19937_64";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform in [0, n) without modulo bias. n must be >= 1.
    std::uint64_t below(std::uint64_t n);

  private:
    std::mt19937_64 engine_;
};

/// `count` distinct positions from [0, n) (all of them when count >= n),
/// sampled without replacement.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::uint64_t seed);

/**
 * Exact item<->label relation. The inverted side is the truth against which
 * probabilistic lookups are scored.
 */
class ExactIndex {
  public:
    explicit ExactIndex(const Dataset& dataset);

    const Ordering& items() const noexcept { return items_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Item positions (input order) carrying `label`; empty for unknown labels.
    const std::vector<std::size_t>& inverted_positions(std::string_view label) const;
    ItemSet inverted(std::string_view label) const;
    const std::vector<std::string>& forward(std::string_view item) const;

    bool has_label(std::string_view label) const;
    /// |f(l)| for every label, in labels() order.
    std::size_t label_count() const noexcept { return labels_.size(); }
    const std::vector<std::size_t>& inverted_at(std::size_t label_id) const { return inverted_.at(label_id); }

  private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };

    Ordering items_;
    std::vector<std::vector<std::string>> forward_;
    std::vector<std::string> labels_;
    std::vector<std::vector<std::size_t>> inverted_;
    std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> label_index_;
};

} // namespace bmf

#endif // BMF_DATASET_HPP
