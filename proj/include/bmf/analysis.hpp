#ifndef BMF_ANALYSIS_HPP
#define BMF_ANALYSIS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bmf/bitset.hpp"
#include "bmf/dataset.hpp"

namespace bmf {

/// A lookup returned fewer items than the truth: a structural bug.
class FalseNegativeError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

struct FprMeasurement {
    std::vector<std::pair<std::string, double>> per_label;
    double average = 0.0;
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t true_negatives = 0;
};

using LabelLookup = std::function<ItemSet(std::string_view)>;

/**
 * Observed false-positive rate of single-label lookups. Per label:
 * FP = |returned| - |truth|, TN = N - |returned|, FPR = FP / (TN + FP),
 * and 0 when TN + FP = 0. Throws FalseNegativeError if a true item is missing
 * and std::invalid_argument for labels the oracle does not know.
 */
FprMeasurement measure_fpr(const LabelLookup& lookup, const ExactIndex& oracle, std::span<const std::string> labels);

/// Probe labels drawn without replacement from the dataset's label universe.
std::vector<std::string> sample_probe_labels(const ExactIndex& oracle, std::size_t count, std::uint64_t seed);

enum class Distribution { Uniform, NonUniform };
enum class StructureKind : std::uint8_t { BloomMatrix = 0, SparseBloomMatrix = 1, BloomVector = 2 };

std::string_view to_string(Distribution d);
/// "bm", "sbm" or "bv".
std::string_view to_string(StructureKind s);
StructureKind parse_structure(std::string_view s);

struct BloomTestOptions {
    double expected_fpr = 1e-3;
    std::size_t probe_labels = 1000;
    double ratio_threshold = 10.0;
    double observed_floor = 1e-2;
    std::uint64_t seed = 0;
};

struct BloomTestVerdict {
    double expected_fpr = 0.0;
    double observed_fpr = 0.0;
    double ratio = 0.0;
    Distribution classification = Distribution::Uniform;
    StructureKind recommendation = StructureKind::BloomMatrix;
};

/**
 * Builds a dense Bloom Matrix at the expected rate, measures the observed rate
 * on sampled probe labels, and calls the data non-uniform when the observed
 * rate is both `ratio_threshold` times the expectation and above
 * `observed_floor`. Non-uniform data is better served by a Bloom Vector.
 */
BloomTestVerdict bloom_test(const Dataset& dataset, const BloomTestOptions& options = {});

/// `classification=... recommendation=... observed=... expected=...`
std::string format_verdict(const BloomTestVerdict& verdict);
void write_verdict_csv(const BloomTestVerdict& verdict, std::ostream& out);
void write_verdict_json(const BloomTestVerdict& verdict, std::ostream& out);

struct BenchRecord {
    StructureKind structure = StructureKind::BloomMatrix;
    double target_fpr = 0.0;
    // Bloom Vector reports the mean per-item m and the largest k.
    std::size_t m = 0;
    std::size_t k = 0;
    std::size_t stored_bits = 0;
    double avg_add_ns = 0.0;
    double avg_lookup_ns = 0.0;
    double observed_fpr = 0.0;
    std::size_t batch_size = 1;
    std::uint64_t seed = 0;
    std::string dataset;
};

struct BenchOptions {
    std::vector<StructureKind> structures{StructureKind::BloomMatrix, StructureKind::SparseBloomMatrix,
                                          StructureKind::BloomVector};
    std::vector<double> target_fprs{0.9, 0.5, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    std::vector<std::size_t> batch_sizes{1};
    std::size_t probe_labels = 1000;
    std::size_t repetitions = 5;
    std::uint64_t seed = 0;
    std::string dataset_name;
};

/**
 * For every (structure, target) pair: build, record stored bits, time adds and
 * lookups (median over repetitions), and measure the observed FPR. Emits one
 * record per batch size; a batch of b labels is one AND lookup.
 */
std::vector<BenchRecord> bench_sweep(const Dataset& dataset, const BenchOptions& options);

void write_bench_csv(std::span<const BenchRecord> records, std::ostream& out);
void write_bench_json(std::span<const BenchRecord> records, std::ostream& out);

} // namespace bmf

#endif // BMF_ANALYSIS_HPP
