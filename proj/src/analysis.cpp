#include "bmf/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

#include "json.hpp"

#include "bmf/bloom_filter.hpp"
#include "bmf/bloom_matrix.hpp"
#include "bmf/bloom_vector.hpp"

namespace bmf {

FprMeasurement measure_fpr(const LabelLookup& lookup, const ExactIndex& oracle, std::span<const std::string> labels) {
    FprMeasurement out;
    const std::size_t n_items = oracle.items().size();
    Bitset returned_bits(n_items);
    double total = 0.0;
    for (const auto& label : labels) {
        if (!oracle.has_label(label)) {
            throw std::invalid_argument("probe label '" + label + "' is not in the dataset, so its truth is undefined");
        }
        const ItemSet returned = lookup(label);
        returned_bits.reset_all();
        for (const auto& item : returned) returned_bits.set(oracle.items().index_of(item));
        const auto& truth = oracle.inverted_positions(label);
        for (std::size_t pos : truth) {
            if (!returned_bits.test_unchecked(pos)) {
                throw FalseNegativeError("lookup of '" + label + "' is missing true item '" + oracle.items().item(pos) +
                                         "'");
            }
        }
        const std::size_t n_returned = returned_bits.count();
        const std::size_t fp = n_returned - truth.size();
        const std::size_t tn = n_items - n_returned;
        const double rate = (tn + fp) == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(tn + fp);
        out.per_label.emplace_back(label, rate);
        out.true_positives += truth.size();
        out.false_positives += fp;
        out.true_negatives += tn;
        total += rate;
    }
    if (!labels.empty()) out.average = total / static_cast<double>(labels.size());
    return out;
}

std::vector<std::string> sample_probe_labels(const ExactIndex& oracle, std::size_t count, std::uint64_t seed) {
    std::vector<std::string> out;
    for (std::size_t id : sample_indices(oracle.label_count(), count, seed)) out.push_back(oracle.labels()[id]);
    return out;
}

std::string_view to_string(Distribution d) { return d == Distribution::Uniform ? "Uniform" : "NonUniform"; }

std::string_view to_string(StructureKind s) {
    switch (s) {
    case StructureKind::BloomMatrix:
        return "bm";
    case StructureKind::SparseBloomMatrix:
        return "sbm";
    case StructureKind::BloomVector:
        return "bv";
    }
    return "?";
}

StructureKind parse_structure(std::string_view s) {
    if (s == "bm") return StructureKind::BloomMatrix;
    if (s == "sbm") return StructureKind::SparseBloomMatrix;
    if (s == "bv") return StructureKind::BloomVector;
    throw std::invalid_argument("unknown structure '" + std::string(s) + "' (expected bm, sbm or bv)");
}

BloomTestVerdict bloom_test(const Dataset& dataset, const BloomTestOptions& options) {
    if (dataset.empty()) throw std::invalid_argument("bloom test needs a non-empty dataset");
    MatrixBuildOptions build;
    build.track_insertions = false;
    const BloomMatrix matrix = BloomMatrix::build(dataset, options.expected_fpr, build);
    const ExactIndex oracle(dataset);
    const auto probes = sample_probe_labels(oracle, options.probe_labels, options.seed);
    const auto measured =
        measure_fpr([&](std::string_view l) { return matrix.lookup(l); }, oracle, probes);

    BloomTestVerdict v;
    v.expected_fpr = options.expected_fpr;
    v.observed_fpr = measured.average;
    v.ratio = measured.average / options.expected_fpr;
    const bool diverges = v.ratio > options.ratio_threshold && v.observed_fpr > options.observed_floor;
    v.classification = diverges ? Distribution::NonUniform : Distribution::Uniform;
    v.recommendation = diverges ? StructureKind::BloomVector : StructureKind::BloomMatrix;
    return v;
}

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

using Clock = std::chrono::steady_clock;

double elapsed_ns(Clock::time_point start) {
    return static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
}

/// Builds one structure label by label, as the ADD operation would be used.
struct BuiltStructure {
    std::variant<BloomMatrix, BloomVector> impl;
    double add_ns = 0.0;
};

BuiltStructure build_timed(StructureKind kind, const Dataset& dataset, const ExactIndex& index,
                           const std::vector<ItemSet>& item_sets, double target) {
    if (kind == StructureKind::BloomVector) {
        BloomVector vector(nullptr, false);
        for (const auto& row : dataset.rows()) vector.add_item(row.item, row.labels.size(), target);
        const auto start = Clock::now();
        for (std::size_t id = 0; id < index.label_count(); ++id) vector.add_label(index.labels()[id], item_sets[id]);
        const double ns = elapsed_ns(start);
        return BuiltStructure{std::move(vector), ns};
    }

    const std::size_t n = dataset.size();
    const FilterParams params = size_for((dataset.total_pairs() + n - 1) / n, target);
    const MatrixLayout layout = kind == StructureKind::SparseBloomMatrix ? MatrixLayout::Sparse : MatrixLayout::Dense;
    Ordering ordering = layout == MatrixLayout::Sparse ? sparse_ordering(dataset) : dataset.input_ordering();
    BloomMatrix matrix(params.m, HashFamily::seeded(params.k), std::move(ordering), layout, false);
    const auto start = Clock::now();
    for (std::size_t id = 0; id < index.label_count(); ++id) matrix.add_label(index.labels()[id], item_sets[id]);
    const double ns = elapsed_ns(start);
    return BuiltStructure{std::move(matrix), ns};
}

} // namespace

std::string format_verdict(const BloomTestVerdict& v) {
    std::ostringstream os;
    os << "classification=" << to_string(v.classification) << " recommendation=" << to_string(v.recommendation)
       << " observed=" << fmt_double(v.observed_fpr) << " expected=" << fmt_double(v.expected_fpr);
    return os.str();
}

void write_verdict_csv(const BloomTestVerdict& v, std::ostream& out) {
    out << "expected_fpr,observed_fpr,ratio,classification,recommendation\n"
        << fmt_double(v.expected_fpr) << ',' << fmt_double(v.observed_fpr) << ',' << fmt_double(v.ratio) << ','
        << to_string(v.classification) << ',' << to_string(v.recommendation) << '\n';
}

void write_verdict_json(const BloomTestVerdict& v, std::ostream& out) {
    nlohmann::json j = {{"expected_fpr", v.expected_fpr},
                        {"observed_fpr", v.observed_fpr},
                        {"ratio", v.ratio},
                        {"classification", to_string(v.classification)},
                        {"recommendation", to_string(v.recommendation)}};
    out << nlohmann::json::array({j}).dump(2) << '\n';
}

std::vector<BenchRecord> bench_sweep(const Dataset& dataset, const BenchOptions& options) {
    if (dataset.empty()) throw std::invalid_argument("bench needs a non-empty dataset");
    const ExactIndex index(dataset);
    const auto probes = sample_probe_labels(index, options.probe_labels, options.seed);
    const std::size_t reps = std::max<std::size_t>(1, options.repetitions);
    const std::size_t n_labels = std::max<std::size_t>(1, index.label_count());
    std::vector<ItemSet> item_sets(index.label_count());
    for (std::size_t id = 0; id < index.label_count(); ++id) item_sets[id] = index.inverted(index.labels()[id]);

    std::vector<BenchRecord> records;
    for (StructureKind kind : options.structures) {
        for (double target : options.target_fprs) {
            std::vector<double> add_samples;
            std::optional<BuiltStructure> built;
            for (std::size_t r = 0; r < reps; ++r) {
                BuiltStructure b = build_timed(kind, dataset, index, item_sets, target);
                add_samples.push_back(b.add_ns / static_cast<double>(n_labels));
                built = std::move(b);
            }

            BenchRecord base;
            base.structure = kind;
            base.target_fpr = target;
            base.seed = options.seed;
            base.dataset = options.dataset_name;
            base.avg_add_ns = median(add_samples);

            LabelLookup single;
            std::function<ItemSet(std::span<const std::string>)> batch;
            if (auto* m = std::get_if<BloomMatrix>(&built->impl)) {
                base.m = m->m();
                base.k = m->k();
                base.stored_bits = m->stored_bits();
                single = [m](std::string_view l) { return m->lookup(l); };
                batch = [m](std::span<const std::string> ls) { return m->lookup(ls, LookupMode::And); };
            } else {
                auto* v = &std::get<BloomVector>(built->impl);
                std::size_t sum_m = 0;
                for (const auto& f : v->filters()) {
                    sum_m += f.m();
                    base.k = std::max(base.k, f.k());
                }
                base.m = v->item_count() == 0 ? 0 : (sum_m + v->item_count() / 2) / v->item_count();
                base.stored_bits = v->stored_bits();
                single = [v](std::string_view l) { return v->lookup(l); };
                batch = [v](std::span<const std::string> ls) { return v->lookup(ls, LookupMode::And); };
            }
            base.observed_fpr = measure_fpr(single, index, probes).average;

            for (std::size_t b : options.batch_sizes) {
                const std::size_t batch_size = std::max<std::size_t>(1, b);
                std::vector<double> lookup_samples;
                volatile std::size_t sink = 0;
                for (std::size_t r = 0; r < reps; ++r) {
                    std::size_t calls = 0;
                    const auto start = Clock::now();
                    for (std::size_t i = 0; i < probes.size(); i += batch_size) {
                        const std::size_t len = std::min(batch_size, probes.size() - i);
                        sink = sink + batch(std::span<const std::string>(probes).subspan(i, len)).size();
                        ++calls;
                    }
                    lookup_samples.push_back(calls == 0 ? 0.0 : elapsed_ns(start) / static_cast<double>(calls));
                }
                BenchRecord rec = base;
                rec.batch_size = batch_size;
                rec.avg_lookup_ns = median(lookup_samples);
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

void write_bench_csv(std::span<const BenchRecord> records, std::ostream& out) {
    out << "structure,target_fpr,m,k,stored_bits,avg_add_ns,avg_lookup_ns,observed_fpr,batch_size,seed\n";
    for (const auto& r : records) {
        out << to_string(r.structure) << ',' << fmt_double(r.target_fpr) << ',' << r.m << ',' << r.k << ','
            << r.stored_bits << ',' << fmt_double(r.avg_add_ns) << ',' << fmt_double(r.avg_lookup_ns) << ','
            << fmt_double(r.observed_fpr) << ',' << r.batch_size << ',' << r.seed << '\n';
    }
}

void write_bench_json(std::span<const BenchRecord> records, std::ostream& out) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        arr.push_back({{"structure", to_string(r.structure)},
                       {"target_fpr", r.target_fpr},
                       {"m", r.m},
                       {"k", r.k},
                       {"stored_bits", r.stored_bits},
                       {"avg_add_ns", r.avg_add_ns},
                       {"avg_lookup_ns", r.avg_lookup_ns},
                       {"observed_fpr", r.observed_fpr},
                       {"batch_size", r.batch_size},
                       {"seed", r.seed}});
    }
    out << arr.dump(2) << '\n';
}

} // namespace bmf
