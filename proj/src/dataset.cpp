#include "bmf/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace bmf {

void Dataset::add_row(std::string item, std::vector<std::string> labels) {
    std::unordered_set<std::string_view> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second) {
            throw std::invalid_argument("item '" + item + "' lists label '" + l + "' twice");
        }
    }
    auto [it, inserted] = item_index_.emplace(item, rows_.size());
    if (!inserted) throw std::invalid_argument("duplicate item id '" + item + "'");
    total_pairs_ += labels.size();
    rows_.push_back(DatasetRow{std::move(item), std::move(labels)});
}

std::vector<std::string> Dataset::label_universe() const {
    std::vector<std::string> out;
    std::unordered_set<std::string_view> seen;
    for (const auto& row : rows_) {
        for (const auto& l : row.labels) {
            if (seen.insert(l).second) out.push_back(l);
        }
    }
    return out;
}

Ordering Dataset::input_ordering() const {
    std::vector<std::string> items;
    items.reserve(rows_.size());
    for (const auto& row : rows_) items.push_back(row.item);
    return Ordering(std::move(items));
}

Dataset read_csv(std::istream& in, CsvLoadStats* stats) {
    CsvLoadStats local;
    Dataset dataset;
    std::unordered_map<std::string, std::size_t> first_line;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (dataset.empty() && dataset.description().empty()) {
                auto start = line.find_first_not_of("# ");
                dataset.set_description(start == std::string::npos ? "" : line.substr(start));
            }
            continue;
        }
        ++local.lines;

        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            auto comma = line.find(',', pos);
            fields.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        std::string item = std::move(fields.front());
        if (item.empty()) throw std::runtime_error("line " + std::to_string(line_no) + ": empty item id");

        std::vector<std::string> labels;
        std::unordered_set<std::string> seen;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            if (fields[i].empty()) {
                ++local.empty_fields;
                continue;
            }
            if (!seen.insert(fields[i]).second) {
                ++local.duplicate_labels;
                continue;
            }
            labels.push_back(std::move(fields[i]));
        }

        auto [it, inserted] = first_line.emplace(item, line_no);
        if (!inserted) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": duplicate item id '" + item +
                                     "' (first seen on line " + std::to_string(it->second) + ")");
        }
        dataset.add_row(std::move(item), std::move(labels));
    }
    if (dataset.empty()) throw std::runtime_error("dataset contains no rows");
    if (stats != nullptr) *stats = local;
    return dataset;
}

Dataset load_csv(const std::filesystem::path& path, CsvLoadStats* stats) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset '" + path.string() + "'");
    return read_csv(in, stats);
}

void write_csv(const Dataset& dataset, std::ostream& out) {
    if (!dataset.description().empty()) out << "# " << dataset.description() << '\n';
    for (const auto& row : dataset.rows()) {
        out << row.item;
        for (const auto& l : row.labels) out << ',' << l;
        out << '\n';
    }
}

void save_csv(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset '" + path.string() + "'");
    write_csv(dataset, out);
    if (!out) throw std::runtime_error("failed writing dataset '" + path.string() + "'");
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below needs n >= 1");
    // Rejection sampling on the largest multiple of n.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    count = std::min(count, n);
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        auto j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(count);
    return idx;
}

namespace {

std::string item_name(std::size_t i) { return "e" + std::to_string(i + 1); }
std::string label_name(std::size_t i) { return "l" + std::to_string(i + 1); }

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

template <typename ProbabilityFn>
Dataset generate_bernoulli(const GenConfig& config, ProbabilityFn&& probability) {
    Rng rng(config.seed);
    Dataset dataset;
    for (std::size_t i = 0; i < config.items; ++i) {
        const double p = probability(i);
        std::vector<std::string> labels;
        for (std::size_t l = 0; l < config.labels; ++l) {
            // One draw per pair regardless of p keeps the stream aligned.
            if (rng.uniform() < p) labels.push_back(label_name(l));
        }
        dataset.add_row(item_name(i), std::move(labels));
    }
    return dataset;
}

} // namespace

Dataset generate_uniform(const GenConfig& config) {
    const auto* dist = std::get_if<UniformDist>(&config.distribution);
    if (dist == nullptr) throw std::invalid_argument("generate_uniform needs a uniform distribution");
    if (!(dist->p >= 0.0 && dist->p <= 1.0)) throw std::invalid_argument("uniform p must lie in [0, 1]");
    Dataset d = generate_bernoulli(config, [&](std::size_t) { return dist->p; });
    d.set_description("seed=" + std::to_string(config.seed) + " dist=uniform items=" + std::to_string(config.items) +
                      " labels=" + std::to_string(config.labels) + " p=" + format_double(dist->p) +
                      " rng=" + std::string(Rng::kAlgorithm));
    return d;
}

double harmonic(std::size_t n, double s) {
    double sum = 0.0;
    // Smallest terms first for accuracy.
    for (std::size_t i = n; i >= 1; --i) sum += 1.0 / std::pow(static_cast<double>(i), s);
    return sum;
}

double zipf_weight(std::size_t rank, double s, std::size_t n) {
    if (rank == 0 || rank > n) throw std::invalid_argument("zipf rank must lie in [1, n]");
    return (1.0 / std::pow(static_cast<double>(rank), s)) / harmonic(n, s);
}

Dataset generate_zipf(const GenConfig& config) {
    const auto* dist = std::get_if<ZipfDist>(&config.distribution);
    if (dist == nullptr) throw std::invalid_argument("generate_zipf needs a zipf distribution");
    if (!(dist->scale > 0.0)) throw std::invalid_argument("zipf scale must be > 0");
    if (!(dist->s > 0.0)) throw std::invalid_argument("zipf exponent s must be > 0");
    const double h = harmonic(config.items, dist->s);
    Dataset d = generate_bernoulli(config, [&](std::size_t i) {
        const double w = (1.0 / std::pow(static_cast<double>(i + 1), dist->s)) / h;
        return std::min(1.0, dist->scale * w);
    });
    d.set_description("seed=" + std::to_string(config.seed) + " dist=zipf items=" + std::to_string(config.items) +
                      " labels=" + std::to_string(config.labels) + " s=" + format_double(dist->s) +
                      " scale=" + format_double(dist->scale) + " rng=" + std::string(Rng::kAlgorithm));
    return d;
}

Dataset generate(const GenConfig& config) {
    return std::holds_alternative<UniformDist>(config.distribution) ? generate_uniform(config)
                                                                     : generate_zipf(config);
}

ExactIndex::ExactIndex(const Dataset& dataset) : items_(dataset.input_ordering()) {
    forward_.reserve(dataset.size());
    for (std::size_t pos = 0; pos < dataset.size(); ++pos) {
        const auto& row = dataset.row(pos);
        forward_.push_back(row.labels);
        for (const auto& l : row.labels) {
            auto [it, inserted] = label_index_.emplace(l, labels_.size());
            if (inserted) {
                labels_.push_back(l);
                inverted_.emplace_back();
            }
            inverted_[it->second].push_back(pos);
        }
    }
}

bool ExactIndex::has_label(std::string_view label) const { return label_index_.find(label) != label_index_.end(); }

const std::vector<std::size_t>& ExactIndex::inverted_positions(std::string_view label) const {
    static const std::vector<std::size_t> kEmpty;
    auto it = label_index_.find(label);
    return it == label_index_.end() ? kEmpty : inverted_[it->second];
}

ItemSet ExactIndex::inverted(std::string_view label) const {
    ItemSet out;
    for (std::size_t pos : inverted_positions(label)) out.push_back(items_.item(pos));
    return out;
}

const std::vector<std::string>& ExactIndex::forward(std::string_view item) const {
    return forward_[items_.index_of(item)];
}

} // namespace bmf
