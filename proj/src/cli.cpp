#include "bmf/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "bmf/analysis.hpp"
#include "bmf/bloom_matrix.hpp"
#include "bmf/bloom_vector.hpp"
#include "bmf/dataset.hpp"
#include "bmf/persistence.hpp"

namespace bmf::cli {

namespace {

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (!part.empty()) out.push_back(part);
    }
    return out;
}

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError(std::string("invalid ") + what + " '" + s + "'");
    }
}

std::size_t parse_count(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(s, &used);
        if (used != s.size() || s.front() == '-') throw std::invalid_argument(s);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw UsageError(std::string("invalid ") + what + " '" + s + "'");
    }
}

/// Writes to `path`, or to `fallback` when the path is empty.
template <typename Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
    if (path.empty()) {
        fn(fallback);
        return;
    }
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write '" + path + "'");
    fn(file);
    if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

struct GenArgs {
    std::string dist;
    std::size_t items = 500;
    std::size_t labels = 10000;
    std::optional<double> p;
    std::optional<double> s;
    double scale = 1.0;
    std::uint64_t seed = 0;
    std::string out;
};

struct BuildArgs {
    std::string dataset;
    std::string structure = "bm";
    std::optional<double> fpr;
    std::optional<std::size_t> m;
    std::optional<std::size_t> k;
    std::string hash_table;
    std::string out;
};

struct LookupArgs {
    std::string file;
    std::vector<std::string> labels;
    std::string mode = "and";
};

struct BenchArgs {
    std::string dataset;
    std::string structures = "bm,sbm,bv";
    std::string fprs = "0.9,0.5,0.1,0.01,0.001,0.0001,0.00001,0.000001";
    std::string batches = "1";
    std::size_t probes = 1000;
    std::size_t reps = 5;
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string out;
};

struct BloomTestArgs {
    std::string dataset;
    double expected = 1e-3;
    std::size_t probes = 1000;
    double threshold = 10.0;
    double floor = 1e-2;
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
    GenConfig config;
    config.items = a.items;
    config.labels = a.labels;
    config.seed = a.seed;
    if (a.dist == "uniform") {
        if (!a.p) throw UsageError("--dist uniform requires --p");
        if (*a.p < 0.0 || *a.p > 1.0) throw UsageError("--p must lie in [0, 1]");
        config.distribution = UniformDist{*a.p};
    } else {
        if (!a.s) throw UsageError("--dist zipf requires --s");
        if (*a.s <= 0.0) throw UsageError("--s must be > 0");
        if (a.scale <= 0.0) throw UsageError("--scale must be > 0");
        config.distribution = ZipfDist{*a.s, a.scale};
    }
    const Dataset dataset = generate(config);
    with_output(a.out, out, [&](std::ostream& o) { write_csv(dataset, o); });
    return kExitOk;
}

void print_structure_summary(const Structure& s, std::ostream& out) {
    if (const auto* m = std::get_if<BloomMatrix>(&s)) {
        out << "structure=" << (m->layout() == MatrixLayout::Dense ? "bm" : "sbm") << '\n'
            << "m=" << m->m() << '\n'
            << "k=" << m->k() << '\n'
            << "items=" << m->item_count() << '\n'
            << "stored_bits=" << m->stored_bits() << '\n';
        return;
    }
    const auto& v = std::get<BloomVector>(s);
    std::size_t min_m = 0;
    std::size_t max_m = 0;
    std::size_t max_k = 0;
    for (std::size_t i = 0; i < v.item_count(); ++i) {
        const auto& f = v.filter(i);
        min_m = i == 0 ? f.m() : std::min(min_m, f.m());
        max_m = std::max(max_m, f.m());
        max_k = std::max(max_k, f.k());
    }
    out << "structure=bv\n"
        << "items=" << v.item_count() << '\n'
        << "m_min=" << min_m << '\n'
        << "m_max=" << max_m << '\n'
        << "k_max=" << max_k << '\n'
        << "stored_bits=" << v.stored_bits() << '\n';
}

int cmd_build(const BuildArgs& a, std::ostream& out) {
    const StructureKind kind = [&] {
        try {
            return parse_structure(a.structure);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    if (a.m.has_value() != a.k.has_value()) throw UsageError("--m and --k must be given together");
    if (a.m && (*a.m == 0 || *a.k == 0)) throw UsageError("--m and --k must be >= 1");
    const double fpr = a.fpr.value_or(1e-3);
    if (!(fpr > 0.0 && fpr < 1.0)) throw UsageError("--fpr must lie in (0, 1)");

    std::shared_ptr<const FixedHashTable> table;
    if (!a.hash_table.empty()) table = load_hash_table(a.hash_table);

    const Dataset dataset = load_csv(a.dataset);
    const auto start = std::chrono::steady_clock::now();
    std::optional<Structure> built;
    if (kind == StructureKind::BloomVector) {
        VectorBuildOptions opts;
        opts.fixed_table = table;
        opts.track_insertions = false;
        if (a.m) opts.explicit_mk = std::pair{*a.m, *a.k};
        built.emplace(BloomVector::build(dataset, fpr, opts));
    } else {
        MatrixBuildOptions opts;
        opts.layout = kind == StructureKind::SparseBloomMatrix ? MatrixLayout::Sparse : MatrixLayout::Dense;
        opts.fixed_table = table;
        opts.track_insertions = false;
        if (a.m) opts.explicit_mk = std::pair{*a.m, *a.k};
        built.emplace(BloomMatrix::build(dataset, fpr, opts));
    }
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
    save_structure(a.out, *built);
    print_structure_summary(*built, out);
    out << "build_us=" << elapsed << '\n';
    return kExitOk;
}

int cmd_lookup(const LookupArgs& a, std::ostream& out) {
    if (a.labels.empty()) throw UsageError("lookup needs at least one label");
    const LookupMode mode = a.mode == "or" ? LookupMode::Or : LookupMode::And;
    const Structure s = load_structure(a.file);
    ItemSet items = std::visit([&](const auto& impl) { return impl.lookup(a.labels, mode); }, s);
    std::sort(items.begin(), items.end());
    for (const auto& item : items) out << item << '\n';
    return kExitOk;
}

int cmd_info(const std::string& file, std::ostream& out) {
    print_structure_summary(load_structure(file), out);
    return kExitOk;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
    BenchOptions opts;
    opts.structures.clear();
    for (const auto& s : split_list(a.structures)) {
        try {
            opts.structures.push_back(parse_structure(s));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    opts.target_fprs.clear();
    for (const auto& f : split_list(a.fprs)) {
        const double v = parse_double(f, "target fpr");
        if (!(v > 0.0 && v < 1.0)) throw UsageError("target fpr must lie in (0, 1)");
        opts.target_fprs.push_back(v);
    }
    opts.batch_sizes.clear();
    for (const auto& b : split_list(a.batches)) {
        const std::size_t v = parse_count(b, "batch size");
        if (v == 0) throw UsageError("batch size must be >= 1");
        opts.batch_sizes.push_back(v);
    }
    if (opts.structures.empty() || opts.target_fprs.empty() || opts.batch_sizes.empty()) {
        throw UsageError("bench needs at least one structure, target fpr and batch size");
    }
    opts.probe_labels = a.probes;
    opts.repetitions = a.reps;
    opts.seed = a.seed;
    opts.dataset_name = a.dataset;

    const Dataset dataset = load_csv(a.dataset);
    const auto records = bench_sweep(dataset, opts);
    with_output(a.out, out, [&](std::ostream& o) {
        if (a.format == "json") {
            write_bench_json(records, o);
        } else {
            write_bench_csv(records, o);
        }
    });
    return kExitOk;
}

int cmd_bloomtest(const BloomTestArgs& a, std::ostream& out) {
    if (!(a.expected > 0.0 && a.expected < 1.0)) throw UsageError("--expected must lie in (0, 1)");
    BloomTestOptions opts;
    opts.expected_fpr = a.expected;
    opts.probe_labels = a.probes;
    opts.ratio_threshold = a.threshold;
    opts.observed_floor = a.floor;
    opts.seed = a.seed;
    const Dataset dataset = load_csv(a.dataset);
    const BloomTestVerdict verdict = bloom_test(dataset, opts);
    out << format_verdict(verdict) << '\n';
    if (!a.out.empty()) {
        with_output(a.out, out, [&](std::ostream& o) {
            if (a.format == "json") {
                write_verdict_json(verdict, o);
            } else {
                write_verdict_csv(verdict, o);
            }
        });
    }
    return kExitOk;
}

} // namespace

std::shared_ptr<const FixedHashTable> load_hash_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open hash table '" + path.string() + "'");
    auto table = std::make_shared<FixedHashTable>();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split_list(line);
        if (fields.size() < 3) {
            throw std::runtime_error("hash table line " + std::to_string(line_no) +
                                     ": expected label,range,index[,index...]");
        }
        std::vector<std::size_t> indices;
        for (std::size_t i = 2; i < fields.size(); ++i) indices.push_back(parse_count(fields[i], "hash index"));
        table->set(fields[0], parse_count(fields[1], "hash range"), std::move(indices));
    }
    return table;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bloom Matrix / Bloom Vector multiple-set membership toolkit", "bmf"};
    app.require_subcommand(1);

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset CSV");
    gen->add_option("--dist", gen_args.dist, "uniform or zipf")->required()->check(CLI::IsMember({"uniform", "zipf"}));
    gen->add_option("--items", gen_args.items, "number of items")->capture_default_str();
    gen->add_option("--labels", gen_args.labels, "label universe size")->capture_default_str();
    gen->add_option("--p", gen_args.p, "uniform assignment probability");
    gen->add_option("--s", gen_args.s, "zipf exponent");
    gen->add_option("--scale", gen_args.scale, "zipf probability scale")->capture_default_str();
    gen->add_option("--seed", gen_args.seed, "RNG seed")->envname("BMF_SEED")->capture_default_str();
    gen->add_option("--out", gen_args.out, "output CSV (stdout when omitted)");

    BuildArgs build_args;
    auto* build = app.add_subcommand("build", "Build and serialize a structure");
    build->add_option("dataset", build_args.dataset, "dataset CSV")->required();
    build->add_option("--structure", build_args.structure, "bm, sbm or bv")->capture_default_str();
    auto* fpr_opt = build->add_option("--fpr", build_args.fpr, "target false-positive rate (default 0.001)");
    auto* m_opt = build->add_option("--m", build_args.m, "explicit bits per filter / matrix rows");
    auto* k_opt = build->add_option("--k", build_args.k, "explicit hash count");
    fpr_opt->excludes(m_opt);
    fpr_opt->excludes(k_opt);
    build->add_option("--hash-table", build_args.hash_table, "fixed hash table (label,range,indices...)");
    build->add_option("--out", build_args.out, "structure file")->required();

    LookupArgs lookup_args;
    auto* lookup = app.add_subcommand("lookup", "Look up labels in a structure file");
    lookup->add_option("file", lookup_args.file, "structure file")->required();
    lookup->add_option("labels", lookup_args.labels, "labels to look up")->required();
    lookup->add_option("--mode", lookup_args.mode, "and or or")
        ->check(CLI::IsMember({"and", "or"}))
        ->capture_default_str();

    std::string info_file;
    auto* info = app.add_subcommand("info", "Describe a structure file");
    info->add_option("file", info_file, "structure file")->required();

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Sweep structures and target rates");
    bench->add_option("dataset", bench_args.dataset, "dataset CSV")->required();
    bench->add_option("--structures", bench_args.structures, "comma-separated bm,sbm,bv")->capture_default_str();
    bench->add_option("--fprs", bench_args.fprs, "comma-separated target rates")->capture_default_str();
    bench->add_option("--batches", bench_args.batches, "comma-separated lookup batch sizes")->capture_default_str();
    bench->add_option("--probes", bench_args.probes, "probe labels")->capture_default_str();
    bench->add_option("--reps", bench_args.reps, "timing repetitions")->capture_default_str();
    bench->add_option("--seed", bench_args.seed, "RNG seed")->envname("BMF_SEED")->capture_default_str();
    bench->add_option("--format", bench_args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    bench->add_option("--out", bench_args.out, "output file (stdout when omitted)");

    BloomTestArgs bt_args;
    auto* bt = app.add_subcommand("bloomtest", "Classify a dataset's label distribution");
    bt->add_option("dataset", bt_args.dataset, "dataset CSV")->required();
    bt->add_option("--expected", bt_args.expected, "expected FPR of the probe matrix")->capture_default_str();
    bt->add_option("--probes", bt_args.probes, "probe labels")->capture_default_str();
    bt->add_option("--threshold", bt_args.threshold, "observed/expected ratio threshold")->capture_default_str();
    bt->add_option("--floor", bt_args.floor, "minimum observed FPR for NonUniform")->capture_default_str();
    bt->add_option("--seed", bt_args.seed, "RNG seed")->envname("BMF_SEED")->capture_default_str();
    bt->add_option("--format", bt_args.format, "csv or json for --out")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    bt->add_option("--out", bt_args.out, "write the verdict record here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*gen) return cmd_gen(gen_args, out);
        if (*build) return cmd_build(build_args, out);
        if (*lookup) return cmd_lookup(lookup_args, out);
        if (*info) return cmd_info(info_file, out);
        if (*bench) return cmd_bench(bench_args, out);
        if (*bt) return cmd_bloomtest(bt_args, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("bmf");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    argv.push_back(nullptr);
    return run(static_cast<int>(storage.size()), argv.data(), out, err);
}

} // namespace bmf::cli
