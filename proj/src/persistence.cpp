#include "bmf/persistence.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>

namespace bmf {

namespace {

constexpr std::array<char, 4> kMagic{'B', 'M', 'F', 'S'};
constexpr std::uint8_t kKindMatrix = 1;
constexpr std::uint8_t kKindVector = 2;
// Upper bound on any count read from disk; rejects corrupt headers before
// they turn into giant allocations.
constexpr std::uint64_t kMaxCount = std::uint64_t{1} << 40;

void put_u8(std::ostream& out, std::uint8_t v) { out.put(static_cast<char>(v)); }

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> buf{};
    for (std::size_t i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFFU);
    out.write(buf.data(), buf.size());
}

std::uint8_t get_u8(std::istream& in) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw FormatError("unexpected end of structure data");
    return static_cast<std::uint8_t>(c);
}

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> buf{};
    if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) {
        throw FormatError("unexpected end of structure data");
    }
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

std::uint64_t get_count(std::istream& in, const char* what) {
    const std::uint64_t v = get_u64(in);
    if (v > kMaxCount) throw FormatError(std::string("implausible ") + what + " in structure data");
    return v;
}

void put_string(std::ostream& out, const std::string& s) {
    put_u64(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
    const std::uint64_t n = get_count(in, "string length");
    std::string s(n, '\0');
    if (n > 0 && !in.read(s.data(), static_cast<std::streamsize>(n))) {
        throw FormatError("unexpected end of structure data");
    }
    return s;
}

/// Packs the first `bits` positions of `words` 8 per byte, LSB first.
void put_packed(std::ostream& out, std::span<const Bitset::word_type> words, std::size_t bits) {
    const std::size_t n_bytes = (bits + 7) / 8;
    std::string bytes(n_bytes, '\0');
    for (std::size_t b = 0; b < n_bytes; ++b) {
        bytes[b] = static_cast<char>((words[b / 8] >> (8 * (b % 8))) & 0xFFU);
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::vector<Bitset::word_type> get_packed(std::istream& in, std::size_t bits) {
    const std::size_t n_bytes = (bits + 7) / 8;
    std::string bytes(n_bytes, '\0');
    if (n_bytes > 0 && !in.read(bytes.data(), static_cast<std::streamsize>(n_bytes))) {
        throw FormatError("unexpected end of structure data");
    }
    std::vector<Bitset::word_type> words((bits + 63) / 64, 0);
    for (std::size_t b = 0; b < n_bytes; ++b) {
        words[b / 8] |= static_cast<Bitset::word_type>(static_cast<unsigned char>(bytes[b])) << (8 * (b % 8));
    }
    const std::size_t rem = bits % 64;
    if (rem != 0) {
        const Bitset::word_type mask = (Bitset::word_type{1} << rem) - 1;
        if ((words.back() & ~mask) != 0) throw FormatError("bitset payload has bits past its length");
    }
    return words;
}

void put_ordering(std::ostream& out, const Ordering& ordering) {
    put_u64(out, ordering.size());
    for (const auto& item : ordering.items()) put_string(out, item);
}

Ordering get_ordering(std::istream& in) {
    const std::uint64_t n = get_count(in, "ordering size");
    Ordering ordering;
    for (std::uint64_t i = 0; i < n; ++i) {
        try {
            ordering.push_back(get_string(in));
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what());
        }
    }
    return ordering;
}

void put_hashing(std::ostream& out, const std::shared_ptr<const FixedHashTable>& table) {
    if (!table) {
        put_u8(out, static_cast<std::uint8_t>(HashKind::SeededMurmur));
        return;
    }
    put_u8(out, static_cast<std::uint8_t>(HashKind::FixedTable));
    put_u64(out, table->entries().size());
    for (const auto& [key, indices] : table->entries()) {
        put_string(out, key.first);
        put_u64(out, key.second);
        put_u64(out, indices.size());
        for (std::size_t idx : indices) put_u64(out, idx);
    }
}

std::shared_ptr<const FixedHashTable> get_hashing(std::istream& in) {
    const std::uint8_t kind = get_u8(in);
    if (kind == static_cast<std::uint8_t>(HashKind::SeededMurmur)) return nullptr;
    if (kind != static_cast<std::uint8_t>(HashKind::FixedTable)) throw FormatError("unknown hash kind");
    auto table = std::make_shared<FixedHashTable>();
    const std::uint64_t entries = get_count(in, "hash table size");
    for (std::uint64_t e = 0; e < entries; ++e) {
        std::string label = get_string(in);
        const std::uint64_t range = get_count(in, "hash range");
        const std::uint64_t n = get_count(in, "neighborhood size");
        std::vector<std::size_t> indices(n);
        for (auto& idx : indices) idx = get_u64(in);
        try {
            table->set(std::move(label), range, std::move(indices));
        } catch (const std::invalid_argument& ex) {
            throw FormatError(ex.what());
        }
    }
    return table;
}

HashFamily family_from(const std::shared_ptr<const FixedHashTable>& table, std::size_t k) {
    if (k == 0) throw FormatError("hash count k must be >= 1");
    return table ? HashFamily::fixed(k, table) : HashFamily::seeded(k);
}

} // namespace

void write_bitset(std::ostream& out, const Bitset& bits) {
    put_u64(out, bits.size());
    put_packed(out, bits.words(), bits.size());
}

Bitset read_bitset(std::istream& in) {
    const std::uint64_t n = get_count(in, "bitset length");
    auto words = get_packed(in, n);
    Bitset bits(n);
    std::copy(words.begin(), words.end(), bits.words().begin());
    return bits;
}

void write_filter(std::ostream& out, const BloomFilter& filter) {
    put_u64(out, filter.m());
    put_u64(out, filter.k());
    write_bitset(out, filter.bits());
}

BloomFilter read_filter(std::istream& in) {
    const std::uint64_t m = get_count(in, "filter size");
    const std::uint64_t k = get_count(in, "hash count");
    Bitset bits = read_bitset(in);
    if (bits.size() != m) throw FormatError("filter bitset length does not match m");
    return BloomFilter(std::move(bits), family_from(nullptr, k), 0);
}

void write_structure(std::ostream& out, const BloomMatrix& matrix) {
    out.write(kMagic.data(), kMagic.size());
    put_u8(out, kFormatVersion);
    put_u8(out, kKindMatrix);
    put_u64(out, matrix.m());
    put_u64(out, matrix.k());
    put_u64(out, matrix.item_count());
    put_u8(out, static_cast<std::uint8_t>(matrix.layout()));
    put_ordering(out, matrix.ordering());
    put_hashing(out, matrix.family().table());
    if (matrix.layout() == MatrixLayout::Dense) {
        for (const auto& row : matrix.dense_rows()) write_bitset(out, row);
    } else {
        for (const auto& row : matrix.sparse_rows()) {
            put_u64(out, row.stored_length());
            put_packed(out, row.words(), row.stored_length());
        }
    }
}

void write_structure(std::ostream& out, const BloomVector& vector) {
    out.write(kMagic.data(), kMagic.size());
    put_u8(out, kFormatVersion);
    put_u8(out, kKindVector);
    put_u64(out, vector.item_count());
    put_ordering(out, vector.ordering());
    std::shared_ptr<const FixedHashTable> table;
    if (!vector.filters().empty()) table = vector.filters().front().family().table();
    put_hashing(out, table);
    for (const auto& f : vector.filters()) {
        put_u64(out, f.m());
        put_u64(out, f.k());
        put_u64(out, f.inserted_count());
        write_bitset(out, f.bits());
    }
}

Structure read_structure(std::istream& in) {
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw FormatError("not a structure file");
    const std::uint8_t version = get_u8(in);
    if (version != kFormatVersion) {
        throw FormatError("unsupported structure format version " + std::to_string(version));
    }
    const std::uint8_t kind = get_u8(in);

    if (kind == kKindMatrix) {
        const std::uint64_t m = get_count(in, "row count");
        const std::uint64_t k = get_count(in, "hash count");
        const std::uint64_t n = get_count(in, "item count");
        const std::uint8_t layout_byte = get_u8(in);
        if (layout_byte > 1) throw FormatError("unknown matrix layout");
        const auto layout = static_cast<MatrixLayout>(layout_byte);
        Ordering ordering = get_ordering(in);
        if (ordering.size() != n) throw FormatError("ordering size does not match N");
        auto table = get_hashing(in);
        if (m == 0) throw FormatError("matrix needs m >= 1");
        BloomMatrix matrix(m, family_from(table, k), std::move(ordering), layout, false);
        if (layout == MatrixLayout::Dense) {
            std::vector<Bitset> rows;
            rows.reserve(m);
            for (std::uint64_t r = 0; r < m; ++r) {
                rows.push_back(read_bitset(in));
                if (rows.back().size() != n) throw FormatError("row width does not match N");
            }
            matrix.restore_rows(std::move(rows));
        } else {
            std::vector<SparseRow> rows;
            rows.reserve(m);
            for (std::uint64_t r = 0; r < m; ++r) {
                const std::uint64_t stored = get_count(in, "stored row length");
                try {
                    rows.push_back(SparseRowBuilder::make(n, stored, get_packed(in, stored)));
                } catch (const std::invalid_argument& e) {
                    throw FormatError(e.what());
                }
            }
            matrix.restore_rows(std::move(rows));
        }
        return matrix;
    }

    if (kind == kKindVector) {
        const std::uint64_t n = get_count(in, "item count");
        Ordering ordering = get_ordering(in);
        if (ordering.size() != n) throw FormatError("ordering size does not match N");
        auto table = get_hashing(in);
        BloomVector vector(table, false);
        for (std::uint64_t i = 0; i < n; ++i) {
            const std::uint64_t m = get_count(in, "filter size");
            const std::uint64_t k = get_count(in, "hash count");
            const std::uint64_t inserted = get_count(in, "insertion count");
            Bitset bits = read_bitset(in);
            if (bits.size() != m || m == 0) throw FormatError("filter bitset length does not match m");
            vector.add_item(ordering.item(i), BloomFilter(std::move(bits), family_from(table, k), inserted));
        }
        return vector;
    }
    throw FormatError("unknown structure kind " + std::to_string(kind));
}

void save_structure(const std::filesystem::path& path, const Structure& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write structure file '" + path.string() + "'");
    std::visit([&](const auto& impl) { write_structure(out, impl); }, s);
    if (!out) throw std::runtime_error("failed writing structure file '" + path.string() + "'");
}

Structure load_structure(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open structure file '" + path.string() + "'");
    return read_structure(in);
}

} // namespace bmf
