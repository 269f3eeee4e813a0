#ifndef BMF_PERSISTENCE_HPP
#define BMF_PERSISTENCE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <variant>

#include "bmf/bitset.hpp"
#include "bmf/bloom_filter.hpp"
#include "bmf/bloom_matrix.hpp"
#include "bmf/bloom_vector.hpp"

namespace bmf {

/*
 * Binary formats. All integers are little-endian u64 unless noted.
 *
 *   bitset      length, then ceil(length/8) bytes; position p is bit (p % 8)
 *               of byte p / 8
 *   string      byte length, then the bytes
 *   ordering    count, then `count` strings
 *   hashing     u8 kind (0 seeded murmur, 1 fixed table); fixed tables add
 *               entry count, then per entry: label string, range, index count,
 *               indices
 *   filter      m, k, bitset
 *
 * Structure file: "BMFS", u8 format version, u8 structure kind, then
 *   matrix      m, k, N, u8 layout (0 dense, 1 sparse), ordering, hashing,
 *               m rows: dense -> bitset; sparse -> stored length + payload
 *               bytes for the stored prefix
 *   vector      N, ordering, hashing, N x (m_i, k_i, n_i, bitset)
 */

class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint8_t kFormatVersion = 1;

void write_bitset(std::ostream& out, const Bitset& bits);
Bitset read_bitset(std::istream& in);

void write_filter(std::ostream& out, const BloomFilter& filter);
/// Filters are restored with seeded hashing and an insertion count of 0.
BloomFilter read_filter(std::istream& in);

using Structure = std::variant<BloomMatrix, BloomVector>;

void write_structure(std::ostream& out, const BloomMatrix& matrix);
void write_structure(std::ostream& out, const BloomVector& vector);
Structure read_structure(std::istream& in);

void save_structure(const std::filesystem::path& path, const Structure& s);
Structure load_structure(const std::filesystem::path& path);

} // namespace bmf

#endif // BMF_PERSISTENCE_HPP
