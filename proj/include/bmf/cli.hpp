#ifndef BMF_CLI_HPP
#define BMF_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "bmf/hashing.hpp"

namespace bmf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Reads `label,range,index,index,...` lines into a fixed hash table.
std::shared_ptr<const FixedHashTable> load_hash_table(const std::filesystem::path& path);

} // namespace bmf::cli

#endif // BMF_CLI_HPP
