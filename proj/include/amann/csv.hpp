#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace amann {

/// Lines written as "# key: value" ahead of the CSV header.
struct Provenance {
  std::string tool_version;
  std::optional<std::uint64_t> seed;
  std::string git_describe;
  /// Resolved options of the command, one "name=value" per line.
  std::string resolved_config;
  std::string config_file;
  std::string argv;
  /// Omitted when empty (always empty under --deterministic).
  std::string timestamp;
};

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Shortest decimal that reads back to the same double, '.' separator.
std::string format_number(double value);
std::string format_number(std::uint64_t value);

void write_csv(std::ostream& out, const Provenance& provenance, const CsvTable& table);

}  // namespace amann
