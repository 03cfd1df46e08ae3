#include "amann/csv.hpp"

#include <fmt/format.h>

#include "amann/error.hpp"

namespace amann {

std::string format_number(double value) { return fmt::format("{}", value); }

std::string format_number(std::uint64_t value) { return fmt::format("{}", value); }

void write_csv(std::ostream& out, const Provenance& p, const CsvTable& table) {
  out << "# amann " << p.tool_version << '\n';
  if (p.seed) out << "# seed: " << *p.seed << '\n';
  out << "# git: " << p.git_describe << '\n';
  out << fmt::format("# config-hash: {:016x}\n", fnv1a64(p.resolved_config));
  if (!p.config_file.empty()) out << "# config-file: " << p.config_file << '\n';
  out << "# argv: " << p.argv << '\n';
  if (!p.timestamp.empty()) out << "# timestamp: " << p.timestamp << '\n';
  std::size_t start = 0;
  while (start < p.resolved_config.size()) {
    std::size_t end = p.resolved_config.find('\n', start);
    if (end == std::string::npos) end = p.resolved_config.size();
    if (end > start) out << "# config: " << p.resolved_config.substr(start, end - start) << '\n';
    start = end + 1;
  }
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw Error("csv row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

}  // namespace amann
