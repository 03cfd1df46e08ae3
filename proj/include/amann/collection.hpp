#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <variant>
#include <vector>

#include "amann/datasets.hpp"
#include "amann/pattern.hpp"

namespace amann {

using Collection =
    std::variant<std::vector<SparsePattern>, std::vector<DensePattern>, std::vector<RealPattern>>;

enum class FileFormat { kFvecs, kBvecs, kMnist, kCsv };

std::string_view to_string(FileFormat format);
FileFormat parse_format(std::string_view name);

struct LoadOptions {
  Variant variant = Variant::kReal;
  FileFormat format = FileFormat::kFvecs;
  /// Required for CSV input.
  std::uint32_t dim = 0;
  CsvOptions csv;
};

/// Reads a vector file as the requested variant:
///   sparse: csv, or fvecs/bvecs with nonzero entries active
///   dense:  fvecs with every entry -1 or +1
///   real:   fvecs, bvecs or MNIST idx
std::vector<SparsePattern> load_sparse(const std::filesystem::path& path, const LoadOptions& opt);
std::vector<DensePattern> load_dense(const std::filesystem::path& path, const LoadOptions& opt);
std::vector<RealPattern> load_real(const std::filesystem::path& path, const LoadOptions& opt);
Collection load_collection(const std::filesystem::path& path, const LoadOptions& opt);

/// Writes sparse patterns as 0/1 CSV or fvecs, dense patterns as +-1 fvecs.
void save_collection(const std::filesystem::path& path, const Collection& patterns,
                     FileFormat format);

}  // namespace amann
