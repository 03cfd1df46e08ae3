#pragma once

// Readers and writers for the vector container formats used by the real
// datasets, plus the centering / normalization applied before indexing.
//
// Every reader throws FormatError carrying the byte offset of the first
// malformed field. Files whose name ends in ".gz" are written gzip
// compressed; readers accept gzip or plain input regardless of the name.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "amann/pattern.hpp"

namespace amann {

struct DatasetMeta {
  std::string name;
  std::uint64_t n_base = 0;
  std::uint64_t n_query = 0;
  std::uint32_t dim = 0;
  Variant variant = Variant::kReal;
  std::vector<std::filesystem::path> sources;
};

/// Whole file, gunzipped when compressed. DataError if it cannot be read.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// *vecs: per vector a little-endian int32 dimension, then that many
// float32 / uint8 / int32 entries. All vectors share one dimension.
std::vector<std::vector<float>> parse_fvecs(std::span<const std::uint8_t> bytes);
std::vector<std::vector<std::uint8_t>> parse_bvecs(std::span<const std::uint8_t> bytes);
std::vector<std::vector<std::int32_t>> parse_ivecs(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_fvecs(std::span<const std::vector<float>> vectors);
std::vector<std::uint8_t> encode_bvecs(std::span<const std::vector<std::uint8_t>> vectors);
std::vector<std::uint8_t> encode_ivecs(std::span<const std::vector<std::int32_t>> vectors);

/// fvecs entries widened to double; non-finite entries are rejected.
std::vector<RealPattern> load_fvecs(const std::filesystem::path& path);
std::vector<std::vector<std::uint8_t>> load_bvecs(const std::filesystem::path& path);
std::vector<std::vector<std::int32_t>> load_ivecs(const std::filesystem::path& path);
/// bvecs entries cast to double.
std::vector<RealPattern> load_bvecs_real(const std::filesystem::path& path);

void write_fvecs(const std::filesystem::path& path, std::span<const std::vector<float>> vectors);
void write_bvecs(const std::filesystem::path& path,
                 std::span<const std::vector<std::uint8_t>> vectors);
void write_ivecs(const std::filesystem::path& path,
                 std::span<const std::vector<std::int32_t>> vectors);

/// MNIST idx3 image file: big-endian magic 0x00000803, count, rows, cols,
/// then count * rows * cols uint8 pixels.
struct IdxImages {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::vector<std::uint8_t>> images;
};

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_idx_images(const IdxImages& images);

/// 28 x 28 images flattened to dimension 784, pixels scaled by 1/255.
std::vector<RealPattern> load_mnist_idx(const std::filesystem::path& path);

struct CsvOptions {
  bool header = false;
  /// Columns dropped before / after the vector (ids, labels).
  std::uint32_t skip_leading = 0;
  std::uint32_t skip_trailing = 0;
};

/// One vector per row; columns holding a nonzero number become active.
/// Every row must hold skip_leading + dim + skip_trailing columns.
std::vector<SparsePattern> parse_sparse_csv(std::string_view text, std::uint32_t dim,
                                            const CsvOptions& options);
std::vector<SparsePattern> load_sparse_csv(const std::filesystem::path& path, std::uint32_t dim,
                                           const CsvOptions& options = {});
/// 0/1 rows without header.
std::string encode_sparse_csv(std::span<const SparsePattern> patterns);

/// Subtracts the mean of `base` from every base and query vector, then
/// scales each to unit L2 norm. DataError names the first vector whose
/// centered norm is zero.
std::pair<std::vector<RealPattern>, std::vector<RealPattern>> preprocess_center_normalize(
    std::span<const RealPattern> base, std::span<const RealPattern> queries);

}  // namespace amann
