#include "amann/datasets.hpp"

#include <zlib.h>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "amann/error.hpp"

namespace amann {

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  gzFile file = gzopen(path.c_str(), "rb");
  if (!file) throw DataError("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> out;
  std::uint8_t chunk[1 << 16];
  for (;;) {
    const int got = gzread(file, chunk, sizeof chunk);
    if (got < 0) {
      int code = 0;
      const std::string msg = gzerror(file, &code);
      gzclose(file);
      throw DataError("cannot read '" + path.string() + "': " + msg);
    }
    if (got == 0) break;
    out.insert(out.end(), chunk, chunk + got);
  }
  gzclose(file);
  return out;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.extension() == ".gz") {
    gzFile file = gzopen(path.c_str(), "wb9");
    if (!file) throw DataError("cannot write '" + path.string() + "'");
    std::size_t done = 0;
    while (done < bytes.size()) {
      const auto part = static_cast<unsigned>(std::min<std::size_t>(bytes.size() - done, 1u << 30));
      if (gzwrite(file, bytes.data() + done, part) != static_cast<int>(part)) {
        gzclose(file);
        throw DataError("cannot write '" + path.string() + "'");
      }
      done += part;
    }
    if (gzclose(file) != Z_OK) throw DataError("cannot write '" + path.string() + "'");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("cannot write '" + path.string() + "'");
}

namespace {

std::uint32_t get_le32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
         std::uint32_t{p[3]} << 24;
}

void put_le32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_be32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} << 24 | std::uint32_t{p[1]} << 16 | std::uint32_t{p[2]} << 8 |
         std::uint32_t{p[3]};
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

template <class T>
T decode_entry(const std::uint8_t* p) {
  if constexpr (sizeof(T) == 1) {
    return p[0];
  } else {
    return std::bit_cast<T>(get_le32(p));
  }
}

template <class T>
void encode_entry(std::vector<std::uint8_t>& out, T v) {
  if constexpr (sizeof(T) == 1) {
    out.push_back(v);
  } else {
    put_le32(out, std::bit_cast<std::uint32_t>(v));
  }
}

template <class T>
std::vector<std::vector<T>> parse_vecs(std::span<const std::uint8_t> bytes, const char* format) {
  std::vector<std::vector<T>> out;
  std::size_t pos = 0;
  std::int32_t dim = 0;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 4) {
      throw FormatError(std::string(format) + ": truncated dimension header", pos);
    }
    const auto this_dim = static_cast<std::int32_t>(get_le32(bytes.data() + pos));
    if (this_dim <= 0) {
      throw FormatError(std::string(format) + ": nonpositive dimension " +
                            std::to_string(this_dim),
                        pos);
    }
    if (out.empty()) {
      dim = this_dim;
    } else if (this_dim != dim) {
      throw FormatError(std::string(format) + ": vector " + std::to_string(out.size()) +
                            " has dimension " + std::to_string(this_dim) + ", expected " +
                            std::to_string(dim),
                        pos);
    }
    pos += 4;
    const std::size_t payload = static_cast<std::size_t>(dim) * sizeof(T);
    if (bytes.size() - pos < payload) {
      throw FormatError(std::string(format) + ": truncated vector " + std::to_string(out.size()),
                        pos);
    }
    std::vector<T> v(dim);
    for (std::int32_t i = 0; i < dim; ++i) v[i] = decode_entry<T>(bytes.data() + pos + i * sizeof(T));
    out.push_back(std::move(v));
    pos += payload;
  }
  return out;
}

template <class T>
std::vector<std::uint8_t> encode_vecs(std::span<const std::vector<T>> vectors, const char* format) {
  std::vector<std::uint8_t> out;
  for (const auto& v : vectors) {
    if (v.empty() || v.size() != vectors[0].size()) {
      throw ParameterError(std::string(format) + ": vectors must share one positive dimension");
    }
    put_le32(out, static_cast<std::uint32_t>(v.size()));
    for (T x : v) encode_entry(out, x);
  }
  return out;
}

}  // namespace

std::vector<std::vector<float>> parse_fvecs(std::span<const std::uint8_t> bytes) {
  return parse_vecs<float>(bytes, "fvecs");
}
std::vector<std::vector<std::uint8_t>> parse_bvecs(std::span<const std::uint8_t> bytes) {
  return parse_vecs<std::uint8_t>(bytes, "bvecs");
}
std::vector<std::vector<std::int32_t>> parse_ivecs(std::span<const std::uint8_t> bytes) {
  return parse_vecs<std::int32_t>(bytes, "ivecs");
}

std::vector<std::uint8_t> encode_fvecs(std::span<const std::vector<float>> vectors) {
  return encode_vecs(vectors, "fvecs");
}
std::vector<std::uint8_t> encode_bvecs(std::span<const std::vector<std::uint8_t>> vectors) {
  return encode_vecs(vectors, "bvecs");
}
std::vector<std::uint8_t> encode_ivecs(std::span<const std::vector<std::int32_t>> vectors) {
  return encode_vecs(vectors, "ivecs");
}

std::vector<RealPattern> load_fvecs(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  const auto vecs = parse_fvecs(bytes);
  std::vector<RealPattern> out;
  out.reserve(vecs.size());
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    const std::size_t dim = vecs[i].size();
    for (std::size_t j = 0; j < dim; ++j) {
      if (!std::isfinite(vecs[i][j])) {
        throw FormatError("fvecs: non-finite entry " + std::to_string(j) + " in vector " +
                              std::to_string(i),
                          i * (4 + 4 * dim) + 4 + 4 * j);
      }
    }
    out.emplace_back(std::vector<double>(vecs[i].begin(), vecs[i].end()));
  }
  return out;
}

std::vector<std::vector<std::uint8_t>> load_bvecs(const std::filesystem::path& path) {
  return parse_bvecs(read_file_bytes(path));
}

std::vector<std::vector<std::int32_t>> load_ivecs(const std::filesystem::path& path) {
  return parse_ivecs(read_file_bytes(path));
}

std::vector<RealPattern> load_bvecs_real(const std::filesystem::path& path) {
  const auto vecs = load_bvecs(path);
  std::vector<RealPattern> out;
  out.reserve(vecs.size());
  for (const auto& v : vecs) out.emplace_back(std::vector<double>(v.begin(), v.end()));
  return out;
}

void write_fvecs(const std::filesystem::path& path, std::span<const std::vector<float>> vectors) {
  write_file_bytes(path, encode_fvecs(vectors));
}
void write_bvecs(const std::filesystem::path& path,
                 std::span<const std::vector<std::uint8_t>> vectors) {
  write_file_bytes(path, encode_bvecs(vectors));
}
void write_ivecs(const std::filesystem::path& path,
                 std::span<const std::vector<std::int32_t>> vectors) {
  write_file_bytes(path, encode_ivecs(vectors));
}

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16) throw FormatError("idx: truncated header", bytes.size());
  const std::uint32_t magic = get_be32(bytes.data());
  if (magic != 0x00000803) {
    throw FormatError("idx: bad magic 0x" + [&] {
      char buf[9];
      std::snprintf(buf, sizeof buf, "%08x", magic);
      return std::string(buf);
    }() + ", expected 0x00000803", 0);
  }
  const std::uint32_t count = get_be32(bytes.data() + 4);
  IdxImages out;
  out.rows = get_be32(bytes.data() + 8);
  out.cols = get_be32(bytes.data() + 12);
  if (out.rows == 0 || out.cols == 0) throw FormatError("idx: zero image size", 8);
  const std::uint64_t pixels = std::uint64_t{out.rows} * out.cols;
  const std::uint64_t need = 16 + pixels * count;
  if (bytes.size() < need) {
    throw FormatError("idx: truncated pixel data, expected " + std::to_string(need) + " bytes",
                      bytes.size());
  }
  if (bytes.size() > need) throw FormatError("idx: trailing bytes after the last image", need);
  out.images.resize(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto* p = bytes.data() + 16 + i * pixels;
    out.images[i].assign(p, p + pixels);
  }
  return out;
}

std::vector<std::uint8_t> encode_idx_images(const IdxImages& images) {
  std::vector<std::uint8_t> out;
  put_be32(out, 0x00000803);
  put_be32(out, static_cast<std::uint32_t>(images.images.size()));
  put_be32(out, images.rows);
  put_be32(out, images.cols);
  for (const auto& img : images.images) {
    if (img.size() != std::size_t{images.rows} * images.cols) {
      throw ParameterError("idx: image size differs from rows * cols");
    }
    out.insert(out.end(), img.begin(), img.end());
  }
  return out;
}

std::vector<RealPattern> load_mnist_idx(const std::filesystem::path& path) {
  const auto idx = parse_idx_images(read_file_bytes(path));
  if (idx.rows * idx.cols != 784) {
    throw FormatError("idx: MNIST images must be 28 x 28 (784 pixels), got " +
                          std::to_string(idx.rows) + " x " + std::to_string(idx.cols),
                      8);
  }
  std::vector<RealPattern> out;
  out.reserve(idx.images.size());
  for (const auto& img : idx.images) {
    std::vector<double> v(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) v[i] = img[i] / 255.0;
    out.emplace_back(std::move(v));
  }
  return out;
}

std::vector<SparsePattern> parse_sparse_csv(std::string_view text, std::uint32_t dim,
                                            const CsvOptions& options) {
  if (dim == 0) throw ParameterError("csv: dimension must be positive");
  const std::uint64_t expected = std::uint64_t{options.skip_leading} + dim + options.skip_trailing;
  std::vector<SparsePattern> out;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    const std::size_t line_start = pos;
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (first && options.header) {
      first = false;
      continue;
    }
    first = false;
    if (line.empty()) continue;
    std::vector<std::uint32_t> active;
    std::uint64_t column = 0;
    std::size_t field_start = 0;
    for (;;) {
      std::size_t comma = line.find(',', field_start);
      const bool last = comma == std::string_view::npos;
      if (last) comma = line.size();
      if (column >= options.skip_leading && column < options.skip_leading + dim) {
        std::string_view field = line.substr(field_start, comma - field_start);
        while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
        while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
        double value = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
          throw FormatError("csv: row " + std::to_string(out.size()) + " column " +
                                std::to_string(column) + " is not a number",
                            line_start + field_start);
        }
        if (value != 0) active.push_back(static_cast<std::uint32_t>(column - options.skip_leading));
      }
      ++column;
      if (last) break;
      field_start = comma + 1;
    }
    if (column != expected) {
      throw FormatError("csv: row " + std::to_string(out.size()) + " has " +
                            std::to_string(column) + " columns, expected " +
                            std::to_string(expected),
                        line_start);
    }
    out.emplace_back(dim, std::move(active));
  }
  return out;
}

std::vector<SparsePattern> load_sparse_csv(const std::filesystem::path& path, std::uint32_t dim,
                                           const CsvOptions& options) {
  const auto bytes = read_file_bytes(path);
  return parse_sparse_csv(
      std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), dim, options);
}

std::string encode_sparse_csv(std::span<const SparsePattern> patterns) {
  std::string out;
  for (const auto& x : patterns) {
    std::string row(2 * static_cast<std::size_t>(x.dim()) - 1, ',');
    for (std::uint32_t l = 0; l < x.dim(); ++l) row[2 * l] = '0';
    for (std::uint32_t l : x.active()) row[2 * l] = '1';
    out += row;
    out += '\n';
  }
  return out;
}

std::pair<std::vector<RealPattern>, std::vector<RealPattern>> preprocess_center_normalize(
    std::span<const RealPattern> base, std::span<const RealPattern> queries) {
  if (base.empty()) throw ParameterError("preprocessing needs a non-empty base set");
  const std::uint32_t dim = base[0].dim();
  std::vector<double> mean(dim, 0.0);
  for (const auto& x : base) {
    if (x.dim() != dim) throw DataError("base vectors do not share one dimension");
    const auto v = x.values();
    for (std::uint32_t l = 0; l < dim; ++l) mean[l] += v[l];
  }
  for (double& m : mean) m /= static_cast<double>(base.size());
  auto transform = [&](std::span<const RealPattern> set, const char* name) {
    std::vector<RealPattern> out;
    out.reserve(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (set[i].dim() != dim) {
        throw DataError(std::string(name) + " vector " + std::to_string(i) +
                        " has the wrong dimension");
      }
      const auto v = set[i].values();
      std::vector<double> c(dim);
      for (std::uint32_t l = 0; l < dim; ++l) c[l] = v[l] - mean[l];
      const double norm = std::sqrt(dot(std::span<const double>(c), std::span<const double>(c)));
      if (!(norm > 0)) {
        throw DataError(std::string(name) + " vector " + std::to_string(i) +
                        " equals the base mean and cannot be normalized");
      }
      for (double& x : c) x /= norm;
      out.emplace_back(std::move(c));
    }
    return out;
  };
  return {transform(base, "base"), transform(queries, "query")};
}

}  // namespace amann
