#include "amann/collection.hpp"

#include <string>

#include "amann/error.hpp"

namespace amann {

std::string_view to_string(FileFormat format) {
  switch (format) {
    case FileFormat::kFvecs: return "fvecs";
    case FileFormat::kBvecs: return "bvecs";
    case FileFormat::kMnist: return "mnist";
    case FileFormat::kCsv: return "csv";
  }
  return "?";
}

FileFormat parse_format(std::string_view name) {
  if (name == "fvecs") return FileFormat::kFvecs;
  if (name == "bvecs") return FileFormat::kBvecs;
  if (name == "mnist" || name == "idx") return FileFormat::kMnist;
  if (name == "csv") return FileFormat::kCsv;
  throw ParameterError("unknown file format '" + std::string(name) + "'");
}

namespace {

template <class T>
std::vector<SparsePattern> nonzero_support(const std::vector<std::vector<T>>& vecs) {
  std::vector<SparsePattern> out;
  out.reserve(vecs.size());
  for (const auto& v : vecs) {
    std::vector<std::uint32_t> active;
    for (std::uint32_t l = 0; l < v.size(); ++l) {
      if (v[l] != 0) active.push_back(l);
    }
    out.emplace_back(static_cast<std::uint32_t>(v.size()), std::move(active));
  }
  return out;
}

[[noreturn]] void unsupported(Variant variant, FileFormat format) {
  throw ParameterError("cannot read " + std::string(to_string(variant)) + " patterns from " +
                       std::string(to_string(format)) + " files");
}

}  // namespace

std::vector<SparsePattern> load_sparse(const std::filesystem::path& path, const LoadOptions& opt) {
  switch (opt.format) {
    case FileFormat::kCsv:
      if (opt.dim == 0) throw ParameterError("csv input needs --dim");
      return load_sparse_csv(path, opt.dim, opt.csv);
    case FileFormat::kFvecs: return nonzero_support(parse_fvecs(read_file_bytes(path)));
    case FileFormat::kBvecs: return nonzero_support(load_bvecs(path));
    case FileFormat::kMnist: break;
  }
  unsupported(Variant::kSparse, opt.format);
}

std::vector<DensePattern> load_dense(const std::filesystem::path& path, const LoadOptions& opt) {
  if (opt.format != FileFormat::kFvecs) unsupported(Variant::kDense, opt.format);
  const auto vecs = parse_fvecs(read_file_bytes(path));
  std::vector<DensePattern> out;
  out.reserve(vecs.size());
  std::vector<int> signs;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    signs.assign(vecs[i].size(), 0);
    for (std::size_t l = 0; l < vecs[i].size(); ++l) {
      const float v = vecs[i][l];
      if (v != 1.0f && v != -1.0f) {
        throw FormatError("fvecs: dense entry " + std::to_string(l) + " of vector " +
                              std::to_string(i) + " is not -1 or +1",
                          i * (4 + 4 * vecs[i].size()) + 4 + 4 * l);
      }
      signs[l] = v > 0 ? 1 : -1;
    }
    out.push_back(DensePattern::from_signs(signs));
  }
  return out;
}

std::vector<RealPattern> load_real(const std::filesystem::path& path, const LoadOptions& opt) {
  switch (opt.format) {
    case FileFormat::kFvecs: return load_fvecs(path);
    case FileFormat::kBvecs: return load_bvecs_real(path);
    case FileFormat::kMnist: return load_mnist_idx(path);
    case FileFormat::kCsv: break;
  }
  unsupported(Variant::kReal, opt.format);
}

Collection load_collection(const std::filesystem::path& path, const LoadOptions& opt) {
  Collection out;
  switch (opt.variant) {
    case Variant::kSparse: out = load_sparse(path, opt); break;
    case Variant::kDense: out = load_dense(path, opt); break;
    case Variant::kReal: out = load_real(path, opt); break;
  }
  std::visit(
      [&](const auto& patterns) {
        if (patterns.empty()) throw DataError("'" + path.string() + "' holds no vectors");
      },
      out);
  return out;
}

void save_collection(const std::filesystem::path& path, const Collection& patterns,
                     FileFormat format) {
  if (const auto* sparse = std::get_if<std::vector<SparsePattern>>(&patterns)) {
    if (format == FileFormat::kCsv) {
      const std::string text = encode_sparse_csv(*sparse);
      write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
      return;
    }
    if (format == FileFormat::kFvecs) {
      std::vector<std::vector<float>> vecs;
      for (const auto& x : *sparse) {
        std::vector<float> v(x.dim(), 0.0f);
        for (std::uint32_t l : x.active()) v[l] = 1.0f;
        vecs.push_back(std::move(v));
      }
      write_fvecs(path, vecs);
      return;
    }
    unsupported(Variant::kSparse, format);
  }
  if (const auto* dense = std::get_if<std::vector<DensePattern>>(&patterns)) {
    if (format != FileFormat::kFvecs) unsupported(Variant::kDense, format);
    std::vector<std::vector<float>> vecs;
    for (const auto& x : *dense) {
      std::vector<float> v(x.dim());
      for (std::uint32_t l = 0; l < x.dim(); ++l) v[l] = static_cast<float>(x.sign(l));
      vecs.push_back(std::move(v));
    }
    write_fvecs(path, vecs);
    return;
  }
  const auto& real = std::get<std::vector<RealPattern>>(patterns);
  if (format != FileFormat::kFvecs) unsupported(Variant::kReal, format);
  std::vector<std::vector<float>> vecs;
  for (const auto& x : real) vecs.emplace_back(x.values().begin(), x.values().end());
  write_fvecs(path, vecs);
}

}  // namespace amann
