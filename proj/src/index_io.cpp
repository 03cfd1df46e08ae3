#include "amann/index_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <numeric>
#include <string>

#include "amann/datasets.hpp"
#include "amann/error.hpp"

namespace amann {

namespace {

constexpr char kMagic[6] = {'A', 'M', 'A', 'N', 'N', '1'};
constexpr char kSectionTag[6] = {'R', 'S', 'I', 'D', 'X', '1'};

class Writer {
 public:
  void bytes(const char* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void i64(std::int64_t v) { le(static_cast<std::uint64_t>(v), 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void le(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t offset() const { return pos_; }
  bool at_end() const { return pos_ == bytes_.size(); }

  void expect_tag(const char (&tag)[6], const char* what) {
    need(6, what);
    if (std::memcmp(bytes_.data() + pos_, tag, 6) != 0) {
      throw FormatError(std::string("index: bad ") + what, pos_);
    }
    pos_ += 6;
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return bytes_[pos_++];
  }
  std::uint32_t u32(const char* what) { return static_cast<std::uint32_t>(le(4, what)); }
  std::uint64_t u64(const char* what) { return le(8, what); }
  std::int64_t i64(const char* what) { return static_cast<std::int64_t>(le(8, what)); }
  double f64(const char* what) { return std::bit_cast<double>(le(8, what)); }

  /// Fails early when `count` items of `width` bytes cannot fit.
  void need_items(std::uint64_t count, std::uint64_t width, const char* what) {
    if (count > (bytes_.size() - pos_) / width) {
      throw FormatError(std::string("index: truncated ") + what, pos_);
    }
  }

 private:
  void need(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) throw FormatError(std::string("index: truncated ") + what, pos_);
  }
  std::uint64_t le(int width, const char* what) {
    need(width, what);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += width;
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::vector<std::uint32_t> read_ids(Reader& in, const char* what) {
  const std::uint64_t count = in.u64(what);
  in.need_items(count, 4, what);
  std::vector<std::uint32_t> ids(count);
  for (auto& id : ids) id = in.u32(what);
  return ids;
}

IndexHeader read_header(Reader& in) {
  in.expect_tag(kMagic, "magic (expected AMANN1)");
  IndexHeader h;
  const std::uint64_t variant_at = in.offset();
  const std::uint8_t variant = in.u8("header");
  if (variant > 2) throw FormatError("index: unknown variant " + std::to_string(variant), variant_at);
  h.variant = static_cast<Variant>(variant);
  const std::uint64_t rule_at = in.offset();
  const std::uint8_t rule = in.u8("header");
  if (rule > 1) throw FormatError("index: unknown rule " + std::to_string(rule), rule_at);
  h.rule = static_cast<Rule>(rule);
  const std::uint64_t dim_at = in.offset();
  h.dim = in.u32("header");
  if (h.dim == 0) throw FormatError("index: zero dimension", dim_at);
  h.q = in.u32("header");
  h.n = in.u64("header");
  if (h.n == 0 || h.n > 0xFFFFFFFFull) throw FormatError("index: collection size out of range", 16);
  if (h.q > h.n) throw FormatError("index: more classes than patterns", 12);
  return h;
}

}  // namespace

IndexHeader decode_index_header(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  return read_header(in);
}

template <Pattern P>
std::vector<std::uint8_t> encode_index(const StoredIndex<P>& index) {
  Writer out;
  out.bytes(kMagic, 6);
  out.u8(static_cast<std::uint8_t>(PatternTraits<P>::kVariant));
  out.u8(static_cast<std::uint8_t>(index.rule));
  out.u32(index.dim);
  out.u32(index.classes ? index.classes->num_classes() : 0);
  out.u64(index.n);
  if (index.classes) {
    const auto& idx = *index.classes;
    for (std::uint32_t c = 0; c < idx.num_classes(); ++c) {
      const auto& members = idx.classes()[c];
      out.u64(members.size());
      for (std::uint32_t id : members) out.u32(id);
      for (auto cell : idx.memories()[c].cells()) {
        if constexpr (std::is_same_v<decltype(cell), double>) {
          out.f64(cell);
        } else {
          out.i64(cell);
        }
      }
    }
  }
  out.u32(static_cast<std::uint32_t>(index.sections.size()));
  for (const auto& s : index.sections) {
    out.bytes(kSectionTag, 6);
    out.u32(s.scope);
    out.u32(s.index.r());
    for (std::uint32_t id : s.index.anchor_ids) out.u32(id);
    for (const auto& list : s.index.attachments) {
      out.u64(list.size());
      for (std::uint32_t id : list) out.u32(id);
    }
  }
  return out.take();
}

template <Pattern P>
StoredIndex<P> decode_index(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  const IndexHeader h = read_header(in);
  if (h.variant != PatternTraits<P>::kVariant) {
    throw FormatError("index: file holds " + std::string(to_string(h.variant)) +
                          " patterns, expected " +
                          std::string(to_string(PatternTraits<P>::kVariant)),
                      6);
  }
  StoredIndex<P> out;
  out.dim = h.dim;
  out.n = h.n;
  out.rule = h.rule;
  if (h.q > 0) {
    Allocation classes(h.q);
    std::vector<MemoryMatrix<P>> memories;
    memories.reserve(h.q);
    const std::uint64_t cells = std::uint64_t{h.dim} * h.dim;
    for (std::uint32_t c = 0; c < h.q; ++c) {
      const std::uint64_t class_at = in.offset();
      classes[c] = read_ids(in, "class member list");
      if (!std::is_sorted(classes[c].begin(), classes[c].end())) {
        throw FormatError("index: class " + std::to_string(c) + " members are not sorted",
                          class_at);
      }
      in.need_items(cells, 8, "memory cells");
      const std::uint64_t cells_at = in.offset();
      std::vector<Value<P>> values(cells);
      for (auto& v : values) {
        if constexpr (std::is_same_v<Value<P>, double>) {
          v = in.f64("memory cells");
        } else {
          v = in.i64("memory cells");
        }
      }
      try {
        memories.push_back(
            MemoryMatrix<P>::from_cells(h.dim, h.rule, std::move(values), classes[c].size()));
      } catch (const FormatError&) {
        throw;
      } catch (const Error& e) {
        throw FormatError(std::string("index: class ") + std::to_string(c) + ": " + e.what(),
                          cells_at);
      }
    }
    const std::uint64_t end_of_classes = in.offset();
    try {
      out.classes.emplace(h.dim, h.rule, std::move(classes), std::move(memories));
    } catch (const Error& e) {
      throw FormatError(std::string("index: ") + e.what(), end_of_classes);
    }
    if (out.classes->size() != h.n) {
      throw FormatError("index: classes hold " + std::to_string(out.classes->size()) +
                            " patterns, header says " + std::to_string(h.n),
                        end_of_classes);
    }
  }
  const std::uint32_t sections = in.u32("section count");
  std::vector<std::uint32_t> all(h.n);
  std::iota(all.begin(), all.end(), 0u);
  for (std::uint32_t s = 0; s < sections; ++s) {
    const std::uint64_t section_at = in.offset();
    in.expect_tag(kSectionTag, "section tag (expected RSIDX1)");
    AnchorSection section;
    section.scope = in.u32("section scope");
    const std::uint32_t r = in.u32("anchor count");
    in.need_items(r, 4, "anchor ids");
    section.index.anchor_ids.resize(r);
    for (auto& id : section.index.anchor_ids) id = in.u32("anchor ids");
    section.index.attachments.resize(r);
    for (auto& list : section.index.attachments) {
      list = read_ids(in, "attachment list");
      if (!std::is_sorted(list.begin(), list.end())) {
        throw FormatError("index: attachment list is not sorted", section_at);
      }
    }
    std::span<const std::uint32_t> members;
    if (section.scope == kGlobalScope) {
      members = all;
    } else if (out.classes && section.scope < out.classes->num_classes()) {
      members = out.classes->classes()[section.scope];
    } else {
      throw FormatError("index: section scope " + std::to_string(section.scope) +
                            " names no class",
                        section_at);
    }
    for (const auto& prev : out.sections) {
      if (prev.scope == section.scope) {
        throw FormatError("index: two sections share one scope", section_at);
      }
    }
    try {
      validate_anchor_index(section.index, members);
    } catch (const Error& e) {
      throw FormatError(std::string("index: ") + e.what(), section_at);
    }
    out.sections.push_back(std::move(section));
  }
  if (!in.at_end()) throw FormatError("index: trailing bytes", in.offset());
  return out;
}

template <Pattern P>
void save_index(const std::filesystem::path& path, const StoredIndex<P>& index) {
  write_file_bytes(path, encode_index(index));
}

template <Pattern P>
StoredIndex<P> load_index(const std::filesystem::path& path) {
  return decode_index<P>(read_file_bytes(path));
}

#define AMANN_INSTANTIATE(P)                                                           \
  template std::vector<std::uint8_t> encode_index(const StoredIndex<P>&);             \
  template StoredIndex<P> decode_index<P>(std::span<const std::uint8_t>);             \
  template void save_index(const std::filesystem::path&, const StoredIndex<P>&);      \
  template StoredIndex<P> load_index<P>(const std::filesystem::path&);

AMANN_INSTANTIATE(SparsePattern)
AMANN_INSTANTIATE(DensePattern)
AMANN_INSTANTIATE(RealPattern)

#undef AMANN_INSTANTIATE

}  // namespace amann
