#pragma once

// Index file layout (little-endian):
//
//   "AMANN1"  u8 variant  u8 rule  u32 d  u32 q  u64 n
//   q times:  u64 count, count x u32 member id, d*d cells (i64, or f64 for
//             real patterns), row-major
//   u32 section count, then per section:
//             "RSIDX1"  u32 scope (class id, or 0xFFFFFFFF for the whole
//             collection)  u32 r  r x u32 anchor id
//             r times: u64 count, count x u32 attached id
//
// q = 0 stores anchor sections only.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "amann/baselines.hpp"
#include "amann/index.hpp"
#include "amann/memory.hpp"
#include "amann/pattern.hpp"

namespace amann {

inline constexpr std::uint32_t kGlobalScope = 0xFFFFFFFFu;

struct AnchorSection {
  std::uint32_t scope = kGlobalScope;
  AnchorIndex index;

  friend bool operator==(const AnchorSection&, const AnchorSection&) = default;
};

struct IndexHeader {
  Variant variant = Variant::kSparse;
  Rule rule = Rule::kSum;
  std::uint32_t dim = 0;
  std::uint32_t q = 0;
  std::uint64_t n = 0;
};

template <Pattern P>
struct StoredIndex {
  std::uint32_t dim = 0;
  std::uint64_t n = 0;
  Rule rule = Rule::kSum;
  std::optional<PartitionedIndex<P>> classes;
  std::vector<AnchorSection> sections;

  friend bool operator==(const StoredIndex&, const StoredIndex&) = default;
};

IndexHeader decode_index_header(std::span<const std::uint8_t> bytes);

template <Pattern P>
std::vector<std::uint8_t> encode_index(const StoredIndex<P>& index);

/// Rejects a variant other than P's and any broken invariant: partition,
/// memory contents, anchor sections covering their scope.
template <Pattern P>
StoredIndex<P> decode_index(std::span<const std::uint8_t> bytes);

template <Pattern P>
void save_index(const std::filesystem::path& path, const StoredIndex<P>& index);
template <Pattern P>
StoredIndex<P> load_index(const std::filesystem::path& path);

}  // namespace amann
