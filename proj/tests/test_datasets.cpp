#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include <unistd.h>

#include "amann/datasets.hpp"
#include "amann/error.hpp"

using namespace amann;
namespace fs = std::filesystem;

namespace {

std::uint64_t offset_of(const auto& fn) {
  try {
    fn();
  } catch (const FormatError& e) {
    return e.offset();
  }
  FAIL("no FormatError");
  return 0;
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("amann_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST_CASE("fvecs byte layout") {
  const std::vector<std::uint8_t> bytes{0x02, 0, 0, 0, 0, 0, 0x80, 0x3F, 0, 0, 0, 0x40};
  const auto v = parse_fvecs(bytes);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == std::vector<float>{1.0f, 2.0f});
  const std::vector<std::vector<float>> in{{1.0f, 2.0f}};
  CHECK(encode_fvecs(in) == bytes);
}

TEST_CASE("vecs round trips") {
  std::mt19937 eng(4);
  std::vector<std::vector<float>> f(13, std::vector<float>(7));
  std::vector<std::vector<std::uint8_t>> b(9, std::vector<std::uint8_t>(5));
  std::vector<std::vector<std::int32_t>> iv(6, std::vector<std::int32_t>(100));
  for (auto& v : f) for (auto& x : v) x = std::normal_distribution<float>()(eng);
  for (auto& v : b) for (auto& x : v) x = eng() & 0xFF;
  for (auto& v : iv) for (auto& x : v) x = static_cast<std::int32_t>(eng());
  CHECK(parse_fvecs(encode_fvecs(f)) == f);
  CHECK(parse_bvecs(encode_bvecs(b)) == b);
  CHECK(parse_ivecs(encode_ivecs(iv)) == iv);
  CHECK(encode_bvecs(b).size() == 9 * (4 + 5));
  CHECK(parse_fvecs({}).empty());
}

TEST_CASE("malformed vecs report byte offsets") {
  const std::vector<std::vector<float>> f{{1, 2}, {3, 4}};
  auto bytes = encode_fvecs(f);
  auto cut = bytes;
  cut.pop_back();
  CHECK(offset_of([&] { parse_fvecs(cut); }) == 16);
  auto bad_dim = bytes;
  bad_dim[12] = 3;
  CHECK(offset_of([&] { parse_fvecs(bad_dim); }) == 12);
  auto zero = bytes;
  zero[0] = 0;
  CHECK(offset_of([&] { parse_fvecs(zero); }) == 0);
  auto stub = bytes;
  stub.push_back(1);
  CHECK(offset_of([&] { parse_fvecs(stub); }) == 24);
  CHECK_THROWS_AS(parse_ivecs(stub), DataError);
}

TEST_CASE("idx images") {
  IdxImages img{2, 3, {{1, 2, 3, 4, 5, 6}, {7, 8, 9, 10, 11, 12}}};
  const auto bytes = encode_idx_images(img);
  CHECK(bytes.size() == 16 + 12);
  CHECK(bytes[2] == 0x08);
  CHECK(bytes[3] == 0x03);
  CHECK(bytes[7] == 2);
  const auto back = parse_idx_images(bytes);
  CHECK(back.rows == 2);
  CHECK(back.cols == 3);
  CHECK(back.images == img.images);

  CHECK(offset_of([&] { parse_idx_images(std::span(bytes).first(10)); }) == 10);
  auto magic = bytes;
  magic[3] = 0x01;
  CHECK(offset_of([&] { parse_idx_images(magic); }) == 0);
  CHECK(offset_of([&] { parse_idx_images(std::span(bytes).first(27)); }) == 27);
  auto extra = bytes;
  extra.push_back(0);
  CHECK(offset_of([&] { parse_idx_images(extra); }) == 28);
}

TEST_CASE("sparse csv") {
  const auto a = parse_sparse_csv("0,1,0,1\n0,0,0,0\n", 4, {});
  REQUIRE(a.size() == 2);
  CHECK(a[0] == SparsePattern(4, {1, 3}));
  CHECK(a[1].active_count() == 0);
  const auto b = parse_sparse_csv("id,a,b,c,label\r\n7, 1 ,0,2.5,9\r\n", 3, {true, 1, 1});
  REQUIRE(b.size() == 1);
  CHECK(b[0] == SparsePattern(3, {0, 2}));
  CHECK(offset_of([] { parse_sparse_csv("1,0\n1,0,1\n", 2, {}); }) == 4);
  CHECK(offset_of([] { parse_sparse_csv("1,x\n", 2, {}); }) == 2);
  const std::vector<SparsePattern> pats{SparsePattern(5, {0, 4}), SparsePattern(5, {})};
  CHECK(encode_sparse_csv(pats) == "1,0,0,0,1\n0,0,0,0,0\n");
  CHECK(parse_sparse_csv(encode_sparse_csv(pats), 5, {}) == pats);
}

TEST_CASE("center and normalize") {
  const std::vector<RealPattern> base{RealPattern({1, 0}), RealPattern({3, 4})};
  const std::vector<RealPattern> queries{RealPattern({2, 6})};
  const auto [b, q] = preprocess_center_normalize(base, queries);
  // mean (2, 2): base -> (-1,-2), (1,2); query -> (0, 4)
  const double s = 1 / std::sqrt(5.0);
  CHECK(b[0].values()[0] == doctest::Approx(-s));
  CHECK(b[0].values()[1] == doctest::Approx(-2 * s));
  CHECK(b[1].values()[1] == doctest::Approx(2 * s));
  CHECK(q[0].values()[0] == doctest::Approx(0));
  CHECK(q[0].values()[1] == doctest::Approx(1));

  const std::vector<RealPattern> flat{RealPattern({1, 1}), RealPattern({1, 1})};
  CHECK_THROWS_AS(preprocess_center_normalize(flat, queries), DataError);
  const std::vector<RealPattern> on_mean{RealPattern({2, 2})};
  CHECK_THROWS_AS(preprocess_center_normalize(base, on_mean), DataError);
}

TEST_CASE("files round trip plain and gzip") {
  const std::vector<std::vector<float>> f{{0.5f, -1.0f, 3.0f}, {1, 2, 3}};
  for (const char* name : {"x.fvecs", "x.fvecs.gz"}) {
    const auto p = temp_path(name);
    write_fvecs(p, f);
    const auto back = load_fvecs(p);
    REQUIRE(back.size() == 2);
    CHECK(back[0] == RealPattern({0.5, -1.0, 3.0}));
    CHECK(read_file_bytes(p) == encode_fvecs(f));
    fs::remove(p);
  }
  const auto gz = temp_path("y.ivecs.gz");
  const std::vector<std::vector<std::int32_t>> iv{{1, 2}};
  write_ivecs(gz, iv);
  CHECK(fs::file_size(gz) != encode_ivecs(iv).size());
  CHECK(load_ivecs(gz) == iv);
  fs::remove(gz);
  CHECK_THROWS_AS(read_file_bytes(temp_path("missing")), DataError);
}

TEST_CASE("mnist loader scales pixels") {
  IdxImages img{28, 28, {std::vector<std::uint8_t>(784, 0)}};
  img.images[0][5] = 255;
  img.images[0][6] = 51;
  const auto p = temp_path("m-idx3-ubyte");
  write_file_bytes(p, encode_idx_images(img));
  const auto v = load_mnist_idx(p);
  REQUIRE(v.size() == 1);
  CHECK(v[0].dim() == 784);
  CHECK(v[0].values()[5] == 1.0);
  CHECK(v[0].values()[6] == doctest::Approx(0.2));
  write_file_bytes(p, encode_idx_images({2, 2, {{1, 2, 3, 4}}}));
  CHECK_THROWS_AS(load_mnist_idx(p), FormatError);
  fs::remove(p);
}
