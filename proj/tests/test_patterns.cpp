#include <doctest.h>

#include <png.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "shn/patterns.hpp"

using namespace shn;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("shn_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write_png(const fs::path& path, int w, int h, bool rgb, const std::vector<unsigned char>& px) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(w);
  img.height = static_cast<png_uint_32>(h);
  img.format = rgb ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  REQUIRE(png_image_write_to_file(&img, path.string().c_str(), 0, px.data(), 0, nullptr));
}

}  // namespace

TEST_CASE("pattern set validation") {
  CHECK_THROWS(PatternSet(2, 2, {1, 1, 1}, PatternKind::Binary));
  CHECK_THROWS(PatternSet(1, 2, {1, 0}, PatternKind::Binary));
  CHECK_THROWS(PatternSet(1, 2, {0.5, 1.5}, PatternKind::Continuous));
  const PatternSet p(2, 2, {1, -1, -1, 1}, PatternKind::Binary);
  CHECK(p.head(1).num_patterns() == 1);
  CHECK_THROWS(p.require_kind(PatternKind::Continuous, "test"));
}

TEST_CASE("generators are deterministic and in range") {
  const auto a = random_binary_patterns(5, 50, 1);
  CHECK(std::equal(a.data().begin(), a.data().end(), random_binary_patterns(5, 50, 1).data().begin()));
  for (double x : a.data()) CHECK((x == 1.0 || x == -1.0));
  const auto u = random_uniform_patterns(5, 50, 2);
  for (double x : u.data()) CHECK((x >= 0.0 && x <= 1.0));
  const auto b = random_binary01_patterns(5, 50, 3);
  for (double x : b.data()) CHECK((x == 0.0 || x == 1.0));
  CHECK(b.kind() == PatternKind::Continuous);
}

TEST_CASE("Hadamard patterns are pairwise at Hamming distance width/2") {
  const auto h = hadamard_patterns(20, 64, 9);
  CHECK(h.num_patterns() == 20);
  for (std::size_t a = 0; a < 20; ++a) {
    for (std::size_t b = a + 1; b < 20; ++b) {
      int diff = 0;
      for (std::size_t i = 0; i < 64; ++i) diff += h(a, i) != h(b, i);
      CHECK(diff == 32);
    }
  }
  CHECK_THROWS(hadamard_patterns(64, 64, 1));
  CHECK_THROWS(hadamard_patterns(3, 48, 1));
}

TEST_CASE("Gaussian corruption has the requested variance") {
  const std::vector<double> xi(20000, 0.5);
  const auto c = corrupt(xi, GaussianNoise{0.5}, 7);
  double m = 0.0, v = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) m += c[i] - xi[i];
  m /= static_cast<double>(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) v += (c[i] - xi[i] - m) * (c[i] - xi[i] - m);
  v /= static_cast<double>(c.size() - 1);
  CHECK(std::abs(m) < 0.02);
  CHECK(v == doctest::Approx(0.5).epsilon(0.03));
  CHECK(corrupt(xi, GaussianNoise{0.0}, 1) == xi);
  CHECK_THROWS(corrupt(xi, GaussianNoise{-1.0}, 1));
  const auto r = corrupt(xi, RandomState{}, 1);
  for (double x : r) CHECK((x == 1.0 || x == -1.0));
}

TEST_CASE("flat and CSV round trips") {
  const auto d = temp_dir("roundtrip");
  const auto p = random_uniform_patterns(4, 7, 3);
  save_flat(d / "p.bin", p);
  const auto f = load_flat(d / "p.bin");
  REQUIRE(f.num_patterns() == 4);
  REQUIRE(f.width() == 7);
  for (std::size_t i = 0; i < p.data().size(); ++i) CHECK(f.data()[i] == doctest::Approx(p.data()[i]).epsilon(1e-6));
  CHECK(load_flat(d / "p.bin", 2).num_patterns() == 2);

  save_csv(d / "p.csv", p);
  const auto c = load_csv(d / "p.csv");
  for (std::size_t i = 0; i < p.data().size(); ++i) CHECK(c.data()[i] == doctest::Approx(p.data()[i]).epsilon(1e-12));

  const auto b = random_binary_patterns(3, 5, 1);
  save_csv(d / "b.csv", b);
  CHECK(load_csv(d / "b.csv").kind() == PatternKind::Binary);
  CHECK_THROWS(load_flat(d / "missing.bin"));
}

TEST_CASE("IDX loader") {
  const auto d = temp_dir("idx");
  {
    std::ofstream out(d / "x.idx", std::ios::binary);
    const unsigned char header[] = {0, 0, 8, 3, 0, 0, 0, 3, 0, 0, 0, 2, 0, 0, 0, 2};
    out.write(reinterpret_cast<const char*>(header), sizeof header);
    for (int i = 0; i < 12; ++i) out.put(static_cast<char>(i * 20));
  }
  const auto p = load_idx(d / "x.idx");
  CHECK(p.num_patterns() == 3);
  CHECK(p.width() == 4);
  CHECK(p(1, 1) == doctest::Approx(100.0 / 255.0));
  CHECK(load_image_corpus(d / "x.idx", parse_image_format("idx"), 2).num_patterns() == 2);
  {
    std::ofstream out(d / "bad.idx", std::ios::binary);
    const unsigned char header[] = {0, 0, 8, 1, 0, 0, 0, 9};
    out.write(reinterpret_cast<const char*>(header), sizeof header);
  }
  CHECK_THROWS(load_idx(d / "bad.idx"));
}

TEST_CASE("PNG directory loader") {
  const auto d = temp_dir("png");
  std::vector<unsigned char> gray(16);
  for (int i = 0; i < 16; ++i) gray[i] = static_cast<unsigned char>(i * 17);
  write_png(d / "a.png", 4, 4, false, gray);
  write_png(d / "b.png", 4, 4, false, std::vector<unsigned char>(16, 255));
  const auto p = load_png_dir(d);
  REQUIRE(p.num_patterns() == 2);
  CHECK(p.width() == 16);
  CHECK(p(0, 15) == doctest::Approx(1.0));
  CHECK(p(0, 1) == doctest::Approx(17.0 / 255.0));

  const auto rgb_dir = temp_dir("png_rgb");
  write_png(rgb_dir / "c.png", 4, 4, true, std::vector<unsigned char>(48, 60));
  CHECK(load_png_dir(rgb_dir).width() == 48);
  CHECK(load_png_dir(rgb_dir, 0, true).width() == 16);
  CHECK_THROWS(load_png_dir(d / "nope"));
}
