#include "shn/patterns.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "shn/rng.hpp"

namespace shn {

namespace fs = std::filesystem;

std::string_view to_string(PatternKind kind) noexcept {
  return kind == PatternKind::Binary ? "binary" : "continuous";
}

PatternSet::PatternSet(std::size_t num_patterns, std::size_t width, std::vector<double> data, PatternKind kind)
    : rows_(num_patterns), cols_(width), data_(std::move(data)), kind_(kind) {
  if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("pattern set needs P >= 1 and N >= 1");
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("pattern data size " + std::to_string(data_.size()) + " does not match " +
                                std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  for (double x : data_) {
    if (kind_ == PatternKind::Binary ? (x != 1.0 && x != -1.0) : !(x >= 0.0 && x <= 1.0)) {
      throw std::invalid_argument(kind_ == PatternKind::Binary ? "binary patterns must be +/-1"
                                                               : "continuous patterns must lie in [0, 1]");
    }
  }
}

PatternSet PatternSet::head(std::size_t count) const {
  if (count == 0 || count > rows_) {
    throw std::invalid_argument("requested " + std::to_string(count) + " patterns from a set of " +
                                std::to_string(rows_));
  }
  return PatternSet(count, cols_, std::vector<double>(data_.begin(), data_.begin() + count * cols_), kind_);
}

void PatternSet::require_kind(PatternKind expected, std::string_view who) const {
  if (kind_ != expected) {
    throw std::invalid_argument(std::string(who) + " requires " + std::string(to_string(expected)) +
                                " patterns, got " + std::string(to_string(kind_)));
  }
}

PatternSet random_binary_patterns(std::size_t num_patterns, std::size_t width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> data(num_patterns * width);
  for (auto& x : data) x = random_sign(rng);
  return PatternSet(num_patterns, width, std::move(data), PatternKind::Binary);
}

PatternSet random_binary01_patterns(std::size_t num_patterns, std::size_t width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> data(num_patterns * width);
  for (auto& x : data) x = random_sign(rng) > 0 ? 1.0 : 0.0;
  return PatternSet(num_patterns, width, std::move(data), PatternKind::Continuous);
}

PatternSet hadamard_patterns(std::size_t num_patterns, std::size_t width, std::uint64_t seed) {
  if (width < 2 || !std::has_single_bit(width)) throw std::invalid_argument("Hadamard width must be a power of two >= 2");
  if (num_patterns == 0 || num_patterns >= width) {
    throw std::invalid_argument("Hadamard code of width " + std::to_string(width) + " has " +
                                std::to_string(width - 1) + " usable rows");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> rows(width - 1), cols(width);
  std::iota(rows.begin(), rows.end(), std::size_t{1});  // row 0 is constant
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  std::shuffle(rows.begin(), rows.end(), rng);
  std::shuffle(cols.begin(), cols.end(), rng);
  std::vector<double> data(num_patterns * width);
  for (std::size_t mu = 0; mu < num_patterns; ++mu) {
    for (std::size_t i = 0; i < width; ++i) data[mu * width + i] = std::popcount(rows[mu] & cols[i]) % 2 ? 0.0 : 1.0;
  }
  return PatternSet(num_patterns, width, std::move(data), PatternKind::Continuous);
}

PatternSet random_uniform_patterns(std::size_t num_patterns, std::size_t width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> data(num_patterns * width);
  for (auto& x : data) x = uniform01(rng);
  return PatternSet(num_patterns, width, std::move(data), PatternKind::Continuous);
}

std::vector<double> corrupt(std::span<const double> pattern, const CorruptionSpec& spec, std::mt19937_64& rng) {
  std::vector<double> out(pattern.begin(), pattern.end());
  if (const auto* g = std::get_if<GaussianNoise>(&spec)) {
    if (!(g->variance >= 0.0)) throw std::invalid_argument("noise variance must be non-negative");
    if (g->variance == 0.0) return out;
    std::normal_distribution<double> noise(0.0, std::sqrt(g->variance));
    for (auto& x : out) x += noise(rng);
  } else {
    for (auto& x : out) x = random_sign(rng);
  }
  return out;
}

std::vector<double> corrupt(std::span<const double> pattern, const CorruptionSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return corrupt(pattern, spec, rng);
}

// ---- loaders ---------------------------------------------------------------

ImageFormat parse_image_format(std::string_view name) {
  if (name == "idx" || name == "idx-ubyte") return ImageFormat::Idx;
  if (name == "png" || name == "png-dir") return ImageFormat::PngDir;
  if (name == "flat" || name == "flat-binary") return ImageFormat::FlatBinary;
  throw std::invalid_argument("unknown image format '" + std::string(name) + "' (idx-ubyte|png-dir|flat-binary)");
}

PatternSet load_image_corpus(const fs::path& path, ImageFormat format, std::size_t limit, bool grayscale) {
  switch (format) {
    case ImageFormat::Idx:
      return load_idx(path, limit);
    case ImageFormat::PngDir:
      return load_png_dir(path, limit, grayscale);
    case ImageFormat::FlatBinary:
      return load_flat(path, limit);
  }
  throw std::invalid_argument("unhandled image format");
}

namespace {

std::ifstream open_binary(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::uint32_t read_be32(std::istream& in, const fs::path& path) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw std::runtime_error("truncated IDX header in " + path.string());
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

}  // namespace

PatternSet load_idx(const fs::path& path, std::size_t limit) {
  auto in = open_binary(path);
  std::array<unsigned char, 4> magic{};
  if (!in.read(reinterpret_cast<char*>(magic.data()), 4)) throw std::runtime_error("truncated IDX header in " + path.string());
  if (magic[0] != 0 || magic[1] != 0) throw std::runtime_error("bad IDX magic in " + path.string());
  if (magic[2] != 0x08) throw std::runtime_error("unsupported IDX dtype (only unsigned byte) in " + path.string());
  const int ndims = magic[3];
  if (ndims < 1) throw std::runtime_error("IDX file has no dimensions: " + path.string());
  std::vector<std::size_t> dims(ndims);
  for (auto& d : dims) d = read_be32(in, path);
  std::size_t count = dims[0];
  std::size_t width = 1;
  for (int i = 1; i < ndims; ++i) width *= dims[i];
  if (count == 0 || width == 0) throw std::runtime_error("IDX file is empty: " + path.string());
  if (limit) count = std::min(count, limit);
  std::vector<unsigned char> raw(count * width);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
    throw std::runtime_error("IDX payload shorter than header declares: " + path.string());
  }
  std::vector<double> data(raw.size());
  std::transform(raw.begin(), raw.end(), data.begin(), [](unsigned char c) { return c / 255.0; });
  return PatternSet(count, width, std::move(data), PatternKind::Continuous);
}

PatternSet load_png_dir(const fs::path& dir, std::size_t limit, bool grayscale) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no .png files in " + dir.string());
  if (limit) files.resize(std::min(files.size(), limit));

  std::vector<double> data;
  std::size_t width = 0;
  for (const auto& file : files) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, file.string().c_str())) {
      throw std::runtime_error("cannot decode " + file.string() + ": " + image.message);
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = (grayscale || !color) ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
      png_image_free(&image);
      throw std::runtime_error("cannot decode " + file.string() + ": " + image.message);
    }
    if (width == 0) {
      width = buffer.size();
    } else if (buffer.size() != width) {
      throw std::runtime_error("image " + file.string() + " has " + std::to_string(buffer.size()) +
                               " values, expected " + std::to_string(width));
    }
    for (png_byte b : buffer) data.push_back(b / 255.0);
  }
  return PatternSet(files.size(), width, std::move(data), PatternKind::Continuous);
}

namespace {

fs::path sidecar_path(const fs::path& path) { return fs::path(path.string() + ".json"); }

}  // namespace

PatternSet load_flat(const fs::path& path, std::size_t limit) {
  std::ifstream side(sidecar_path(path));
  if (!side) throw std::runtime_error("missing shape sidecar " + sidecar_path(path).string());
  nlohmann::json meta;
  try {
    side >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed sidecar " + sidecar_path(path).string() + ": " + e.what());
  }
  const auto rows = meta.at("rows").get<std::size_t>();
  const auto cols = meta.at("cols").get<std::size_t>();
  if (meta.value("dtype", std::string("float32")) != "float32") {
    throw std::runtime_error("unsupported dtype in " + sidecar_path(path).string());
  }
  const auto kind = meta.value("kind", std::string("continuous")) == "binary" ? PatternKind::Binary
                                                                            : PatternKind::Continuous;
  const std::size_t count = limit ? std::min(rows, limit) : rows;
  auto in = open_binary(path);
  std::vector<float> raw(count * cols);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(float)))) {
    throw std::runtime_error("flat payload shorter than sidecar declares: " + path.string());
  }
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& f : raw) {
      auto bits = std::bit_cast<std::uint32_t>(f);
      bits = __builtin_bswap32(bits);
      f = std::bit_cast<float>(bits);
    }
  }
  return PatternSet(count, cols, std::vector<double>(raw.begin(), raw.end()), kind);
}

void save_flat(const fs::path& path, const PatternSet& patterns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (double x : patterns.data()) {
    auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(x));
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
  nlohmann::json meta = {{"rows", patterns.num_patterns()},
                         {"cols", patterns.width()},
                         {"dtype", "float32"},
                         {"kind", std::string(to_string(patterns.kind()))}};
  std::ofstream side(sidecar_path(path));
  if (!side) throw std::runtime_error("cannot write " + sidecar_path(path).string());
  side << meta.dump(2) << "\n";
}

PatternSet load_csv(const fs::path& path, std::size_t limit) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<double> data;
  std::size_t rows = 0, cols = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t n = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        data.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("non-numeric cell '" + cell + "' in " + path.string());
      }
      ++n;
    }
    if (cols == 0) cols = n;
    if (n != cols) {
      throw std::runtime_error("row " + std::to_string(rows + 1) + " of " + path.string() + " has " +
                               std::to_string(n) + " columns, expected " + std::to_string(cols));
    }
    if (++rows == limit) break;
  }
  if (rows == 0) throw std::runtime_error("no patterns in " + path.string());
  const bool binary = std::all_of(data.begin(), data.end(), [](double x) { return x == 1.0 || x == -1.0; });
  return PatternSet(rows, cols, std::move(data), binary ? PatternKind::Binary : PatternKind::Continuous);
}

void save_csv(const fs::path& path, const PatternSet& patterns) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  for (std::size_t mu = 0; mu < patterns.num_patterns(); ++mu) {
    auto row = patterns.row(mu);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

}  // namespace shn
