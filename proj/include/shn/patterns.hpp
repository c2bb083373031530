#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace shn {

enum class PatternKind { Binary, Continuous };

std::string_view to_string(PatternKind kind) noexcept;

/// P x N row-major matrix of stored memories.
///
/// Binary sets hold entries in {-1, +1}; continuous sets hold entries in [0, 1].
/// The kind is checked on construction and by every network entry point.
class PatternSet {
 public:
  PatternSet() = default;
  PatternSet(std::size_t num_patterns, std::size_t width, std::vector<double> data, PatternKind kind);

  std::size_t num_patterns() const noexcept { return rows_; }
  std::size_t width() const noexcept { return cols_; }
  PatternKind kind() const noexcept { return kind_; }
  bool is_binary() const noexcept { return kind_ == PatternKind::Binary; }

  std::span<const double> row(std::size_t mu) const { return {data_.data() + mu * cols_, cols_}; }
  double operator()(std::size_t mu, std::size_t i) const noexcept { return data_[mu * cols_ + i]; }
  std::span<const double> data() const noexcept { return data_; }

  /// First `count` rows as a new set.
  PatternSet head(std::size_t count) const;

  void require_kind(PatternKind expected, std::string_view who) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
  PatternKind kind_ = PatternKind::Binary;
};

/// i.i.d. uniform +/-1 entries.
PatternSet random_binary_patterns(std::size_t num_patterns, std::size_t width, std::uint64_t seed);

/// i.i.d. uniform {0, 1} entries, stored as a continuous set. Pairwise squared
/// distances concentrate around width/2, which makes them well separated.
PatternSet random_binary01_patterns(std::size_t num_patterns, std::size_t width, std::uint64_t seed);

/// Distinct non-constant rows of the {0, 1} Sylvester-Hadamard code of order
/// `width` (a power of two), rows and columns shuffled by `seed`. Every pair of
/// patterns differs in exactly width/2 coordinates. Requires num_patterns < width.
PatternSet hadamard_patterns(std::size_t num_patterns, std::size_t width, std::uint64_t seed);

/// i.i.d. uniform [0, 1] entries.
PatternSet random_uniform_patterns(std::size_t num_patterns, std::size_t width, std::uint64_t seed);

struct GaussianNoise {
  double variance = 0.5;
};
struct RandomState {};
using CorruptionSpec = std::variant<GaussianNoise, RandomState>;

/// GaussianNoise adds N(0, variance) per coordinate with no clipping;
/// RandomState ignores the input and returns uniform +/-1 entries.
std::vector<double> corrupt(std::span<const double> pattern, const CorruptionSpec& spec, std::mt19937_64& rng);
std::vector<double> corrupt(std::span<const double> pattern, const CorruptionSpec& spec, std::uint64_t seed);

// ---- corpus loading -------------------------------------------------------

enum class ImageFormat { Idx, PngDir, FlatBinary };

ImageFormat parse_image_format(std::string_view name);

/// Reads up to `limit` images (0 means all) as rows scaled to [0, 1].
/// RGB inputs are flattened channel-interleaved unless `grayscale` is set.
PatternSet load_image_corpus(const std::filesystem::path& path, ImageFormat format, std::size_t limit = 0,
                             bool grayscale = false);

/// IDX (MNIST) unsigned-byte tensor; dimensions after the first are flattened.
PatternSet load_idx(const std::filesystem::path& path, std::size_t limit = 0);
PatternSet load_png_dir(const std::filesystem::path& dir, std::size_t limit = 0, bool grayscale = false);

/// Flat little-endian float32 payload plus a JSON sidecar `<path>.json` holding
/// {"rows", "cols", "dtype": "float32", "kind"}.
PatternSet load_flat(const std::filesystem::path& path, std::size_t limit = 0);
void save_flat(const std::filesystem::path& path, const PatternSet& patterns);

/// Comma-separated rows, one pattern per line. Kind is inferred: all entries
/// in {-1, +1} gives Binary, otherwise Continuous.
PatternSet load_csv(const std::filesystem::path& path, std::size_t limit = 0);
void save_csv(const std::filesystem::path& path, const PatternSet& patterns);

}  // namespace shn
