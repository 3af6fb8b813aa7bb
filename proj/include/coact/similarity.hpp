#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "coact/model.hpp"

namespace coact::similarity {

/// Unicode scalar values of a UTF-8 string; ill-formed bytes become U+FFFD.
using CodePoints = std::vector<std::uint32_t>;
CodePoints to_code_points(std::string_view utf8);

/// Unit-cost edit distance over code points.
std::size_t levenshtein_distance(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

/// round-half-up(100 * (1 - distance / max_len)); max_len == 0 gives 100.
int ratio_from_distance(std::size_t distance, std::size_t max_len);

/// Normalized edit-distance similarity, 0..100.
int similarity_ratio(std::string_view a, std::string_view b);
int similarity_ratio(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

/// Best similarity_ratio of the shorter string against every same-length
/// window of the longer one (ties: a is the shorter). Empty shorter -> 100.
int partial_similarity_ratio(std::string_view a, std::string_view b);
int partial_similarity_ratio(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

enum class AudioCategory : std::uint8_t { Same, Partial, Unrelated };

std::string_view to_string(AudioCategory category);

struct AudioThresholds {
  int exact = 88;
  int partial = 68;

  /// Midpoint between the two selected thresholds (78 for 88/68).
  int midpoint() const { return (exact + partial) / 2; }
};

struct AudioClass {
  AudioCategory category = AudioCategory::Unrelated;
  int exact_score = 0;
  int partial_score = 0;
};

/// e >= exact -> Same; p >= partial and e >= midpoint -> Same;
/// p >= partial -> Partial; otherwise Unrelated. Throws EmptyTranscript.
AudioClass classify_audio_pair(std::string_view a, std::string_view b,
                               const AudioThresholds& thresholds = {});
AudioClass classify_audio_pair(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                               const AudioThresholds& thresholds = {});

// --- frames ----------------------------------------------------------------

inline constexpr int kGridColumns = 9;
inline constexpr int kGridRows = 8;

/// 8-bit grayscale image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

/// 8 rows x 9 columns of rounded cell means.
using DHashGrid = std::array<std::array<int, kGridColumns>, kGridRows>;

DHashGrid dhash_grid(std::span<const std::uint8_t> pixels, int width, int height);

/// Horizontal difference hash: bit r*8+c set iff cell[r][c] < cell[r][c+1].
/// Throws ImageTooSmall below 9x8.
FrameHash dhash_frame(std::span<const std::uint8_t> pixels, int width, int height);
FrameHash dhash_frame(const GrayImage& image);

/// Hash of a uniform grid. Precomputed hashes carry no grid, so this value
/// stands in for "all 72 cells equal" when filtering low-information frames.
inline constexpr FrameHash kLowInformationHash = 0;

/// True when all 72 cells are equal.
bool is_uniform(const DHashGrid& grid);

inline int hamming_distance(FrameHash a, FrameHash b) { return __builtin_popcountll(a ^ b); }

struct VideoMatchOptions {
  int max_distance = 1;
  bool drop_low_information = false;
};

/// Every frame of the shorter list (ties: frames_a) has a frame in the longer
/// list within max_distance. Throws NoFrames on empty input.
bool video_match(std::span<const FrameHash> frames_a, std::span<const FrameHash> frames_b,
                 const VideoMatchOptions& options = {});

/// Binary (P5) or ASCII (P2) PGM with maxval <= 255.
GrayImage load_pgm(const std::filesystem::path& path);
void save_pgm(const std::filesystem::path& path, const GrayImage& image);

/// dhash of every *.pgm in the directory, in file-name order.
std::vector<FrameHash> hash_frames_dir(const std::filesystem::path& dir);

}  // namespace coact::similarity
