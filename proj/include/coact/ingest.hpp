#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coact/model.hpp"

namespace coact::ingest {

struct CorpusSummary {
  std::size_t post_count = 0;
  std::size_t user_count = 0;
  std::size_t posts_with_transcript = 0;
  std::size_t posts_with_frames = 0;
  std::size_t posts_with_music_id = 0;
  std::int64_t time_min = 0;
  std::int64_t time_max = 0;

  bool operator==(const CorpusSummary&) const = default;
};

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct ParseResult {
  /// Valid records sorted by post_id.
  std::vector<PostRecord> posts;
  CorpusSummary summary;
  std::vector<LineError> errors;
  std::size_t duplicates = 0;
};

/// Reads the JSON Lines corpus. Malformed lines are collected in errors;
/// more than half malformed throws CorpusError. Repeated post_ids keep the
/// last record. hashtags/urls are always re-derived from description.
ParseResult parse_dataset(std::istream& source);
ParseResult parse_dataset_file(const std::filesystem::path& path);

/// '#'-introduced tokens in order, case-folded, duplicates kept.
std::vector<std::string> extract_hashtags(std::string_view description);

/// http(s) URLs up to the next whitespace, with trailing .,;:!?) removed.
std::vector<std::string> extract_urls(std::string_view description);

/// Fills hashtags and urls from description.
void derive_fields(PostRecord& post);

/// For posts with frames_dir but no frame_hashes, hashes the directory's PGM
/// frames. Relative directories resolve against base_dir.
void resolve_frame_images(std::span<PostRecord> posts, const std::filesystem::path& base_dir);

CorpusSummary summarize(std::span<const PostRecord> posts);

/// One JSON object (no trailing newline) in the corpus line format.
std::string serialize_post(const PostRecord& post);
void write_dataset(std::ostream& out, std::span<const PostRecord> posts);

}  // namespace coact::ingest
