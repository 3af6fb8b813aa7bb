#include "coact/similarity.hpp"

#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "coact/detail/myers.hpp"

namespace coact::similarity {

CodePoints to_code_points(std::string_view utf8) {
  CodePoints out;
  out.reserve(utf8.size());
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(utf8.data());
  const auto length = static_cast<std::int32_t>(utf8.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    out.push_back(c < 0 ? 0xFFFDu : static_cast<std::uint32_t>(c));
  }
  return out;
}

std::size_t levenshtein_distance(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  if (a.size() > b.size()) std::swap(a, b);
  if (a.empty()) return b.size();
  const detail::BitPattern pattern(a);
  return detail::levenshtein(pattern, b);
}

int ratio_from_distance(std::size_t distance, std::size_t max_len) {
  if (max_len == 0) return 100;
  // floor(100 * (m - d) / m + 1/2) in integers.
  const std::uint64_t m = max_len;
  const std::uint64_t kept = m - std::min<std::uint64_t>(distance, m);
  return static_cast<int>((200 * kept + m) / (2 * m));
}

int similarity_ratio(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  return ratio_from_distance(levenshtein_distance(a, b), std::max(a.size(), b.size()));
}

int similarity_ratio(std::string_view a, std::string_view b) {
  return similarity_ratio(to_code_points(a), to_code_points(b));
}

int partial_similarity_ratio(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  auto shorter = a;
  auto longer = b;
  if (b.size() < a.size()) std::swap(shorter, longer);
  if (shorter.empty()) return 100;
  const detail::BitPattern pattern(shorter);
  const std::size_t n = shorter.size();
  // Any window needs at least the substring-anywhere distance.
  const std::size_t floor = detail::min_substring_distance(pattern, longer);
  const int ceiling = ratio_from_distance(floor, n);
  int best = 0;
  for (std::size_t start = 0; start + n <= longer.size(); ++start) {
    const std::size_t d = detail::levenshtein(pattern, longer.subspan(start, n));
    best = std::max(best, ratio_from_distance(d, n));
    if (best == ceiling) break;
  }
  return best;
}

int partial_similarity_ratio(std::string_view a, std::string_view b) {
  return partial_similarity_ratio(to_code_points(a), to_code_points(b));
}

std::string_view to_string(AudioCategory category) {
  switch (category) {
    case AudioCategory::Same: return "same";
    case AudioCategory::Partial: return "partial";
    case AudioCategory::Unrelated: return "unrelated";
  }
  return "unrelated";
}

AudioClass classify_audio_pair(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                               const AudioThresholds& thresholds) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::EmptyTranscript, "audio classification needs two non-empty transcripts");
  }
  AudioClass result;
  result.exact_score = similarity_ratio(a, b);
  result.partial_score = partial_similarity_ratio(a, b);
  if (result.exact_score >= thresholds.exact) {
    result.category = AudioCategory::Same;
  } else if (result.partial_score >= thresholds.partial &&
             result.exact_score >= thresholds.midpoint()) {
    result.category = AudioCategory::Same;
  } else if (result.partial_score >= thresholds.partial) {
    result.category = AudioCategory::Partial;
  } else {
    result.category = AudioCategory::Unrelated;
  }
  return result;
}

AudioClass classify_audio_pair(std::string_view a, std::string_view b,
                               const AudioThresholds& thresholds) {
  return classify_audio_pair(to_code_points(a), to_code_points(b), thresholds);
}

// --- frames ----------------------------------------------------------------

DHashGrid dhash_grid(std::span<const std::uint8_t> pixels, int width, int height) {
  if (width < kGridColumns || height < kGridRows) {
    throw Error(ErrorCode::ImageTooSmall, "image " + std::to_string(width) + "x" +
                                              std::to_string(height) + " is smaller than 9x8");
  }
  if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::InvalidArgument, "pixel buffer does not match image dimensions");
  }
  DHashGrid grid{};
  for (int r = 0; r < kGridRows; ++r) {
    const int y0 = r * height / kGridRows;
    const int y1 = (r + 1) * height / kGridRows;
    for (int c = 0; c < kGridColumns; ++c) {
      const int x0 = c * width / kGridColumns;
      const int x1 = (c + 1) * width / kGridColumns;
      std::uint64_t sum = 0;
      for (int y = y0; y < y1; ++y) {
        const auto* row = pixels.data() + static_cast<std::size_t>(y) * width;
        for (int x = x0; x < x1; ++x) sum += row[x];
      }
      const std::uint64_t count = static_cast<std::uint64_t>(y1 - y0) * (x1 - x0);
      grid[r][c] = static_cast<int>((2 * sum + count) / (2 * count));
    }
  }
  return grid;
}

FrameHash dhash_frame(std::span<const std::uint8_t> pixels, int width, int height) {
  const DHashGrid grid = dhash_grid(pixels, width, height);
  FrameHash hash = 0;
  for (int r = 0; r < kGridRows; ++r) {
    for (int c = 0; c + 1 < kGridColumns; ++c) {
      if (grid[r][c] < grid[r][c + 1]) hash |= FrameHash{1} << (r * 8 + c);
    }
  }
  return hash;
}

FrameHash dhash_frame(const GrayImage& image) {
  return dhash_frame(image.pixels, image.width, image.height);
}

bool is_uniform(const DHashGrid& grid) {
  for (const auto& row : grid) {
    for (int v : row) {
      if (v != grid[0][0]) return false;
    }
  }
  return true;
}

bool video_match(std::span<const FrameHash> frames_a, std::span<const FrameHash> frames_b,
                 const VideoMatchOptions& options) {
  if (frames_a.empty() || frames_b.empty()) {
    throw Error(ErrorCode::NoFrames, "video comparison needs frames on both sides");
  }
  auto shorter = frames_a;
  auto longer = frames_b;
  if (frames_b.size() < frames_a.size()) std::swap(shorter, longer);
  std::size_t checked = 0;
  for (FrameHash h : shorter) {
    if (options.drop_low_information && h == kLowInformationHash) continue;
    ++checked;
    const bool found = std::any_of(longer.begin(), longer.end(), [&](FrameHash g) {
      return hamming_distance(h, g) <= options.max_distance;
    });
    if (!found) return false;
  }
  return checked > 0;
}

// --- PGM -------------------------------------------------------------------

namespace {
int read_header_int(std::istream& in) {
  int value = -1;
  while (in) {
    in >> std::ws;
    if (in.peek() == '#') {
      std::string comment;
      std::getline(in, comment);
      continue;
    }
    in >> value;
    break;
  }
  if (!in || value < 0) throw Error(ErrorCode::UnknownFormat, "malformed PGM header");
  return value;
}
}  // namespace

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string magic(2, '\0');
  in.read(magic.data(), 2);
  if (magic != "P5" && magic != "P2") {
    throw Error(ErrorCode::UnknownFormat, path.string() + " is not a PGM image");
  }
  GrayImage img;
  img.width = read_header_int(in);
  img.height = read_header_int(in);
  const int maxval = read_header_int(in);
  if (maxval <= 0 || maxval > 255) {
    throw Error(ErrorCode::UnknownFormat, "only 8-bit PGM is supported: " + path.string());
  }
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  img.pixels.resize(n);
  if (magic == "P5") {
    in.get();  // single whitespace after maxval
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
      throw Error(ErrorCode::UnknownFormat, "truncated PGM " + path.string());
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) img.pixels[i] = static_cast<std::uint8_t>(read_header_int(in));
  }
  if (maxval != 255) {
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>((p * 255 + maxval / 2) / maxval);
  }
  return img;
}

void save_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
}

std::vector<FrameHash> hash_frames_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<FrameHash> hashes;
  hashes.reserve(files.size());
  for (const auto& f : files) hashes.push_back(dhash_frame(load_pgm(f)));
  return hashes;
}

}  // namespace coact::similarity
