#include "coact/ingest.hpp"

#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <json.hpp>

#include "coact/similarity.hpp"

namespace coact::ingest {

using nlohmann::json;

namespace {

bool is_tag_char(UChar32 c) {
  return c == '_' || u_isUAlphabetic(c) || u_isdigit(c);
}

std::string fold_case(std::string_view utf8) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<std::int32_t>(utf8.size())));
  s.foldCase();
  std::string out;
  s.toUTF8String(out);
  return out;
}

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string expect_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw std::invalid_argument(std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw std::invalid_argument(std::string("field '") + key + "' must be a string or null");
  }
  return it->get<std::string>();
}

FrameHash parse_hash(const json& value) {
  if (value.is_number_unsigned()) return value.get<FrameHash>();
  if (!value.is_string()) throw std::invalid_argument("frame hash must be a decimal string");
  const auto& text = value.get_ref<const std::string&>();
  FrameHash h = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), h);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("frame hash '" + text + "' is not an unsigned 64-bit decimal");
  }
  return h;
}

PostRecord parse_record(std::string_view line) {
  json obj = json::parse(line);
  if (!obj.is_object()) throw std::invalid_argument("record must be a JSON object");
  PostRecord post;
  post.post_id = expect_string(obj, "post_id");
  if (post.post_id.empty()) throw std::invalid_argument("post_id must be non-empty");
  post.user_id = expect_string(obj, "user_id");
  if (post.user_id.empty()) throw std::invalid_argument("user_id must be non-empty");
  post.username = expect_string(obj, "username");
  auto ts = obj.find("created_at");
  if (ts == obj.end() || !ts->is_number_integer()) {
    throw std::invalid_argument("field 'created_at' must be an integer");
  }
  post.created_at = ts->get<std::int64_t>();
  if (post.created_at <= 0) throw std::invalid_argument("created_at must be positive");
  post.description = expect_string(obj, "description");
  post.music_id = optional_string(obj, "music_id");
  post.transcript = optional_string(obj, "voice_to_text");
  post.frames_dir = optional_string(obj, "frames_dir");
  if (auto fh = obj.find("frame_hashes"); fh != obj.end() && !fh->is_null()) {
    if (!fh->is_array()) throw std::invalid_argument("frame_hashes must be an array or null");
    std::vector<FrameHash> hashes;
    hashes.reserve(fh->size());
    for (const json& v : *fh) hashes.push_back(parse_hash(v));
    if (!hashes.empty()) post.frame_hashes = std::move(hashes);
  }
  derive_fields(post);
  return post;
}

}  // namespace

std::vector<std::string> extract_hashtags(std::string_view description) {
  std::vector<std::string> tags;
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(description.data());
  const auto length = static_cast<std::int32_t>(description.size());
  std::int32_t i = 0;
  while (i < length) {
    if (bytes[i] != '#') {
      UChar32 c;
      U8_NEXT(bytes, i, length, c);
      continue;
    }
    ++i;
    const std::int32_t start = i;
    std::int32_t end = i;
    while (end < length) {
      std::int32_t next = end;
      UChar32 c;
      U8_NEXT(bytes, next, length, c);
      if (c < 0 || !is_tag_char(c)) break;
      end = next;
    }
    if (end > start) tags.push_back(fold_case(description.substr(start, end - start)));
    i = end;
  }
  return tags;
}

std::vector<std::string> extract_urls(std::string_view description) {
  static constexpr std::string_view kTrailing = ".,;:!?)";
  std::vector<std::string> urls;
  std::size_t pos = 0;
  while (pos < description.size()) {
    const auto http = description.find("http", pos);
    if (http == std::string_view::npos) break;
    std::size_t scheme_end = 0;
    if (description.substr(http, 7) == "http://") {
      scheme_end = http + 7;
    } else if (description.substr(http, 8) == "https://") {
      scheme_end = http + 8;
    } else {
      pos = http + 4;
      continue;
    }
    std::size_t end = scheme_end;
    while (end < description.size() && !is_space(static_cast<unsigned char>(description[end]))) {
      ++end;
    }
    std::size_t trimmed = end;
    while (trimmed > scheme_end && kTrailing.find(description[trimmed - 1]) != std::string_view::npos) {
      --trimmed;
    }
    if (trimmed > scheme_end) urls.emplace_back(description.substr(http, trimmed - http));
    pos = end;
  }
  return urls;
}

void derive_fields(PostRecord& post) {
  post.hashtags = extract_hashtags(post.description);
  post.urls = extract_urls(post.description);
}

void resolve_frame_images(std::span<PostRecord> posts, const std::filesystem::path& base_dir) {
  for (PostRecord& p : posts) {
    if (p.frame_hashes || !p.frames_dir) continue;
    std::filesystem::path dir(*p.frames_dir);
    if (dir.is_relative()) dir = base_dir / dir;
    auto hashes = similarity::hash_frames_dir(dir);
    if (!hashes.empty()) p.frame_hashes = std::move(hashes);
  }
}

CorpusSummary summarize(std::span<const PostRecord> posts) {
  CorpusSummary s;
  s.post_count = posts.size();
  std::set<std::string_view> users;
  bool first = true;
  for (const PostRecord& p : posts) {
    users.insert(p.user_id);
    if (p.transcript && !p.transcript->empty()) ++s.posts_with_transcript;
    if (p.frame_hashes || p.frames_dir) ++s.posts_with_frames;
    if (p.music_id) ++s.posts_with_music_id;
    if (first) {
      s.time_min = s.time_max = p.created_at;
      first = false;
    } else {
      s.time_min = std::min(s.time_min, p.created_at);
      s.time_max = std::max(s.time_max, p.created_at);
    }
  }
  s.user_count = users.size();
  return s;
}

ParseResult parse_dataset(std::istream& source) {
  ParseResult result;
  std::map<std::string, PostRecord> by_id;
  std::string line;
  std::size_t line_no = 0;
  std::size_t non_blank = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return is_space(c); })) {
      continue;
    }
    ++non_blank;
    try {
      PostRecord post = parse_record(line);
      auto [it, inserted] = by_id.try_emplace(post.post_id);
      if (!inserted) ++result.duplicates;
      it->second = std::move(post);
    } catch (const std::exception& e) {
      result.errors.push_back({line_no, e.what()});
    }
  }
  if (non_blank > 0 && result.errors.size() * 2 > non_blank) {
    throw Error(ErrorCode::CorpusError, std::to_string(result.errors.size()) + " of " +
                                            std::to_string(non_blank) + " lines malformed; first: line " +
                                            std::to_string(result.errors.front().line) + ": " +
                                            result.errors.front().message);
  }
  result.posts.reserve(by_id.size());
  for (auto& [id, post] : by_id) result.posts.push_back(std::move(post));
  result.summary = summarize(result.posts);
  return result;
}

ParseResult parse_dataset_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open corpus " + path.string());
  return parse_dataset(in);
}

std::string serialize_post(const PostRecord& post) {
  json obj = json::object();
  obj["post_id"] = post.post_id;
  obj["user_id"] = post.user_id;
  obj["username"] = post.username;
  obj["created_at"] = post.created_at;
  obj["description"] = post.description;
  obj["music_id"] = post.music_id ? json(*post.music_id) : json(nullptr);
  obj["voice_to_text"] = post.transcript ? json(*post.transcript) : json(nullptr);
  if (post.frame_hashes) {
    json hashes = json::array();
    for (FrameHash h : *post.frame_hashes) hashes.push_back(std::to_string(h));
    obj["frame_hashes"] = std::move(hashes);
  } else {
    obj["frame_hashes"] = nullptr;
  }
  obj["frames_dir"] = post.frames_dir ? json(*post.frames_dir) : json(nullptr);
  return obj.dump();
}

void write_dataset(std::ostream& out, std::span<const PostRecord> posts) {
  for (const PostRecord& p : posts) out << serialize_post(p) << '\n';
}

}  // namespace coact::ingest
