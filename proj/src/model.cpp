#include "coact/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

namespace coact {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::CorpusError: return "CorpusError";
    case ErrorCode::EmptyTranscript: return "EmptyTranscript";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::NoFrames: return "NoFrames";
    case ErrorCode::EvidenceUnavailable: return "EvidenceUnavailable";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::NoPerfectPoint: return "NoPerfectPoint";
    case ErrorCode::IncompleteBase: return "IncompleteBase";
    case ErrorCode::MatrixMismatch: return "MatrixMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::MissingCorpus: return "MissingCorpus";
  }
  return "Unknown";
}

std::string_view abbreviation(LayerKind kind) {
  switch (kind) {
    case LayerKind::HashtagSequence: return "HS";
    case LayerKind::VideoDescription: return "VD";
    case LayerKind::Url: return "U";
    case LayerKind::MusicId: return "MI";
    case LayerKind::SameAudio: return "SA";
    case LayerKind::PartialAudio: return "PA";
    case LayerKind::VideoSimilarity: return "VS";
  }
  return "?";
}

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::HashtagSequence: return "hashtag_sequence";
    case LayerKind::VideoDescription: return "video_description";
    case LayerKind::Url: return "url";
    case LayerKind::MusicId: return "music_id";
    case LayerKind::SameAudio: return "same_audio";
    case LayerKind::PartialAudio: return "partial_audio";
    case LayerKind::VideoSimilarity: return "video_similarity";
  }
  return "unknown";
}

std::optional<LayerKind> parse_layer_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (LayerKind kind : kAllLayerKinds) {
    std::string abbr(abbreviation(kind));
    std::transform(abbr.begin(), abbr.end(), abbr.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == to_string(kind) || lower == abbr) return kind;
  }
  return std::nullopt;
}

std::pair<std::string, std::string> canonical_edge_key(std::string_view user_a,
                                                       std::string_view user_b) {
  if (user_a == user_b) {
    throw Error(ErrorCode::SelfLoop, "edge endpoints are identical: " + std::string(user_a));
  }
  if (user_b < user_a) std::swap(user_a, user_b);
  return {std::string(user_a), std::string(user_b)};
}

// --- Directory -------------------------------------------------------------

Directory::Directory(std::vector<std::string> user_ids, std::vector<std::string> usernames,
                     std::vector<std::string> post_ids)
    : user_ids_(std::move(user_ids)),
      usernames_(std::move(usernames)),
      post_ids_(std::move(post_ids)) {
  if (usernames_.size() != user_ids_.size()) {
    throw Error(ErrorCode::InvalidArgument, "usernames must parallel user ids");
  }
  if (!std::is_sorted(user_ids_.begin(), user_ids_.end()) ||
      std::adjacent_find(user_ids_.begin(), user_ids_.end()) != user_ids_.end()) {
    throw Error(ErrorCode::InvalidArgument, "user ids must be sorted and unique");
  }
  if (!std::is_sorted(post_ids_.begin(), post_ids_.end()) ||
      std::adjacent_find(post_ids_.begin(), post_ids_.end()) != post_ids_.end()) {
    throw Error(ErrorCode::InvalidArgument, "post ids must be sorted and unique");
  }
}

std::shared_ptr<const Directory> Directory::from_posts(std::span<const PostRecord> posts) {
  std::map<std::string, std::string> users;
  std::vector<std::string> post_ids;
  post_ids.reserve(posts.size());
  for (const PostRecord& p : posts) {
    auto [it, inserted] = users.emplace(p.user_id, p.username);
    if (!inserted && it->second.empty()) it->second = p.username;
    post_ids.push_back(p.post_id);
  }
  std::sort(post_ids.begin(), post_ids.end());
  post_ids.erase(std::unique(post_ids.begin(), post_ids.end()), post_ids.end());
  std::vector<std::string> ids;
  std::vector<std::string> names;
  ids.reserve(users.size());
  names.reserve(users.size());
  for (auto& [id, name] : users) {
    ids.push_back(id);
    names.push_back(name);
  }
  return std::make_shared<const Directory>(std::move(ids), std::move(names), std::move(post_ids));
}

namespace {
template <typename Index>
std::optional<Index> find_sorted(const std::vector<std::string>& table, std::string_view id) {
  auto it = std::lower_bound(table.begin(), table.end(), id,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == table.end() || *it != id) return std::nullopt;
  return static_cast<Index>(it - table.begin());
}
}  // namespace

std::optional<UserIndex> Directory::find_user(std::string_view id) const {
  return find_sorted<UserIndex>(user_ids_, id);
}

std::optional<PostIndex> Directory::find_post(std::string_view id) const {
  return find_sorted<PostIndex>(post_ids_, id);
}

// --- Layer -----------------------------------------------------------------

Layer::Layer(LayerKind kind) : kind_(kind) {}

Layer::Layer(LayerKind kind, std::shared_ptr<const Directory> directory,
             std::vector<UserEdge> edges, std::vector<CoActionPair> pairs,
             bool evidence_complete)
    : kind_(kind),
      directory_(std::move(directory)),
      edges_(std::move(edges)),
      pairs_(std::move(pairs)),
      evidence_complete_(evidence_complete) {
  if (!directory_) throw Error(ErrorCode::InvalidArgument, "layer requires a directory");
  const auto user_count = directory_->user_count();
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const UserEdge& e = edges_[i];
    if (e.user_a == e.user_b) {
      throw Error(ErrorCode::SelfLoop, "layer edge with identical endpoints");
    }
    if (e.user_a > e.user_b || e.user_b >= user_count) {
      throw Error(ErrorCode::InvalidArgument, "edge endpoints must be canonical and known");
    }
    if (i > 0) {
      const UserEdge& prev = edges_[i - 1];
      if (std::pair(prev.user_a, prev.user_b) >= std::pair(e.user_a, e.user_b)) {
        throw Error(ErrorCode::InvalidArgument, "edges must be sorted and unique");
      }
    }
    if (e.weight == 0) throw Error(ErrorCode::InvalidArgument, "edge weight must be positive");
    if (e.evidence_begin > e.evidence_end || e.evidence_end > pairs_.size()) {
      throw Error(ErrorCode::InvalidArgument, "evidence range out of bounds");
    }
    if (evidence_complete_ && e.weight != e.evidence_count()) {
      throw Error(ErrorCode::InvalidArgument, "edge weight must equal its evidence count");
    }
  }
  nodes_.reserve(edges_.size() * 2);
  for (const UserEdge& e : edges_) {
    nodes_.push_back(e.user_a);
    nodes_.push_back(e.user_b);
  }
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
}

Layer Layer::from_edge_specs(LayerKind kind, std::span<const EdgeSpec> specs) {
  std::map<std::pair<std::string, std::string>, std::vector<std::int64_t>> merged;
  for (const EdgeSpec& spec : specs) {
    auto key = canonical_edge_key(spec.user_a, spec.user_b);
    auto& deltas = merged[key];
    deltas.insert(deltas.end(), spec.deltas.begin(), spec.deltas.end());
  }
  std::vector<std::string> users;
  std::vector<std::string> posts;
  std::size_t edge_no = 0;
  for (const auto& [key, deltas] : merged) {
    users.push_back(key.first);
    users.push_back(key.second);
    for (std::size_t j = 0; j < deltas.size(); ++j) {
      const std::string stem = "e" + std::to_string(edge_no) + "." + std::to_string(j) + ".";
      posts.push_back(stem + "a");
      posts.push_back(stem + "b");
    }
    ++edge_no;
  }
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());
  std::sort(posts.begin(), posts.end());
  auto names = users;
  auto dir = std::make_shared<const Directory>(std::move(users), std::move(names), std::move(posts));

  std::vector<UserEdge> edges;
  std::vector<CoActionPair> pairs;
  edge_no = 0;
  for (const auto& [key, deltas] : merged) {
    UserEdge e;
    e.user_a = *dir->find_user(key.first);
    e.user_b = *dir->find_user(key.second);
    e.weight = deltas.size();
    e.evidence_begin = static_cast<std::uint32_t>(pairs.size());
    e.min_delta_t = deltas.empty() ? 0 : *std::min_element(deltas.begin(), deltas.end());
    for (std::size_t j = 0; j < deltas.size(); ++j) {
      const std::string stem = "e" + std::to_string(edge_no) + "." + std::to_string(j) + ".";
      CoActionPair p;
      p.kind = kind;
      p.post_a = *dir->find_post(stem + "a");
      p.post_b = *dir->find_post(stem + "b");
      p.user_a = e.user_a;
      p.user_b = e.user_b;
      p.delta_t = deltas[j];
      pairs.push_back(p);
    }
    e.evidence_end = static_cast<std::uint32_t>(pairs.size());
    if (e.weight == 0) throw Error(ErrorCode::InvalidArgument, "edge spec without co-actions");
    edges.push_back(e);
    ++edge_no;
  }
  return Layer(kind, std::move(dir), std::move(edges), std::move(pairs), true);
}

std::span<const CoActionPair> Layer::evidence(const UserEdge& edge) const {
  return std::span<const CoActionPair>(pairs_).subspan(edge.evidence_begin, edge.evidence_count());
}

Layer Layer::without_evidence() const {
  std::vector<UserEdge> edges = edges_;
  for (UserEdge& e : edges) e.evidence_begin = e.evidence_end = 0;
  const bool complete = edges.empty();
  return Layer(kind_, directory_, std::move(edges), {}, complete);
}

// --- FilterSpec ------------------------------------------------------------

FilterSpec FilterSpec::frequency(std::int64_t min_weight) {
  if (min_weight < 1) throw Error(ErrorCode::InvalidArgument, "frequency threshold must be >= 1");
  return {Variant::Frequency, min_weight};
}

FilterSpec FilterSpec::temporal(std::int64_t max_delta_t) {
  if (max_delta_t < 0) throw Error(ErrorCode::InvalidArgument, "temporal window must be >= 0");
  return {Variant::Temporal, max_delta_t};
}

std::string FilterSpec::label() const {
  switch (variant) {
    case Variant::None: return "none";
    case Variant::Frequency: return "frequency:" + std::to_string(value);
    case Variant::FrequencyAboveAverage: return "frequency:avg";
    case Variant::Temporal: return "temporal:" + std::to_string(value);
  }
  return "none";
}

std::string_view FilterSpec::variant_name() const {
  switch (variant) {
    case Variant::None: return "none";
    case Variant::Frequency: return "frequency";
    case Variant::FrequencyAboveAverage: return "frequency_avg";
    case Variant::Temporal: return "temporal";
  }
  return "none";
}

namespace {
std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument, "bad " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}
}  // namespace

FilterSpec FilterSpec::parse(std::string_view label) {
  if (label == "none") return none();
  const auto colon = label.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::InvalidArgument, "unknown filter '" + std::string(label) + "'");
  }
  const auto head = label.substr(0, colon);
  const auto tail = label.substr(colon + 1);
  if (head == "frequency") {
    if (tail == "avg") return above_average();
    return frequency(parse_int(tail, "frequency threshold"));
  }
  if (head == "temporal") return temporal(parse_int(tail, "temporal window"));
  throw Error(ErrorCode::InvalidArgument, "unknown filter '" + std::string(label) + "'");
}

FilterSpec FilterSpec::from_variant(std::string_view variant, std::int64_t value) {
  if (variant == "none") return none();
  if (variant == "frequency") return frequency(value);
  if (variant == "frequency_avg" || variant == "above_average") return above_average();
  if (variant == "temporal") return temporal(value);
  throw Error(ErrorCode::InvalidArgument, "unknown filter variant '" + std::string(variant) + "'");
}

std::array<FilterSpec, 6> canonical_filter_candidates() {
  return {FilterSpec::frequency(2), FilterSpec::frequency(10), FilterSpec::above_average(),
          FilterSpec::temporal(60),  FilterSpec::temporal(120), FilterSpec::temporal(300)};
}

FilterSpec default_filter(LayerKind kind) {
  switch (kind) {
    case LayerKind::HashtagSequence:
    case LayerKind::VideoDescription: return FilterSpec::frequency(10);
    case LayerKind::MusicId: return FilterSpec::above_average();
    default: return FilterSpec::none();
  }
}

}  // namespace coact
