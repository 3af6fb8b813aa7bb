#include "coact/synthgen.hpp"

#include <algorithm>
#include <map>

#include "coact/ingest.hpp"

namespace coact::synthgen {

namespace {

constexpr std::array<const char*, 24> kFemaleNames = {
    "anna",  "lena",  "marie", "sophie", "laura", "julia", "lea",   "hannah",
    "emma",  "mia",   "lisa",  "sarah",  "katja", "nina",  "clara", "paula",
    "greta", "ida",   "frida", "jana",   "mila",  "luisa", "nora",  "tina"};

constexpr std::array<const char*, 12> kPlainStems = {"user", "tv",   "news",  "blog", "daily", "fan",
                                                     "team", "info", "media", "live", "real",  "the"};

constexpr std::array<const char*, 18> kOnsets = {"b", "d", "f", "g", "h", "k", "l", "m", "n",
                                                 "p", "r", "s", "t", "w", "z", "sch", "st", "tr"};
constexpr std::array<const char*, 9> kNuclei = {"a", "e", "i", "o", "u", "ä", "ö", "ü", "ei"};
constexpr std::array<const char*, 8> kCodas = {"", "", "n", "r", "s", "t", "ng", "ch"};

template <typename Array>
const char* pick(std::mt19937_64& rng, const Array& arr) {
  return arr[std::uniform_int_distribution<std::size_t>(0, arr.size() - 1)(rng)];
}

std::size_t code_point_count(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::size_t index_of(LayerKind k) { return static_cast<std::size_t>(k); }

bool compatible(Expect reference, Expect actual) {
  return reference == Expect::Any || reference == actual;
}

}  // namespace

std::string_view to_string(ReuseType type) {
  switch (type) {
    case ReuseType::Repost: return "repost";
    case ReuseType::Reupload: return "reupload";
    case ReuseType::Duet: return "duet";
    case ReuseType::Stitch: return "stitch";
  }
  return "repost";
}

std::string_view to_string(Expect e) {
  switch (e) {
    case Expect::Linked: return "linked";
    case Expect::NotLinked: return "not_linked";
    case Expect::Any: return "any";
  }
  return "any";
}

DetectionRow reference_row(ReuseType type) {
  // Columns: new post, audio, music id, video, description.
  using enum Expect;
  DetectionRow row;
  row.type = type;
  auto set = [&](LayerKind k, Expect e) { row.per_layer[index_of(k)] = e; };
  auto audio = [&](bool kept) {
    set(LayerKind::SameAudio, kept ? Linked : NotLinked);
    set(LayerKind::PartialAudio, kept ? NotLinked : Linked);
  };
  auto description = [&](bool kept) {
    set(LayerKind::VideoDescription, kept ? Linked : NotLinked);
    set(LayerKind::HashtagSequence, kept ? Linked : NotLinked);
  };
  set(LayerKind::Url, NotLinked);
  switch (type) {
    case ReuseType::Repost:  // No / Yes / Yes / Yes / Yes
      row.excluded_from_layers = true;
      audio(true);
      set(LayerKind::MusicId, Linked);
      set(LayerKind::VideoSimilarity, Linked);
      description(true);
      break;
    case ReuseType::Reupload:  // Yes / Yes / No / Yes / No
      audio(true);
      set(LayerKind::MusicId, NotLinked);
      set(LayerKind::VideoSimilarity, Linked);
      description(false);
      break;
    case ReuseType::Duet:  // Yes / Yes / Yes / Partial / No
      audio(true);
      set(LayerKind::MusicId, Linked);
      set(LayerKind::VideoSimilarity, Any);
      description(false);
      break;
    case ReuseType::Stitch:  // Yes / Partial / No / Partial / No
      audio(false);
      set(LayerKind::MusicId, NotLinked);
      set(LayerKind::VideoSimilarity, Any);
      description(false);
      break;
  }
  return row;
}

// --- Generator ---------------------------------------------------------------

Generator::Generator(std::uint64_t seed) : rng_(seed) {
  // Fixed vocabulary independent of the seed.
  std::mt19937_64 vocab_rng(0x5eed'c0ac'7105ULL);
  std::set<std::string> words;
  while (words.size() < 1500) {
    std::string w;
    const auto syllables = std::uniform_int_distribution<int>(1, 3)(vocab_rng);
    for (int s = 0; s < syllables; ++s) {
      w += pick(vocab_rng, kOnsets);
      w += pick(vocab_rng, kNuclei);
      w += pick(vocab_rng, kCodas);
    }
    words.insert(w);
  }
  vocabulary_.assign(words.begin(), words.end());
  std::shuffle(vocabulary_.begin(), vocabulary_.end(), vocab_rng);
  for (std::size_t i = 0; i < 400; ++i) hashtag_pool_.push_back(vocabulary_[i] + std::to_string(i % 7));
}

std::string Generator::unique_token(std::string_view prefix, std::set<std::string>& used, int digits) {
  static constexpr char kHex[] = "0123456789abcdef";
  for (;;) {
    std::string token(prefix);
    auto bits = rng_();
    for (int i = 0; i < digits; ++i) {
      token.push_back(kHex[bits & 0xF]);
      bits >>= 4;
      if (bits == 0) bits = rng_();
    }
    if (used.insert(token).second) return token;
  }
}

std::string Generator::post_id() { return unique_token("p", used_posts_, 14); }
std::string Generator::user_id() { return unique_token("u", used_users_, 12); }
std::string Generator::music_id() { return unique_token("m", used_music_, 10); }

std::string Generator::cluster_username() {
  for (;;) {
    std::string name = pick(rng_, kFemaleNames);
    name += std::to_string(std::uniform_int_distribution<int>(100, 99999)(rng_));
    if (used_names_.insert(name).second) return name;
  }
}

std::string Generator::plain_username() {
  for (int attempt = 0;; ++attempt) {
    std::string name = pick(rng_, kPlainStems);
    name += "_" + word();
    // The stem/word grid is finite; large user counts need a numeric suffix.
    if (attempt >= 8) name += std::to_string(std::uniform_int_distribution<int>(10, 99999)(rng_));
    if (used_names_.insert(name).second) return name;
  }
}

std::string Generator::word() {
  return vocabulary_[std::uniform_int_distribution<std::size_t>(0, vocabulary_.size() - 1)(rng_)];
}

std::string Generator::transcript(std::size_t length) {
  std::string text;
  std::size_t count = 0;
  while (count < length) {
    if (!text.empty()) {
      text += ' ';
      ++count;
    }
    const std::string w = word();
    text += w;
    count += code_point_count(w);
  }
  return text;
}

std::string Generator::description(std::size_t hashtags) {
  for (int attempt = 0;; ++attempt) {
    std::string text = transcript(40);
    std::string sequence;
    for (std::size_t i = 0; i < hashtags; ++i) {
      // Short sequences exhaust the pool quickly; repeated collisions switch
      // the last tag to a freshly minted one.
      const std::string tag =
          attempt >= 8 && i + 1 == hashtags
              ? unique_token(word(), used_tags_, 6)
              : hashtag_pool_[std::uniform_int_distribution<std::size_t>(0, hashtag_pool_.size() - 1)(rng_)];
      text += " #" + tag;
      sequence += tag + ",";
    }
    if (hashtags > 0 && used_tag_sequences_.count(sequence)) continue;
    if (!used_descriptions_.insert(text).second) continue;
    if (hashtags > 0) used_tag_sequences_.insert(sequence);
    return text;
  }
}

bool Generator::frame_is_free(FrameHash h) const {
  if (h == 0 || used_frames_.count(h)) return false;
  for (int bit = 0; bit < 64; ++bit) {
    if (used_frames_.count(h ^ (FrameHash{1} << bit))) return false;
  }
  return true;
}

FrameHash Generator::fresh_frame() {
  for (;;) {
    const FrameHash h = rng_();
    if (frame_is_free(h)) {
      used_frames_.insert(h);
      return h;
    }
  }
}

std::vector<FrameHash> Generator::frames(std::size_t count) {
  std::vector<FrameHash> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(fresh_frame());
  return out;
}

FrameHash Generator::perturb_frame(FrameHash source, int min_bits) {
  for (;;) {
    FrameHash h = source;
    const int flips = std::uniform_int_distribution<int>(min_bits, min_bits + 2)(rng_);
    std::set<int> bits;
    while (static_cast<int>(bits.size()) < flips) bits.insert(std::uniform_int_distribution<int>(0, 63)(rng_));
    for (int b : bits) h ^= FrameHash{1} << b;
    if (frame_is_free(h)) {
      used_frames_.insert(h);
      return h;
    }
  }
}

std::int64_t Generator::timestamp(std::int64_t start, std::int64_t end) {
  return std::uniform_int_distribution<std::int64_t>(start, std::max(start, end))(rng_);
}

PostRecord Generator::base_post(std::int64_t start, std::int64_t end) {
  PostRecord p;
  p.post_id = post_id();
  p.user_id = user_id();
  p.username = plain_username();
  p.created_at = timestamp(start, end);
  p.description = description();
  p.music_id = music_id();
  p.transcript = transcript(std::uniform_int_distribution<std::size_t>(120, 280)(rng_));
  p.frame_hashes = frames(std::uniform_int_distribution<std::size_t>(4, 10)(rng_));
  ingest::derive_fields(p);
  return p;
}

// --- reuse -------------------------------------------------------------------

ReusePair generate_reuse_pair(const PostRecord& base, ReuseType type, Generator& gen) {
  if (!base.transcript || base.transcript->empty() || !base.frame_hashes || base.frame_hashes->empty()) {
    throw Error(ErrorCode::IncompleteBase, "reuse generation needs a base with transcript and frames");
  }
  ReusePair pair;
  pair.type = type;
  pair.base = base;
  pair.expected = reference_row(type);

  PostRecord d;
  d.post_id = gen.post_id();
  d.user_id = gen.user_id();
  d.username = gen.plain_username();
  d.created_at = base.created_at + std::uniform_int_distribution<std::int64_t>(30, 7 * 86400)(gen.rng());
  const auto& frames = *base.frame_hashes;
  using enum Expect;
  switch (type) {
    case ReuseType::Repost:
      d.description = base.description;
      d.music_id = base.music_id;
      d.transcript = base.transcript;
      d.frame_hashes = base.frame_hashes;
      break;
    case ReuseType::Reupload:
      d.description = gen.description();
      d.music_id = gen.music_id();
      d.transcript = base.transcript;
      d.frame_hashes = base.frame_hashes;
      break;
    case ReuseType::Duet: {
      d.description = gen.description();
      d.music_id = base.music_id;
      d.transcript = base.transcript;
      std::vector<FrameHash> split;
      for (FrameHash h : frames) split.push_back(gen.perturb_frame(h, 2));
      d.frame_hashes = std::move(split);
      pair.expected.per_layer[index_of(LayerKind::VideoSimilarity)] = NotLinked;
      break;
    }
    case ReuseType::Stitch: {
      d.description = gen.description();
      d.music_id = gen.music_id();
      const std::size_t original = code_point_count(*base.transcript);
      d.transcript = *base.transcript + " " + gen.transcript(original + original / 4);
      std::vector<FrameHash> stitched = frames;
      const auto extra = gen.frames(frames.size() + 2);
      stitched.insert(stitched.end(), extra.begin(), extra.end());
      d.frame_hashes = std::move(stitched);
      // The original frames survive verbatim as the first part of the stitch.
      pair.expected.per_layer[index_of(LayerKind::VideoSimilarity)] = Linked;
      break;
    }
  }
  ingest::derive_fields(d);
  pair.derived = std::move(d);
  return pair;
}

ReusePair generate_reuse_pair(const PostRecord& base, ReuseType type, std::uint64_t seed) {
  Generator gen(seed);
  return generate_reuse_pair(base, type, gen);
}

// --- clusters ----------------------------------------------------------------

GroundTruthCluster inject_coordinated_cluster(std::vector<PostRecord>& corpus, const ClusterSpec& spec,
                                              Generator& gen) {
  if (spec.n_users < 2) throw Error(ErrorCode::InvalidArgument, "a cluster needs at least two users");
  if (spec.active_end < spec.active_start) throw Error(ErrorCode::InvalidArgument, "invalid active window");
  GroundTruthCluster truth;
  std::int64_t start = spec.active_start;
  std::int64_t end = spec.active_end;
  if (spec.jitter.time_window > 0) {
    start = gen.timestamp(spec.active_start, std::max(spec.active_start, spec.active_end - spec.jitter.time_window));
    end = start + spec.jitter.time_window;
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t u = 0; u < spec.n_users; ++u) {
    const std::string uid = gen.user_id();
    const std::string name = gen.cluster_username();
    truth.user_ids.push_back(uid);
    for (std::size_t k = 0; k < spec.posts_per_user; ++k) {
      PostRecord p = spec.templ;
      p.post_id = gen.post_id();
      p.user_id = uid;
      p.username = name;
      p.created_at = gen.timestamp(start, end);
      if (spec.jitter.permute_hashtags && !p.hashtags.empty()) {
        // Rebuild the description with the same tags in a shuffled order.
        auto tags = p.hashtags;
        std::shuffle(tags.begin(), tags.end(), gen.rng());
        std::string text = p.description.substr(0, p.description.find('#'));
        for (const auto& t : tags) text += "#" + t + " ";
        p.description = text;
      }
      if (coin(gen.rng()) < spec.jitter.description_mutation_rate) {
        p.description += " " + gen.transcript(6);
      }
      ingest::derive_fields(p);
      truth.post_ids.push_back(p.post_id);
      corpus.push_back(std::move(p));
    }
  }
  std::sort(truth.user_ids.begin(), truth.user_ids.end());
  return truth;
}

GroundTruthCluster inject_coordinated_cluster(std::vector<PostRecord>& corpus, const ClusterSpec& spec,
                                              std::uint64_t seed) {
  Generator gen(seed);
  return inject_coordinated_cluster(corpus, spec, gen);
}

std::vector<PostRecord> generate_background(const BackgroundOptions& options, Generator& gen) {
  std::vector<std::string> users;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < std::max<std::size_t>(options.users, 1); ++i) {
    users.push_back(gen.user_id());
    names.push_back(gen.plain_username());
  }
  std::vector<std::string> music;
  for (std::size_t i = 0; i < std::max<std::size_t>(options.music_pool, 1); ++i) music.push_back(gen.music_id());

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_user(0, users.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_music(0, music.size() - 1);
  std::vector<PostRecord> posts;
  posts.reserve(options.posts);
  for (std::size_t i = 0; i < options.posts; ++i) {
    PostRecord p;
    p.post_id = gen.post_id();
    const auto u = pick_user(gen.rng());
    p.user_id = users[u];
    p.username = names[u];
    p.created_at = gen.timestamp(options.start, options.end);
    p.description = gen.description(std::uniform_int_distribution<std::size_t>(0, 4)(gen.rng()));
    if (coin(gen.rng()) < options.url_rate) {
      p.description += " https://example.org/" + gen.post_id();
    }
    if (coin(gen.rng()) < options.music_rate) p.music_id = music[pick_music(gen.rng())];
    if (coin(gen.rng()) < options.transcript_rate) {
      const auto len = std::uniform_int_distribution<std::size_t>(options.transcript_length / 2,
                                                                  options.transcript_length * 3 / 2)(gen.rng());
      p.transcript = gen.transcript(len);
    }
    if (options.frames_per_video > 0 && coin(gen.rng()) < options.frame_rate) {
      p.frame_hashes = gen.frames(options.frames_per_video);
    }
    ingest::derive_fields(p);
    posts.push_back(std::move(p));
  }
  return posts;
}

std::vector<MatrixRow> expected_detection_matrix(std::span<const ReusePair> pairs) {
  std::map<ReuseType, MatrixRow> rows;
  for (const ReusePair& p : pairs) {
    const DetectionRow reference = reference_row(p.type);
    if (p.expected.type != p.type || p.expected.excluded_from_layers != reference.excluded_from_layers) {
      throw Error(ErrorCode::MatrixMismatch, "row type or exclusion disagrees for " + std::string(to_string(p.type)));
    }
    for (LayerKind k : kAllLayerKinds) {
      if (!compatible(reference.at(k), p.expected.at(k))) {
        throw Error(ErrorCode::MatrixMismatch, std::string(to_string(p.type)) + " row contradicts reference in " +
                                                   std::string(to_string(k)));
      }
    }
    auto [it, inserted] = rows.try_emplace(p.type, MatrixRow{p.type, 0, p.expected});
    if (!inserted && it->second.row != p.expected) {
      throw Error(ErrorCode::MatrixMismatch, "pairs of type " + std::string(to_string(p.type)) + " disagree");
    }
    ++it->second.pairs;
  }
  std::vector<MatrixRow> out;
  for (auto& [type, row] : rows) out.push_back(row);
  return out;
}

Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  Generator gen(seed);
  Scenario s;
  s.posts = generate_background(config.background, gen);
  for (ReuseType type : kAllReuseTypes) {
    for (std::size_t i = 0; i < config.reuse_pairs_per_type; ++i) {
      PostRecord base = gen.base_post(config.background.start, config.background.end);
      ReusePair pair = generate_reuse_pair(base, type, gen);
      s.posts.push_back(pair.base);
      if (!pair.expected.excluded_from_layers) s.posts.push_back(pair.derived);
      s.reuse_pairs.push_back(std::move(pair));
    }
  }
  std::uniform_int_distribution<std::size_t> size(config.cluster_min_users,
                                                  std::max(config.cluster_min_users, config.cluster_max_users));
  for (std::size_t c = 0; c < config.clusters; ++c) {
    ClusterSpec spec;
    spec.n_users = size(gen.rng());
    spec.posts_per_user = config.cluster_posts_per_user;
    spec.templ = gen.base_post(config.background.start, config.background.end);
    spec.jitter = config.jitter;
    spec.active_start = config.background.start;
    spec.active_end = config.background.end;
    auto truth = inject_coordinated_cluster(s.posts, spec, gen);
    truth.name = "cluster_" + std::to_string(c);
    s.clusters.push_back(std::move(truth));
  }
  return s;
}

nlohmann::json ground_truth_json(const Scenario& scenario) {
  using nlohmann::json;
  json clusters = json::array();
  for (const auto& c : scenario.clusters) {
    json edges = json::array();
    for (std::size_t i = 0; i < c.user_ids.size(); ++i) {
      for (std::size_t j = i + 1; j < c.user_ids.size(); ++j) edges.push_back({c.user_ids[i], c.user_ids[j]});
    }
    clusters.push_back({{"name", c.name},
                        {"users", c.user_ids},
                        {"posts", c.post_ids},
                        {"layers", {"hashtag_sequence", "video_description"}},
                        {"expected_edges", std::move(edges)}});
  }
  json pairs = json::array();
  for (const auto& p : scenario.reuse_pairs) {
    json expected = json::object();
    for (LayerKind k : kAllLayerKinds) expected[std::string(to_string(k))] = std::string(to_string(p.expected.at(k)));
    pairs.push_back({{"type", std::string(to_string(p.type))},
                     {"base_post", p.base.post_id},
                     {"derived_post", p.derived.post_id},
                     {"base_user", p.base.user_id},
                     {"derived_user", p.derived.user_id},
                     {"excluded_from_layers", p.expected.excluded_from_layers},
                     {"expected", std::move(expected)}});
  }
  json matrix = json::array();
  for (const auto& row : expected_detection_matrix(scenario.reuse_pairs)) {
    json cells = json::object();
    for (LayerKind k : kAllLayerKinds) cells[std::string(to_string(k))] = std::string(to_string(row.row.at(k)));
    matrix.push_back({{"type", std::string(to_string(row.type))},
                      {"pairs", row.pairs},
                      {"excluded_from_layers", row.row.excluded_from_layers},
                      {"layers", std::move(cells)}});
  }
  return {{"clusters", std::move(clusters)}, {"reuse_pairs", std::move(pairs)}, {"detection_matrix", std::move(matrix)}};
}

}  // namespace coact::synthgen
