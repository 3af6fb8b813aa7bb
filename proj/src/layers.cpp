#include "coact/layers.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "coact/detail/myers.hpp"
#include "coact/parallel.hpp"

namespace coact::layers {

namespace {

struct BulkEdge {
  UserIndex user_a = 0;
  UserIndex user_b = 0;
  std::uint64_t weight = 0;
  std::int64_t min_delta_t = 0;
};

std::int64_t abs_delta(std::int64_t a, std::int64_t b) { return a > b ? a - b : b - a; }

auto pair_key(const CoActionPair& p) {
  return std::tuple(std::min(p.user_a, p.user_b), std::max(p.user_a, p.user_b), p.post_a, p.post_b);
}

Layer assemble(std::vector<CoActionPair> pairs, std::vector<BulkEdge> bulk, LayerKind kind,
               std::shared_ptr<const Directory> directory, bool keep_evidence) {
  for (const CoActionPair& p : pairs) {
    if (p.user_a == p.user_b) {
      throw Error(ErrorCode::SelfLoop, "co-action pair joins a user with itself");
    }
    if (p.kind != kind) throw Error(ErrorCode::InvalidArgument, "co-action pair of another layer kind");
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const CoActionPair& x, const CoActionPair& y) { return pair_key(x) < pair_key(y); });
  pairs.erase(std::unique(pairs.begin(), pairs.end(),
                          [](const CoActionPair& x, const CoActionPair& y) {
                            return x.post_a == y.post_a && x.post_b == y.post_b;
                          }),
              pairs.end());

  std::sort(bulk.begin(), bulk.end(), [](const BulkEdge& x, const BulkEdge& y) {
    return std::pair(x.user_a, x.user_b) < std::pair(y.user_a, y.user_b);
  });

  std::vector<UserEdge> edges;
  std::vector<CoActionPair> kept;
  if (keep_evidence) kept.reserve(pairs.size());
  std::size_t pi = 0;
  std::size_t bi = 0;
  while (pi < pairs.size() || bi < bulk.size()) {
    std::pair<UserIndex, UserIndex> key;
    if (bi == bulk.size() ||
        (pi < pairs.size() &&
         std::pair(std::get<0>(pair_key(pairs[pi])), std::get<1>(pair_key(pairs[pi]))) <=
             std::pair(bulk[bi].user_a, bulk[bi].user_b))) {
      key = {std::get<0>(pair_key(pairs[pi])), std::get<1>(pair_key(pairs[pi]))};
    } else {
      key = {bulk[bi].user_a, bulk[bi].user_b};
    }
    UserEdge e;
    e.user_a = key.first;
    e.user_b = key.second;
    e.evidence_begin = static_cast<std::uint32_t>(kept.size());
    bool have_delta = false;
    while (pi < pairs.size() &&
           std::pair(std::get<0>(pair_key(pairs[pi])), std::get<1>(pair_key(pairs[pi]))) == key) {
      const CoActionPair& p = pairs[pi++];
      ++e.weight;
      e.min_delta_t = have_delta ? std::min(e.min_delta_t, p.delta_t) : p.delta_t;
      have_delta = true;
      if (keep_evidence) kept.push_back(p);
    }
    while (bi < bulk.size() && std::pair(bulk[bi].user_a, bulk[bi].user_b) == key) {
      const BulkEdge& b = bulk[bi++];
      e.weight += b.weight;
      e.min_delta_t = have_delta ? std::min(e.min_delta_t, b.min_delta_t) : b.min_delta_t;
      have_delta = true;
    }
    e.evidence_end = static_cast<std::uint32_t>(kept.size());
    edges.push_back(e);
  }
  const bool complete = edges.empty() || (keep_evidence && bulk.empty());
  return Layer(kind, std::move(directory), std::move(edges), std::move(kept), complete);
}

CoActionPair make_pair_for(const Corpus& corpus, LayerKind kind, PostIndex x, PostIndex y,
                           int score) {
  if (y < x) std::swap(x, y);
  CoActionPair p;
  p.kind = kind;
  p.post_a = x;
  p.post_b = y;
  p.user_a = corpus.user_of(x);
  p.user_b = corpus.user_of(y);
  p.score = static_cast<std::uint8_t>(score);
  p.delta_t = abs_delta(corpus.post(x).created_at, corpus.post(y).created_at);
  return p;
}

// Per-user post counts and sorted timestamps of one oversized group.
void project_bulk_group(const Corpus& corpus, std::span<const PostIndex> group,
                        std::vector<BulkEdge>& out) {
  std::map<UserIndex, std::vector<std::int64_t>> by_user;
  for (PostIndex p : group) by_user[corpus.user_of(p)].push_back(corpus.post(p).created_at);
  std::vector<std::pair<UserIndex, std::vector<std::int64_t>>> users(by_user.begin(), by_user.end());
  for (auto& [u, times] : users) std::sort(times.begin(), times.end());
  for (std::size_t i = 0; i < users.size(); ++i) {
    for (std::size_t j = i + 1; j < users.size(); ++j) {
      const auto& ta = users[i].second;
      const auto& tb = users[j].second;
      std::int64_t best = abs_delta(ta.front(), tb.front());
      std::size_t a = 0;
      std::size_t b = 0;
      while (a < ta.size() && b < tb.size()) {
        best = std::min(best, abs_delta(ta[a], tb[b]));
        if (ta[a] < tb[b]) {
          ++a;
        } else {
          ++b;
        }
      }
      out.push_back({users[i].first, users[j].first,
                     static_cast<std::uint64_t>(ta.size()) * tb.size(), best});
    }
  }
}

std::vector<std::string> exact_keys(const PostRecord& post, LayerKind kind) {
  switch (kind) {
    case LayerKind::HashtagSequence: {
      if (post.hashtags.empty()) return {};
      std::string key;
      for (const auto& tag : post.hashtags) {
        key += tag;
        key += '\x1f';
      }
      return {key};
    }
    case LayerKind::VideoDescription:
      if (post.description.empty()) return {};
      return {post.description};
    case LayerKind::Url: {
      std::vector<std::string> keys = post.urls;
      std::sort(keys.begin(), keys.end());
      keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
      return keys;
    }
    case LayerKind::MusicId:
      if (!post.music_id || post.music_id->empty()) return {};
      return {*post.music_id};
    default:
      throw Error(ErrorCode::InvalidArgument,
                  "not an exact-match layer: " + std::string(to_string(kind)));
  }
}

}  // namespace

Corpus::Corpus(std::vector<PostRecord> posts) : posts_(std::move(posts)) {
  std::sort(posts_.begin(), posts_.end(),
            [](const PostRecord& a, const PostRecord& b) { return a.post_id < b.post_id; });
  for (std::size_t i = 1; i < posts_.size(); ++i) {
    if (posts_[i].post_id == posts_[i - 1].post_id) {
      throw Error(ErrorCode::InvalidArgument, "duplicate post_id " + posts_[i].post_id);
    }
  }
  directory_ = Directory::from_posts(posts_);
  post_user_.reserve(posts_.size());
  for (const PostRecord& p : posts_) post_user_.push_back(*directory_->find_user(p.user_id));
}

Layer project_to_users(std::vector<CoActionPair> pairs, LayerKind kind,
                       std::shared_ptr<const Directory> directory, bool keep_evidence) {
  return assemble(std::move(pairs), {}, kind, std::move(directory), keep_evidence);
}

Layer build_exact_layer(const Corpus& corpus, LayerKind kind, const BuildOptions& options) {
  std::vector<std::pair<std::string, PostIndex>> keyed;
  keyed.reserve(corpus.size());
  for (PostIndex p = 0; p < corpus.size(); ++p) {
    for (auto& key : exact_keys(corpus.post(p), kind)) keyed.emplace_back(std::move(key), p);
  }
  std::sort(keyed.begin(), keyed.end());

  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < keyed.size();) {
    std::size_t j = i + 1;
    while (j < keyed.size() && keyed[j].first == keyed[i].first) ++j;
    if (j - i >= 2) groups.emplace_back(i, j);
    i = j;
  }

  const unsigned threads = resolve_threads(options.threads);
  std::vector<std::vector<CoActionPair>> pair_parts(threads);
  std::vector<std::vector<BulkEdge>> bulk_parts(threads);
  parallel_chunks(groups.size(), threads, [&](unsigned w, std::size_t begin, std::size_t end) {
    std::vector<PostIndex> members;
    for (std::size_t g = begin; g < end; ++g) {
      members.clear();
      for (std::size_t k = groups[g].first; k < groups[g].second; ++k) {
        members.push_back(keyed[k].second);
      }
      if (members.size() > options.group_cap) {
        project_bulk_group(corpus, members, bulk_parts[w]);
        continue;
      }
      for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
          if (corpus.user_of(members[a]) == corpus.user_of(members[b])) continue;
          pair_parts[w].push_back(make_pair_for(corpus, kind, members[a], members[b], 100));
        }
      }
    }
  });

  std::vector<CoActionPair> pairs;
  std::vector<BulkEdge> bulk;
  for (auto& part : pair_parts) pairs.insert(pairs.end(), part.begin(), part.end());
  for (auto& part : bulk_parts) bulk.insert(bulk.end(), part.begin(), part.end());
  return assemble(std::move(pairs), std::move(bulk), kind, corpus.directory(), options.keep_evidence);
}

AudioLayers build_audio_layers(const Corpus& corpus, const BuildOptions& options) {
  using similarity::AudioCategory;
  struct Item {
    PostIndex post;
    std::vector<std::uint32_t> symbols;
  };
  std::vector<Item> items;
  std::vector<std::uint32_t> alphabet;
  for (PostIndex p = 0; p < corpus.size(); ++p) {
    const auto& t = corpus.post(p).transcript;
    if (!t || t->empty()) continue;
    items.push_back({p, similarity::to_code_points(*t)});
    alphabet.insert(alphabet.end(), items.back().symbols.begin(), items.back().symbols.end());
  }
  // Dense symbol ids keep the per-pattern lookup a flat array.
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  for (Item& item : items) {
    for (auto& c : item.symbols) {
      c = static_cast<std::uint32_t>(std::lower_bound(alphabet.begin(), alphabet.end(), c) -
                                     alphabet.begin());
    }
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return std::pair(a.symbols.size(), a.post) < std::pair(b.symbols.size(), b.post);
  });

  const auto& th = options.audio_thresholds;
  const unsigned threads = resolve_threads(options.threads);
  std::vector<std::vector<CoActionPair>> same_parts(threads);
  std::vector<std::vector<CoActionPair>> partial_parts(threads);

  parallel_chunks(items.size(), threads, [&](unsigned w, std::size_t begin, std::size_t end) {
    std::vector<std::int32_t> slot(alphabet.size(), -1);
    for (std::size_t i = begin; i < end; ++i) {
      const Item& s = items[i];
      const detail::BitPattern pattern(s.symbols);
      const auto symbols = pattern.symbols();
      for (std::size_t k = 0; k < symbols.size(); ++k) slot[symbols[k]] = static_cast<std::int32_t>(k);
      const std::size_t m = s.symbols.size();
      const UserIndex su = corpus.user_of(s.post);

      for (std::size_t j = i + 1; j < items.size(); ++j) {
        const Item& l = items[j];
        if (corpus.user_of(l.post) == su) continue;
        const std::size_t n = l.symbols.size();
        auto lookup = [&](std::size_t pos) -> const std::uint64_t* {
          const std::int32_t k = slot[l.symbols[pos]];
          return k < 0 ? nullptr : pattern.masks_at(static_cast<std::size_t>(k));
        };
        // d >= n - m bounds the full-string score; the substring-anywhere
        // distance bounds every window score.
        const bool exact_possible = similarity::ratio_from_distance(n - m, n) >= th.exact;
        const std::size_t floor = detail::myers_distance(pattern, n, lookup, false);
        const bool partial_possible = similarity::ratio_from_distance(floor, m) >= th.partial;
        if (!partial_possible) {
          if (!exact_possible) continue;
          const std::size_t d = detail::myers_distance(pattern, n, lookup, true);
          if (similarity::ratio_from_distance(d, n) < th.exact) continue;
        }
        const auto cls = similarity::classify_audio_pair(s.symbols, l.symbols, th);
        if (cls.category == AudioCategory::Same) {
          same_parts[w].push_back(
              make_pair_for(corpus, LayerKind::SameAudio, s.post, l.post, cls.exact_score));
        } else if (cls.category == AudioCategory::Partial) {
          partial_parts[w].push_back(
              make_pair_for(corpus, LayerKind::PartialAudio, s.post, l.post, cls.partial_score));
        }
      }
      for (std::uint32_t sym : symbols) slot[sym] = -1;
    }
  });

  std::vector<CoActionPair> same;
  std::vector<CoActionPair> partial;
  for (auto& part : same_parts) same.insert(same.end(), part.begin(), part.end());
  for (auto& part : partial_parts) partial.insert(partial.end(), part.begin(), part.end());
  return {assemble(std::move(same), {}, LayerKind::SameAudio, corpus.directory(), options.keep_evidence),
          assemble(std::move(partial), {}, LayerKind::PartialAudio, corpus.directory(),
                   options.keep_evidence)};
}

// --- video -----------------------------------------------------------------

void HammingIndex::add(PostIndex post, std::span<const FrameHash> frames) {
  for (std::size_t i = 0; i < frames.size(); ++i) {
    buckets_[frames[i]].push_back({post, static_cast<std::uint32_t>(i)});
  }
}

std::span<const Posting> HammingIndex::bucket(FrameHash h) const {
  auto it = buckets_.find(h);
  if (it == buckets_.end()) return {};
  return it->second;
}

std::vector<Posting> hamming_candidates(const HammingIndex& index, FrameHash h) {
  std::vector<Posting> out;
  auto take = [&](FrameHash probe) {
    auto b = index.bucket(probe);
    out.insert(out.end(), b.begin(), b.end());
  };
  take(h);
  for (int bit = 0; bit < 64; ++bit) take(h ^ (FrameHash{1} << bit));
  std::sort(out.begin(), out.end());
  return out;
}

Layer build_video_layer(const Corpus& corpus, const BuildOptions& options) {
  std::vector<PostIndex> with_frames;
  HammingIndex index;
  for (PostIndex p = 0; p < corpus.size(); ++p) {
    const auto& frames = corpus.post(p).frame_hashes;
    if (!frames || frames->empty()) continue;
    with_frames.push_back(p);
    index.add(p, *frames);
  }

  // Radius-1 probing only finds candidates when frames can be near-equal.
  if (options.video.max_distance > 1) {
    throw Error(ErrorCode::InvalidArgument, "video candidate index supports max_distance <= 1");
  }

  const unsigned threads = resolve_threads(options.threads);
  std::vector<std::vector<CoActionPair>> parts(threads);
  parallel_chunks(with_frames.size(), threads, [&](unsigned w, std::size_t begin, std::size_t end) {
    std::vector<PostIndex> candidates;
    for (std::size_t i = begin; i < end; ++i) {
      const PostIndex p = with_frames[i];
      const auto& frames = *corpus.post(p).frame_hashes;
      const UserIndex pu = corpus.user_of(p);
      candidates.clear();
      for (FrameHash h : frames) {
        for (const Posting& hit : hamming_candidates(index, h)) {
          if (hit.post > p && corpus.user_of(hit.post) != pu) candidates.push_back(hit.post);
        }
      }
      std::sort(candidates.begin(), candidates.end());
      candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
      for (PostIndex q : candidates) {
        if (similarity::video_match(frames, *corpus.post(q).frame_hashes, options.video)) {
          parts[w].push_back(make_pair_for(corpus, LayerKind::VideoSimilarity, p, q, 100));
        }
      }
    }
  });
  std::vector<CoActionPair> pairs;
  for (auto& part : parts) pairs.insert(pairs.end(), part.begin(), part.end());
  return assemble(std::move(pairs), {}, LayerKind::VideoSimilarity, corpus.directory(),
                  options.keep_evidence);
}

std::vector<Layer> build_all_layers(const Corpus& corpus, const BuildOptions& options) {
  std::vector<Layer> out;
  out.reserve(kAllLayerKinds.size());
  out.push_back(build_exact_layer(corpus, LayerKind::HashtagSequence, options));
  out.push_back(build_exact_layer(corpus, LayerKind::VideoDescription, options));
  out.push_back(build_exact_layer(corpus, LayerKind::Url, options));
  out.push_back(build_exact_layer(corpus, LayerKind::MusicId, options));
  auto audio = build_audio_layers(corpus, options);
  out.push_back(std::move(audio.same));
  out.push_back(std::move(audio.partial));
  out.push_back(build_video_layer(corpus, options));
  return out;
}

}  // namespace coact::layers
