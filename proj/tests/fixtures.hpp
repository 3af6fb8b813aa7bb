#pragma once

#include <string>
#include <vector>

#include "coact/ingest.hpp"
#include "coact/model.hpp"

namespace fixture {

inline coact::PostRecord post(const std::string& id, const std::string& user, std::int64_t ts = 1000,
                              const std::string& description = "") {
  coact::PostRecord p;
  p.post_id = id;
  p.user_id = user;
  p.username = "name_" + user;
  p.created_at = ts;
  p.description = description;
  coact::ingest::derive_fields(p);
  return p;
}

inline coact::PostRecord with_transcript(coact::PostRecord p, std::string t) {
  p.transcript = std::move(t);
  return p;
}

inline coact::PostRecord with_music(coact::PostRecord p, std::string m) {
  p.music_id = std::move(m);
  return p;
}

inline coact::PostRecord with_frames(coact::PostRecord p, std::vector<coact::FrameHash> f) {
  p.frame_hashes = std::move(f);
  return p;
}

}  // namespace fixture
