#pragma once

// Brute-force reference implementations used to check the optimized code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "coact/layers.hpp"
#include "coact/similarity.hpp"

namespace oracle {

inline std::size_t dp_levenshtein(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

/// round-half-up(100 * (1 - d / m)) evaluated in long double.
inline int ratio(std::size_t d, std::size_t m) {
  if (m == 0) return 100;
  const long double v = 100.0L * (1.0L - static_cast<long double>(d) / static_cast<long double>(m));
  return static_cast<int>(std::floor(v + 0.5L + 1e-12L));
}

inline int similarity(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  return ratio(dp_levenshtein(a, b), std::max(a.size(), b.size()));
}

inline int partial(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  const auto& s = a.size() <= b.size() ? a : b;
  const auto& l = a.size() <= b.size() ? b : a;
  if (s.empty()) return 100;
  int best = 0;
  for (std::size_t start = 0; start + s.size() <= l.size(); ++start) {
    std::vector<std::uint32_t> w(l.begin() + static_cast<std::ptrdiff_t>(start),
                                 l.begin() + static_cast<std::ptrdiff_t>(start + s.size()));
    best = std::max(best, similarity(s, w));
  }
  return best;
}

inline std::vector<coact::layers::Posting> linear_scan(
    const std::vector<std::pair<coact::PostIndex, std::vector<coact::FrameHash>>>& posts, coact::FrameHash h) {
  std::vector<coact::layers::Posting> out;
  for (const auto& [post, frames] : posts) {
    for (std::size_t i = 0; i < frames.size(); ++i) {
      if (coact::similarity::hamming_distance(frames[i], h) <= 1) {
        out.push_back({post, static_cast<std::uint32_t>(i)});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// UTF-8 encoding of one scalar value.
inline void append_utf8(std::string& out, std::uint32_t c) {
  if (c < 0x80) {
    out += static_cast<char>(c);
  } else if (c < 0x800) {
    out += static_cast<char>(0xC0 | (c >> 6));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else if (c < 0x10000) {
    out += static_cast<char>(0xE0 | (c >> 12));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (c >> 18));
    out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  }
}

/// Random scalar values from a small mixed-script pool (so matches occur)
/// plus occasional arbitrary non-surrogate code points.
inline std::vector<std::uint32_t> random_scalars(std::mt19937_64& rng, std::size_t max_len) {
  static const std::uint32_t pool[] = {'a', 'b', 'c', 'd', ' ', 0xE4, 0xFC, 0x3B1, 0x3B2, 0x4E2D, 0x1F600, 0x1F44D};
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, std::size(pool) - 1);
  std::uniform_int_distribution<std::uint32_t> any(1, 0x10FFFF);
  std::vector<std::uint32_t> out(len(rng));
  for (auto& c : out) {
    if (rng() % 8 == 0) {
      do {
        c = any(rng);
      } while (c >= 0xD800 && c <= 0xDFFF);
    } else {
      c = pool[pick(rng)];
    }
  }
  return out;
}

inline std::string to_utf8(const std::vector<std::uint32_t>& cps) {
  std::string out;
  for (auto c : cps) append_utf8(out, c);
  return out;
}

}  // namespace oracle
