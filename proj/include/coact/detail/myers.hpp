#pragma once

// Bit-parallel edit distance (Myers 1999, block formulation). The pattern is
// held as per-symbol match masks, one 64-bit word per block of 64 pattern
// positions. Symbols are 32-bit (code points or dense ids).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace coact::detail {

class BitPattern {
 public:
  BitPattern() = default;

  explicit BitPattern(std::span<const std::uint32_t> pattern) : length_(pattern.size()) {
    blocks_ = (length_ + 63) / 64;
    symbols_.assign(pattern.begin(), pattern.end());
    std::sort(symbols_.begin(), symbols_.end());
    symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
    masks_.assign(symbols_.size() * blocks_, 0);
    for (std::size_t i = 0; i < length_; ++i) {
      const std::size_t slot = slot_of(pattern[i]);
      masks_[slot * blocks_ + i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }

  std::size_t size() const { return length_; }
  std::size_t blocks() const { return blocks_; }
  std::span<const std::uint32_t> symbols() const { return symbols_; }
  const std::uint64_t* masks_at(std::size_t slot) const { return masks_.data() + slot * blocks_; }

  /// nullptr when the symbol does not occur in the pattern.
  const std::uint64_t* masks_for(std::uint32_t symbol) const {
    auto it = std::lower_bound(symbols_.begin(), symbols_.end(), symbol);
    if (it == symbols_.end() || *it != symbol) return nullptr;
    return masks_at(static_cast<std::size_t>(it - symbols_.begin()));
  }

 private:
  std::size_t slot_of(std::uint32_t symbol) const {
    return static_cast<std::size_t>(std::lower_bound(symbols_.begin(), symbols_.end(), symbol) -
                                    symbols_.begin());
  }

  std::size_t length_ = 0;
  std::size_t blocks_ = 0;
  std::vector<std::uint32_t> symbols_;
  std::vector<std::uint64_t> masks_;
};

/// Column-by-column DP state over a fixed pattern.
///
/// global == true: D[0][j] = j, result is the edit distance of pattern vs the
/// whole text. global == false: D[0][j] = 0, result is the minimum distance of
/// the pattern to any substring of the text.
template <typename Lookup>
std::size_t myers_distance(const BitPattern& pattern, std::size_t text_length, Lookup&& lookup,
                           bool global) {
  const std::size_t m = pattern.size();
  if (m == 0) return global ? text_length : 0;
  const std::size_t blocks = pattern.blocks();
  const std::uint64_t high = std::uint64_t{1} << ((m - 1) % 64);

  // Patterns up to kStackBlocks * 64 symbols keep the column state on the stack.
  constexpr std::size_t kStackBlocks = 16;
  std::uint64_t pv_stack[kStackBlocks];
  std::uint64_t mv_stack[kStackBlocks];
  thread_local std::vector<std::uint64_t> pv_heap;
  thread_local std::vector<std::uint64_t> mv_heap;
  std::uint64_t* pv = pv_stack;
  std::uint64_t* mv = mv_stack;
  if (blocks > kStackBlocks) {
    pv_heap.resize(blocks);
    mv_heap.resize(blocks);
    pv = pv_heap.data();
    mv = mv_heap.data();
  }
  std::fill(pv, pv + blocks, ~std::uint64_t{0});
  std::fill(mv, mv + blocks, std::uint64_t{0});
  std::size_t score = m;
  std::size_t best = m;

  for (std::size_t j = 0; j < text_length; ++j) {
    const std::uint64_t* eq_words = lookup(j);
    int hin = global ? 1 : 0;
    for (std::size_t b = 0; b < blocks; ++b) {
      std::uint64_t eq = eq_words ? eq_words[b] : 0;
      const std::uint64_t block_high = (b + 1 == blocks) ? high : (std::uint64_t{1} << 63);
      const std::uint64_t p = pv[b];
      const std::uint64_t n = mv[b];
      const std::uint64_t hin_neg = static_cast<std::uint64_t>(hin < 0);
      const std::uint64_t hin_pos = static_cast<std::uint64_t>(hin > 0);
      const std::uint64_t xv = eq | n;
      eq |= hin_neg;
      const std::uint64_t xh = (((eq & p) + p) ^ p) | eq;
      std::uint64_t ph = n | ~(xh | p);
      std::uint64_t mh = p & xh;
      const int hout = static_cast<int>((ph & block_high) != 0) - static_cast<int>((mh & block_high) != 0);
      ph = (ph << 1) | hin_pos;
      mh = (mh << 1) | hin_neg;
      pv[b] = mh | ~(xv | ph);
      mv[b] = ph & xv;
      hin = hout;
    }
    score = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(score) + hin);
    if (!global) {
      best = std::min(best, score);
      if (best == 0) return 0;
    }
  }
  return global ? score : best;
}

inline std::size_t levenshtein(const BitPattern& pattern, std::span<const std::uint32_t> text) {
  return myers_distance(
      pattern, text.size(), [&](std::size_t j) { return pattern.masks_for(text[j]); }, true);
}

inline std::size_t min_substring_distance(const BitPattern& pattern,
                                          std::span<const std::uint32_t> text) {
  return myers_distance(
      pattern, text.size(), [&](std::size_t j) { return pattern.masks_for(text[j]); }, false);
}

}  // namespace coact::detail
