#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "coact/model.hpp"
#include "coact/similarity.hpp"

namespace coact::tuning {

enum class AudioLabel : std::uint8_t { Same, Partial, None };

struct LabeledPair {
  std::string post_a;
  std::string post_b;
  bool label_visual = false;
  AudioLabel label_audio = AudioLabel::None;
  bool label_message = false;
};

/// CSV with header row naming post_a, post_b, visual, audio, message.
std::vector<LabeledPair> parse_labels_csv(std::istream& in);

struct CurvePoint {
  int threshold = 0;
  double precision = 1.0;
  double recall = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;

  double f1() const {
    return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
  }
};

/// One point per distinct score; a pair is predicted positive when
/// score >= threshold. Throws DegenerateLabels unless both classes occur.
std::vector<CurvePoint> precision_recall_curve(std::span<const int> scores,
                                               std::span<const bool> positive);

std::vector<CurvePoint> precision_recall_curve(
    std::span<const LabeledPair> pairs, const std::function<int(const LabeledPair&)>& scorer,
    const std::function<bool(const LabeledPair&)>& is_positive);

enum class ThresholdPolicy { FirstPerfect, MaxF1 };

/// FirstPerfect: smallest threshold with precision = recall = 1 (else
/// NoPerfectPoint). MaxF1: best F1, ties to the smallest threshold.
int select_threshold(std::span<const CurvePoint> curve, ThresholdPolicy policy);

struct AudioCalibration {
  std::vector<CurvePoint> exact_curve;
  std::vector<CurvePoint> partial_curve;
  similarity::AudioThresholds thresholds;
  int midpoint = 0;
};

/// Fits the exact threshold (positives: audio == same) on similarity_ratio and
/// the partial threshold (positives: audio != none) on
/// partial_similarity_ratio; the midpoint follows from the two.
AudioCalibration calibrate_audio(std::span<const LabeledPair> pairs,
                                 const std::map<std::string, std::string>& transcripts,
                                 ThresholdPolicy policy = ThresholdPolicy::FirstPerfect);

}  // namespace coact::tuning
