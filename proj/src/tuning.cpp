#include "coact/tuning.hpp"

#include <algorithm>
#include <istream>
#include <memory>
#include <sstream>

namespace coact::tuning {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

bool parse_bool(const std::string& text, std::size_t line) {
  const auto v = lower(text);
  if (v == "1" || v == "true" || v == "yes" || v == "y") return true;
  if (v == "0" || v == "false" || v == "no" || v == "n" || v.empty()) return false;
  throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line) + ": bad boolean '" + text + "'");
}

AudioLabel parse_audio(const std::string& text, std::size_t line) {
  const auto v = lower(text);
  if (v == "same") return AudioLabel::Same;
  if (v == "partial") return AudioLabel::Partial;
  if (v == "none" || v.empty()) return AudioLabel::None;
  throw Error(ErrorCode::InvalidArgument,
              "line " + std::to_string(line) + ": audio label must be same/partial/none");
}

}  // namespace

std::vector<LabeledPair> parse_labels_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::InvalidArgument, "labels CSV is empty");
  const auto header = split_csv(line);
  auto column = [&](std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (lower(header[i]) == name) return i;
    }
    throw Error(ErrorCode::InvalidArgument, "labels CSV lacks column '" + std::string(name) + "'");
  };
  const auto ca = column("post_a");
  const auto cb = column("post_b");
  const auto cv = column("visual");
  const auto cu = column("audio");
  const auto cm = column("message");
  const auto width = std::max({ca, cb, cv, cu, cm}) + 1;

  std::vector<LabeledPair> pairs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() < width) {
      throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": too few columns");
    }
    LabeledPair p;
    p.post_a = cells[ca];
    p.post_b = cells[cb];
    p.label_visual = parse_bool(cells[cv], line_no);
    p.label_audio = parse_audio(cells[cu], line_no);
    p.label_message = parse_bool(cells[cm], line_no);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<CurvePoint> precision_recall_curve(std::span<const int> scores,
                                               std::span<const bool> positive) {
  if (scores.size() != positive.size()) {
    throw Error(ErrorCode::InvalidArgument, "scores and labels differ in length");
  }
  const auto total_pos = static_cast<std::size_t>(std::count(positive.begin(), positive.end(), true));
  if (total_pos == 0 || total_pos == positive.size()) {
    throw Error(ErrorCode::DegenerateLabels, "need at least one positive and one negative pair");
  }
  std::vector<int> thresholds(scores.begin(), scores.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::vector<CurvePoint> curve;
  for (int t : thresholds) {
    CurvePoint pt;
    pt.threshold = t;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const bool predicted = scores[i] >= t;
      if (predicted && positive[i]) ++pt.true_positives;
      if (predicted && !positive[i]) ++pt.false_positives;
      if (!predicted && positive[i]) ++pt.false_negatives;
    }
    const auto predicted = pt.true_positives + pt.false_positives;
    pt.precision = predicted == 0 ? 1.0 : static_cast<double>(pt.true_positives) / predicted;
    pt.recall = static_cast<double>(pt.true_positives) / total_pos;
    curve.push_back(pt);
  }
  return curve;
}

std::vector<CurvePoint> precision_recall_curve(
    std::span<const LabeledPair> pairs, const std::function<int(const LabeledPair&)>& scorer,
    const std::function<bool(const LabeledPair&)>& is_positive) {
  std::vector<int> scores;
  auto labels = std::make_unique<bool[]>(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    scores.push_back(scorer(pairs[i]));
    labels[i] = is_positive(pairs[i]);
  }
  return precision_recall_curve(scores, std::span<const bool>(labels.get(), pairs.size()));
}

int select_threshold(std::span<const CurvePoint> curve, ThresholdPolicy policy) {
  if (curve.empty()) throw Error(ErrorCode::InvalidArgument, "empty precision-recall curve");
  if (policy == ThresholdPolicy::FirstPerfect) {
    for (const auto& pt : curve) {
      if (pt.precision == 1.0 && pt.recall == 1.0) return pt.threshold;
    }
    throw Error(ErrorCode::NoPerfectPoint, "no threshold separates the labels perfectly");
  }
  const CurvePoint* best = &curve.front();
  for (const auto& pt : curve) {
    if (pt.f1() > best->f1() || (pt.f1() == best->f1() && pt.threshold < best->threshold)) best = &pt;
  }
  return best->threshold;
}

AudioCalibration calibrate_audio(std::span<const LabeledPair> pairs,
                                 const std::map<std::string, std::string>& transcripts,
                                 ThresholdPolicy policy) {
  auto text = [&](const std::string& id) -> const std::string& {
    auto it = transcripts.find(id);
    if (it == transcripts.end()) {
      throw Error(ErrorCode::InvalidArgument, "no transcript for labelled post " + id);
    }
    return it->second;
  };
  AudioCalibration cal;
  cal.exact_curve = precision_recall_curve(
      pairs, [&](const LabeledPair& p) { return similarity::similarity_ratio(text(p.post_a), text(p.post_b)); },
      [](const LabeledPair& p) { return p.label_audio == AudioLabel::Same; });
  cal.partial_curve = precision_recall_curve(
      pairs,
      [&](const LabeledPair& p) {
        return similarity::partial_similarity_ratio(text(p.post_a), text(p.post_b));
      },
      [](const LabeledPair& p) { return p.label_audio != AudioLabel::None; });
  cal.thresholds.exact = select_threshold(cal.exact_curve, policy);
  cal.thresholds.partial = select_threshold(cal.partial_curve, policy);
  cal.midpoint = cal.thresholds.midpoint();
  return cal;
}

}  // namespace coact::tuning
