#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "coact/filtering.hpp"
#include "coact/ingest.hpp"
#include "coact/metrics.hpp"
#include "coact/model.hpp"

namespace coact::report {

/// JSON forms shared by the pipeline artifacts and the HTTP API. Key order is
/// fixed (sorted), so serializations are byte-stable.
nlohmann::json to_json(const ingest::CorpusSummary& summary);
nlohmann::json to_json(const LayerStats& stats);
nlohmann::json to_json(const FilterSpec& filter);
nlohmann::json to_json(const filtering::SweepReport& report);
nlohmann::json to_json(const OverlapMatrix& matrix);

/// Replaces user ids and usernames when `pseudonymize` is set.
nlohmann::json to_json(const metrics::ComponentSummary& component, bool pseudonymize = false);

/// Stable "anon-" + 12 hex chars of SHA-256(user id).
std::string pseudonym(std::string_view user_id);

/// Header line of stats_csv_row.
std::string stats_csv_header();
std::string stats_csv_row(std::string_view layer, std::string_view filter, std::string_view snapshot_id,
                          const LayerStats& stats);

}  // namespace coact::report
