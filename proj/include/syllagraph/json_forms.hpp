#pragma once

// JSON encodings of the domain types. Objects use nlohmann::json's default
// std::map storage, so keys always serialize in sorted order.

#include <json.hpp>

#include "syllagraph/analysis.hpp"
#include "syllagraph/model.hpp"

namespace syllagraph {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const CourseGraph& graph);
nlohmann::json to_json(const HighlightSet& highlight);
nlohmann::json to_json(const Stats& stats);
nlohmann::json to_json(const Diagnostic& diagnostic, const CourseGraph& graph);

/// Inverse of to_json(const Stats&). Throws nlohmann::json::exception or
/// std::invalid_argument on malformed input.
Stats stats_from_json(const nlohmann::json& j);

/// Inverse of to_json(const HighlightSet&).
HighlightSet highlight_from_json(const nlohmann::json& j);

/// Two-space indented, UTF-8, trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace syllagraph
