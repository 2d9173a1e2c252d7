#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "syllagraph/analysis.hpp"
#include "syllagraph/model.hpp"

namespace syllagraph {

/// Raised by the emitters when the graph has error-severity findings.
class EmissionRefused : public std::runtime_error {
 public:
  explicit EmissionRefused(std::vector<Diagnostic> errors)
      : std::runtime_error("graph has validation errors"),
        errors_(std::move(errors)) {}

  const std::vector<Diagnostic>& errors() const noexcept { return errors_; }

 private:
  std::vector<Diagnostic> errors_;
};

/// Relative path -> file contents.
using SiteTree = std::map<std::string, std::string>;

inline constexpr std::string_view kGeneratedNote =
    "Generated by syllagraph. Output is a pure function of the source graph.";

namespace palette {

// Edge strokes per relationship kind.
inline constexpr std::string_view kDerivative = "#d62728";   // red
inline constexpr std::string_view kCommonPart = "#1f77b4";   // blue
inline constexpr std::string_view kPerspective = "#2ca02c";  // green

// Node fills per side.
inline constexpr std::string_view kAS = "#ffe0a3";     // light amber
inline constexpr std::string_view kAD = "#cfe3ff";     // light blue
inline constexpr std::string_view kOther = "#e6e6e6";  // light gray

inline constexpr std::string_view kChapter = "#d00000";

std::string_view stroke(RelationshipKind kind);
std::string_view fill(Side side);

}  // namespace palette

namespace print_layout {
inline constexpr int kCellWidth = 180;
inline constexpr int kCellHeight = 90;
inline constexpr int kGutter = 40;
}  // namespace print_layout

/// bundle.json bytes: schema_version, graph, per-node highlights, stats.
/// Keys sorted, no floats, no timestamps.
std::string emit_bundle(const CourseGraph& graph);

/// index.html, bundle.json and the viewer assets.
SiteTree emit_site(const CourseGraph& graph);

/// SVG 1.1 print view of the grid layout.
std::string emit_print(const CourseGraph& graph);

/// Escapes &, <, >, " and ' for XML/HTML text and attributes.
std::string xml_escape(std::string_view text);

}  // namespace syllagraph
