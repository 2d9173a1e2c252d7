#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "syllagraph/model.hpp"

namespace syllagraph {

/// One parse failure. `line` and `column` are 1-based; columns count
/// code points, not bytes.
struct ParseError {
  int line = 1;
  int column = 1;
  std::string expected;
  std::string found;

  std::string message() const;

  friend bool operator==(const ParseError&, const ParseError&) = default;
};

/// Where each construct was declared, so graph-level diagnostics can point
/// back into the source.
struct SourceMap {
  std::map<NodeId, SourceLocation> nodes;
  std::vector<SourceLocation> edges;
  std::optional<SourceLocation> sink;
};

struct ParseResult {
  std::optional<CourseGraph> graph;
  std::vector<ParseError> errors;
  SourceMap locations;

  bool ok() const noexcept { return graph.has_value(); }
};

/// Parses `.sgs` source. Accepts LF and CRLF line endings. Recovers at the
/// next top-level directive after a syntax error, so one call can report
/// several independent problems.
ParseResult parse(std::string_view source);

/// Canonical `.sgs` text: LF line endings, two-space indentation, one
/// directive per line, strings double-quoted with backslash escapes.
std::string serialize(const CourseGraph& graph);

/// Fills in `location` on diagnostics whose subject appears in `map`.
void attach_locations(std::vector<Diagnostic>& diagnostics,
                      const SourceMap& map);

/// Quotes `text` the way the serializer writes string literals.
std::string quote(std::string_view text);

}  // namespace syllagraph
