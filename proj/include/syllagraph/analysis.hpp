#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "syllagraph/model.hpp"

namespace syllagraph {

/// Thrown when an analysis is asked about a node the graph does not have.
class UnknownNodeError : public std::invalid_argument {
 public:
  explicit UnknownNodeError(std::string id)
      : std::invalid_argument("unknown node id '" + id + "'"),
        id_(std::move(id)) {}

  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

struct Stats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::map<Side, std::size_t> side_counts;
  std::size_t video_link_total = 0;
  std::size_t text_link_total = 0;
  std::map<RelationshipKind, std::size_t> kind_counts;

  friend bool operator==(const Stats&, const Stats&) = default;
};

struct RuleConfig {
  int max_note_chars = 80;
  int min_videos = 5;
  int max_videos = 10;
  std::set<std::string> rules_disabled;

  /// Throws std::invalid_argument when min_videos > max_videos or
  /// max_note_chars < 1.
  void check() const;
};

struct RuleInfo {
  std::string_view id;
  std::string_view name;
  Severity severity;
  std::string_view summary;
};

/// The lint rules, in id order.
const std::vector<RuleInfo>& rule_registry();

const RuleInfo* find_rule(std::string_view id_or_name);

/// Nodes reachable from `id` along directed edges, `id` included. O(V+E).
std::set<NodeId> reachable_from(const CourseGraph& graph, std::string_view id);

/// Nodes from which `id` is reachable, `id` included. O(V+E).
std::set<NodeId> reaches(const CourseGraph& graph, std::string_view id);

/// Nodes and edges lying on some directed walk from `id` to the sink.
/// Empty when `id` cannot reach the sink.
HighlightSet highlight(const CourseGraph& graph, std::string_view id);

/// One highlight set per node, keyed by node id.
std::map<NodeId, HighlightSet> all_highlights(const CourseGraph& graph);

/// Runs every enabled rule. Findings are ordered by (severity, rule, subject).
std::vector<Diagnostic> validate(const CourseGraph& graph,
                                 const RuleConfig& config = {});

bool has_errors(const std::vector<Diagnostic>& diagnostics);

Stats stats(const CourseGraph& graph);

/// Chapter-tagged nodes first by (first chapter, row, column, id), then the
/// untagged ones by (row, column, id).
std::vector<NodeId> course_order(const CourseGraph& graph);

}  // namespace syllagraph
