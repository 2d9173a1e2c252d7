#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace syllagraph {

// Node identifiers: lowercase letter followed by [a-z0-9_]*.
using NodeId = std::string;

enum class Side { AS, AD, Other };

enum class RelationshipKind { Derivative, CommonPart, Perspective };

enum class ResourceKind { Video, Text, Audio };

std::string_view to_string(Side side);
std::string_view to_string(RelationshipKind kind);
std::string_view to_string(ResourceKind kind);

std::optional<Side> side_from_string(std::string_view text);
std::optional<RelationshipKind> kind_from_string(std::string_view text);
std::optional<ResourceKind> resource_kind_from_string(std::string_view text);

inline constexpr Side kAllSides[] = {Side::AS, Side::AD, Side::Other};
inline constexpr RelationshipKind kAllKinds[] = {
    RelationshipKind::Derivative, RelationshipKind::CommonPart,
    RelationshipKind::Perspective};

bool is_valid_node_id(std::string_view id);

struct GridPos {
  int column = 0;
  int row = 0;

  friend auto operator<=>(const GridPos&, const GridPos&) = default;
};

inline constexpr int kMaxGridCoord = 999;

struct Resource {
  ResourceKind kind = ResourceKind::Video;
  std::string url;
  std::string label;

  friend bool operator==(const Resource&, const Resource&) = default;
};

struct Node {
  NodeId id;
  std::string title;
  Side side = Side::Other;
  GridPos pos;
  std::vector<int> chapters;
  std::vector<std::string> symbols;
  std::vector<Resource> resources;
  std::optional<std::string> note;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  NodeId from;
  NodeId to;
  RelationshipKind kind = RelationshipKind::Derivative;
  std::optional<std::string> note;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct SymbolEntry {
  std::string key;
  std::string meaning;

  friend bool operator==(const SymbolEntry&, const SymbolEntry&) = default;
};

/// Thrown by the CourseGraph constructor; the message names the first
/// violated invariant.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A whole syllabus. Every instance satisfies the model invariants: unique
/// node ids, an existing sink, resolvable edge endpoints, no duplicate
/// (from, to, kind) edges and no self-loops, plus the per-node, per-edge and
/// glossary rules.
class CourseGraph {
 public:
  CourseGraph(std::string title, NodeId sink_id, std::vector<Node> nodes,
              std::vector<Edge> edges, std::vector<SymbolEntry> glossary = {},
              std::map<std::string, std::string> meta = {});

  const std::string& title() const noexcept { return title_; }
  const NodeId& sink_id() const noexcept { return sink_id_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<SymbolEntry>& glossary() const noexcept {
    return glossary_;
  }
  const std::map<std::string, std::string>& meta() const noexcept {
    return meta_;
  }

  /// Position of the node in declaration order, if present.
  std::optional<std::size_t> index_of(std::string_view id) const;

  friend bool operator==(const CourseGraph&, const CourseGraph&) = default;

 private:
  std::string title_;
  NodeId sink_id_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<SymbolEntry> glossary_;
  std::map<std::string, std::string> meta_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

struct HighlightSet {
  NodeId origin;
  std::set<NodeId> node_ids;
  std::set<std::size_t> edge_indices;

  bool empty() const noexcept { return node_ids.empty(); }

  friend bool operator==(const HighlightSet&, const HighlightSet&) = default;
};

enum class Severity { Error, Warning };

std::string_view to_string(Severity severity);

struct SourceLocation {
  int line = 1;
  int column = 1;

  friend auto operator<=>(const SourceLocation&, const SourceLocation&) =
      default;
};

/// What a diagnostic is about. Ordering is (kind, node id, edge index).
struct Subject {
  enum class Kind { Graph, Node, Edge };

  Kind kind = Kind::Graph;
  NodeId node_id;
  std::size_t edge_index = 0;

  static Subject graph() { return {}; }
  static Subject node(NodeId id) { return {Kind::Node, std::move(id), 0}; }
  static Subject edge(std::size_t index) { return {Kind::Edge, {}, index}; }

  friend auto operator<=>(const Subject&, const Subject&) = default;
};

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string rule;
  std::string message;
  std::optional<SourceLocation> location;
  std::optional<Subject> subject;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::optional<Node> node_by_id(const CourseGraph& graph, std::string_view id);

std::size_t video_count(const Node& node);

std::size_t resource_count(const Node& node, ResourceKind kind);

/// Human-readable subject, e.g. "node mpl" or "edge mpl->labor_demand".
std::string describe(const CourseGraph& graph, const Subject& subject);

}  // namespace syllagraph
