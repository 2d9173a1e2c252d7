#include "syllagraph/model.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace syllagraph {

std::string_view to_string(Side side) {
  switch (side) {
    case Side::AS: return "as";
    case Side::AD: return "ad";
    case Side::Other: return "other";
  }
  return "other";
}

std::string_view to_string(RelationshipKind kind) {
  switch (kind) {
    case RelationshipKind::Derivative: return "derivative";
    case RelationshipKind::CommonPart: return "common_part";
    case RelationshipKind::Perspective: return "perspective";
  }
  return "derivative";
}

std::string_view to_string(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::Video: return "video";
    case ResourceKind::Text: return "text";
    case ResourceKind::Audio: return "audio";
  }
  return "video";
}

std::string_view to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

std::optional<Side> side_from_string(std::string_view text) {
  if (text == "as") return Side::AS;
  if (text == "ad") return Side::AD;
  if (text == "other") return Side::Other;
  return std::nullopt;
}

std::optional<RelationshipKind> kind_from_string(std::string_view text) {
  if (text == "derivative") return RelationshipKind::Derivative;
  if (text == "common_part") return RelationshipKind::CommonPart;
  if (text == "perspective") return RelationshipKind::Perspective;
  return std::nullopt;
}

std::optional<ResourceKind> resource_kind_from_string(std::string_view text) {
  if (text == "video") return ResourceKind::Video;
  if (text == "text") return ResourceKind::Text;
  if (text == "audio") return ResourceKind::Audio;
  return std::nullopt;
}

bool is_valid_node_id(std::string_view id) {
  if (id.empty() || id.front() < 'a' || id.front() > 'z') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

namespace {

bool blank(std::string_view text) {
  return text.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

bool has_http_scheme(std::string_view url) {
  return url.starts_with("http://") || url.starts_with("https://");
}

[[noreturn]] void fail(const std::string& what) { throw InvariantError(what); }

void check_node(const Node& node) {
  if (!is_valid_node_id(node.id)) fail("invalid node id '" + node.id + "'");
  if (node.title.empty()) fail("node '" + node.id + "' has an empty title");
  for (int coord : {node.pos.column, node.pos.row}) {
    if (coord < 0 || coord > kMaxGridCoord) {
      fail("node '" + node.id + "' position out of range [0, 999]");
    }
  }
  for (std::size_t i = 0; i < node.chapters.size(); ++i) {
    if (node.chapters[i] < 1) {
      fail("node '" + node.id + "' has a non-positive chapter");
    }
    if (i > 0 && node.chapters[i] <= node.chapters[i - 1]) {
      fail("node '" + node.id + "' chapters are not strictly increasing");
    }
  }
  for (const auto& symbol : node.symbols) {
    if (symbol.empty()) fail("node '" + node.id + "' uses an empty symbol");
  }
  for (const auto& res : node.resources) {
    if (!has_http_scheme(res.url)) {
      fail("node '" + node.id + "' resource url must start with http:// or "
           "https://: " + res.url);
    }
    if (res.label.empty()) {
      fail("node '" + node.id + "' resource has an empty label");
    }
  }
}

}  // namespace

CourseGraph::CourseGraph(std::string title, NodeId sink_id,
                         std::vector<Node> nodes, std::vector<Edge> edges,
                         std::vector<SymbolEntry> glossary,
                         std::map<std::string, std::string> meta)
    : title_(std::move(title)),
      sink_id_(std::move(sink_id)),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      glossary_(std::move(glossary)),
      meta_(std::move(meta)) {
  if (nodes_.empty()) fail("graph has no nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    check_node(nodes_[i]);
    if (!index_.emplace(nodes_[i].id, i).second) {
      fail("duplicate node id '" + nodes_[i].id + "'");
    }
  }
  if (!index_.contains(sink_id_)) {
    fail("sink '" + sink_id_ + "' names no declared node");
  }

  std::set<std::tuple<std::string, std::string, RelationshipKind>> seen;
  for (const auto& edge : edges_) {
    if (!index_.contains(edge.from) || !index_.contains(edge.to)) {
      fail("edge " + edge.from + " -> " + edge.to +
           " references an undeclared node");
    }
    if (edge.from == edge.to) fail("self-loop edge on '" + edge.from + "'");
    if (!seen.emplace(edge.from, edge.to, edge.kind).second) {
      fail("duplicate edge " + edge.from + " -> " + edge.to + " : " +
           std::string(to_string(edge.kind)));
    }
    if (edge.note && blank(*edge.note)) {
      fail("edge " + edge.from + " -> " + edge.to + " has a blank note");
    }
  }

  std::set<std::string_view> keys;
  for (const auto& entry : glossary_) {
    if (entry.key.empty() || entry.meaning.empty()) {
      fail("glossary entry with empty key or meaning");
    }
    if (!keys.insert(entry.key).second) {
      fail("duplicate glossary key '" + entry.key + "'");
    }
  }
}

std::optional<std::size_t> CourseGraph::index_of(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Node> node_by_id(const CourseGraph& graph, std::string_view id) {
  auto index = graph.index_of(id);
  if (!index) return std::nullopt;
  return graph.nodes()[*index];
}

std::size_t resource_count(const Node& node, ResourceKind kind) {
  return static_cast<std::size_t>(
      std::count_if(node.resources.begin(), node.resources.end(),
                    [kind](const Resource& r) { return r.kind == kind; }));
}

std::size_t video_count(const Node& node) {
  return resource_count(node, ResourceKind::Video);
}

std::string describe(const CourseGraph& graph, const Subject& subject) {
  switch (subject.kind) {
    case Subject::Kind::Graph: return "graph";
    case Subject::Kind::Node: return "node " + subject.node_id;
    case Subject::Kind::Edge:
      if (subject.edge_index < graph.edges().size()) {
        const auto& e = graph.edges()[subject.edge_index];
        return "edge " + e.from + "->" + e.to + ":" +
               std::string(to_string(e.kind));
      }
      return "edge #" + std::to_string(subject.edge_index);
  }
  return "graph";
}

}  // namespace syllagraph
