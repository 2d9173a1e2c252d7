#include "syllagraph/json_forms.hpp"

#include <stdexcept>

namespace syllagraph {

using nlohmann::json;

json to_json(const CourseGraph& graph) {
  json nodes = json::array();
  for (const auto& n : graph.nodes()) {
    json resources = json::array();
    for (const auto& r : n.resources) {
      resources.push_back(
          {{"kind", to_string(r.kind)}, {"url", r.url}, {"label", r.label}});
    }
    json node = {{"id", n.id},
                 {"title", n.title},
                 {"side", to_string(n.side)},
                 {"pos", {n.pos.column, n.pos.row}},
                 {"chapters", n.chapters},
                 {"symbols", n.symbols},
                 {"resources", resources}};
    if (n.note) node["note"] = *n.note;
    nodes.push_back(std::move(node));
  }
  json edges = json::array();
  for (const auto& e : graph.edges()) {
    json edge = {{"from", e.from}, {"to", e.to}, {"kind", to_string(e.kind)}};
    if (e.note) edge["note"] = *e.note;
    edges.push_back(std::move(edge));
  }
  json glossary = json::array();
  for (const auto& s : graph.glossary()) {
    glossary.push_back({{"key", s.key}, {"meaning", s.meaning}});
  }
  return {{"title", graph.title()},
          {"sink", graph.sink_id()},
          {"meta", graph.meta()},
          {"nodes", nodes},
          {"edges", edges},
          {"glossary", glossary}};
}

json to_json(const HighlightSet& highlight) {
  return {{"origin", highlight.origin},
          {"nodes", highlight.node_ids},
          {"edges", highlight.edge_indices}};
}

HighlightSet highlight_from_json(const json& j) {
  HighlightSet hs;
  hs.origin = j.at("origin").get<std::string>();
  hs.node_ids = j.at("nodes").get<std::set<NodeId>>();
  hs.edge_indices = j.at("edges").get<std::set<std::size_t>>();
  return hs;
}

json to_json(const Stats& stats) {
  json sides = json::object();
  for (const auto& [side, count] : stats.side_counts) {
    sides[std::string(to_string(side))] = count;
  }
  json kinds = json::object();
  for (const auto& [kind, count] : stats.kind_counts) {
    kinds[std::string(to_string(kind))] = count;
  }
  return {{"node_count", stats.node_count},
          {"edge_count", stats.edge_count},
          {"side_counts", sides},
          {"video_link_total", stats.video_link_total},
          {"text_link_total", stats.text_link_total},
          {"kind_counts", kinds}};
}

Stats stats_from_json(const json& j) {
  Stats s;
  s.node_count = j.at("node_count").get<std::size_t>();
  s.edge_count = j.at("edge_count").get<std::size_t>();
  s.video_link_total = j.at("video_link_total").get<std::size_t>();
  s.text_link_total = j.at("text_link_total").get<std::size_t>();
  for (const auto& [name, count] : j.at("side_counts").items()) {
    auto side = side_from_string(name);
    if (!side) throw std::invalid_argument("unknown side '" + name + "'");
    s.side_counts[*side] = count.get<std::size_t>();
  }
  for (const auto& [name, count] : j.at("kind_counts").items()) {
    auto kind = kind_from_string(name);
    if (!kind) throw std::invalid_argument("unknown kind '" + name + "'");
    s.kind_counts[*kind] = count.get<std::size_t>();
  }
  return s;
}

json to_json(const Diagnostic& d, const CourseGraph& graph) {
  json out = {{"severity", to_string(d.severity)},
              {"rule", d.rule},
              {"message", d.message}};
  if (const auto* info = find_rule(d.rule)) out["rule_name"] = info->name;
  if (d.location) {
    out["location"] = {{"line", d.location->line},
                       {"column", d.location->column}};
  }
  if (d.subject) out["subject"] = describe(graph, *d.subject);
  return out;
}

std::string dump(const json& j) {
  return j.dump(2, ' ', false, json::error_handler_t::strict) + "\n";
}

}  // namespace syllagraph
