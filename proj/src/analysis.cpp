#include "syllagraph/analysis.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <tuple>

namespace syllagraph {

void RuleConfig::check() const {
  if (max_note_chars < 1) {
    throw std::invalid_argument("max_note_chars must be at least 1");
  }
  if (min_videos > max_videos) {
    throw std::invalid_argument("min_videos must not exceed max_videos");
  }
}

const std::vector<RuleInfo>& rule_registry() {
  static const std::vector<RuleInfo> rules = {
      {"R1", "notation-consistency", Severity::Error,
       "every symbol a node uses is defined in the glossary"},
      {"R2", "note-brevity", Severity::Warning,
       "node and edge notes stay within max_note_chars"},
      {"R3", "video-range", Severity::Warning,
       "each node links between min_videos and max_videos videos"},
      {"R4", "sink-reachability", Severity::Error,
       "every connected node has a route to the sink"},
      {"R5", "position-overlap", Severity::Warning,
       "no two nodes share a grid position"},
      {"R6", "orphan-node", Severity::Warning,
       "every non-sink node has at least one incident edge"},
      {"R7", "acyclicity", Severity::Warning,
       "the graph has no directed cycle"},
      {"R8", "direct-media-link", Severity::Warning,
       "video and audio links point at a media file or an embed player"},
  };
  return rules;
}

const RuleInfo* find_rule(std::string_view id_or_name) {
  for (const auto& r : rule_registry()) {
    if (r.id == id_or_name || r.name == id_or_name) return &r;
  }
  return nullptr;
}

namespace {

using Adjacency = std::vector<std::vector<std::size_t>>;

struct Indexed {
  Adjacency out;
  Adjacency in;
};

Indexed index_edges(const CourseGraph& graph) {
  Indexed ix;
  ix.out.resize(graph.nodes().size());
  ix.in.resize(graph.nodes().size());
  for (const auto& e : graph.edges()) {
    auto from = *graph.index_of(e.from);
    auto to = *graph.index_of(e.to);
    ix.out[from].push_back(to);
    ix.in[to].push_back(from);
  }
  return ix;
}

std::size_t require(const CourseGraph& graph, std::string_view id) {
  auto index = graph.index_of(id);
  if (!index) throw UnknownNodeError(std::string(id));
  return *index;
}

std::vector<bool> bfs(const Adjacency& adj, std::size_t start) {
  std::vector<bool> seen(adj.size(), false);
  std::deque<std::size_t> queue{start};
  seen[start] = true;
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    for (auto v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

std::set<NodeId> to_ids(const CourseGraph& graph,
                        const std::vector<bool>& mask) {
  std::set<NodeId> ids;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) ids.insert(graph.nodes()[i].id);
  }
  return ids;
}

HighlightSet highlight_with(const CourseGraph& graph, const Indexed& ix,
                            const std::vector<bool>& to_sink,
                            std::size_t origin) {
  HighlightSet hs;
  hs.origin = graph.nodes()[origin].id;
  if (!to_sink[origin]) return hs;
  auto forward = bfs(ix.out, origin);
  for (std::size_t i = 0; i < forward.size(); ++i) {
    if (forward[i] && to_sink[i]) hs.node_ids.insert(graph.nodes()[i].id);
  }
  const auto& edges = graph.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto u = *graph.index_of(edges[k].from);
    auto v = *graph.index_of(edges[k].to);
    if (forward[u] && to_sink[v]) hs.edge_indices.insert(k);
  }
  return hs;
}

std::size_t code_points(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_direct_media(std::string_view url) {
  static constexpr std::array<std::string_view, 13> kExtensions = {
      ".mp4", ".m4v", ".webm", ".ogv", ".ogg", ".mov", ".mkv",
      ".mp3", ".m4a", ".wav",  ".oga", ".flac", ".aac"};
  static constexpr std::array<std::string_view, 4> kEmbedPaths = {
      "youtube.com/embed/", "youtube-nocookie.com/embed/",
      "player.vimeo.com/video/", "archive.org/embed/"};
  std::string u = lower(url);
  auto cut = u.find_first_of("?#");
  if (cut != std::string::npos) u.resize(cut);
  for (auto ext : kExtensions) {
    if (u.ends_with(ext)) return true;
  }
  auto scheme_end = u.find("://");
  std::string_view rest =
      scheme_end == std::string::npos ? std::string_view(u)
                                      : std::string_view(u).substr(scheme_end + 3);
  if (rest.starts_with("www.")) rest.remove_prefix(4);
  for (auto embed : kEmbedPaths) {
    if (rest.starts_with(embed) && rest.size() > embed.size()) return true;
  }
  return false;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

class Linter {
 public:
  Linter(const CourseGraph& graph, const RuleConfig& config)
      : g_(graph), cfg_(config), ix_(index_edges(graph)) {}

  std::vector<Diagnostic> run() {
    notation_consistency();
    note_brevity();
    video_range();
    sink_reachability();
    position_overlap();
    orphan_nodes();
    acyclicity();
    direct_media_links();
    std::stable_sort(out_.begin(), out_.end(), [](const auto& a, const auto& b) {
      return std::tie(a.severity, a.rule, a.subject, a.message) <
             std::tie(b.severity, b.rule, b.subject, b.message);
    });
    return std::move(out_);
  }

 private:
  bool enabled(std::string_view id) const {
    const auto* rule = find_rule(id);
    return !cfg_.rules_disabled.contains(std::string(id)) &&
           !cfg_.rules_disabled.contains(std::string(rule->name));
  }

  void report(std::string_view id, std::string message, Subject subject) {
    const auto* rule = find_rule(id);
    out_.push_back({rule->severity, std::string(rule->id), std::move(message),
                    std::nullopt, std::move(subject)});
  }

  bool isolated(std::size_t i) const {
    return ix_.out[i].empty() && ix_.in[i].empty();
  }

  void notation_consistency() {
    if (!enabled("R1")) return;
    std::set<std::string_view> keys;
    for (const auto& s : g_.glossary()) keys.insert(s.key);
    for (const auto& n : g_.nodes()) {
      for (const auto& sym : n.symbols) {
        if (!keys.contains(sym)) {
          report("R1", "symbol '" + sym + "' is not defined in the glossary",
                 Subject::node(n.id));
        }
      }
    }
  }

  void note_brevity() {
    if (!enabled("R2")) return;
    auto limit = static_cast<std::size_t>(cfg_.max_note_chars);
    for (const auto& n : g_.nodes()) {
      if (n.note && code_points(*n.note) > limit) {
        report("R2",
               "note has " + std::to_string(code_points(*n.note)) +
                   " characters; limit is " + std::to_string(limit),
               Subject::node(n.id));
      }
    }
    for (std::size_t k = 0; k < g_.edges().size(); ++k) {
      const auto& note = g_.edges()[k].note;
      if (note && code_points(*note) > limit) {
        report("R2",
               "note has " + std::to_string(code_points(*note)) +
                   " characters; limit is " + std::to_string(limit),
               Subject::edge(k));
      }
    }
  }

  void video_range() {
    if (!enabled("R3")) return;
    for (const auto& n : g_.nodes()) {
      auto count = static_cast<int>(video_count(n));
      if (count < cfg_.min_videos || count > cfg_.max_videos) {
        report("R3",
               "node links " + std::to_string(count) + " videos; expected " +
                   std::to_string(cfg_.min_videos) + " to " +
                   std::to_string(cfg_.max_videos),
               Subject::node(n.id));
      }
    }
  }

  // Isolated nodes are left to R6 so each defect is reported once.
  void sink_reachability() {
    if (!enabled("R4")) return;
    auto to_sink = bfs(ix_.in, *g_.index_of(g_.sink_id()));
    for (std::size_t i = 0; i < g_.nodes().size(); ++i) {
      if (!to_sink[i] && !isolated(i)) {
        report("R4", "no route to sink '" + g_.sink_id() + "'",
               Subject::node(g_.nodes()[i].id));
      }
    }
  }

  void position_overlap() {
    if (!enabled("R5")) return;
    std::map<GridPos, std::vector<std::string>> by_pos;
    for (const auto& n : g_.nodes()) by_pos[n.pos].push_back(n.id);
    for (auto& [pos, ids] : by_pos) {
      if (ids.size() < 2) continue;
      std::sort(ids.begin(), ids.end());
      report("R5",
             "nodes " + join(ids, ", ") + " share position (" +
                 std::to_string(pos.column) + ", " + std::to_string(pos.row) +
                 ")",
             Subject::node(ids.front()));
    }
  }

  void orphan_nodes() {
    if (!enabled("R6")) return;
    for (std::size_t i = 0; i < g_.nodes().size(); ++i) {
      const auto& n = g_.nodes()[i];
      if (n.id != g_.sink_id() && isolated(i)) {
        report("R6", "node has no incident edge", Subject::node(n.id));
      }
    }
  }

  void acyclicity() {
    if (!enabled("R7")) return;
    const auto count = g_.nodes().size();
    std::vector<bool> assigned(count, false);
    for (std::size_t i = 0; i < count; ++i) {
      if (assigned[i]) continue;
      auto fwd = bfs(ix_.out, i);
      auto bwd = bfs(ix_.in, i);
      std::vector<std::string> members;
      for (std::size_t j = 0; j < count; ++j) {
        if (fwd[j] && bwd[j]) {
          assigned[j] = true;
          members.push_back(g_.nodes()[j].id);
        }
      }
      if (members.size() < 2) continue;
      std::sort(members.begin(), members.end());
      report("R7", "directed cycle through " + join(members, ", "),
             Subject::node(members.front()));
    }
  }

  void direct_media_links() {
    if (!enabled("R8")) return;
    for (const auto& n : g_.nodes()) {
      for (const auto& r : n.resources) {
        if (r.kind == ResourceKind::Text || is_direct_media(r.url)) continue;
        report("R8",
               std::string(to_string(r.kind)) +
                   " link is not a direct media file or embed: " + r.url,
               Subject::node(n.id));
      }
    }
  }

  const CourseGraph& g_;
  const RuleConfig& cfg_;
  Indexed ix_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::set<NodeId> reachable_from(const CourseGraph& graph, std::string_view id) {
  auto start = require(graph, id);
  return to_ids(graph, bfs(index_edges(graph).out, start));
}

std::set<NodeId> reaches(const CourseGraph& graph, std::string_view id) {
  auto start = require(graph, id);
  return to_ids(graph, bfs(index_edges(graph).in, start));
}

HighlightSet highlight(const CourseGraph& graph, std::string_view id) {
  auto origin = require(graph, id);
  auto ix = index_edges(graph);
  auto to_sink = bfs(ix.in, *graph.index_of(graph.sink_id()));
  return highlight_with(graph, ix, to_sink, origin);
}

std::map<NodeId, HighlightSet> all_highlights(const CourseGraph& graph) {
  auto ix = index_edges(graph);
  auto to_sink = bfs(ix.in, *graph.index_of(graph.sink_id()));
  std::map<NodeId, HighlightSet> out;
  for (std::size_t i = 0; i < graph.nodes().size(); ++i) {
    out.emplace(graph.nodes()[i].id, highlight_with(graph, ix, to_sink, i));
  }
  return out;
}

std::vector<Diagnostic> validate(const CourseGraph& graph,
                                 const RuleConfig& config) {
  config.check();
  return Linter(graph, config).run();
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const auto& d) { return d.severity == Severity::Error; });
}

Stats stats(const CourseGraph& graph) {
  Stats s;
  s.node_count = graph.nodes().size();
  s.edge_count = graph.edges().size();
  for (auto side : kAllSides) s.side_counts[side] = 0;
  for (auto kind : kAllKinds) s.kind_counts[kind] = 0;
  for (const auto& n : graph.nodes()) {
    ++s.side_counts[n.side];
    s.video_link_total += resource_count(n, ResourceKind::Video);
    s.text_link_total += resource_count(n, ResourceKind::Text);
  }
  for (const auto& e : graph.edges()) ++s.kind_counts[e.kind];
  return s;
}

std::vector<NodeId> course_order(const CourseGraph& graph) {
  std::vector<const Node*> nodes;
  for (const auto& n : graph.nodes()) nodes.push_back(&n);
  std::sort(nodes.begin(), nodes.end(), [](const Node* a, const Node* b) {
    bool ta = !a->chapters.empty();
    bool tb = !b->chapters.empty();
    if (ta != tb) return ta;
    int ca = ta ? a->chapters.front() : 0;
    int cb = tb ? b->chapters.front() : 0;
    return std::tie(ca, a->pos.row, a->pos.column, a->id) <
           std::tie(cb, b->pos.row, b->pos.column, b->id);
  });
  std::vector<NodeId> out;
  out.reserve(nodes.size());
  for (const auto* n : nodes) out.push_back(n->id);
  return out;
}

}  // namespace syllagraph
