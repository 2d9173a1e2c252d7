#include "syllagraph/emit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "syllagraph/json_forms.hpp"
#include "syllagraph_assets.hpp"

namespace syllagraph {

namespace palette {

std::string_view stroke(RelationshipKind kind) {
  switch (kind) {
    case RelationshipKind::Derivative: return kDerivative;
    case RelationshipKind::CommonPart: return kCommonPart;
    case RelationshipKind::Perspective: return kPerspective;
  }
  return kDerivative;
}

std::string_view fill(Side side) {
  switch (side) {
    case Side::AS: return kAS;
    case Side::AD: return kAD;
    case Side::Other: return kOther;
  }
  return kOther;
}

}  // namespace palette

namespace {

void require_clean(const CourseGraph& graph) {
  auto findings = validate(graph);
  std::vector<Diagnostic> errors;
  std::copy_if(findings.begin(), findings.end(), std::back_inserter(errors),
               [](const auto& d) { return d.severity == Severity::Error; });
  if (!errors.empty()) throw EmissionRefused(std::move(errors));
}

std::string bundle_bytes(const CourseGraph& graph) {
  nlohmann::json highlights = nlohmann::json::object();
  for (const auto& [id, hs] : all_highlights(graph)) {
    highlights[id] = to_json(hs);
  }
  nlohmann::json bundle = {{"schema_version", kSchemaVersion},
                           {"generated_note", kGeneratedNote},
                           {"graph", to_json(graph)},
                           {"highlights", highlights},
                           {"stats", to_json(stats(graph))}};
  return dump(bundle);
}

// JSON embedded in a <script> element must not contain "</".
std::string script_safe(std::string_view json) {
  std::string out;
  out.reserve(json.size());
  for (std::size_t i = 0; i < json.size(); ++i) {
    out += json[i];
    if (json[i] == '<' && i + 1 < json.size() && json[i + 1] == '/') {
      out += '\\';
    }
  }
  return out;
}

std::string index_html(const CourseGraph& graph, std::string_view bundle) {
  std::ostringstream out;
  out << "<!DOCTYPE html>\n"
      << "<html lang=\"en\">\n"
      << "<head>\n"
      << "<meta charset=\"utf-8\">\n"
      << "<meta name=\"viewport\" content=\"width=device-width, "
         "initial-scale=1\">\n"
      << "<title>" << xml_escape(graph.title()) << "</title>\n"
      << "<link rel=\"stylesheet\" href=\"assets/viewer.css\">\n"
      << "</head>\n"
      << "<body>\n"
      << "<header class=\"sg-header\"><h1>" << xml_escape(graph.title())
      << "</h1></header>\n"
      << "<main id=\"syllagraph\" data-bundle=\"bundle.json\"></main>\n"
      << "<script>\n"
      << "window.SYLLAGRAPH_CONFIG = {\"hover_delay_ms\": 5000, "
         "\"show_edge_notes\": true};\n"
      << "</script>\n"
      << "<script id=\"syllagraph-bundle\" type=\"application/json\">\n"
      << script_safe(bundle) << "</script>\n"
      << "<script src=\"assets/viewer.js\"></script>\n"
      << "</body>\n"
      << "</html>\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Print view

using namespace print_layout;

struct Box {
  int x, y;
  int cx() const { return x + kCellWidth / 2; }
  int cy() const { return y + kCellHeight / 2; }
};

Box box_at(GridPos pos) {
  return {kGutter + pos.column * (kCellWidth + kGutter),
          kGutter + pos.row * (kCellHeight + kGutter)};
}

std::vector<std::string> wrap(std::string_view text, std::size_t width) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream words{std::string(text)};
  std::string word;
  while (words >> word) {
    if (!line.empty() && line.size() + 1 + word.size() > width) {
      lines.push_back(line);
      line.clear();
    }
    if (!line.empty()) line += ' ';
    line += word;
  }
  if (!line.empty()) lines.push_back(line);
  return lines;
}

std::string_view dash(RelationshipKind kind) {
  switch (kind) {
    case RelationshipKind::Derivative: return "";
    case RelationshipKind::CommonPart: return "8 4";
    case RelationshipKind::Perspective: return "2 4";
  }
  return "";
}

struct Segment {
  long x1, y1, x2, y2;
};

// Centre-to-centre line clipped to both box borders, shifted sideways by
// `offset` units to separate parallel edges.
Segment clip(const Box& a, const Box& b, int offset) {
  double dx = b.cx() - a.cx();
  double dy = b.cy() - a.cy();
  double len = std::hypot(dx, dy);
  double nx = -dy / len, ny = dx / len;
  double ax = a.cx() + nx * offset, ay = a.cy() + ny * offset;
  double bx = b.cx() + nx * offset, by = b.cy() + ny * offset;
  double half_w = kCellWidth / 2.0, half_h = kCellHeight / 2.0;
  double t = std::min(dx == 0 ? 1e9 : half_w / std::abs(dx),
                      dy == 0 ? 1e9 : half_h / std::abs(dy));
  return {std::lround(ax + t * dx), std::lround(ay + t * dy),
          std::lround(bx - t * dx), std::lround(by - t * dy)};
}

std::string svg(const CourseGraph& graph) {
  int max_col = 0, max_row = 0;
  for (const auto& n : graph.nodes()) {
    max_col = std::max(max_col, n.pos.column);
    max_row = std::max(max_row, n.pos.row);
  }
  int width = kGutter + (max_col + 1) * (kCellWidth + kGutter);
  int height = kGutter + (max_row + 1) * (kCellHeight + kGutter);

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << width << "\" height=\"" << height << "\" viewBox=\"0 0 " << width
      << " " << height << "\" font-family=\"Helvetica, Arial, sans-serif\">\n"
      << "<title>" << xml_escape(graph.title()) << "</title>\n"
      << "<defs>\n";
  for (auto kind : kAllKinds) {
    out << "<marker id=\"arrow-" << to_string(kind)
        << "\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" "
           "markerHeight=\"8\" orient=\"auto\"><polygon points=\"0,0 10,5 "
           "0,10\" fill=\""
        << palette::stroke(kind) << "\"/></marker>\n";
  }
  out << "</defs>\n<g class=\"nodes\">\n";

  for (const auto& n : graph.nodes()) {
    Box b = box_at(n.pos);
    out << "<g class=\"node side-" << to_string(n.side) << "\" id=\"node-"
        << n.id << "\">\n"
        << "<rect x=\"" << b.x << "\" y=\"" << b.y << "\" width=\""
        << kCellWidth << "\" height=\"" << kCellHeight
        << "\" rx=\"8\" fill=\"" << palette::fill(n.side)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    auto lines = wrap(n.title, 26);
    constexpr int kLineHeight = 13;
    int first_y = b.cy() - (static_cast<int>(lines.size()) - 1) * kLineHeight / 2 + 4;
    out << "<text x=\"" << b.cx() << "\" y=\"" << first_y
        << "\" text-anchor=\"middle\" font-size=\"11\" fill=\"#000000\">";
    for (std::size_t i = 0; i < lines.size(); ++i) {
      out << "<tspan x=\"" << b.cx() << "\" dy=\""
          << (i == 0 ? 0 : kLineHeight) << "\">" << xml_escape(lines[i])
          << "</tspan>";
    }
    out << "</text>\n";
    if (!n.chapters.empty()) {
      std::string chapters;
      for (std::size_t i = 0; i < n.chapters.size(); ++i) {
        if (i) chapters += ", ";
        chapters += std::to_string(n.chapters[i]);
      }
      out << "<text class=\"chapters\" x=\"" << b.x + kCellWidth - 6
          << "\" y=\"" << b.y + 14
          << "\" text-anchor=\"end\" font-size=\"12\" font-weight=\"bold\" "
             "fill=\""
          << palette::kChapter << "\">" << chapters << "</text>\n";
    }
    out << "</g>\n";
  }
  out << "</g>\n<g class=\"edges\">\n";

  // Parallel edges between the same pair of nodes get a sideways offset.
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>>
      groups;
  const auto& edges = graph.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto key = std::minmax(edges[k].from, edges[k].to);
    groups[{key.first, key.second}].push_back(k);
  }
  std::vector<int> offsets(edges.size(), 0);
  for (const auto& [pair, members] : groups) {
    auto m = static_cast<int>(members.size());
    for (int i = 0; i < m; ++i) {
      int off = 8 * (2 * i - (m - 1)) / 2;
      // Keep the offset side stable regardless of edge direction.
      if (edges[members[i]].from != pair.first) off = -off;
      offsets[members[i]] = off;
    }
  }

  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    auto from = box_at(graph.nodes()[*graph.index_of(e.from)].pos);
    auto to = box_at(graph.nodes()[*graph.index_of(e.to)].pos);
    auto seg = clip(from, to, offsets[k]);
    out << "<path class=\"edge kind-" << to_string(e.kind) << "\" d=\"M "
        << seg.x1 << " " << seg.y1 << " L " << seg.x2 << " " << seg.y2
        << "\" fill=\"none\" stroke=\"" << palette::stroke(e.kind)
        << "\" stroke-width=\"2\"";
    if (auto d = dash(e.kind); !d.empty()) {
      out << " stroke-dasharray=\"" << d << "\"";
    }
    out << " marker-end=\"url(#arrow-" << to_string(e.kind) << ")\"/>\n";
    if (e.note) {
      out << "<text class=\"edge-note\" x=\"" << (seg.x1 + seg.x2) / 2
          << "\" y=\"" << (seg.y1 + seg.y2) / 2 - 4
          << "\" text-anchor=\"middle\" font-size=\"9\" fill=\"#444444\">"
          << xml_escape(*e.note) << "</text>\n";
    }
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string emit_bundle(const CourseGraph& graph) {
  require_clean(graph);
  return bundle_bytes(graph);
}

SiteTree emit_site(const CourseGraph& graph) {
  require_clean(graph);
  auto bundle = bundle_bytes(graph);
  SiteTree tree;
  tree["index.html"] = index_html(graph, bundle);
  tree["bundle.json"] = std::move(bundle);
  tree["assets/viewer.js"] = std::string(assets::kViewerJs);
  tree["assets/viewer.css"] = std::string(assets::kViewerCss);
  return tree;
}

std::string emit_print(const CourseGraph& graph) {
  require_clean(graph);
  return svg(graph);
}

}  // namespace syllagraph
