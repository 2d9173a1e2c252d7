#include "syllagraph/corpus.hpp"

#include <stdexcept>

#include <json.hpp>

#include "syllagraph/dsl.hpp"
#include "syllagraph_corpus.hpp"

namespace syllagraph {

std::string_view to_string(Provenance provenance) {
  return provenance == Provenance::Paper ? "paper" : "curated";
}

namespace {

Provenance provenance_from(const std::string& text) {
  if (text == "paper") return Provenance::Paper;
  if (text == "curated") return Provenance::Curated;
  throw std::logic_error("unknown provenance tag '" + text + "'");
}

}  // namespace

std::string_view corpus_source() { return embedded::kCorpusSource; }

std::string_view corpus_manifest_source() { return embedded::kCorpusManifest; }

const CourseGraph& load_corpus() {
  static const CourseGraph graph = [] {
    auto result = parse(corpus_source());
    if (!result.ok()) {
      const auto& e = result.errors.front();
      throw std::logic_error("embedded corpus fails to parse at " +
                             std::to_string(e.line) + ":" +
                             std::to_string(e.column) + ": " + e.message());
    }
    return std::move(*result.graph);
  }();
  return graph;
}

CorpusManifest load_manifest() {
  auto j = nlohmann::json::parse(corpus_manifest_source());
  CorpusManifest m;
  for (const auto& [id, tag] : j.at("nodes").items()) {
    m.nodes.emplace(id, provenance_from(tag.get<std::string>()));
  }
  m.edges = provenance_from(j.at("edges").get<std::string>());
  m.citation = j.at("citation").get<std::string>();
  m.notes = j.at("notes").get<std::map<std::string, std::string>>();
  return m;
}

}  // namespace syllagraph
