#pragma once

#include <map>
#include <string>
#include <string_view>

#include "syllagraph/model.hpp"

namespace syllagraph {

enum class Provenance { Paper, Curated };

std::string_view to_string(Provenance provenance);

/// Where each part of the bundled corpus comes from.
struct CorpusManifest {
  std::map<NodeId, Provenance> nodes;
  Provenance edges = Provenance::Curated;
  std::string citation;
  std::map<std::string, std::string> notes;
};

/// The bundled intermediate-macroeconomics syllabus, as `.sgs` text.
std::string_view corpus_source();

/// The bundled manifest, as JSON text.
std::string_view corpus_manifest_source();

/// Parses the embedded corpus. Throws std::logic_error if it does not parse,
/// which the test suite rules out.
const CourseGraph& load_corpus();

CorpusManifest load_manifest();

inline constexpr std::string_view kCorpusSink = "gen_eq";

}  // namespace syllagraph
