#include "syllagraph/cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "syllagraph/analysis.hpp"
#include "syllagraph/dsl.hpp"
#include "syllagraph/emit.hpp"
#include "syllagraph/json_forms.hpp"
#include "syllagraph/linkcheck.hpp"

namespace fs = std::filesystem;

namespace syllagraph::cli {

bool want_color() {
  return std::getenv("SYLLAGRAPH_NO_COLOR") == nullptr && isatty(STDERR_FILENO);
}

namespace {

struct Failure {
  ExitCode code;
};

struct Loaded {
  CourseGraph graph;
  SourceMap map;
};

std::string paint(const Streams& io, std::string_view code, std::string_view text) {
  if (!io.color) return std::string(text);
  return "\x1b[" + std::string(code) + "m" + std::string(text) + "\x1b[0m";
}

Loaded load(const std::string& path, const Streams& io) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    io.err << path << ": error: cannot read file\n";
    throw Failure{ExitCode::IoFailure};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    io.err << path << ": error: read failed\n";
    throw Failure{ExitCode::IoFailure};
  }
  auto result = parse(buf.str());
  if (!result.ok()) {
    for (const auto& e : result.errors) {
      io.err << path << ":" << e.line << ":" << e.column << ": "
             << paint(io, "1;31", "error") << ": " << e.message() << "\n";
    }
    throw Failure{ExitCode::ParseFailure};
  }
  return {std::move(*result.graph), std::move(result.locations)};
}

void print_diagnostics(const std::string& path, const CourseGraph& graph,
                       const std::vector<Diagnostic>& diags, const Streams& io) {
  std::size_t errors = 0, warnings = 0;
  for (const auto& d : diags) {
    (d.severity == Severity::Error ? errors : warnings)++;
    io.err << path;
    if (d.location) io.err << ":" << d.location->line << ":" << d.location->column;
    io.err << ": "
           << (d.severity == Severity::Error ? paint(io, "1;31", "error")
                                             : paint(io, "1;33", "warning"))
           << "[" << d.rule << " " << find_rule(d.rule)->name << "]: " << d.message;
    if (d.subject) io.err << " (" << describe(graph, *d.subject) << ")";
    io.err << "\n";
  }
  io.err << errors << (errors == 1 ? " error, " : " errors, ") << warnings
         << (warnings == 1 ? " warning\n" : " warnings\n");
}

nlohmann::json diagnostics_json(const CourseGraph& graph,
                                const std::vector<Diagnostic>& diags) {
  nlohmann::json list = nlohmann::json::array();
  std::size_t errors = 0;
  for (const auto& d : diags) {
    list.push_back(to_json(d, graph));
    if (d.severity == Severity::Error) ++errors;
  }
  return {{"schema_version", kSchemaVersion},
          {"diagnostics", list},
          {"error_count", errors},
          {"warning_count", diags.size() - errors}};
}

std::string edge_label(const Edge& e) {
  return e.from + "->" + e.to + ":" + std::string(to_string(e.kind));
}

// Writes every file to a temporary sibling first and renames only after all
// writes succeeded, so a failure leaves no partial artifact behind.
std::vector<fs::path> write_atomically(const fs::path& root, const SiteTree& files,
                                       const Streams& io) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) {
    io.err << root.string() << ": error: cannot create directory: " << ec.message() << "\n";
    throw Failure{ExitCode::IoFailure};
  }
  std::vector<std::pair<fs::path, fs::path>> staged;
  auto discard = [&] {
    for (const auto& [tmp, dst] : staged) fs::remove(tmp, ec);
  };
  for (const auto& [rel, bytes] : files) {
    fs::path dst = root / rel;
    fs::path tmp = dst;
    tmp += ".tmp-" + std::to_string(::getpid());
    fs::create_directories(dst.parent_path(), ec);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) staged.emplace_back(tmp, dst);
    if (out) out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (out) out.close();
    if (!out) {
      io.err << dst.string() << ": error: cannot write file\n";
      discard();
      throw Failure{ExitCode::IoFailure};
    }
  }
  std::vector<fs::path> written;
  for (const auto& [tmp, dst] : staged) {
    fs::rename(tmp, dst, ec);
    if (ec) {
      io.err << dst.string() << ": error: cannot move file into place: " << ec.message() << "\n";
      for (const auto& w : written) fs::remove(w, ec);
      discard();
      throw Failure{ExitCode::IoFailure};
    }
    written.push_back(dst);
  }
  return written;
}

struct Options {
  std::string path;
  std::string format = "text";
  RuleConfig rules;
  std::vector<std::string> disabled;
  std::string node;
  std::string out_dir;
  std::string what;
  CheckConfig links;
  bool strict = false;
};

ExitCode cmd_validate(const Options& opt, const Streams& io) {
  auto rules = opt.rules;
  for (const auto& r : opt.disabled) {
    const auto* info = find_rule(r);
    if (!info) {
      io.err << "error: unknown rule '" << r << "'\n";
      return ExitCode::BadInvocation;
    }
    rules.rules_disabled.insert(std::string(info->id));
  }
  try {
    rules.check();
  } catch (const std::invalid_argument& e) {
    io.err << "error: " << e.what() << "\n";
    return ExitCode::BadInvocation;
  }
  auto [graph, map] = load(opt.path, io);
  auto diags = validate(graph, rules);
  attach_locations(diags, map);
  if (opt.format == "json") {
    io.out << dump(diagnostics_json(graph, diags));
  } else {
    print_diagnostics(opt.path, graph, diags, io);
  }
  return has_errors(diags) ? ExitCode::ValidationErrors : ExitCode::Success;
}

ExitCode cmd_highlight(const Options& opt, const Streams& io) {
  auto [graph, map] = load(opt.path, io);
  if (!graph.index_of(opt.node)) {
    io.err << "error: unknown node '" << opt.node << "'; valid ids:";
    for (const auto& n : graph.nodes()) io.err << " " << n.id;
    io.err << "\n";
    return ExitCode::BadInvocation;
  }
  auto hs = highlight(graph, opt.node);
  std::vector<std::string> edges;
  for (auto k : hs.edge_indices) edges.push_back(edge_label(graph.edges()[k]));
  std::sort(edges.begin(), edges.end());
  if (opt.format == "json") {
    auto j = to_json(hs);
    j["schema_version"] = kSchemaVersion;
    j["edge_labels"] = edges;
    io.out << dump(j);
  } else {
    io.out << "origin: " << hs.origin << "\n";
    io.out << "nodes (" << hs.node_ids.size() << "):\n";
    for (const auto& n : hs.node_ids) io.out << "  " << n << "\n";
    io.out << "edges (" << edges.size() << "):\n";
    for (const auto& e : edges) io.out << "  " << e << "\n";
  }
  return ExitCode::Success;
}

ExitCode cmd_emit(const Options& opt, const Streams& io) {
  auto [graph, map] = load(opt.path, io);
  auto diags = validate(graph);
  if (has_errors(diags)) {
    attach_locations(diags, map);
    std::vector<Diagnostic> errors;
    std::copy_if(diags.begin(), diags.end(), std::back_inserter(errors),
                 [](const auto& d) { return d.severity == Severity::Error; });
    print_diagnostics(opt.path, graph, errors, io);
    return ExitCode::ValidationErrors;
  }
  SiteTree files;
  if (opt.what == "bundle") {
    files["bundle.json"] = emit_bundle(graph);
  } else if (opt.what == "site") {
    files = emit_site(graph);
  } else {
    files["print.svg"] = emit_print(graph);
  }
  for (const auto& p : write_atomically(opt.out_dir, files, io)) {
    io.out << p.string() << "\n";
  }
  return ExitCode::Success;
}

ExitCode cmd_check_links(const Options& opt, const Streams& io) {
  try {
    opt.links.check();
  } catch (const std::invalid_argument& e) {
    io.err << "error: " << e.what() << "\n";
    return ExitCode::BadInvocation;
  }
  auto [graph, map] = load(opt.path, io);
  auto report = check_links(graph, opt.links);
  const auto& s = report.summary;
  if (opt.format == "json") {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : report.entries) {
      nlohmann::json j = {{"node", e.node_id},
                          {"resource_index", e.resource_index},
                          {"url", e.url},
                          {"outcome", to_string(e.outcome)},
                          {"latency_ms", e.latency_ms}};
      j["http_status"] = e.http_status ? nlohmann::json(*e.http_status) : nullptr;
      entries.push_back(std::move(j));
    }
    io.out << dump({{"schema_version", kSchemaVersion},
                    {"entries", entries},
                    {"summary",
                     {{"ok", s.ok},
                      {"broken", s.broken},
                      {"timeout", s.timeout},
                      {"invalid_url", s.invalid_url}}}});
  } else {
    for (const auto& e : report.entries) {
      io.out << std::left << std::setw(12) << to_string(e.outcome) << " "
             << std::setw(4) << (e.http_status ? std::to_string(*e.http_status) : "-")
             << " " << std::right << std::setw(6) << e.latency_ms << "ms  " << e.node_id
             << "  " << e.url << "\n";
    }
    io.out << "ok " << s.ok << ", broken " << s.broken << ", timeout " << s.timeout
           << ", invalid_url " << s.invalid_url << "\n";
  }
  bool failing = s.broken + s.timeout + s.invalid_url > 0;
  return opt.strict && failing ? ExitCode::ValidationErrors : ExitCode::Success;
}

ExitCode cmd_stats(const Options& opt, const Streams& io) {
  auto [graph, map] = load(opt.path, io);
  auto st = stats(graph);
  if (opt.format == "json") {
    io.out << dump({{"schema_version", kSchemaVersion}, {"stats", to_json(st)}});
    return ExitCode::Success;
  }
  auto row = [&](std::string_view label, std::size_t value) {
    io.out << std::left << std::setw(20) << label << std::right << std::setw(6) << value
           << "\n";
  };
  row("nodes", st.node_count);
  row("edges", st.edge_count);
  for (auto side : kAllSides) row("side " + std::string(to_string(side)), st.side_counts.at(side));
  for (auto kind : kAllKinds) row("kind " + std::string(to_string(kind)), st.kind_counts.at(kind));
  row("video links", st.video_link_total);
  row("text links", st.text_link_total);
  return ExitCode::Success;
}

}  // namespace

ExitCode run(const std::vector<std::string>& args, const Streams& io) {
  CLI::App app{"syllagraph: compile course graphs into interactive syllabi",
               "syllagraph"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::string> formats{"text", "json"};

  auto* validate_cmd = app.add_subcommand("validate", "Lint a .sgs file");
  validate_cmd->add_option("path", opt.path, "Source file")->required();
  validate_cmd->add_option("--format", opt.format)->check(CLI::IsMember(formats));
  validate_cmd->add_option("--max-note-chars", opt.rules.max_note_chars);
  validate_cmd->add_option("--min-videos", opt.rules.min_videos);
  validate_cmd->add_option("--max-videos", opt.rules.max_videos);
  validate_cmd->add_option("--disable", opt.disabled, "Rule id or name to skip");

  auto* highlight_cmd =
      app.add_subcommand("highlight", "Print the routes from a node to the sink");
  highlight_cmd->add_option("path", opt.path, "Source file")->required();
  highlight_cmd->add_option("--node", opt.node, "Node id")->required();
  highlight_cmd->add_option("--format", opt.format)->check(CLI::IsMember(formats));

  auto* emit_cmd = app.add_subcommand("emit", "Write the bundle, site or print view");
  emit_cmd->add_option("path", opt.path, "Source file")->required();
  emit_cmd->add_option("--out", opt.out_dir, "Output directory")->required();
  emit_cmd->add_option("--what", opt.what, "Artifact to emit")
      ->required()
      ->check(CLI::IsMember({"bundle", "site", "print"}));

  auto* links_cmd = app.add_subcommand("check-links", "Audit resource URLs");
  links_cmd->add_option("path", opt.path, "Source file")->required();
  links_cmd->add_option("--timeout-ms", opt.links.timeout_ms);
  links_cmd->add_option("--concurrency", opt.links.max_concurrent);
  links_cmd->add_option("--retries", opt.links.retries);
  links_cmd->add_option("--user-agent", opt.links.user_agent);
  links_cmd->add_flag("--strict", opt.strict, "Exit 1 when any link is unhealthy");
  links_cmd->add_option("--format", opt.format)->check(CLI::IsMember(formats));

  auto* stats_cmd = app.add_subcommand("stats", "Print graph statistics");
  stats_cmd->add_option("path", opt.path, "Source file")->required();
  stats_cmd->add_option("--format", opt.format)->check(CLI::IsMember(formats));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, io.out, io.err);
    return code == 0 ? ExitCode::Success : ExitCode::BadInvocation;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(opt, io);
    if (highlight_cmd->parsed()) return cmd_highlight(opt, io);
    if (emit_cmd->parsed()) return cmd_emit(opt, io);
    if (links_cmd->parsed()) return cmd_check_links(opt, io);
    return cmd_stats(opt, io);
  } catch (const Failure& f) {
    return f.code;
  }
}

}  // namespace syllagraph::cli
