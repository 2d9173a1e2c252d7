#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "support/test_support.hpp"
#include "syllagraph/analysis.hpp"
#include "syllagraph/cli.hpp"
#include "syllagraph/corpus.hpp"
#include "syllagraph/emit.hpp"
#include "syllagraph/json_forms.hpp"

using namespace syllagraph;
using syllagraph::cli::ExitCode;
using syllagraph::testing::TempDir;
namespace fs = std::filesystem;

namespace {

struct Run {
  ExitCode code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  auto code = cli::run(args, {out, err, false});
  return {code, out.str(), err.str()};
}

std::string corpus() { return SYLLAGRAPH_CORPUS_FILE; }

std::string fixture(const std::string& name) {
  return syllagraph::testing::fixture_path(name).string();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::set<std::string> listing(const fs::path& root) {
  std::set<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out.insert(fs::relative(e.path(), root).generic_string());
  return out;
}

// Exit status of the real binary.
int spawn(const std::string& args) {
  std::string cmd = std::string(SYLLAGRAPH_CLI_BINARY) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ValidateCleanCorpus) {
  auto r = run({"validate", corpus()});
  EXPECT_EQ(r.code, ExitCode::Success);
  EXPECT_NE(r.err.find("0 errors, 0 warnings"), std::string::npos);
}

TEST(Cli, ValidateWarningsStillSucceed) {
  EXPECT_EQ(run({"validate", fixture("r6.sgs")}).code, ExitCode::Success);
}

TEST(Cli, ValidateErrorsExitOne) {
  auto r = run({"validate", fixture("r4.sgs")});
  EXPECT_EQ(r.code, ExitCode::ValidationErrors);
  EXPECT_NE(r.err.find(":14:3: error[R4 sink-reachability]"), std::string::npos) << r.err;
}

TEST(Cli, ValidateJson) {
  auto r = run({"validate", fixture("r1.sgs"), "--format", "json"});
  EXPECT_EQ(r.code, ExitCode::ValidationErrors);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(j.at("error_count"), 1);
  ASSERT_EQ(j.at("diagnostics").size(), 1u);
  auto d = j.at("diagnostics")[0];
  EXPECT_EQ(d.at("rule"), "R1");
  EXPECT_EQ(d.at("rule_name"), "notation-consistency");
  EXPECT_EQ(d.at("subject"), "node a");
  EXPECT_EQ(d.at("location").at("line"), 5);
}

TEST(Cli, ValidateOptions) {
  EXPECT_EQ(run({"validate", fixture("r4.sgs"), "--disable", "sink-reachability"}).code,
            ExitCode::Success);
  EXPECT_EQ(run({"validate", fixture("r4.sgs"), "--disable", "R99"}).code,
            ExitCode::BadInvocation);
  EXPECT_EQ(run({"validate", corpus(), "--min-videos", "7", "--max-videos", "6"}).code,
            ExitCode::BadInvocation);
  auto r = run({"validate", fixture("r2.sgs"), "--max-note-chars", "100"});
  EXPECT_NE(r.err.find("0 errors, 0 warnings"), std::string::npos);
}

TEST(Cli, ParseFailureExitTwo) {
  TempDir dir;
  write(dir.path() / "bad.sgs", "syllabus \"T\" {\n  sink b\n  node a { title: \"A\" side: other pos: (0,0) }\n}\n");
  auto r = run({"validate", (dir.path() / "bad.sgs").string()});
  EXPECT_EQ(r.code, ExitCode::ParseFailure);
  EXPECT_NE(r.err.find("bad.sgs:2:8: error: expected declared node id, found b"),
            std::string::npos)
      << r.err;
}

TEST(Cli, MissingFileExitThree) {
  EXPECT_EQ(run({"stats", "/nonexistent/x.sgs"}).code, ExitCode::IoFailure);
}

TEST(Cli, BadInvocationExitFour) {
  EXPECT_EQ(run({}).code, ExitCode::BadInvocation);
  EXPECT_EQ(run({"frobnicate"}).code, ExitCode::BadInvocation);
  EXPECT_EQ(run({"highlight", corpus()}).code, ExitCode::BadInvocation);
  EXPECT_EQ(run({"stats", corpus(), "--format", "xml"}).code, ExitCode::BadInvocation);
  EXPECT_EQ(run({"stats", "--help"}).code, ExitCode::Success);
}

TEST(Cli, HighlightUnknownNodeListsIds) {
  auto r = run({"highlight", corpus(), "--node", "nope"});
  EXPECT_EQ(r.code, ExitCode::BadInvocation);
  EXPECT_NE(r.err.find("unknown node 'nope'"), std::string::npos);
  EXPECT_NE(r.err.find("gen_eq"), std::string::npos);
  EXPECT_NE(r.err.find("leisure_work"), std::string::npos);
}

TEST(Cli, HighlightJson) {
  auto r = run({"highlight", corpus(), "--node", "leisure_work", "--format", "json"});
  ASSERT_EQ(r.code, ExitCode::Success);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(highlight_from_json(j), highlight(load_corpus(), "leisure_work"));
  EXPECT_EQ(j.at("edge_labels").size(), 5u);
}

TEST(Cli, StatsJsonRoundTrips) {
  auto r = run({"stats", corpus(), "--format", "json"});
  ASSERT_EQ(r.code, ExitCode::Success);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(stats_from_json(j.at("stats")), stats(load_corpus()));
}

TEST(Cli, StatsText) {
  auto r = run({"stats", corpus()});
  EXPECT_NE(r.out.find("video links            139"), std::string::npos) << r.out;
}

TEST(Cli, EmitEachArtifact) {
  TempDir dir;
  auto site = dir.path() / "site";
  ASSERT_EQ(run({"emit", corpus(), "--out", site.string(), "--what", "site"}).code,
            ExitCode::Success);
  EXPECT_EQ(listing(site), (std::set<std::string>{"index.html", "bundle.json", "assets/viewer.js",
                                                  "assets/viewer.css"}));
  EXPECT_EQ(syllagraph::testing::read_file(site / "bundle.json"), emit_bundle(load_corpus()));

  auto bundle = dir.path() / "bundle";
  ASSERT_EQ(run({"emit", corpus(), "--out", bundle.string(), "--what", "bundle"}).code,
            ExitCode::Success);
  EXPECT_EQ(listing(bundle), (std::set<std::string>{"bundle.json"}));

  auto print = dir.path() / "print";
  ASSERT_EQ(run({"emit", corpus(), "--out", print.string(), "--what", "print"}).code,
            ExitCode::Success);
  EXPECT_EQ(syllagraph::testing::read_file(print / "print.svg"), emit_print(load_corpus()));
}

TEST(Cli, EmitRefusesErrorsAndWritesNothing) {
  TempDir dir;
  auto out = dir.path() / "out";
  auto r = run({"emit", fixture("r4.sgs"), "--out", out.string(), "--what", "site"});
  EXPECT_EQ(r.code, ExitCode::ValidationErrors);
  EXPECT_NE(r.err.find("R4"), std::string::npos);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, EmitFailureLeavesNoPartialSite) {
  TempDir dir;
  auto out = dir.path() / "out";
  fs::create_directories(out / "index.html");  // a directory where a file must go
  auto r = run({"emit", corpus(), "--out", out.string(), "--what", "site"});
  EXPECT_EQ(r.code, ExitCode::IoFailure);
  EXPECT_EQ(listing(out), std::set<std::string>{});
}

TEST(Cli, CheckLinksStrictness) {
  syllagraph::testing::MockServer server;
  TempDir dir;
  auto src = dir.path() / "links.sgs";
  auto node = [&](const std::string& id, int col, const std::string& path) {
    return "node " + id + " { title: \"" + id + "\" side: as pos: (" + std::to_string(col) +
           ", 0) text: \"" + server.url(path) + "\" \"t\" }\n";
  };
  write(src, "syllabus \"L\" { sink a\n" + node("a", 0, "/ok") + node("b", 1, "/missing") +
                 "edge b -> a : derivative }\n");
  auto lenient = run({"check-links", src.string(), "--timeout-ms", "1000"});
  EXPECT_EQ(lenient.code, ExitCode::Success);
  EXPECT_NE(lenient.out.find("ok 1, broken 1, timeout 0, invalid_url 0"), std::string::npos)
      << lenient.out;
  auto strict = run({"check-links", src.string(), "--strict", "--format", "json"});
  EXPECT_EQ(strict.code, ExitCode::ValidationErrors);
  auto j = nlohmann::json::parse(strict.out);
  EXPECT_EQ(j.at("summary").at("broken"), 1);
  EXPECT_EQ(j.at("entries")[1].at("http_status"), 404);
  EXPECT_EQ(run({"check-links", src.string(), "--concurrency", "0"}).code,
            ExitCode::BadInvocation);
}

TEST(Cli, BinaryExitCodes) {
  EXPECT_EQ(spawn("validate " + corpus()), 0);
  EXPECT_EQ(spawn("validate " + fixture("r4.sgs")), 1);
  EXPECT_EQ(spawn("validate /nonexistent.sgs"), 3);
  EXPECT_EQ(spawn("highlight " + corpus() + " --node nope"), 4);
  EXPECT_EQ(spawn("bogus"), 4);
}
