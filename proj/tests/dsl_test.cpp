#include <gtest/gtest.h>

#include <random>

#include "support/test_support.hpp"
#include "syllagraph/corpus.hpp"
#include "syllagraph/dsl.hpp"

using namespace syllagraph;

namespace {

constexpr const char* kMinimal =
    R"(syllabus "T" { sink a  node a { title: "A" side: other pos: (0,0) } })";

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t at = s.find(from); at != std::string::npos; at = s.find(from, at + to.size())) {
    s.replace(at, from.size(), to);
  }
  return s;
}

std::vector<ParseError> errors_of(std::string_view src) {
  auto r = parse(src);
  EXPECT_FALSE(r.ok()) << src;
  return r.errors;
}

}  // namespace

TEST(Parse, MinimalSource) {
  auto r = parse(kMinimal);
  ASSERT_TRUE(r.ok()) << r.errors.front().message();
  EXPECT_EQ(r.graph->nodes().size(), 1u);
  EXPECT_EQ(r.graph->edges().size(), 0u);
  EXPECT_EQ(r.graph->sink_id(), "a");
  EXPECT_EQ(r.graph->title(), "T");
}

TEST(Parse, UnknownSinkIsOneError) {
  auto errors = errors_of(replace_all(kMinimal, "sink a", "sink b"));
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0].expected, "declared node id");
  EXPECT_EQ(errors[0].found, "b");
  EXPECT_EQ(errors[0].line, 1);
  EXPECT_EQ(errors[0].column, 21);
}

TEST(Parse, CorpusHasTwentySevenNodes) {
  auto r = parse(corpus_source());
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.graph->nodes().size(), 27u);
}

TEST(Parse, FullGrammar) {
  auto r = parse(R"(syllagraph 1
# a comment line
syllabus "Course" {
  meta author: "Someone"   # trailing comment
  meta "odd key": "v"
  symbol "MPL" = "Marginal product of labor"
  symbol "MPL'" = "slope of MPL"
  node a {
    title: "First # not a comment"
    side: as
    pos: (3, 4)
    chapter: 2
    chapter: 5
    uses: MPL
    uses: "MPL'"
    video: "https://v.example/a.mp4" "Intro"
    text: "http://t.example/a" "Reading"
    audio: "https://a.example/a.mp3" "Podcast"
    note: "short"
  }
  node b { title: "B" side: ad pos: (5, 4) }
  edge a -> b : common_part "shared axis"
  edge a -> b : perspective
  sink b
}
)");
  ASSERT_TRUE(r.ok()) << r.errors.front().message();
  const auto& g = *r.graph;
  EXPECT_EQ(g.meta().at("author"), "Someone");
  EXPECT_EQ(g.meta().at("odd key"), "v");
  ASSERT_EQ(g.glossary().size(), 2u);
  const auto& a = g.nodes()[0];
  EXPECT_EQ(a.title, "First # not a comment");
  EXPECT_EQ(a.side, Side::AS);
  EXPECT_EQ(a.pos, (GridPos{3, 4}));
  EXPECT_EQ(a.chapters, (std::vector<int>{2, 5}));
  EXPECT_EQ(a.symbols, (std::vector<std::string>{"MPL", "MPL'"}));
  ASSERT_EQ(a.resources.size(), 3u);
  EXPECT_EQ(a.resources[2].kind, ResourceKind::Audio);
  EXPECT_EQ(a.note, "short");
  ASSERT_EQ(g.edges().size(), 2u);
  EXPECT_EQ(g.edges()[0].note, "shared axis");
  EXPECT_FALSE(g.edges()[1].note);
  EXPECT_EQ(r.locations.nodes.at("b").line, 21);
  EXPECT_EQ(r.locations.edges.at(1).line, 23);
}

TEST(Parse, RejectsUnsupportedVersion) {
  auto errors = errors_of(std::string("syllagraph 2\n") + kMinimal);
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0].expected, "supported format version 1");
}

TEST(Parse, UnknownDirectiveIsAnError) {
  auto errors = errors_of(replace_all(kMinimal, "side: other", "side: other colour: \"red\""));
  ASSERT_GE(errors.size(), 1u);
  EXPECT_EQ(errors[0].found, "colour");
}

TEST(Parse, UnterminatedString) {
  auto errors = errors_of("syllabus \"T {\n sink a\n}\n");
  ASSERT_GE(errors.size(), 1u);
  EXPECT_EQ(errors[0].line, 1);
  EXPECT_EQ(errors[0].column, 10);
  EXPECT_EQ(errors[0].expected, "closing '\"'");
}

TEST(Parse, InvalidUtf8) {
  auto errors = errors_of("syllabus \"T\xff\" {}");
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0].expected, "valid UTF-8 text");
  EXPECT_EQ(errors[0].column, 12);
}

TEST(Parse, ColumnsCountCodePoints) {
  auto errors = errors_of("syllabus \"δδδ\" { sink a node a { title: \"A\" side: other pos: (0,0) } "
                          "bogus }");
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_EQ(errors[0].found, "bogus");
  EXPECT_EQ(errors[0].column, 70);
}

TEST(Parse, SemanticErrors) {
  auto src = std::string(R"(syllabus "T" {
  node a { title: "A" side: other pos: (0,0) }
  node a { title: "A2" side: other pos: (1,0) }
  edge a -> ghost : derivative
})");
  auto errors = errors_of(src);
  std::vector<std::string> expected;
  for (const auto& e : errors) expected.push_back(e.expected);
  EXPECT_NE(std::find(expected.begin(), expected.end(), "unique node id"), expected.end());
  EXPECT_NE(std::find(expected.begin(), expected.end(), "declared node id"), expected.end());
  EXPECT_NE(std::find(expected.begin(), expected.end(), "sink declaration"), expected.end());
}

TEST(Parse, ModelRulesSurfaceWithLocations) {
  struct Case {
    std::string from, to, expected;
  };
  for (const auto& c : std::vector<Case>{
           {"pos: (0,0)", "pos: (0,1000)", "grid row in [0, 999]"},
           {"pos: (0,0)", "pos: (0,0) chapter: 4 chapter: 4", "chapter greater than 4"},
           {"pos: (0,0)", "pos: (0,0) chapter: 0", "positive chapter number"},
           {"pos: (0,0)", "pos: (0,0) video: \"ftp://x/y.mp4\" \"l\"", "absolute http(s) URL string"},
           {"pos: (0,0)", "pos: (0,0) video: \"http://x/y.mp4\" \"\"",
            "nonempty resource label string"},
           {"title: \"A\"", "title: \"\"", "nonempty title string"},
           {"side: other", "side: left", "side (as, ad or other)"},
       }) {
    auto errors = errors_of(replace_all(kMinimal, c.from, c.to));
    ASSERT_FALSE(errors.empty()) << c.to;
    EXPECT_EQ(errors[0].expected, c.expected) << c.to;
  }
}

TEST(Parse, EdgeRules) {
  std::string base = R"(syllabus "T" { sink b
node a { title: "A" side: other pos: (0,0) }
node b { title: "B" side: other pos: (1,0) }
)";
  EXPECT_EQ(errors_of(base + "edge a -> a : derivative }")[0].expected,
            "edge target different from its source");
  EXPECT_EQ(errors_of(base + "edge a -> b : derivative edge a -> b : derivative }")[0].expected,
            "edge not already declared");
  EXPECT_EQ(errors_of(base + "edge a -> b : derivative \"  \" }")[0].expected,
            "non-blank edge note");
  EXPECT_EQ(errors_of(base + "edge a -> b : causal }")[0].expected,
            "relationship kind (derivative, common_part or perspective)");
  EXPECT_TRUE(parse(base + "edge a -> b : derivative edge a -> b : common_part }").ok());
}

TEST(Parse, MissingRequiredNodeDirectives) {
  auto errors = errors_of(R"(syllabus "T" { sink a node a { title: "A" } })");
  ASSERT_EQ(errors.size(), 2u);
  EXPECT_EQ(errors[0].expected, "'side' directive in node a");
  EXPECT_EQ(errors[1].expected, "'pos' directive in node a");
}

TEST(Parse, RecoversAcrossTopLevelBlocks) {
  auto errors = errors_of(R"(syllabus "T" {
  sink a
  node a { title: "A" side: sideways pos: (0,0) }
  node b { title: "B" side: other pos: (1,0) }
  edge a -> b : wrongkind
  symbol "K" "missing equals"
  node c { title: "C" side: other pos: (2,0) }
})");
  EXPECT_GE(errors.size(), 3u);
  EXPECT_EQ(errors[0].line, 3);
  EXPECT_EQ(errors[1].line, 5);
  EXPECT_EQ(errors[2].line, 6);
}

TEST(Parse, CrlfMatchesLf) {
  auto lf = serialize(load_corpus());
  auto crlf = replace_all(lf, "\n", "\r\n");
  auto a = parse(lf);
  auto b = parse(crlf);
  ASSERT_TRUE(a.ok());
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(*a.graph, *b.graph);
  EXPECT_EQ(a.locations.nodes, b.locations.nodes);
}

TEST(Parse, Deterministic) {
  auto a = parse(corpus_source());
  auto b = parse(corpus_source());
  EXPECT_EQ(*a.graph, *b.graph);
  auto e1 = parse("syllabus \"T\" { bogus }").errors;
  auto e2 = parse("syllabus \"T\" { bogus }").errors;
  EXPECT_EQ(e1, e2);
}

TEST(Serialize, MinimalRoundTrip) {
  auto g = *parse(kMinimal).graph;
  auto text = serialize(g);
  EXPECT_EQ(text,
            "syllagraph 1\n"
            "syllabus \"T\" {\n"
            "  sink a\n"
            "  node a {\n"
            "    title: \"A\"\n"
            "    side: other\n"
            "    pos: (0, 0)\n"
            "  }\n"
            "}\n");
  EXPECT_EQ(*parse(text).graph, g);
}

TEST(Serialize, CorpusRoundTrip) {
  const auto& g = load_corpus();
  auto again = parse(serialize(g));
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(*again.graph, g);
}

TEST(Serialize, EscapesQuotes) {
  Node n = syllagraph::testing::make_node("a");
  n.note = "say \"hi\" \\ bye";
  CourseGraph g("T", "a", {n}, {});
  auto text = serialize(g);
  EXPECT_NE(text.find(R"(note: "say \"hi\" \\ bye")"), std::string::npos);
  EXPECT_EQ(*parse(text).graph, g);
}

TEST(Serialize, ControlCharactersUseUnicodeEscapes) {
  EXPECT_EQ(quote(std::string("a\x01z\n")), "\"a\\u0001z\\n\"");
  auto r = parse("syllabus \"\\u00e9\\u0001\" { sink a node a { title: \"A\" side: as pos: (0,0) } }");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.graph->title(), "é\x01");
}

TEST(Serialize, RoundTripProperty) {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 300; ++i) {
    auto g = syllagraph::testing::random_valid_graph(rng);
    auto text = serialize(g);
    auto back = parse(text);
    ASSERT_TRUE(back.ok()) << "iteration " << i << ": " << back.errors.front().message() << "\n"
                           << text;
    ASSERT_EQ(*back.graph, g) << text;
    EXPECT_EQ(serialize(*back.graph), text);
  }
}

TEST(AttachLocations, UsesSourceMap) {
  auto r = parse("syllabus \"T\" {\n sink b\n node a { title: \"A\" side: other pos: (0,0) }\n"
                 " node b { title: \"B\" side: other pos: (1,0) }\n edge a -> b : derivative\n}");
  ASSERT_TRUE(r.ok());
  std::vector<Diagnostic> diags = {{Severity::Warning, "R2", "m", std::nullopt, Subject::edge(0)},
                                   {Severity::Error, "R1", "m", std::nullopt, Subject::node("b")}};
  attach_locations(diags, r.locations);
  EXPECT_EQ(diags[0].location, (SourceLocation{5, 2}));
  EXPECT_EQ(diags[1].location, (SourceLocation{4, 2}));
}
