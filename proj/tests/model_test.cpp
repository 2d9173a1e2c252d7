#include <gtest/gtest.h>

#include "support/test_support.hpp"
#include "syllagraph/corpus.hpp"
#include "syllagraph/model.hpp"

using namespace syllagraph;
using syllagraph::testing::make_graph;
using syllagraph::testing::make_node;

namespace {

CourseGraph singleton() { return make_graph({"a"}, {}, "a"); }

template <typename Fn>
std::string invariant_message(Fn&& build) {
  try {
    build();
  } catch (const InvariantError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(NodeById, FindsCorpusGeneralEquilibrium) {
  auto node = node_by_id(load_corpus(), "gen_eq");
  ASSERT_TRUE(node.has_value());
  EXPECT_EQ(node->title, "A Diagram for General Equilibrium in the Macroeconomy");
}

TEST(NodeById, MissIsAbsent) {
  EXPECT_FALSE(node_by_id(load_corpus(), "nonexistent").has_value());
}

TEST(NodeById, SingletonLookup) {
  auto g = singleton();
  ASSERT_TRUE(node_by_id(g, "a"));
  EXPECT_EQ(node_by_id(g, "a")->id, "a");
}

TEST(VideoCount, CountsOnlyVideos) {
  Node n = make_node("a");
  n.resources = {{ResourceKind::Video, "https://x.example/1.mp4", "one"},
                 {ResourceKind::Text, "https://x.example/t", "text"},
                 {ResourceKind::Video, "https://x.example/2.mp4", "two"}};
  EXPECT_EQ(video_count(n), 2u);
  EXPECT_EQ(video_count(make_node("b")), 0u);
}

TEST(NodeId, Alphabet) {
  EXPECT_TRUE(is_valid_node_id("a"));
  EXPECT_TRUE(is_valid_node_id("is_lm2"));
  EXPECT_FALSE(is_valid_node_id(""));
  EXPECT_FALSE(is_valid_node_id("_a"));
  EXPECT_FALSE(is_valid_node_id("1a"));
  EXPECT_FALSE(is_valid_node_id("IsLm"));
  EXPECT_FALSE(is_valid_node_id("a-b"));
}

TEST(RelationshipKind, SerializedNames) {
  EXPECT_EQ(to_string(RelationshipKind::Derivative), "derivative");
  EXPECT_EQ(to_string(RelationshipKind::CommonPart), "common_part");
  EXPECT_EQ(to_string(RelationshipKind::Perspective), "perspective");
  for (auto k : kAllKinds) EXPECT_EQ(kind_from_string(to_string(k)), k);
  EXPECT_FALSE(kind_from_string("Derivative"));
}

TEST(CourseGraphInvariants, EachViolationIsReported) {
  EXPECT_NE(invariant_message([] { make_graph({"a", "a"}, {}, "a"); }).find("duplicate node id"),
            std::string::npos);
  EXPECT_NE(invariant_message([] { make_graph({"a"}, {}, "b"); }).find("sink"), std::string::npos);
  EXPECT_NE(invariant_message([] { make_graph({"a"}, {{"a", "z"}}, "a"); }).find("undeclared"),
            std::string::npos);
  EXPECT_NE(invariant_message([] { make_graph({"a"}, {{"a", "a"}}, "a"); }).find("self-loop"),
            std::string::npos);
  EXPECT_NE(invariant_message([] { make_graph({"a", "b"}, {{"a", "b"}, {"a", "b"}}, "b"); })
                .find("duplicate edge"),
            std::string::npos);
  EXPECT_NE(invariant_message([] { CourseGraph("t", "a", {}, {}); }).find("no nodes"),
            std::string::npos);
}

TEST(CourseGraphInvariants, ParallelEdgesOfDifferentKindsAreAllowed) {
  std::vector<Edge> edges = {{"a", "b", RelationshipKind::Derivative, std::nullopt},
                             {"a", "b", RelationshipKind::Perspective, std::nullopt}};
  CourseGraph g("t", "b", {make_node("a", {0, 0}), make_node("b", {1, 0})}, edges);
  EXPECT_EQ(g.edges().size(), 2u);
}

TEST(CourseGraphInvariants, NodeFieldRules) {
  auto with = [](auto mutate) {
    return invariant_message([&] {
      Node n = make_node("a");
      mutate(n);
      CourseGraph("t", "a", {n}, {});
    });
  };
  EXPECT_NE(with([](Node& n) { n.title.clear(); }), "");
  EXPECT_NE(with([](Node& n) { n.pos = {1000, 0}; }), "");
  EXPECT_NE(with([](Node& n) { n.pos = {0, -1}; }), "");
  EXPECT_EQ(with([](Node& n) { n.pos = {999, 999}; }), "");
  EXPECT_NE(with([](Node& n) { n.chapters = {3, 3}; }), "");
  EXPECT_NE(with([](Node& n) { n.chapters = {4, 2}; }), "");
  EXPECT_NE(with([](Node& n) { n.chapters = {0}; }), "");
  EXPECT_EQ(with([](Node& n) { n.chapters = {1, 2, 9}; }), "");
  EXPECT_NE(with([](Node& n) {
              n.resources = {{ResourceKind::Video, "ftp://x.example/a.mp4", "x"}};
            }),
            "");
  EXPECT_NE(with([](Node& n) {
              n.resources = {{ResourceKind::Video, "https://x.example/a.mp4", ""}};
            }),
            "");
}

TEST(CourseGraphInvariants, EdgeNoteMustNotBeBlank) {
  auto msg = invariant_message([] {
    CourseGraph("t", "b", {make_node("a", {0, 0}), make_node("b", {1, 0})},
                {{"a", "b", RelationshipKind::Derivative, std::string(" \t")}});
  });
  EXPECT_NE(msg.find("blank note"), std::string::npos);
}

TEST(CourseGraphInvariants, GlossaryKeysUniqueAndNonempty) {
  auto build = [](std::vector<SymbolEntry> glossary) {
    return invariant_message([&] { CourseGraph("t", "a", {make_node("a")}, {}, glossary); });
  };
  EXPECT_EQ(build({{"MPL", "Marginal product of labor"}}), "");
  EXPECT_NE(build({{"MPL", "x"}, {"MPL", "y"}}), "");
  EXPECT_NE(build({{"", "x"}}), "");
  EXPECT_NE(build({{"K", ""}}), "");
}

TEST(CourseGraph, ValueEquality) {
  EXPECT_EQ(singleton(), singleton());
  EXPECT_NE(singleton(), make_graph({"b"}, {}, "b"));
  auto g1 = make_graph({"a", "b"}, {{"a", "b"}}, "b");
  auto g2 = make_graph({"a", "b"}, {{"a", "b"}}, "b");
  EXPECT_EQ(g1, g2);
}

TEST(Describe, NamesSubjects) {
  auto g = make_graph({"a", "b"}, {{"a", "b"}}, "b");
  EXPECT_EQ(describe(g, Subject::node("a")), "node a");
  EXPECT_EQ(describe(g, Subject::edge(0)), "edge a->b:derivative");
  EXPECT_EQ(describe(g, Subject::graph()), "graph");
}
