#include <gtest/gtest.h>

#include <sstream>

#include "amrnorm/stats.hpp"
#include "support.hpp"

using namespace amrnorm;

namespace {

const ReificationTable& table() { return ReificationTable::builtin(); }

std::vector<CorpusEntry> corpus(const std::string& text) { return read_corpus_text(text).entries; }

}  // namespace

TEST(Stats, EmptyCorpusIsAllZeros) {
  CorpusStats s = corpus_stats({}, table());
  EXPECT_EQ(s.graphs, 0u);
  EXPECT_EQ(s.nodes, 0u);
  EXPECT_EQ(s.triples, 0u);
  EXPECT_EQ(s.reifiable_graph_percent(), 0.0);
  EXPECT_EQ(s.reifiable_relation_percent(), 0.0);
  EXPECT_EQ(s.collapsible_node_percent(), 0.0);
}

TEST(Stats, SmallCorpusCounts) {
  auto entries = corpus(
      "(d / drive-01 :ARG0 (h / he) :manner (c / care-04 :polarity -))\n\n"
      "(p / prince :domain-of (l / little) :mod-of (s / small))\n\n"
      "(d / drive-01 :ARG1-of (h2 / have-manner-91 :ARG2 (c / care-04)))\n");
  CorpusStats s = corpus_stats(entries, table());
  EXPECT_EQ(s.graphs, 3u);
  EXPECT_EQ(s.nodes, 3u + 3u + 3u);
  EXPECT_EQ(s.triples, 7u + 6u + 6u);
  EXPECT_EQ(s.relations, 3u + 2u + 2u);
  // :manner, :polarity; :domain-of, :mod-of (as :mod and :domain)
  EXPECT_EQ(s.reifiable_relations, 4u);
  EXPECT_EQ(s.reifiable_graphs, 2u);
  EXPECT_EQ(s.collapsible_nodes, 1u);
  EXPECT_EQ(s.collapsible_graphs, 1u);
  EXPECT_EQ(s.non_canonical.at(":domain-of").graphs, 1u);
  EXPECT_EQ(s.non_canonical.at(":mod-of").triples, 1u);
  EXPECT_DOUBLE_EQ(s.reifiable_relation_percent(), 100.0 * 4 / 19);
  EXPECT_DOUBLE_EQ(s.reifiable_relation_percent_of_relations(), 100.0 * 4 / 7);
  EXPECT_DOUBLE_EQ(s.reifiable_graph_percent(), 100.0 * 2 / 3);
}

TEST(Stats, SumOfEntriesEqualsTotal) {
  auto entries = testing_support::fixtures();
  CorpusStats total = corpus_stats(entries, table());
  CorpusStats sum;
  for (const auto& e : entries) sum += corpus_stats({e}, table());
  EXPECT_EQ(sum.triples, total.triples);
  EXPECT_EQ(sum.reifiable_relations, total.reifiable_relations);
  EXPECT_EQ(sum.collapsible_nodes, total.collapsible_nodes);
  EXPECT_LE(total.reifiable_graphs, total.graphs);
  EXPECT_LE(total.collapsible_graphs, total.graphs);
}

TEST(Stats, ReificationDeltaAndCollapsibility) {
  auto entries = testing_support::fixtures();
  CorpusStats before = corpus_stats(entries, table());
  for (auto& e : entries) e.amr = reify_relations(canonicalize_roles(e.amr), table());
  CorpusStats after = corpus_stats(entries, table());
  EXPECT_EQ(after.triples, before.triples + 2 * before.reifiable_relations);
  EXPECT_EQ(after.reifiable_relations, 0u);
  // The fixtures use no shortcut roles, so every new node can collapse.
  EXPECT_EQ(after.collapsible_nodes, before.collapsible_nodes + before.reifiable_relations);
}

TEST(Stats, TableAndKeyValueOutput) {
  CorpusStats s = corpus_stats(corpus("(a / apple :quant 5)\n"), table());
  std::ostringstream t;
  write_stats_table(s, t, "gold");
  EXPECT_NE(t.str().find("gold\t1\t1\t3\n"), std::string::npos);
  EXPECT_NE(t.str().find("gold\t100.00\t33.33\t0.00\t0.00\n"), std::string::npos);
  std::ostringstream kv;
  write_stats_kv(s, kv);
  EXPECT_NE(kv.str().find("reifiable.relations=1\n"), std::string::npos);
  EXPECT_NE(kv.str().find("reifiable.relations_percent_of_relations=100.0000\n"), std::string::npos);
}
