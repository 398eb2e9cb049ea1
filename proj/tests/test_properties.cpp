#include <gtest/gtest.h>

#include <random>

#include "amrnorm/normalize.hpp"
#include "amrnorm/smatch.hpp"
#include "amrnorm/validate.hpp"
#include "support.hpp"

using namespace amrnorm;

namespace {

const ReificationTable& table() { return ReificationTable::builtin(); }

std::vector<std::string> random_corpus(std::uint64_t seed, int n, const testing_support::GeneratorOptions& o) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(testing_support::random_penman(rng, o));
  return out;
}

}  // namespace

TEST(Properties, ParseSerializeRoundtrip) {
  for (const std::string& text : random_corpus(1, 300, testing_support::general_generator())) {
    Tree t = parse(text);
    for (int indent : {-1, 0, 3, 6}) EXPECT_EQ(parse(serialize(t, indent)), t) << text;
    Amr amr = tree_to_graph(t);
    EXPECT_EQ(graph_to_tree(amr), t) << text;
    EXPECT_EQ(tree_to_graph(parse(serialize(t))), amr);
  }
}

TEST(Properties, DefaultLayoutPreservesTriples) {
  for (const std::string& text : random_corpus(2, 300, testing_support::general_generator())) {
    Graph g = tree_to_graph(parse(text)).graph;
    EXPECT_EQ(triple_multiset(tree_to_graph(graph_to_tree(g)).graph), triple_multiset(g)) << text;
  }
}

TEST(Properties, ReifyDereifyInverse) {
  for (const std::string& text : random_corpus(3, 500, testing_support::reification_generator(table()))) {
    Amr amr = tree_to_graph(parse(text));
    Amr round = dereify_relations(reify_relations(amr, table()), table());
    EXPECT_EQ(triple_multiset(round.graph), triple_multiset(amr.graph)) << text;
  }
}

TEST(Properties, TripleCountDeltas) {
  for (const std::string& text : random_corpus(4, 300, testing_support::reification_generator(table()))) {
    Amr amr = tree_to_graph(parse(text));
    const Graph& g = amr.graph;
    NormalizeCounts c;
    std::size_t reifiable = 0;
    for (const Edge& e : g.edges) reifiable += table().reification_for(e.role) != nullptr;
    for (const Attribute& a : g.attributes) reifiable += table().reification_for(a.role) != nullptr;
    EXPECT_EQ(triple_count(reify_relations(amr, table(), &c).graph), triple_count(g) + 2 * reifiable);
    EXPECT_EQ(c.relations_reified, reifiable);
    EXPECT_EQ(triple_count(reify_attributes(amr).graph), triple_count(g) + g.attributes.size());
    EXPECT_EQ(triple_count(preserve_structure(amr).graph), triple_count(g) + g.instances.size() - 1);
  }
}

TEST(Properties, NormalizedOutputIsValidAndReparses) {
  const auto texts = random_corpus(5, 150, testing_support::reification_generator(table()));
  for (int mask = 0; mask < 32; ++mask) {
    NormalizeOptions o;
    o.canonicalize_roles = mask & 1;
    o.reify_relations = mask & 2;
    o.dereify_relations = (mask & 4) && !(mask & 2);
    o.reify_attributes = mask & 8;
    o.preserve_structure = mask & 16;
    for (const std::string& text : texts) {
      Amr out = normalize(tree_to_graph(parse(text)), o, table());
      EXPECT_FALSE(has_errors(validate(out))) << mask << " " << text;
      Tree t = graph_to_tree(out);
      Amr back = tree_to_graph(parse(serialize(t)));
      EXPECT_EQ(triple_multiset(back.graph), triple_multiset(out.graph)) << mask << " " << text;
      EXPECT_EQ(back.layout, out.layout) << mask << " " << text;
    }
  }
}

TEST(Properties, PassesAreIdempotent) {
  for (const std::string& text : random_corpus(6, 200, testing_support::reification_generator(table()))) {
    Amr amr = tree_to_graph(parse(text));
    Amr c = canonicalize_roles(amr);
    EXPECT_EQ(canonicalize_roles(c), c);
    Amr s = preserve_structure(amr);
    EXPECT_EQ(preserve_structure(s), s);
    Amr r = reify_relations(amr, table());
    EXPECT_EQ(reify_relations(r, table()), r);
    Amr d = dereify_relations(amr, table());
    EXPECT_EQ(dereify_relations(d, table()), d);
    Amr a = reify_attributes(amr);
    EXPECT_EQ(reify_attributes(a), a);
  }
}

TEST(Properties, SelfScoreIsPerfect) {
  for (const std::string& text : random_corpus(7, 200, testing_support::general_generator())) {
    Graph g = tree_to_graph(parse(text)).graph;
    EXPECT_DOUBLE_EQ(score_pair(g, g).f_score(), 1.0) << text;
  }
}

TEST(Properties, ScoreIsSymmetricInCounts) {
  for (const std::string& text : random_corpus(8, 100, testing_support::general_generator(5))) {
    Graph a = tree_to_graph(parse(text)).graph;
    Graph b = reify_attributes(a);
    EXPECT_EQ(brute_force_map(a, b).second, brute_force_map(b, a).second) << text;
  }
}
