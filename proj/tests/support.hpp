#ifndef AMRNORM_TESTS_SUPPORT_HPP
#define AMRNORM_TESTS_SUPPORT_HPP

// Shared test helpers: fixture loading, a random AMR generator, and a
// reference Smatch scorer that works on plain string triples.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "amrnorm/corpus.hpp"
#include "amrnorm/graph.hpp"
#include "amrnorm/reification.hpp"
#include "amrnorm/tree.hpp"

namespace testing_support {

inline std::string fixture_path(const std::string& name) { return std::string(AMRNORM_TEST_DATA) + "/" + name; }

inline std::vector<amrnorm::CorpusEntry> fixtures() {
  return amrnorm::read_corpus(fixture_path("fixtures.txt")).entries;
}

inline amrnorm::Graph graph_of(const std::string& penman) {
  return amrnorm::tree_to_graph(amrnorm::parse(penman)).graph;
}

inline amrnorm::Amr amr_of(const std::string& penman) { return amrnorm::tree_to_graph(amrnorm::parse(penman)); }

// ---------------------------------------------------------------------------
// Reference scorer. Triples are rebuilt directly from the graph fields, test
// variables are renamed through the mapping, and matches are the size of the
// multiset intersection with the gold triples.

using RefTriple = std::tuple<std::string, std::string, std::string>;

inline std::string strip_colon(const std::string& role) {
  return !role.empty() && role[0] == ':' ? role.substr(1) : role;
}

inline std::vector<RefTriple> ref_triples(const amrnorm::Graph& g) {
  std::vector<RefTriple> out;
  for (const auto& i : g.instances) out.emplace_back(i.variable, "instance", i.label);
  out.emplace_back("<top>", "TOP", g.top);
  for (const auto& e : g.edges) out.emplace_back(e.source, strip_colon(e.role), e.target);
  for (const auto& a : g.attributes)
    if (!a.inverted) out.emplace_back(a.variable, strip_colon(a.role), "\x01" + a.constant);
  return out;
}

/// Matched triples when test variables are renamed by `map` (test -> gold).
inline std::size_t ref_count(const amrnorm::Graph& test, const amrnorm::Graph& gold,
                             const std::map<std::string, std::string>& map) {
  std::vector<std::string> test_vars = test.variables();
  auto rename = [&](const std::string& s) -> std::string {
    if (std::find(test_vars.begin(), test_vars.end(), s) == test_vars.end()) return s;
    auto it = map.find(s);
    return it == map.end() ? "\x02unmapped:" + s : it->second;
  };
  std::map<RefTriple, int> gold_bag;
  for (const RefTriple& t : ref_triples(gold)) ++gold_bag[t];
  std::size_t matched = 0;
  for (const auto& [s, r, t] : ref_triples(test)) {
    auto it = gold_bag.find({rename(s), r, rename(t)});
    if (it != gold_bag.end() && it->second > 0) {
      --it->second;
      ++matched;
    }
  }
  return matched;
}

/// Best match over every injective partial mapping; only for small graphs.
inline std::size_t ref_best(const amrnorm::Graph& test, const amrnorm::Graph& gold) {
  const std::vector<std::string> tv = test.variables();
  const std::vector<std::string> gv = gold.variables();
  std::map<std::string, std::string> map;
  std::vector<bool> used(gv.size(), false);
  std::size_t best = 0;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == tv.size()) {
      best = std::max(best, ref_count(test, gold, map));
      return;
    }
    self(self, i + 1);
    for (std::size_t j = 0; j < gv.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      map[tv[i]] = gv[j];
      self(self, i + 1);
      map.erase(tv[i]);
      used[j] = false;
    }
  };
  rec(rec, 0);
  return best;
}

inline double ref_f(std::size_t matched, std::size_t t, std::size_t g) {
  if (t == 0 || g == 0 || matched == 0) return 0.0;
  const double p = double(matched) / double(t), r = double(matched) / double(g);
  return 2 * p * r / (p + r);
}

// ---------------------------------------------------------------------------
// Random AMR generator. Nodes get a random rank and every relation points from
// the lower rank to the higher one, so the graph is acyclic; tree edges that
// point upward are written inverted.

struct GeneratorOptions {
  int max_nodes = 10;
  std::vector<std::string> concepts;
  std::vector<std::string> roles;            // relation roles, with colon
  std::vector<std::string> no_invert_roles;  // roles never written with -of
  std::vector<std::pair<std::string, std::string>> attributes;  // role, constant
  double reentrancy = 0.3;
  double attribute_rate = 0.3;
};

inline std::string random_penman(std::mt19937_64& rng, const GeneratorOptions& o) {
  auto pick = [&](const auto& v) -> const auto& {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  auto chance = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };

  const int n = std::uniform_int_distribution<int>(1, o.max_nodes)(rng);
  std::vector<int> rank(n);
  for (int i = 0; i < n; ++i) rank[i] = i;
  std::shuffle(rank.begin(), rank.end(), rng);

  struct Out {
    std::string role;
    std::string target;  // variable index as text, or a constant
    int child = -1;      // tree child defined here
  };
  std::vector<std::vector<Out>> branches(n);
  std::vector<std::string> label(n);
  for (int i = 0; i < n; ++i) label[i] = pick(o.concepts);

  auto role_for = [&](bool inverted) {
    for (;;) {
      const std::string& r = pick(o.roles);
      if (inverted && std::find(o.no_invert_roles.begin(), o.no_invert_roles.end(), r) !=
                          o.no_invert_roles.end())
        continue;
      return r;
    }
  };

  for (int k = 1; k < n; ++k) {
    const int p = std::uniform_int_distribution<int>(0, k - 1)(rng);
    const bool inverted = rank[k] < rank[p];
    const std::string r = role_for(inverted);
    branches[p].push_back({inverted ? r + "-of" : r, {}, k});
  }
  for (int tries = 0; tries < n && n > 2; ++tries) {
    if (!chance(o.reentrancy)) continue;
    int a = std::uniform_int_distribution<int>(0, n - 1)(rng);
    int b = std::uniform_int_distribution<int>(0, n - 1)(rng);
    if (a == b) continue;
    const bool inverted = rank[b] < rank[a];
    const std::string r = role_for(inverted);
    branches[a].push_back({inverted ? r + "-of" : r, "v" + std::to_string(b), -1});
  }
  if (!o.attributes.empty())
    for (int i = 0; i < n; ++i)
      while (chance(o.attribute_rate)) {
        const auto& [r, c] = pick(o.attributes);
        branches[i].push_back({r, c, -1});
      }
  for (auto& b : branches) std::shuffle(b.begin(), b.end(), rng);

  std::string text;
  auto write = [&](auto&& self, int i) -> void {
    text += "(v" + std::to_string(i) + " / " + label[i];
    for (const Out& b : branches[i]) {
      text += " " + b.role + " ";
      if (b.child >= 0)
        self(self, b.child);
      else
        text += b.target;
    }
    text += ")";
  };
  write(write, 0);
  return text;
}

inline GeneratorOptions general_generator(int max_nodes = 10) {
  GeneratorOptions o;
  o.max_nodes = max_nodes;
  o.concepts = {"dog", "boy", "girl", "chase-01", "see-01", "want-01", "go-02", "red", "house", "city"};
  o.roles = {":ARG0", ":ARG1", ":ARG2", ":mod", ":location", ":time", ":op1", ":poss", ":manner"};
  o.no_invert_roles = {":mod", ":domain"};
  o.attributes = {{":polarity", "-"}, {":quant", "5"}, {":value", "\"x\""}, {":op1", "\"Paris\""}};
  return o;
}

/// Roles drawn from the dereifiable table rows plus roles that never reify;
/// only canonical spellings are produced.
inline GeneratorOptions reification_generator(const amrnorm::ReificationTable& table, int max_nodes = 10) {
  GeneratorOptions o;
  o.max_nodes = max_nodes;
  o.concepts = {"dog", "boy", "girl", "chase-01", "see-01", "want-01", "go-02", "red", "house", "city", "person"};
  for (const auto& row : table.entries())
    if (row.dereifies && table.reification_for(row.role) == &row) o.roles.push_back(row.role);
  for (const char* r : {":ARG0", ":ARG1", ":op1", ":unit", ":poss", ":beneficiary"}) o.roles.push_back(r);
  o.no_invert_roles = {":mod", ":domain"};
  o.attributes = {{":polarity", "-"}, {":quant", "5"},  {":li", "2"},     {":value", "\"x\""},
                  {":mod", "\"y\""},  {":op1", "\"A\""}, {":unit", "u"}, {":poss", "1"}};
  return o;
}

}  // namespace testing_support

#endif  // AMRNORM_TESTS_SUPPORT_HPP
