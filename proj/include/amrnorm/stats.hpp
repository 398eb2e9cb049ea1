#ifndef AMRNORM_STATS_HPP
#define AMRNORM_STATS_HPP

// Corpus-level counts: sizes, non-canonical role usage, and how many relations
// could be reified or nodes collapsed.

#include <cstddef>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "amrnorm/corpus.hpp"
#include "amrnorm/graph.hpp"
#include "amrnorm/normalize.hpp"
#include "amrnorm/reification.hpp"
#include "amrnorm/validate.hpp"

namespace amrnorm {

struct RoleUsage {
  std::size_t graphs = 0;
  std::size_t triples = 0;
};

struct CorpusStats {
  std::size_t graphs = 0;
  std::size_t nodes = 0;
  std::size_t triples = 0;
  std::size_t relations = 0;  // edges plus attributes, without instances and TOP
  std::map<std::string, RoleUsage> non_canonical;
  std::size_t reifiable_graphs = 0;
  std::size_t reifiable_relations = 0;
  std::size_t collapsible_graphs = 0;
  std::size_t collapsible_nodes = 0;

  CorpusStats& operator+=(const CorpusStats& o) {
    graphs += o.graphs;
    nodes += o.nodes;
    triples += o.triples;
    relations += o.relations;
    for (const auto& [role, usage] : o.non_canonical) {
      non_canonical[role].graphs += usage.graphs;
      non_canonical[role].triples += usage.triples;
    }
    reifiable_graphs += o.reifiable_graphs;
    reifiable_relations += o.reifiable_relations;
    collapsible_graphs += o.collapsible_graphs;
    collapsible_nodes += o.collapsible_nodes;
    return *this;
  }

  static double percent(std::size_t part, std::size_t whole) {
    return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
  }

  double reifiable_graph_percent() const { return percent(reifiable_graphs, graphs); }
  /// Reifiable relations as a share of all triples.
  double reifiable_relation_percent() const { return percent(reifiable_relations, triples); }
  /// Reifiable relations as a share of edges and attributes only.
  double reifiable_relation_percent_of_relations() const {
    return percent(reifiable_relations, relations);
  }
  double collapsible_graph_percent() const { return percent(collapsible_graphs, graphs); }
  double collapsible_node_percent() const { return percent(collapsible_nodes, nodes); }
};

inline std::size_t reifiable_relation_count(const Graph& graph, const ReificationTable& table) {
  std::size_t n = 0;
  for (const Edge& e : graph.edges)
    if (e.role != kStructureRole && table.reification_for(e.role)) ++n;
  for (const Attribute& a : graph.attributes)
    if (!a.inverted && table.reification_for(a.role)) ++n;
  return n;
}

inline std::size_t collapsible_node_count(const Amr& amr, const ReificationTable& table) {
  std::size_t n = 0;
  for (const Instance& i : amr.graph.instances)
    if (plan_collapse(amr, i.variable, table)) ++n;
  return n;
}

inline CorpusStats graph_stats(const Amr& amr, const ReificationTable& table) {
  CorpusStats s;
  const Graph& g = amr.graph;
  s.graphs = 1;
  s.nodes = g.instances.size();
  s.triples = triple_count(g);
  s.relations = g.edges.size() + g.attributes.size();
  for (const Diagnostic& d : validate(amr)) {
    if (d.code != DiagnosticCode::NonCanonicalRole) continue;
    RoleUsage& usage = s.non_canonical[d.role];
    usage.graphs = 1;
    ++usage.triples;
  }
  s.reifiable_relations = reifiable_relation_count(g, table);
  s.reifiable_graphs = s.reifiable_relations > 0;
  s.collapsible_nodes = collapsible_node_count(amr, table);
  s.collapsible_graphs = s.collapsible_nodes > 0;
  return s;
}

inline CorpusStats corpus_stats(const std::vector<CorpusEntry>& entries,
                                const ReificationTable& table = ReificationTable::builtin()) {
  CorpusStats total;
  for (const CorpusEntry& entry : entries) total += graph_stats(entry.amr, table);
  return total;
}

/// Tab-separated table: a sizes row, a non-canonical role section, and a
/// reifiable/collapsible row.
inline void write_stats_table(const CorpusStats& s, std::ostream& out, const std::string& name = "corpus") {
  auto fmt = [](double v) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(2) << v;
    return o.str();
  };

  out << "corpus\tgraphs\tnodes\ttriples\n";
  out << name << '\t' << s.graphs << '\t' << s.nodes << '\t' << s.triples << "\n\n";

  out << "role\tgraphs\t%graphs\ttriples\t%triples\n";
  for (const char* role : {":domain-of", ":mod-of", ":consist", ":prep-on-behalf", ":prep-out"}) {
    RoleUsage usage;
    if (auto it = s.non_canonical.find(role); it != s.non_canonical.end()) usage = it->second;
    out << role << '\t' << usage.graphs << '\t' << fmt(CorpusStats::percent(usage.graphs, s.graphs))
        << '\t' << usage.triples << '\t' << fmt(CorpusStats::percent(usage.triples, s.triples))
        << '\n';
  }
  out << '\n';

  out << "corpus\treifiable %graphs\treifiable %rels\tcollapsible %graphs\tcollapsible %nodes\n";
  out << name << '\t' << fmt(s.reifiable_graph_percent()) << '\t'
      << fmt(s.reifiable_relation_percent()) << '\t' << fmt(s.collapsible_graph_percent()) << '\t'
      << fmt(s.collapsible_node_percent()) << '\n';
}

/// One `key=value` line per figure.
inline void write_stats_kv(const CorpusStats& s, std::ostream& out) {
  auto fmt = [](double v) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(4) << v;
    return o.str();
  };
  out << "graphs=" << s.graphs << '\n'
      << "nodes=" << s.nodes << '\n'
      << "triples=" << s.triples << '\n'
      << "relations=" << s.relations << '\n';
  for (const auto& [role, usage] : s.non_canonical) {
    const std::string key = "non_canonical." + role.substr(1);
    out << key << ".graphs=" << usage.graphs << '\n' << key << ".triples=" << usage.triples << '\n';
  }
  out << "reifiable.graphs=" << s.reifiable_graphs << '\n'
      << "reifiable.relations=" << s.reifiable_relations << '\n'
      << "reifiable.graphs_percent=" << fmt(s.reifiable_graph_percent()) << '\n'
      << "reifiable.relations_percent=" << fmt(s.reifiable_relation_percent()) << '\n'
      << "reifiable.relations_percent_of_relations="
      << fmt(s.reifiable_relation_percent_of_relations()) << '\n'
      << "collapsible.graphs=" << s.collapsible_graphs << '\n'
      << "collapsible.nodes=" << s.collapsible_nodes << '\n'
      << "collapsible.graphs_percent=" << fmt(s.collapsible_graph_percent()) << '\n'
      << "collapsible.nodes_percent=" << fmt(s.collapsible_node_percent()) << '\n';
}

}  // namespace amrnorm

#endif  // AMRNORM_STATS_HPP
