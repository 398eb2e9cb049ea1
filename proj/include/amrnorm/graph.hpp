#ifndef AMRNORM_GRAPH_HPP
#define AMRNORM_GRAPH_HPP

// Abstract graph form of an AMR and conversion to and from the concrete Tree.
//
// A Graph stores relations in their deinverted (source -> target) direction;
// the Layout remembers everything the triples cannot: where each node was
// defined and the surface order and spelling of each node's branches.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "amrnorm/roles.hpp"
#include "amrnorm/tree.hpp"

namespace amrnorm {

/// Reserved source of the TOP triple; never a mappable variable.
inline constexpr std::string_view kTopSource = "top";

struct Instance {
  std::string variable;
  std::string label;
  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Edge {
  std::string source;
  std::string role;
  std::string target;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A relation between a variable and a constant. Normally the variable is
/// the source; `inverted` marks the ill-formed case of a constant-sourced
/// relation (an inverted branch whose tree child is a constant).
struct Attribute {
  std::string variable;
  std::string role;
  std::string constant;
  bool inverted = false;
  friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct Graph {
  std::string top;
  std::vector<Instance> instances;
  std::vector<Edge> edges;
  std::vector<Attribute> attributes;

  const std::string* label_of(std::string_view variable) const {
    for (const Instance& instance : instances)
      if (instance.variable == variable) return &instance.label;
    return nullptr;
  }

  bool has_variable(std::string_view variable) const { return label_of(variable) != nullptr; }

  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    out.reserve(instances.size());
    for (const Instance& instance : instances) out.push_back(instance.variable);
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;
};

/// One serialized branch: the surface role (with `-of` when inverted), the
/// target's variable or constant lexeme, and whether the target node is
/// defined at this branch.
struct BranchKey {
  std::string role;
  std::string target;
  bool defines = false;
  friend bool operator==(const BranchKey&, const BranchKey&) = default;
};

struct Layout {
  /// Tree parent of each node definition; the top has no entry.
  std::map<std::string, std::string> definition_site;
  std::map<std::string, std::vector<BranchKey>> branch_order;
  friend bool operator==(const Layout&, const Layout&) = default;
};

/// A graph together with the serialization layout it was read with (or the
/// layout maintained by the normalization passes).
struct Amr {
  Graph graph;
  Layout layout;
  friend bool operator==(const Amr&, const Amr&) = default;
};

struct Triple {
  std::string source;
  std::string role;  // without the leading colon; `instance` and `TOP` are synthetic
  std::string target;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LayoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Returns the variables on some directed cycle, ignoring structural `:TOP`
/// edges; empty if the relation graph is acyclic.
inline std::vector<std::string> find_cycle(const Graph& graph) {
  std::unordered_map<std::string, std::vector<std::string>> out;
  for (const Edge& e : graph.edges)
    if (e.role != kStructureRole) out[e.source].push_back(e.target);

  enum class Mark { White, Grey, Black };
  std::unordered_map<std::string, Mark> mark;
  std::vector<std::string> stack;
  std::vector<std::string> cycle;

  std::function<bool(const std::string&)> visit = [&](const std::string& v) {
    mark[v] = Mark::Grey;
    stack.push_back(v);
    for (const std::string& w : out[v]) {
      const Mark m = mark.count(w) ? mark[w] : Mark::White;
      if (m == Mark::Grey) {
        auto it = std::find(stack.begin(), stack.end(), w);
        cycle.assign(it, stack.end());
        return true;
      }
      if (m == Mark::White && visit(w)) return true;
    }
    stack.pop_back();
    mark[v] = Mark::Black;
    return false;
  };

  std::vector<std::string> starts = graph.variables();
  for (const Edge& e : graph.edges) starts.push_back(e.source);
  for (const std::string& v : starts)
    if (!mark.count(v) && visit(v)) return cycle;
  return {};
}

/// Variables not reachable from the top when edge direction is ignored.
inline std::vector<std::string> unreachable_variables(const Graph& graph) {
  std::unordered_map<std::string, std::vector<std::string>> adjacent;
  for (const Edge& e : graph.edges) {
    adjacent[e.source].push_back(e.target);
    adjacent[e.target].push_back(e.source);
  }
  std::unordered_set<std::string> seen{graph.top};
  std::vector<std::string> agenda{graph.top};
  while (!agenda.empty()) {
    std::string v = std::move(agenda.back());
    agenda.pop_back();
    for (const std::string& w : adjacent[v])
      if (seen.insert(w).second) agenda.push_back(w);
  }
  std::vector<std::string> missing;
  for (const Instance& instance : graph.instances)
    if (!seen.count(instance.variable)) missing.push_back(instance.variable);
  return missing;
}

namespace detail {

inline void collect_definitions(const Node& node, std::map<std::string, int>& count) {
  ++count[node.variable];
  for (const Branch& branch : node.branches)
    if (auto child = std::get_if<Box<Node>>(&branch.target)) collect_definitions(**child, count);
}

inline void convert_node(const Node& node, Amr& amr) {
  Graph& g = amr.graph;
  g.instances.push_back({node.variable, node.label});
  auto& order = amr.layout.branch_order[node.variable];
  for (const Branch& branch : node.branches) {
    const bool inverted = is_inverted(branch.role);
    const std::string role = deinvert(branch.role);
    if (auto c = std::get_if<Constant>(&branch.target)) {
      g.attributes.push_back({node.variable, role, c->value, inverted});
      order.push_back({branch.role, c->value, false});
      continue;
    }
    const std::string& other = target_text(branch.target);
    if (inverted)
      g.edges.push_back({other, role, node.variable});
    else
      g.edges.push_back({node.variable, role, other});
    const bool defines = std::holds_alternative<Box<Node>>(branch.target);
    order.push_back({branch.role, other, defines});
    if (defines) {
      amr.layout.definition_site[other] = node.variable;
      convert_node(*std::get<Box<Node>>(branch.target), amr);
    }
  }
}

inline void check_references(const Node& node, const std::map<std::string, int>& defined) {
  for (const Branch& branch : node.branches) {
    if (auto ref = std::get_if<VariableRef>(&branch.target)) {
      if (!defined.count(ref->variable))
        throw GraphError("reference to undefined variable '" + ref->variable + "'");
    } else if (auto child = std::get_if<Box<Node>>(&branch.target)) {
      check_references(**child, defined);
    }
  }
}

}  // namespace detail

/// Converts a tree to its graph and captures the layout. Inverted roles are
/// deinverted by stripping `-of` and swapping the endpoints.
inline Amr tree_to_graph(const Tree& tree) {
  std::map<std::string, int> defined;
  detail::collect_definitions(tree.root, defined);
  for (const auto& [variable, n] : defined)
    if (n > 1) throw GraphError("duplicate node definition for variable '" + variable + "'");
  detail::check_references(tree.root, defined);

  Amr amr;
  amr.graph.top = tree.root.variable;
  detail::convert_node(tree.root, amr);
  if (auto cycle = find_cycle(amr.graph); !cycle.empty()) {
    std::string path;
    for (const std::string& v : cycle) path += v + " -> ";
    throw GraphError("directed cycle: " + path + cycle.front());
  }
  return amr;
}

/// Deterministic layout used when none is supplied: nodes are defined at
/// their first occurrence in a depth-first walk from the top; each node lists
/// its attributes, then outgoing edges, then (inverted) incoming edges, each
/// in insertion order. An incoming edge is only inverted when its source
/// cannot be reached from the top by following edges forward.
inline Layout default_layout(const Graph& graph) {
  std::unordered_set<std::string> forward{graph.top};
  {
    std::vector<std::string> agenda{graph.top};
    while (!agenda.empty()) {
      std::string v = std::move(agenda.back());
      agenda.pop_back();
      for (const Edge& e : graph.edges)
        if (e.source == v && forward.insert(e.target).second) agenda.push_back(e.target);
    }
  }

  Layout layout;
  std::vector<bool> placed(graph.edges.size(), false);
  std::unordered_set<std::string> defined;

  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    defined.insert(v);
    auto& order = layout.branch_order[v];
    for (const Attribute& a : graph.attributes) {
      if (a.variable != v) continue;
      order.push_back({a.inverted ? invert(a.role) : a.role, a.constant, false});
    }
    auto place = [&](std::size_t i, const std::string& role, const std::string& other) {
      placed[i] = true;
      const bool defines = !defined.count(other);
      order.push_back({role, other, defines});
      if (defines) {
        layout.definition_site[other] = v;
        visit(other);
      }
    };
    for (std::size_t i = 0; i < graph.edges.size(); ++i) {
      const Edge& e = graph.edges[i];
      if (!placed[i] && e.source == v) place(i, e.role, e.target);
    }
    for (std::size_t i = 0; i < graph.edges.size(); ++i) {
      const Edge& e = graph.edges[i];
      if (!placed[i] && e.target == v && !forward.count(e.source))
        place(i, invert(e.role), e.source);
    }
  };
  visit(graph.top);
  return layout;
}

namespace detail {

class TreeBuilder {
 public:
  TreeBuilder(const Graph& graph, const Layout& layout)
      : graph_(graph),
        layout_(layout),
        edge_used_(graph.edges.size(), false),
        attribute_used_(graph.attributes.size(), false) {}

  Tree build() {
    if (!graph_.has_variable(graph_.top))
      throw LayoutError("graph top '" + graph_.top + "' has no instance");
    Tree tree{build_node(graph_.top)};
    for (std::size_t i = 0; i < edge_used_.size(); ++i)
      if (!edge_used_[i]) {
        const Edge& e = graph_.edges[i];
        throw LayoutError("layout does not place edge (" + e.source + " " + e.role + " " +
                          e.target + ")");
      }
    for (std::size_t i = 0; i < attribute_used_.size(); ++i)
      if (!attribute_used_[i]) {
        const Attribute& a = graph_.attributes[i];
        throw LayoutError("layout does not place attribute (" + a.variable + " " + a.role +
                          " " + a.constant + ")");
      }
    for (const Instance& instance : graph_.instances)
      if (!defined_.count(instance.variable))
        throw LayoutError("layout never defines variable '" + instance.variable + "'");
    return tree;
  }

 private:
  Node build_node(const std::string& variable) {
    defined_.insert(variable);
    Node node{variable, *graph_.label_of(variable), {}};
    auto it = layout_.branch_order.find(variable);
    if (it == layout_.branch_order.end()) return node;
    for (const BranchKey& key : it->second) {
      const bool inverted = is_inverted(key.role);
      const std::string role = deinvert(key.role);
      if (graph_.has_variable(key.target) && take_edge(variable, role, key.target, inverted)) {
        if (key.defines) {
          if (defined_.count(key.target))
            throw LayoutError("variable '" + key.target + "' is defined twice by the layout");
          node.branches.push_back({key.role, Box<Node>(build_node(key.target))});
        } else {
          node.branches.push_back({key.role, VariableRef{key.target}});
        }
      } else if (take_attribute(variable, role, key.target, inverted)) {
        node.branches.push_back({key.role, Constant{key.target}});
      } else {
        throw LayoutError("layout branch " + key.role + " " + key.target + " on '" + variable +
                          "' matches no relation in the graph");
      }
    }
    return node;
  }

  bool take_edge(const std::string& v, const std::string& role, const std::string& other,
                 bool inverted) {
    const std::string& source = inverted ? other : v;
    const std::string& target = inverted ? v : other;
    for (std::size_t i = 0; i < graph_.edges.size(); ++i) {
      const Edge& e = graph_.edges[i];
      if (!edge_used_[i] && e.source == source && e.role == role && e.target == target) {
        edge_used_[i] = true;
        return true;
      }
    }
    return false;
  }

  bool take_attribute(const std::string& v, const std::string& role, const std::string& constant,
                      bool inverted) {
    for (std::size_t i = 0; i < graph_.attributes.size(); ++i) {
      const Attribute& a = graph_.attributes[i];
      if (!attribute_used_[i] && a.variable == v && a.role == role && a.constant == constant &&
          a.inverted == inverted) {
        attribute_used_[i] = true;
        return true;
      }
    }
    return false;
  }

  const Graph& graph_;
  const Layout& layout_;
  std::vector<bool> edge_used_;
  std::vector<bool> attribute_used_;
  std::set<std::string> defined_;
};

}  // namespace detail

/// Rebuilds a tree from a graph and a layout that must place every relation
/// exactly once; throws LayoutError otherwise.
inline Tree graph_to_tree(const Graph& graph, const Layout& layout) {
  return detail::TreeBuilder(graph, layout).build();
}

inline Tree graph_to_tree(const Graph& graph) { return graph_to_tree(graph, default_layout(graph)); }

inline Tree graph_to_tree(const Amr& amr) { return graph_to_tree(amr.graph, amr.layout); }

/// Instance triples, the TOP triple, edges, then attributes, each in graph
/// insertion order.
inline std::vector<Triple> to_triples(const Graph& graph) {
  std::vector<Triple> triples;
  triples.reserve(graph.instances.size() + 1 + graph.edges.size() + graph.attributes.size());
  for (const Instance& i : graph.instances) triples.push_back({i.variable, "instance", i.label});
  triples.push_back({std::string(kTopSource), "TOP", graph.top});
  for (const Edge& e : graph.edges) triples.push_back({e.source, role_name(e.role), e.target});
  for (const Attribute& a : graph.attributes) {
    if (a.inverted)
      triples.push_back({a.constant, role_name(a.role), a.variable});
    else
      triples.push_back({a.variable, role_name(a.role), a.constant});
  }
  return triples;
}

/// Sorted triples, for multiset comparison.
inline std::vector<Triple> triple_multiset(const Graph& graph) {
  auto triples = to_triples(graph);
  std::sort(triples.begin(), triples.end());
  return triples;
}

inline std::size_t triple_count(const Graph& graph) {
  return graph.instances.size() + 1 + graph.edges.size() + graph.attributes.size();
}

/// Allocates variables that collide with nothing already in a graph: the
/// first ASCII letter of the concept (or `x`), then the same letter with the
/// smallest numeric suffix from 2 upward.
class VariableAllocator {
 public:
  explicit VariableAllocator(const Graph& graph) {
    for (const Instance& i : graph.instances) taken_.insert(i.variable);
    for (const Attribute& a : graph.attributes) taken_.insert(a.constant);
    for (const Edge& e : graph.edges) {
      taken_.insert(e.source);
      taken_.insert(e.target);
    }
    taken_.insert(std::string(kTopSource));
  }

  std::string fresh(std::string_view label) {
    char prefix = 'x';
    for (char c : label) {
      if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
        prefix = static_cast<char>(c | 0x20);
        break;
      }
    }
    std::string candidate(1, prefix);
    for (int n = 2; taken_.count(candidate); ++n) candidate = prefix + std::to_string(n);
    taken_.insert(candidate);
    return candidate;
  }

 private:
  std::unordered_set<std::string> taken_;
};

}  // namespace amrnorm

#endif  // AMRNORM_GRAPH_HPP
