#ifndef AMRNORM_NORMALIZE_HPP
#define AMRNORM_NORMALIZE_HPP

// Graph-to-graph normalization passes. Each pass takes an Amr (graph plus
// layout) and returns a new one whose layout is kept consistent with the
// graph, so the result can always be serialized again.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amrnorm/graph.hpp"
#include "amrnorm/reification.hpp"
#include "amrnorm/roles.hpp"

namespace amrnorm {

struct NormalizeOptions {
  bool canonicalize_roles = false;
  bool reify_relations = false;
  bool dereify_relations = false;
  bool reify_attributes = false;
  bool preserve_structure = false;

  bool any() const {
    return canonicalize_roles || reify_relations || dereify_relations || reify_attributes ||
           preserve_structure;
  }
};

/// Per-pass change counts.
struct NormalizeCounts {
  std::size_t roles_canonicalized = 0;
  std::size_t relations_reified = 0;
  std::size_t nodes_dereified = 0;
  std::size_t attributes_reified = 0;
  std::size_t structure_relations_added = 0;

  NormalizeCounts& operator+=(const NormalizeCounts& o) {
    roles_canonicalized += o.roles_canonicalized;
    relations_reified += o.relations_reified;
    nodes_dereified += o.nodes_dereified;
    attributes_reified += o.attributes_reified;
    structure_relations_added += o.structure_relations_added;
    return *this;
  }
};

namespace detail {

struct KeyRef {
  std::string owner;
  std::size_t index;
};

inline std::optional<std::size_t> find_key(const Layout& layout, const std::string& owner,
                                           std::string_view role, std::string_view target) {
  auto it = layout.branch_order.find(owner);
  if (it == layout.branch_order.end()) return std::nullopt;
  for (std::size_t i = 0; i < it->second.size(); ++i)
    if (it->second[i].role == role && it->second[i].target == target) return i;
  return std::nullopt;
}

/// Locates the serialized branch of an edge: on the source when written
/// forward, or on the target when written inverted.
inline KeyRef locate(const Layout& layout, const Edge& e) {
  if (auto i = find_key(layout, e.source, e.role, e.target)) return {e.source, *i};
  if (auto i = find_key(layout, e.target, invert(e.role), e.source)) return {e.target, *i};
  throw LayoutError("layout has no branch for edge (" + e.source + " " + e.role + " " + e.target +
                    ")");
}

inline KeyRef locate(const Layout& layout, const Attribute& a) {
  const std::string role = a.inverted ? invert(a.role) : a.role;
  if (auto i = find_key(layout, a.variable, role, a.constant)) return {a.variable, *i};
  throw LayoutError("layout has no branch for attribute (" + a.variable + " " + role + " " +
                    a.constant + ")");
}

inline BranchKey& key_at(Layout& layout, const KeyRef& ref) {
  return layout.branch_order[ref.owner][ref.index];
}

}  // namespace detail

/// Rewrites non-canonical role spellings. `:domain-of` becomes `:mod` and
/// `:mod-of` becomes `:domain` (swapping the relation's direction); the naive
/// inversions `:consist`, `:prep-on-behalf` and `:prep-out` become inverted
/// `:consist-of` etc.
inline Amr canonicalize_roles(Amr amr, NormalizeCounts* counts = nullptr) {
  Graph& g = amr.graph;
  auto swapped = [](std::string_view role) -> std::optional<std::string> {
    if (role == ":domain-of") return ":mod";
    if (role == ":mod-of") return ":domain";
    return std::nullopt;
  };
  auto restored = [](std::string_view role) -> std::optional<std::string> {
    if (role == ":consist" || role == ":prep-on-behalf" || role == ":prep-out")
      return std::string(role) + "-of";
    return std::nullopt;
  };

  std::size_t changed = 0;
  for (auto& [owner, keys] : amr.layout.branch_order) {
    for (BranchKey& key : keys) {
      std::optional<std::string> new_role = swapped(key.role);
      bool flip_to_inverted = false;
      if (!new_role) {
        new_role = restored(key.role);
        flip_to_inverted = new_role.has_value();
      }
      if (!new_role) continue;
      // The relation as currently stored, before and after the rewrite.
      const std::string old_role = deinvert(key.role);
      bool done = false;
      if (g.has_variable(key.target)) {
        for (Edge& e : g.edges) {
          const bool match = flip_to_inverted
                                 ? (e.source == owner && e.role == old_role && e.target == key.target)
                                 : (e.source == key.target && e.role == old_role && e.target == owner);
          if (!match) continue;
          if (flip_to_inverted)
            e = Edge{key.target, *new_role, owner};
          else
            e = Edge{owner, *new_role, key.target};
          done = true;
          break;
        }
      }
      if (!done) {
        for (Attribute& a : g.attributes) {
          if (a.variable != owner || a.role != old_role || a.constant != key.target ||
              a.inverted == flip_to_inverted)
            continue;
          a.role = *new_role;
          a.inverted = flip_to_inverted;
          done = true;
          break;
        }
      }
      if (!done) throw LayoutError("layout branch " + key.role + " " + key.target + " on '" +
                                   owner + "' matches no relation in the graph");
      key.role = flip_to_inverted ? invert(*new_role) : *new_role;
      ++changed;
    }
  }
  if (counts) counts->roles_canonicalized += changed;
  return amr;
}

/// Replaces each relation whose role has a unique reifying row with a new
/// node of the row's concept. A forward relation `(a :role b)` is written as
/// `(a :<source>-of (n / concept :<target> b))`; an inverted one as
/// `(a :<target>-of (n / concept :<source> b))`.
inline Amr reify_relations(Amr amr, const ReificationTable& table,
                           NormalizeCounts* counts = nullptr) {
  Graph& g = amr.graph;
  Layout& layout = amr.layout;
  VariableAllocator allocator(g);
  std::size_t reified = 0;

  auto add_node = [&](const ReificationEntry& row) {
    std::string v = allocator.fresh(row.reified_concept);
    g.instances.push_back({v, row.reified_concept});
    layout.branch_order[v];
    ++reified;
    return v;
  };

  std::vector<Edge> edges;
  edges.reserve(g.edges.size());
  for (const Edge& e : g.edges) {
    const ReificationEntry* row = table.reification_for(e.role);
    if (!row) {
      edges.push_back(e);
      continue;
    }
    const detail::KeyRef ref = detail::locate(layout, e);
    const BranchKey old = detail::key_at(layout, ref);
    const std::string node = add_node(*row);
    edges.push_back({node, row->source_role, e.source});
    edges.push_back({node, row->target_role, e.target});
    const bool forward = ref.owner == e.source;
    const std::string& child = forward ? e.target : e.source;
    detail::key_at(layout, ref) =
        BranchKey{invert(forward ? row->source_role : row->target_role), node, true};
    layout.branch_order[node].push_back(
        {forward ? row->target_role : row->source_role, child, old.defines});
    layout.definition_site[node] = ref.owner;
    if (old.defines) layout.definition_site[child] = node;
  }

  std::vector<Attribute> attributes;
  for (const Attribute& a : g.attributes) {
    const ReificationEntry* row = table.reification_for(a.role);
    if (!row) {
      attributes.push_back(a);
      continue;
    }
    const detail::KeyRef ref = detail::locate(layout, a);
    const std::string node = add_node(*row);
    // The variable side keeps an edge; the constant side stays an attribute.
    const std::string& variable_role = a.inverted ? row->target_role : row->source_role;
    const std::string& constant_role = a.inverted ? row->source_role : row->target_role;
    edges.push_back({node, variable_role, a.variable});
    attributes.push_back({node, constant_role, a.constant, false});
    detail::key_at(layout, ref) = BranchKey{invert(variable_role), node, true};
    layout.branch_order[node].push_back({constant_role, a.constant, false});
    layout.definition_site[node] = a.variable;
  }
  g.edges = std::move(edges);
  g.attributes = std::move(attributes);
  if (counts) counts->relations_reified += reified;
  return amr;
}

/// How a reified node would collapse back into a single relation.
struct CollapsePlan {
  std::string node;
  const ReificationEntry* row = nullptr;
  std::string parent;   // the node's definition site, one participant
  std::string other;    // the other participant: a variable or a constant
  bool other_is_constant = false;
  bool forward = true;  // new relation is (parent :role other); else (other :role parent)
  std::size_t parent_edge = 0;
  std::size_t other_index = 0;  // into edges, or into attributes if other_is_constant
  bool other_defined_here = false;
};

/// Checks whether `node` can be collapsed: its concept has a dereifying row,
/// it is not the top, and it participates in exactly the two relations that
/// reification would have introduced (no TOP, no other relations).
inline std::optional<CollapsePlan> plan_collapse(const Amr& amr, const std::string& node,
                                                 const ReificationTable& table) {
  const Graph& g = amr.graph;
  if (node == g.top) return std::nullopt;
  const std::string* label = g.label_of(node);
  if (!label) return std::nullopt;
  const auto rows = table.dereifications_for(*label);
  if (rows.empty()) return std::nullopt;

  std::vector<std::size_t> out_edges;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (g.edges[i].target == node) return std::nullopt;
    if (g.edges[i].source == node) out_edges.push_back(i);
  }
  std::vector<std::size_t> out_attributes;
  for (std::size_t i = 0; i < g.attributes.size(); ++i) {
    if (g.attributes[i].variable != node) continue;
    if (g.attributes[i].inverted) return std::nullopt;
    out_attributes.push_back(i);
  }
  if (out_edges.size() + out_attributes.size() != 2 || out_edges.empty()) return std::nullopt;

  auto site = amr.layout.definition_site.find(node);
  if (site == amr.layout.definition_site.end()) return std::nullopt;
  CollapsePlan plan;
  plan.node = node;
  plan.parent = site->second;

  std::optional<std::size_t> parent_edge;
  for (std::size_t i : out_edges)
    if (g.edges[i].target == plan.parent && !parent_edge) parent_edge = i;
  if (!parent_edge) return std::nullopt;
  plan.parent_edge = *parent_edge;
  const std::string& parent_role = g.edges[*parent_edge].role;

  std::string other_role;
  if (out_edges.size() == 2) {
    plan.other_index = out_edges[0] == *parent_edge ? out_edges[1] : out_edges[0];
    const Edge& e = g.edges[plan.other_index];
    if (e.target == plan.parent) return std::nullopt;
    plan.other = e.target;
    other_role = e.role;
  } else {
    plan.other_index = out_attributes.front();
    const Attribute& a = g.attributes[plan.other_index];
    plan.other = a.constant;
    plan.other_is_constant = true;
    other_role = a.role;
  }

  // Prefer rows under which the definition site is the relation's source, so
  // that `(a :<source>-of (n :<target> b))` collapses to `(a :role b)`.
  for (const ReificationEntry* row : rows)
    if (row->source_role == parent_role && row->target_role == other_role) {
      plan.row = row;
      plan.forward = true;
      break;
    }
  if (!plan.row && !plan.other_is_constant)
    for (const ReificationEntry* row : rows)
      if (row->target_role == parent_role && row->source_role == other_role) {
        plan.row = row;
        plan.forward = false;
        break;
      }
  if (!plan.row) return std::nullopt;

  if (auto k = detail::find_key(amr.layout, node, other_role, plan.other))
    plan.other_defined_here = amr.layout.branch_order.at(node)[*k].defines;
  return plan;
}

/// Collapses every eligible reified node back into the relation it encodes,
/// repeating until no node is eligible. Shortcut and ambiguous rows never
/// collapse.
inline Amr dereify_relations(Amr amr, const ReificationTable& table,
                             NormalizeCounts* counts = nullptr) {
  std::size_t collapsed = 0;
  for (bool progress = true; progress;) {
    progress = false;
    for (const Instance& instance : amr.graph.instances) {
      auto plan = plan_collapse(amr, instance.variable, table);
      if (!plan) continue;
      Graph& g = amr.graph;
      Layout& layout = amr.layout;
      const std::string node = plan->node;
      const std::string& role = plan->row->role;

      // Replace the edge to the definition site with the collapsed relation
      // and drop the node's other relation.
      if (plan->other_is_constant) {
        g.attributes[plan->other_index] = Attribute{plan->parent, role, plan->other, false};
        g.edges.erase(g.edges.begin() + static_cast<std::ptrdiff_t>(plan->parent_edge));
      } else {
        g.edges[plan->parent_edge] = plan->forward ? Edge{plan->parent, role, plan->other}
                                                   : Edge{plan->other, role, plan->parent};
        g.edges.erase(g.edges.begin() + static_cast<std::ptrdiff_t>(plan->other_index));
      }
      g.instances.erase(std::find_if(g.instances.begin(), g.instances.end(),
                                     [&](const Instance& i) { return i.variable == node; }));

      auto& parent_keys = layout.branch_order[plan->parent];
      for (BranchKey& key : parent_keys) {
        if (key.target != node || !key.defines) continue;
        key = BranchKey{plan->forward ? role : invert(role), plan->other,
                        plan->other_defined_here};
        break;
      }
      if (plan->other_defined_here) layout.definition_site[plan->other] = plan->parent;
      layout.branch_order.erase(node);
      layout.definition_site.erase(node);
      ++collapsed;
      progress = true;
      break;  // instances changed; rescan
    }
  }
  if (counts) counts->nodes_dereified += collapsed;
  return amr;
}

/// Turns every constant into a node with a fresh variable whose concept is the
/// constant lexeme: `:mod 7` becomes `:mod (x / 7)`.
inline Amr reify_attributes(Amr amr, NormalizeCounts* counts = nullptr) {
  Graph& g = amr.graph;
  VariableAllocator allocator(g);
  for (const Attribute& a : g.attributes) {
    const detail::KeyRef ref = detail::locate(amr.layout, a);
    std::string v = allocator.fresh(a.constant);
    g.instances.push_back({v, a.constant});
    if (a.inverted)
      g.edges.push_back({v, a.role, a.variable});
    else
      g.edges.push_back({a.variable, a.role, v});
    BranchKey& key = detail::key_at(amr.layout, ref);
    key.target = v;
    key.defines = true;
    amr.layout.branch_order[v];
    amr.layout.definition_site[v] = a.variable;
  }
  if (counts) counts->attributes_reified += g.attributes.size();
  g.attributes.clear();
  return amr;
}

/// Adds a structural `:TOP` edge from each node's definition site to the node,
/// for every node but the top. The result may be cyclic once these edges are
/// counted; cycle checks ignore them.
inline Amr preserve_structure(Amr amr, NormalizeCounts* counts = nullptr) {
  Graph& g = amr.graph;
  std::size_t added = 0;
  const std::vector<std::string> variables = g.variables();
  for (const std::string& v : variables) {
    if (v == g.top) continue;
    auto site = amr.layout.definition_site.find(v);
    if (site == amr.layout.definition_site.end())
      throw LayoutError("layout has no definition site for variable '" + v + "'");
    const std::string& parent = site->second;
    const Edge edge{parent, std::string(kStructureRole), v};
    if (std::find(g.edges.begin(), g.edges.end(), edge) != g.edges.end()) continue;
    g.edges.push_back(edge);
    amr.layout.branch_order[parent].push_back({std::string(kStructureRole), v, false});
    ++added;
  }
  if (counts) counts->structure_relations_added += added;
  return amr;
}

/// Applies the selected passes in the fixed order: role canonicalization,
/// relation reification or dereification, attribute reification, structure
/// preservation.
inline Amr normalize(Amr amr, const NormalizeOptions& options, const ReificationTable& table,
                     NormalizeCounts* counts = nullptr) {
  if (options.reify_relations && options.dereify_relations)
    throw std::invalid_argument("relation reification and dereification are mutually exclusive");
  if (options.canonicalize_roles) amr = canonicalize_roles(std::move(amr), counts);
  if (options.reify_relations) amr = reify_relations(std::move(amr), table, counts);
  if (options.dereify_relations) amr = dereify_relations(std::move(amr), table, counts);
  if (options.reify_attributes) amr = reify_attributes(std::move(amr), counts);
  if (options.preserve_structure) amr = preserve_structure(std::move(amr), counts);
  return amr;
}

/// Graph-only forms; they use the default layout.
inline Graph canonicalize_roles(const Graph& graph) {
  return canonicalize_roles(Amr{graph, default_layout(graph)}).graph;
}
inline Graph reify_relations(const Graph& graph, const ReificationTable& table) {
  return reify_relations(Amr{graph, default_layout(graph)}, table).graph;
}
inline Graph dereify_relations(const Graph& graph, const ReificationTable& table) {
  return dereify_relations(Amr{graph, default_layout(graph)}, table).graph;
}
inline Graph reify_attributes(const Graph& graph) {
  return reify_attributes(Amr{graph, default_layout(graph)}).graph;
}

}  // namespace amrnorm

#endif  // AMRNORM_NORMALIZE_HPP
