#ifndef AMRNORM_VALIDATE_HPP
#define AMRNORM_VALIDATE_HPP

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "amrnorm/graph.hpp"
#include "amrnorm/roles.hpp"
#include "amrnorm/tree.hpp"

namespace amrnorm {

enum class Severity { Warning, Error };

enum class DiagnosticCode {
  ConstantSourcedRelation,  // inverted branch whose child (the source) is a constant
  Cycle,
  Disconnected,
  DuplicateDefinition,
  UndefinedVariable,
  MissingInstance,
  NonCanonicalRole,
};

struct Diagnostic {
  Severity severity;
  DiagnosticCode code;
  std::string message;
  std::string role;  // surface role involved, if any
};

inline std::string_view to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

inline std::string_view to_string(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::ConstantSourcedRelation: return "constant-sourced-relation";
    case DiagnosticCode::Cycle: return "cycle";
    case DiagnosticCode::Disconnected: return "disconnected";
    case DiagnosticCode::DuplicateDefinition: return "duplicate-definition";
    case DiagnosticCode::UndefinedVariable: return "undefined-variable";
    case DiagnosticCode::MissingInstance: return "missing-instance";
    case DiagnosticCode::NonCanonicalRole: return "non-canonical-role";
  }
  return "unknown";
}

inline bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const Diagnostic& d : diagnostics)
    if (d.severity == Severity::Error) return true;
  return false;
}

/// Surface role spellings that canonicalization rewrites.
inline bool is_non_canonical_role(std::string_view role) {
  return role == ":domain-of" || role == ":mod-of" || role == ":consist" ||
         role == ":prep-on-behalf" || role == ":prep-out";
}

namespace detail {

inline void check_role(std::string_view role, std::vector<Diagnostic>& out) {
  if (is_non_canonical_role(role))
    out.push_back({Severity::Warning, DiagnosticCode::NonCanonicalRole,
                   "non-canonical role " + std::string(role), std::string(role)});
}

inline void validate_node(const Node& node, std::map<std::string, int>& defined,
                          std::vector<Diagnostic>& out) {
  if (++defined[node.variable] == 2)
    out.push_back({Severity::Error, DiagnosticCode::DuplicateDefinition,
                   "variable '" + node.variable + "' is defined more than once", {}});
  for (const Branch& branch : node.branches) {
    check_role(branch.role, out);
    if (auto c = std::get_if<Constant>(&branch.target)) {
      if (is_inverted(branch.role))
        out.push_back({Severity::Error, DiagnosticCode::ConstantSourcedRelation,
                       "inverted relation " + branch.role + " on '" + node.variable +
                           "' has constant " + c->value + " as its source",
                       branch.role});
    } else if (auto child = std::get_if<Box<Node>>(&branch.target)) {
      validate_node(**child, defined, out);
    }
  }
}

inline void collect_references(const Node& node, std::vector<std::string>& out) {
  for (const Branch& branch : node.branches) {
    if (auto ref = std::get_if<VariableRef>(&branch.target))
      out.push_back(ref->variable);
    else if (auto child = std::get_if<Box<Node>>(&branch.target))
      collect_references(**child, out);
  }
}

inline void validate_structure(const Graph& graph, std::vector<Diagnostic>& out) {
  if (auto cycle = find_cycle(graph); !cycle.empty()) {
    std::string path;
    for (const std::string& v : cycle) path += v + " -> ";
    out.push_back({Severity::Error, DiagnosticCode::Cycle, "directed cycle " + path + cycle.front(),
                   {}});
  }
  for (const std::string& v : unreachable_variables(graph))
    out.push_back({Severity::Error, DiagnosticCode::Disconnected,
                   "variable '" + v + "' is not connected to the top", {}});
}

}  // namespace detail

/// Diagnostics for a parsed tree, including those that would make
/// tree_to_graph fail.
inline std::vector<Diagnostic> validate(const Tree& tree) {
  std::vector<Diagnostic> out;
  std::map<std::string, int> defined;
  detail::validate_node(tree.root, defined, out);

  std::vector<std::string> references;
  detail::collect_references(tree.root, references);
  std::set<std::string> reported;
  for (const std::string& v : references)
    if (!defined.count(v) && reported.insert(v).second)
      out.push_back({Severity::Error, DiagnosticCode::UndefinedVariable,
                     "reference to undefined variable '" + v + "'", {}});

  if (reported.empty()) {
    // Build the relation graph without the definition checks of tree_to_graph.
    Amr amr;
    amr.graph.top = tree.root.variable;
    detail::convert_node(tree.root, amr);
    if (auto cycle = find_cycle(amr.graph); !cycle.empty()) {
      std::string path;
      for (const std::string& v : cycle) path += v + " -> ";
      out.push_back({Severity::Error, DiagnosticCode::Cycle,
                     "directed cycle " + path + cycle.front(), {}});
    }
  }
  return out;
}

/// Diagnostics for a graph, using its layout for surface role spellings.
inline std::vector<Diagnostic> validate(const Amr& amr) {
  std::vector<Diagnostic> out;
  const Graph& graph = amr.graph;
  std::set<std::string> seen;
  for (const Instance& i : graph.instances)
    if (!seen.insert(i.variable).second)
      out.push_back({Severity::Error, DiagnosticCode::DuplicateDefinition,
                     "variable '" + i.variable + "' has more than one instance", {}});
  if (!graph.has_variable(graph.top))
    out.push_back({Severity::Error, DiagnosticCode::MissingInstance,
                   "top '" + graph.top + "' has no instance", {}});
  std::set<std::string> reported;
  auto require = [&](const std::string& v) {
    if (!graph.has_variable(v) && reported.insert(v).second)
      out.push_back({Severity::Error, DiagnosticCode::UndefinedVariable,
                     "relation mentions variable '" + v + "' with no instance", {}});
  };
  for (const Edge& e : graph.edges) {
    require(e.source);
    require(e.target);
  }
  for (const Attribute& a : graph.attributes) {
    require(a.variable);
    if (a.inverted)
      out.push_back({Severity::Error, DiagnosticCode::ConstantSourcedRelation,
                     "relation " + a.role + " has constant " + a.constant +
                         " as its source (target '" + a.variable + "')",
                     invert(a.role)});
  }
  for (const auto& [variable, keys] : amr.layout.branch_order)
    for (const BranchKey& key : keys) detail::check_role(key.role, out);
  detail::validate_structure(graph, out);
  return out;
}

inline std::vector<Diagnostic> validate(const Graph& graph) {
  return validate(Amr{graph, default_layout(graph)});
}

}  // namespace amrnorm

#endif  // AMRNORM_VALIDATE_HPP
