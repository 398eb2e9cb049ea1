#ifndef AMRNORM_ROLES_HPP
#define AMRNORM_ROLES_HPP

#include <algorithm>
#include <array>
#include <string>
#include <string_view>

namespace amrnorm {

/// Roles whose canonical (non-inverted) spelling already ends in `-of`.
inline constexpr std::array<std::string_view, 3> kCanonicalOfRoles = {
    ":consist-of", ":prep-on-behalf-of", ":prep-out-of"};

/// Role name reserved for the structural relations added by structure
/// preservation. Edges with this role are ignored by cycle detection.
inline constexpr std::string_view kStructureRole = ":TOP";

inline bool is_canonical_of_role(std::string_view role) {
  return std::find(kCanonicalOfRoles.begin(), kCanonicalOfRoles.end(), role) !=
         kCanonicalOfRoles.end();
}

/// True if the serialized role marks an inverted (target-to-source) branch.
inline bool is_inverted(std::string_view role) {
  return role.size() > 3 && role.ends_with("-of") && !is_canonical_of_role(role);
}

inline std::string invert(std::string_view role) {
  return std::string(role) + "-of";
}

/// Strips one `-of` suffix from an inverted role; other roles are returned
/// unchanged.
inline std::string deinvert(std::string_view role) {
  if (!is_inverted(role)) return std::string(role);
  return std::string(role.substr(0, role.size() - 3));
}

/// Triple-level role name: the role without its leading colon.
inline std::string role_name(std::string_view role) {
  if (!role.empty() && role.front() == ':') role.remove_prefix(1);
  return std::string(role);
}

}  // namespace amrnorm

#endif  // AMRNORM_ROLES_HPP
