#ifndef AMRNORM_REIFICATION_HPP
#define AMRNORM_REIFICATION_HPP

#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace amrnorm {

/// One role/concept row of the reification mapping.
struct ReificationEntry {
  std::string role;             // e.g. ":manner"
  std::string reified_concept;  // e.g. "have-manner-91"
  std::string source_role;      // role from the new node to the relation's source
  std::string target_role;      // role from the new node to the relation's target
  bool reifies = false;
  bool dereifies = false;
  bool shortcut = false;
  friend bool operator==(const ReificationEntry&, const ReificationEntry&) = default;
};

class TableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Built-in mapping; identical to data/reifications.tsv.
inline constexpr std::string_view kDefaultReificationTable = R"tsv(# Role reifications: one row per role/concept mapping.
# Columns (tab-separated): role, concept, source role, target role,
# reifies, dereifies, shortcut. Flags are 1 or 0.
#
# Rows for one role with several concepts (:beneficiary, :poss) are ambiguous
# and are neither reified nor dereified.
:accompanier	accompany-01	:ARG0	:ARG1	1	1	0
:age	age-01	:ARG1	:ARG2	1	1	0
:beneficiary	benefit-01	:ARG0	:ARG1	0	0	0
:beneficiary	receive-01	:ARG2	:ARG0	0	0	0
:cause	cause-01	:ARG1	:ARG0	1	0	1
:concession	have-concession-91	:ARG1	:ARG2	1	1	0
:condition	have-condition-91	:ARG1	:ARG2	1	1	0
:cost	cost-01	:ARG1	:ARG2	1	0	1
:degree	have-degree-92	:ARG1	:ARG2	1	1	0
:destination	be-destined-for-91	:ARG1	:ARG2	1	1	0
:domain	have-mod-91	:ARG2	:ARG1	1	1	0
:duration	last-01	:ARG1	:ARG2	1	1	0
:employed-by	have-org-role-91	:ARG0	:ARG1	1	0	1
:example	exemplify-01	:ARG0	:ARG1	1	1	0
:extent	have-extent-91	:ARG1	:ARG2	1	1	0
:frequency	have-frequency-91	:ARG1	:ARG2	1	1	0
:instrument	have-instrument-91	:ARG1	:ARG2	1	1	0
:li	have-li-91	:ARG1	:ARG2	1	1	0
:location	be-located-at-91	:ARG1	:ARG2	1	1	0
:manner	have-manner-91	:ARG1	:ARG2	1	1	0
:meaning	mean-01	:ARG1	:ARG2	1	0	1
:mod	have-mod-91	:ARG1	:ARG2	1	1	0
:name	have-name-91	:ARG1	:ARG2	1	1	0
:ord	have-ord-91	:ARG1	:ARG2	1	1	0
:part	have-part-91	:ARG1	:ARG2	1	1	0
:polarity	have-polarity-91	:ARG1	:ARG2	1	1	0
:poss	own-01	:ARG0	:ARG1	0	0	0
:poss	have-03	:ARG0	:ARG1	0	0	0
:purpose	have-purpose-91	:ARG1	:ARG2	1	1	0
:quant	have-quant-91	:ARG1	:ARG2	1	1	0
:role	have-org-role-91	:ARG0	:ARG2	1	0	1
:source	be-from-91	:ARG1	:ARG2	1	1	0
:subevent	have-subevent-91	:ARG1	:ARG2	1	1	0
:subset	include-91	:ARG2	:ARG1	1	0	1
:superset	include-91	:ARG1	:ARG2	1	0	1
:time	be-temporally-at-91	:ARG1	:ARG2	1	1	0
:topic	concern-02	:ARG0	:ARG1	1	1	0
:value	have-value-91	:ARG1	:ARG2	1	1	0
)tsv";

class ReificationTable {
 public:
  ReificationTable() = default;
  explicit ReificationTable(std::vector<ReificationEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const ReificationEntry& e = entries_[i];
      if (e.dereifies && !e.reifies)
        throw TableError("row " + std::to_string(i + 1) + " (" + e.role +
                         ") dereifies but does not reify");
      if (e.dereifies && e.shortcut)
        throw TableError("row " + std::to_string(i + 1) + " (" + e.role +
                         ") is a shortcut and cannot dereify");
      if (e.source_role == e.target_role)
        throw TableError("row " + std::to_string(i + 1) + " (" + e.role +
                         ") uses the same role for source and target");
    }
  }

  /// Parses the tab-separated table format; `#` starts a comment line.
  static ReificationTable parse(std::string_view text) {
    std::vector<ReificationEntry> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
      std::vector<std::string> cols;
      std::size_t start = 0;
      for (;;) {
        const std::size_t tab = line.find('\t', start);
        cols.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
      }
      if (cols.size() != 7)
        throw TableError("line " + std::to_string(number) + ": expected 7 tab-separated columns, got " +
                         std::to_string(cols.size()));
      auto flag = [&](const std::string& s) {
        if (s == "1") return true;
        if (s == "0" || s.empty()) return false;
        throw TableError("line " + std::to_string(number) + ": flag must be 0 or 1, got '" + s + "'");
      };
      entries.push_back({cols[0], cols[1], cols[2], cols[3], flag(cols[4]), flag(cols[5]), flag(cols[6])});
    }
    return ReificationTable(std::move(entries));
  }

  static ReificationTable load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TableError("cannot open reification table '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
  }

  static const ReificationTable& builtin() {
    static const ReificationTable table = parse(kDefaultReificationTable);
    return table;
  }

  const std::vector<ReificationEntry>& entries() const { return entries_; }

  /// Row used to reify `role`, or null if the role has no row, has several
  /// competing rows, or its row does not reify.
  const ReificationEntry* reification_for(std::string_view role) const {
    const ReificationEntry* found = nullptr;
    for (const ReificationEntry& e : entries_) {
      if (e.role != role) continue;
      if (found) return nullptr;
      found = &e;
    }
    return found && found->reifies ? found : nullptr;
  }

  /// Rows that may collapse a node of `concept`, in table order.
  std::vector<const ReificationEntry*> dereifications_for(std::string_view concept_label) const {
    std::vector<const ReificationEntry*> out;
    for (const ReificationEntry& e : entries_)
      if (e.dereifies && e.reified_concept == concept_label && reification_for(e.role) == &e)
        out.push_back(&e);
    return out;
  }

 private:
  std::vector<ReificationEntry> entries_;
};

}  // namespace amrnorm

#endif  // AMRNORM_REIFICATION_HPP
