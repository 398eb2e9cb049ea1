#ifndef AMRNORM_CORPUS_HPP
#define AMRNORM_CORPUS_HPP

// Multi-AMR corpus files: blank-line-separated PENMAN blocks, each preceded
// by optional `# ::key value` metadata lines.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amrnorm/graph.hpp"
#include "amrnorm/tree.hpp"

namespace amrnorm {

struct CorpusEntry {
  /// Comment lines preceding the AMR, verbatim (including the leading `#`).
  std::vector<std::string> comments;
  /// `::key value` fields parsed from the comment lines, in order.
  std::vector<std::pair<std::string, std::string>> metadata;
  Tree tree;
  Amr amr;
  std::size_t line = 0;   // 1-based line of the first PENMAN line in the source
  std::size_t index = 0;  // 0-based position among the AMR blocks of the source

  std::optional<std::string> id() const {
    for (const auto& [key, value] : metadata)
      if (key == "id") return value;
    return std::nullopt;
  }
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A corpus entry that failed to parse or convert.
struct EntryError {
  std::size_t index;  // 0-based block index among AMR blocks
  std::size_t line;   // 1-based line in the file
  std::optional<std::string> id;
  std::string message;
};

struct ReadResult {
  std::vector<CorpusEntry> entries;
  std::vector<EntryError> errors;
};

struct ReadOptions {
  bool skip_invalid = false;
};

/// Splits `# ::id x ::snt y` style comment lines into key/value fields.
inline std::vector<std::pair<std::string, std::string>> parse_metadata(std::string_view line) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t pos = line.find("::");
  while (pos != std::string_view::npos) {
    std::size_t next = pos + 2;
    // A field ends where the next whitespace-preceded `::` begins.
    std::size_t end = std::string_view::npos;
    for (std::size_t k = line.find("::", next); k != std::string_view::npos;
         k = line.find("::", k + 2)) {
      const bool after_space = k > 0 && (line[k - 1] == ' ' || line[k - 1] == '\t');
      const bool before_key = k + 2 < line.size() && line[k + 2] != ' ' && line[k + 2] != '\t';
      if (after_space && before_key) {
        end = k;
        break;
      }
    }
    std::string_view field = line.substr(next, end == std::string_view::npos ? end : end - next);
    const std::size_t space = field.find_first_of(" \t");
    std::string key(field.substr(0, space));
    std::string value;
    if (space != std::string_view::npos) {
      std::string_view rest = field.substr(space);
      const std::size_t b = rest.find_first_not_of(" \t");
      const std::size_t e = rest.find_last_not_of(" \t");
      if (b != std::string_view::npos) value = std::string(rest.substr(b, e - b + 1));
    }
    if (!key.empty()) out.emplace_back(std::move(key), std::move(value));
    pos = end;
  }
  return out;
}

/// Reads all AMR blocks from a stream. Blocks holding only comments (such as
/// a file header) are ignored. Without skip_invalid the first bad entry
/// throws CorpusError; with it, bad entries are reported in `errors`.
inline ReadResult read_corpus(std::istream& in, const ReadOptions& options = {}) {
  ReadResult result;
  std::vector<std::string> comments;
  std::string text;
  std::size_t text_line = 0;
  std::size_t line_number = 0;
  std::size_t index = 0;

  auto flush = [&] {
    if (text.empty()) {
      comments.clear();
      return;
    }
    CorpusEntry entry;
    entry.comments = std::move(comments);
    for (const std::string& c : entry.comments)
      for (auto& kv : parse_metadata(c)) entry.metadata.push_back(std::move(kv));
    entry.line = text_line;
    entry.index = index;
    try {
      entry.tree = parse(text);
      entry.amr = tree_to_graph(entry.tree);
      result.entries.push_back(std::move(entry));
    } catch (const ParseError& e) {
      // End-of-input errors point one past the last line of the block.
      const std::size_t lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
      EntryError err{index, text_line + std::min(e.line(), lines) - 1, entry.id(), e.what()};
      if (!options.skip_invalid)
        throw CorpusError("entry " + std::to_string(index + 1) + " (line " +
                          std::to_string(err.line) + "): " + err.message);
      result.errors.push_back(std::move(err));
    } catch (const std::runtime_error& e) {
      EntryError err{index, text_line, entry.id(), e.what()};
      if (!options.skip_invalid)
        throw CorpusError("entry " + std::to_string(index + 1) + " (line " +
                          std::to_string(err.line) + "): " + err.message);
      result.errors.push_back(std::move(err));
    }
    ++index;
    comments.clear();
    text.clear();
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) {
      flush();
      continue;
    }
    if (line[first] == '#' && text.empty()) {
      comments.push_back(line);
      continue;
    }
    if (text.empty()) text_line = line_number;
    text += line;
    text += '\n';
  }
  flush();
  return result;
}

inline ReadResult read_corpus(const std::string& path, const ReadOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open corpus file '" + path + "'");
  return read_corpus(in, options);
}

/// Reads a corpus from a string, mainly for tests.
inline ReadResult read_corpus_text(std::string_view text, const ReadOptions& options = {}) {
  std::istringstream in{std::string(text)};
  return read_corpus(in, options);
}

/// Rebuilds an entry's tree from its (possibly normalized) graph and layout.
inline void refresh_tree(CorpusEntry& entry) { entry.tree = graph_to_tree(entry.amr); }

/// Writes entries as comment lines followed by the serialized tree, with a
/// blank line between entries. Entries without verbatim comments get one
/// `# ::key value` line per metadata field.
inline void write_corpus(const std::vector<CorpusEntry>& entries, std::ostream& out, int indent = 3) {
  bool first = true;
  for (const CorpusEntry& entry : entries) {
    if (!first) out << '\n';
    first = false;
    if (!entry.comments.empty()) {
      for (const std::string& c : entry.comments) out << c << '\n';
    } else {
      for (const auto& [key, value] : entry.metadata)
        out << "# ::" << key << (value.empty() ? "" : " ") << value << '\n';
    }
    out << serialize(entry.tree, indent) << '\n';
  }
}

inline void write_corpus(const std::vector<CorpusEntry>& entries, const std::string& path,
                         int indent = 3) {
  std::ofstream out(path);
  if (!out) throw CorpusError("cannot open '" + path + "' for writing");
  write_corpus(entries, out, indent);
  out.flush();
  if (!out) throw CorpusError("failed writing '" + path + "'");
}

/// Pairs test and gold entries, by `id` when every entry on both sides has
/// one and by position otherwise.
inline std::vector<std::pair<const CorpusEntry*, const CorpusEntry*>> align(
    const std::vector<CorpusEntry>& test, const std::vector<CorpusEntry>& gold) {
  auto all_have_ids = [](const std::vector<CorpusEntry>& entries) {
    for (const CorpusEntry& e : entries)
      if (!e.id()) return false;
    return !entries.empty();
  };

  std::vector<std::pair<const CorpusEntry*, const CorpusEntry*>> pairs;
  if (all_have_ids(test) && all_have_ids(gold)) {
    std::map<std::string, const CorpusEntry*> by_id;
    for (const CorpusEntry& e : test)
      if (!by_id.emplace(*e.id(), &e).second)
        throw CorpusError("duplicate id '" + *e.id() + "' in test corpus");
    std::set<std::string> gold_ids;
    std::vector<std::string> missing;
    for (const CorpusEntry& g : gold) {
      if (!gold_ids.insert(*g.id()).second)
        throw CorpusError("duplicate id '" + *g.id() + "' in gold corpus");
      auto it = by_id.find(*g.id());
      if (it == by_id.end())
        missing.push_back(*g.id());
      else
        pairs.emplace_back(it->second, &g);
    }
    std::vector<std::string> extra;
    for (const auto& [id, e] : by_id)
      if (!gold_ids.count(id)) extra.push_back(id);
    if (!missing.empty() || !extra.empty()) {
      std::string message = "corpora do not align by id";
      if (!missing.empty()) {
        message += "; missing from test:";
        for (const auto& id : missing) message += " " + id;
      }
      if (!extra.empty()) {
        message += "; not in gold:";
        for (const auto& id : extra) message += " " + id;
      }
      throw CorpusError(message);
    }
    return pairs;
  }

  if (test.size() != gold.size())
    throw CorpusError("corpora differ in length (" + std::to_string(test.size()) + " test, " +
                      std::to_string(gold.size()) + " gold) and cannot be aligned by position");
  for (std::size_t i = 0; i < test.size(); ++i) pairs.emplace_back(&test[i], &gold[i]);
  return pairs;
}

struct Alignment {
  std::vector<std::pair<const CorpusEntry*, const CorpusEntry*>> pairs;
  std::size_t skipped = 0;  // pairs dropped because one side failed to read
};

/// Aligns two read results, dropping pairs where either side had a read
/// error. Falls back to plain `align` when neither side has errors.
inline Alignment align(const ReadResult& test, const ReadResult& gold) {
  if (test.errors.empty() && gold.errors.empty()) return {align(test.entries, gold.entries), 0};

  auto ids_complete = [](const ReadResult& r) {
    for (const CorpusEntry& e : r.entries)
      if (!e.id()) return false;
    for (const EntryError& e : r.errors)
      if (!e.id) return false;
    return true;
  };

  Alignment result;
  if (ids_complete(test) && ids_complete(gold)) {
    std::set<std::string> failed;
    for (const EntryError& e : test.errors) failed.insert(*e.id);
    for (const EntryError& e : gold.errors) failed.insert(*e.id);
    auto keep = [&](const std::vector<CorpusEntry>& entries) {
      std::vector<CorpusEntry> kept;
      for (const CorpusEntry& e : entries)
        if (!failed.count(*e.id())) kept.push_back(e);
      return kept;
    };
    // Match ids first so that missing ids are still reported.
    const std::vector<CorpusEntry> t = keep(test.entries);
    const std::vector<CorpusEntry> g = keep(gold.entries);
    align(t, g);
    std::map<std::string, const CorpusEntry*> by_id;
    for (const CorpusEntry& e : test.entries) by_id.emplace(*e.id(), &e);
    for (const CorpusEntry& e : gold.entries) {
      if (failed.count(*e.id())) continue;
      result.pairs.emplace_back(by_id.at(*e.id()), &e);
    }
    result.skipped = failed.size();
    return result;
  }

  const std::size_t test_blocks = test.entries.size() + test.errors.size();
  const std::size_t gold_blocks = gold.entries.size() + gold.errors.size();
  if (test_blocks != gold_blocks)
    throw CorpusError("corpora differ in length (" + std::to_string(test_blocks) + " test, " +
                      std::to_string(gold_blocks) + " gold) and cannot be aligned by position");
  std::vector<const CorpusEntry*> t(test_blocks, nullptr);
  std::vector<const CorpusEntry*> g(gold_blocks, nullptr);
  for (const CorpusEntry& e : test.entries) t[e.index] = &e;
  for (const CorpusEntry& e : gold.entries) g[e.index] = &e;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] && g[i])
      result.pairs.emplace_back(t[i], g[i]);
    else
      ++result.skipped;
  }
  return result;
}

}  // namespace amrnorm

#endif  // AMRNORM_CORPUS_HPP
