#ifndef AMRNORM_CLI_HPP
#define AMRNORM_CLI_HPP

// The `amrnorm` command: normalize, score, stats and check over corpus files.
// Reports go to `out`, diagnostics to `err`.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "amrnorm/corpus.hpp"
#include "amrnorm/normalize.hpp"
#include "amrnorm/reification.hpp"
#include "amrnorm/smatch.hpp"
#include "amrnorm/stats.hpp"
#include "amrnorm/validate.hpp"

namespace amrnorm {

enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitUsage = 2 };

struct CliConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  std::string output;
  std::string report;
  NormalizeOptions normalize;
  std::string table_path;
  bool skip_invalid = false;
  SmatchOptions smatch;
  unsigned jobs = 1;
  int indent = 3;
  bool key_value = false;
};

namespace detail {

inline const ReificationTable& load_table(const CliConfig& config, ReificationTable& storage) {
  if (config.table_path.empty()) return ReificationTable::builtin();
  storage = ReificationTable::load(config.table_path);
  return storage;
}

inline std::string describe(const std::string& path, std::size_t line, const std::optional<std::string>& id) {
  std::string s = path + ":" + std::to_string(line);
  if (id) s += " (" + *id + ")";
  return s;
}

/// Reads a corpus; with skip_invalid, entries that fail to read or carry
/// error diagnostics are reported on `err` and left out.
inline ReadResult load_corpus(const std::string& path, bool skip_invalid, std::ostream& err) {
  ReadResult result = read_corpus(path, ReadOptions{skip_invalid});
  if (!skip_invalid) return result;
  std::vector<CorpusEntry> kept;
  for (CorpusEntry& entry : result.entries) {
    std::vector<Diagnostic> diagnostics = validate(entry.amr);
    if (!has_errors(diagnostics)) {
      kept.push_back(std::move(entry));
      continue;
    }
    std::string message;
    for (const Diagnostic& d : diagnostics)
      if (d.severity == Severity::Error) message += (message.empty() ? "" : "; ") + d.message;
    result.errors.push_back({entry.index, entry.line, entry.id(), message});
  }
  result.entries = std::move(kept);
  std::sort(result.errors.begin(), result.errors.end(),
            [](const EntryError& a, const EntryError& b) { return a.index < b.index; });
  for (const EntryError& e : result.errors)
    err << describe(path, e.line, e.id) << ": skipped: " << e.message << '\n';
  return result;
}

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < jobs; ++w)
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (std::thread& t : workers) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline void normalize_entries(std::vector<CorpusEntry>& entries, const NormalizeOptions& options,
                              const ReificationTable& table, unsigned jobs, NormalizeCounts& counts) {
  std::vector<NormalizeCounts> per_entry(entries.size());
  parallel_for(entries.size(), jobs, [&](std::size_t i) {
    entries[i].amr = normalize(std::move(entries[i].amr), options, table, &per_entry[i]);
  });
  for (const NormalizeCounts& c : per_entry) counts += c;
}

inline std::string fixed(double value, int precision = 4) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(precision) << value;
  return o.str();
}

}  // namespace detail

inline int run_normalize(const CliConfig& config, std::ostream& out, std::ostream& err) {
  ReificationTable storage;
  const ReificationTable& table = detail::load_table(config, storage);
  ReadResult corpus = detail::load_corpus(config.inputs.at(0), config.skip_invalid, err);

  std::size_t triples_before = 0;
  for (const CorpusEntry& e : corpus.entries) triples_before += triple_count(e.amr.graph);
  NormalizeCounts counts;
  detail::normalize_entries(corpus.entries, config.normalize, table, config.jobs, counts);
  std::size_t triples_after = 0;
  for (CorpusEntry& e : corpus.entries) {
    triples_after += triple_count(e.amr.graph);
    refresh_tree(e);
  }

  std::ostream* report = &err;
  if (config.output.empty() || config.output == "-") {
    write_corpus(corpus.entries, out, config.indent);
  } else {
    write_corpus(corpus.entries, config.output, config.indent);
    report = &out;
  }
  *report << "entries\t" << corpus.entries.size() << '\n'
          << "skipped\t" << corpus.errors.size() << '\n'
          << "roles canonicalized\t" << counts.roles_canonicalized << '\n'
          << "relations reified\t" << counts.relations_reified << '\n'
          << "nodes dereified\t" << counts.nodes_dereified << '\n'
          << "attributes reified\t" << counts.attributes_reified << '\n'
          << "TOP triples added\t" << counts.structure_relations_added << '\n'
          << "triples\t" << triples_before << " -> " << triples_after << '\n';
  return kExitOk;
}

inline int run_score(const CliConfig& config, std::ostream& out, std::ostream& err) {
  ReificationTable storage;
  const ReificationTable& table = detail::load_table(config, storage);
  ReadResult test = detail::load_corpus(config.inputs.at(0), config.skip_invalid, err);
  ReadResult gold = detail::load_corpus(config.inputs.at(1), config.skip_invalid, err);

  NormalizeCounts counts;
  detail::normalize_entries(test.entries, config.normalize, table, config.jobs, counts);
  detail::normalize_entries(gold.entries, config.normalize, table, config.jobs, counts);

  const Alignment alignment = align(test, gold);
  std::vector<std::pair<Graph, Graph>> pairs;
  pairs.reserve(alignment.pairs.size());
  for (const auto& [t, g] : alignment.pairs) pairs.emplace_back(t->amr.graph, g->amr.graph);
  const CorpusScore score = score_corpus(pairs, config.smatch, config.jobs);
  const ScoreReport& total = score.total;

  out << "Precision: " << detail::fixed(total.precision()) << '\n'
      << "Recall: " << detail::fixed(total.recall()) << '\n'
      << "F-score: " << detail::fixed(total.f_score()) << '\n';
  if (alignment.skipped) err << "skipped " << alignment.skipped << " pair(s)\n";
  if (total.dropped_test || total.dropped_gold)
    err << "dropped " << total.dropped_test << " test and " << total.dropped_gold
        << " gold constant-sourced triple(s)\n";

  if (!config.report.empty()) {
    std::ofstream r(config.report);
    if (!r) throw CorpusError("cannot open '" + config.report + "' for writing");
    r << "pairs=" << pairs.size() << '\n'
      << "skipped=" << alignment.skipped << '\n'
      << "matched=" << total.matched << '\n'
      << "test_triples=" << total.test_total << '\n'
      << "gold_triples=" << total.gold_total << '\n'
      << "dropped_test=" << total.dropped_test << '\n'
      << "dropped_gold=" << total.dropped_gold << '\n'
      << "precision=" << detail::fixed(total.precision(), 6) << '\n'
      << "recall=" << detail::fixed(total.recall(), 6) << '\n'
      << "f_score=" << detail::fixed(total.f_score(), 6) << '\n'
      << "restarts=" << config.smatch.restarts << '\n'
      << "seed=" << config.smatch.seed << '\n';
  }
  return kExitOk;
}

inline int run_stats(const CliConfig& config, std::ostream& out, std::ostream& err) {
  ReificationTable storage;
  const ReificationTable& table = detail::load_table(config, storage);
  const std::string& path = config.inputs.at(0);
  ReadResult corpus = detail::load_corpus(path, config.skip_invalid, err);

  std::vector<CorpusStats> per_entry(corpus.entries.size());
  detail::parallel_for(corpus.entries.size(), config.jobs,
                       [&](std::size_t i) { per_entry[i] = graph_stats(corpus.entries[i].amr, table); });
  CorpusStats total;
  for (const CorpusStats& s : per_entry) total += s;

  if (config.key_value)
    write_stats_kv(total, out);
  else
    write_stats_table(total, out, path);
  return kExitOk;
}

inline int run_check(const CliConfig& config, std::ostream& out, std::ostream& err) {
  std::size_t errors = 0;
  std::size_t warnings = 0;
  std::size_t entries = 0;
  for (const std::string& path : config.inputs) {
    ReadResult corpus = read_corpus(path, ReadOptions{true});
    entries += corpus.entries.size() + corpus.errors.size();
    for (const EntryError& e : corpus.errors) {
      err << detail::describe(path, e.line, e.id) << ": error: " << e.message << '\n';
      ++errors;
    }
    for (const CorpusEntry& entry : corpus.entries) {
      for (const Diagnostic& d : validate(entry.amr)) {
        err << detail::describe(path, entry.line, entry.id()) << ": " << to_string(d.severity)
            << ": " << to_string(d.code) << ": " << d.message << '\n';
        (d.severity == Severity::Error ? errors : warnings) += 1;
      }
    }
  }
  out << entries << " entries, " << errors << " error(s), " << warnings << " warning(s)\n";
  return errors ? kExitInput : kExitOk;
}

/// Parses the command line and runs the chosen subcommand.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normalize and score AMR corpora in PENMAN notation", "amrnorm"};
  app.require_subcommand(1);
  CliConfig config;

  auto add_normalize_flags = [&](CLI::App* sub) {
    sub->add_flag("-I,--canonicalize-roles", config.normalize.canonicalize_roles,
                  "rewrite non-canonical role inversions");
    auto* r = sub->add_flag("-R,--reify-relations", config.normalize.reify_relations,
                            "reify relations that have a reification");
    auto* d = sub->add_flag("-D,--dereify-relations", config.normalize.dereify_relations,
                            "collapse reified relations");
    r->excludes(d);
    sub->add_flag("-A,--reify-attributes", config.normalize.reify_attributes,
                  "turn constants into nodes");
    sub->add_flag("-S,--preserve-structure", config.normalize.preserve_structure,
                  "add TOP relations encoding the tree structure");
    sub->add_option("--table", config.table_path, "reification table (TSV)")
        ->envname("AMRNORM_TABLE")
        ->check(CLI::ExistingFile);
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--skip-invalid", config.skip_invalid, "skip entries that fail to read or validate");
    sub->add_option("-j,--jobs", config.jobs, "worker threads")->check(CLI::PositiveNumber);
  };

  CLI::App* normalize_cmd = app.add_subcommand("normalize", "normalize a corpus");
  normalize_cmd->add_option("input", config.inputs, "corpus file")->required()->expected(1)->check(CLI::ExistingFile);
  normalize_cmd->add_option("-o,--output", config.output, "output file (default: stdout)");
  normalize_cmd->add_option("--indent", config.indent, "indent width; negative for one line per AMR");
  add_normalize_flags(normalize_cmd);
  add_common(normalize_cmd);

  CLI::App* score_cmd = app.add_subcommand("score", "Smatch score of a test corpus against a gold corpus");
  score_cmd->add_option("test", config.inputs, "test corpus, then gold corpus")
      ->required()
      ->expected(2)
      ->check(CLI::ExistingFile);
  score_cmd->add_option("-r,--restarts", config.smatch.restarts, "hill-climbing restarts")
      ->check(CLI::PositiveNumber);
  score_cmd->add_option("--seed", config.smatch.seed, "random seed");
  score_cmd->add_flag("--exact", config.smatch.exact, "use exhaustive search for small graphs");
  score_cmd->add_option("--exact-bound", config.smatch.exact_bound,
                        "largest variable count searched exhaustively");
  score_cmd->add_flag("--strict", config.smatch.strict, "fail on constant-sourced relations");
  score_cmd->add_option("--report", config.report, "write a key=value report to this file");
  add_normalize_flags(score_cmd);
  add_common(score_cmd);

  CLI::App* stats_cmd = app.add_subcommand("stats", "corpus statistics");
  stats_cmd->add_option("input", config.inputs, "corpus file")->required()->expected(1)->check(CLI::ExistingFile);
  stats_cmd->add_flag("--kv", config.key_value, "print key=value lines instead of a table");
  stats_cmd->add_option("--table", config.table_path, "reification table (TSV)")
      ->envname("AMRNORM_TABLE")
      ->check(CLI::ExistingFile);
  add_common(stats_cmd);

  CLI::App* check_cmd = app.add_subcommand("check", "validate corpus files");
  check_cmd->add_option("input", config.inputs, "corpus files")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  config.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (*normalize_cmd) return run_normalize(config, out, err);
    if (*score_cmd) return run_score(config, out, err);
    if (*stats_cmd) return run_stats(config, out, err);
    return run_check(config, out, err);
  } catch (const std::exception& e) {
    err << "amrnorm: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace amrnorm

#endif  // AMRNORM_CLI_HPP
