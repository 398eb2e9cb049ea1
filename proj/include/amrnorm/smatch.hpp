#ifndef AMRNORM_SMATCH_HPP
#define AMRNORM_SMATCH_HPP

// Smatch: the F-score of matching triples under the best injective mapping
// of test variables to gold variables found by search.
//
// Triples reduce to two kinds of evidence for a candidate pair (i, j) of test
// variable i and gold variable j: unary triples (instance, TOP, attributes)
// that hold for the pair alone, and binary triples (edges) that hold only
// when two pairs are both in the mapping. Both are precomputed once so the
// search only adds weights.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "amrnorm/graph.hpp"

namespace amrnorm {

/// Partial injective mapping from test variables to gold variables.
struct Mapping {
  std::map<std::string, std::string> pairs;
  friend bool operator==(const Mapping&, const Mapping&) = default;
};

struct ScoreReport {
  std::size_t matched = 0;     // M
  std::size_t test_total = 0;  // T
  std::size_t gold_total = 0;  // G
  std::size_t restarts_used = 0;
  std::uint64_t seed = 0;
  // Constant-sourced triples excluded from T and G before scoring.
  std::size_t dropped_test = 0;
  std::size_t dropped_gold = 0;

  double precision() const { return test_total ? double(matched) / double(test_total) : 0.0; }
  double recall() const { return gold_total ? double(matched) / double(gold_total) : 0.0; }
  double f_score() const {
    const double p = precision();
    const double r = recall();
    return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  }

  ScoreReport& operator+=(const ScoreReport& o) {
    matched += o.matched;
    test_total += o.test_total;
    gold_total += o.gold_total;
    restarts_used += o.restarts_used;
    dropped_test += o.dropped_test;
    dropped_gold += o.dropped_gold;
    return *this;
  }

  friend bool operator==(const ScoreReport&, const ScoreReport&) = default;
};

struct SmatchOptions {
  std::size_t restarts = 4;  // the first restart is seeded by matching concepts
  std::uint64_t seed = 0;
  bool exact = false;          // use the exhaustive mapper when within exact_bound
  std::size_t exact_bound = 8;  // max of min(#test vars, #gold vars) for exhaustive search
  bool strict = false;          // throw instead of dropping constant-sourced triples
};

class SmatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Precomputed match weights between two graphs.
class MatchProblem {
 public:
  MatchProblem(const Graph& test, const Graph& gold, bool strict) {
    test_vars_ = test.variables();
    gold_vars_ = gold.variables();
    n_ = test_vars_.size();
    m_ = gold_vars_.size();
    unary_.assign(n_ * m_, 0);
    adjacency_.assign(n_ * m_, {});

    Side t = collect(test, test_vars_, strict, "test");
    Side g = collect(gold, gold_vars_, strict, "gold");
    test_total_ = t.total;
    gold_total_ = g.total;
    dropped_test_ = t.dropped;
    dropped_gold_ = g.dropped;
    test_labels_ = std::move(t.labels);
    gold_labels_ = std::move(g.labels);

    // Unary weights: multiset intersection of per-variable keys.
    std::unordered_map<std::string, std::vector<std::pair<std::size_t, int>>> gold_by_key;
    for (std::size_t j = 0; j < m_; ++j)
      for (const auto& [key, count] : g.unary[j]) gold_by_key[key].push_back({j, count});
    for (std::size_t i = 0; i < n_; ++i)
      for (const auto& [key, count] : t.unary[i]) {
        auto it = gold_by_key.find(key);
        if (it == gold_by_key.end()) continue;
        for (const auto& [j, gold_count] : it->second) unary_[i * m_ + j] += std::min(count, gold_count);
      }

    // Binary weights between pairs (i1, j1) and (i2, j2).
    std::map<std::pair<std::size_t, std::size_t>, int> binary;
    for (const auto& [role, test_edges] : t.binary) {
      auto it = g.binary.find(role);
      if (it == g.binary.end()) continue;
      for (const auto& [te, tc] : test_edges)
        for (const auto& [ge, gc] : it->second) {
          const auto [i1, i2] = te;
          const auto [j1, j2] = ge;
          const int w = std::min(tc, gc);
          if (i1 == i2 || j1 == j2) {
            // Self-loops only match self-loops, as a property of one pair.
            if (i1 == i2 && j1 == j2) unary_[i1 * m_ + j1] += w;
            continue;
          }
          const std::size_t p = i1 * m_ + j1;
          const std::size_t q = i2 * m_ + j2;
          binary[{p, q}] += w;
          binary[{q, p}] += w;
        }
    }
    for (const auto& [pq, w] : binary) adjacency_[pq.first].push_back({pq.second, w});

    for (std::size_t p = 0; p < n_ * m_; ++p) {
      int total = unary_[p];
      for (const auto& [q, w] : adjacency_[p]) total += w;
      best_gain_.push_back(total);
    }
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t test_total() const { return test_total_; }
  std::size_t gold_total() const { return gold_total_; }
  std::size_t dropped_test() const { return dropped_test_; }
  std::size_t dropped_gold() const { return dropped_gold_; }
  const std::vector<std::string>& test_vars() const { return test_vars_; }
  const std::vector<std::string>& gold_vars() const { return gold_vars_; }

  int unary(std::size_t i, std::size_t j) const { return unary_[i * m_ + j]; }

  /// Whether mapping i to j can ever contribute a match.
  bool candidate(std::size_t i, std::size_t j) const { return best_gain_[i * m_ + j] > 0; }

  /// Upper bound on what pair (i, j) can contribute.
  int best_gain(std::size_t i, std::size_t j) const { return best_gain_[i * m_ + j]; }

  bool same_label(std::size_t i, std::size_t j) const { return test_labels_[i] == gold_labels_[j]; }

  /// Matches gained by pair (i, j) given the other pairs in `f` (test index
  /// to gold index, -1 for unmapped); the value f[i] itself is irrelevant.
  int gain(const std::vector<int>& f, std::size_t i, int j) const {
    if (j < 0) return 0;
    const std::size_t p = i * m_ + static_cast<std::size_t>(j);
    int total = unary_[p];
    for (const auto& [q, w] : adjacency_[p])
      if (f[q / m_] == static_cast<int>(q % m_)) total += w;
    return total;
  }

  int weight(std::size_t i1, int j1, std::size_t i2, int j2) const {
    if (j1 < 0 || j2 < 0) return 0;
    const std::size_t p = i1 * m_ + static_cast<std::size_t>(j1);
    const std::size_t q = i2 * m_ + static_cast<std::size_t>(j2);
    for (const auto& [r, w] : adjacency_[p])
      if (r == q) return w;
    return 0;
  }

  int score(const std::vector<int>& f) const {
    int total = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (f[i] < 0) continue;
      const std::size_t p = i * m_ + static_cast<std::size_t>(f[i]);
      total += unary_[p];
      for (const auto& [q, w] : adjacency_[p])
        if (q / m_ > i && f[q / m_] == static_cast<int>(q % m_)) total += w;
    }
    return total;
  }

  /// Same problem with the roles of test and gold exchanged.
  MatchProblem transposed() const {
    MatchProblem t;
    t.n_ = m_;
    t.m_ = n_;
    t.test_vars_ = gold_vars_;
    t.gold_vars_ = test_vars_;
    t.test_labels_ = gold_labels_;
    t.gold_labels_ = test_labels_;
    t.test_total_ = gold_total_;
    t.gold_total_ = test_total_;
    t.dropped_test_ = dropped_gold_;
    t.dropped_gold_ = dropped_test_;
    t.unary_.assign(n_ * m_, 0);
    t.adjacency_.assign(n_ * m_, {});
    t.best_gain_.assign(n_ * m_, 0);
    auto flip = [&](std::size_t p) { return (p % m_) * n_ + p / m_; };
    for (std::size_t p = 0; p < n_ * m_; ++p) {
      t.unary_[flip(p)] = unary_[p];
      t.best_gain_[flip(p)] = best_gain_[p];
      for (const auto& [q, w] : adjacency_[p]) t.adjacency_[flip(p)].push_back({flip(q), w});
    }
    return t;
  }

 private:
  MatchProblem() = default;

  struct Side {
    std::vector<std::map<std::string, int>> unary;
    // role -> (source index, target index) -> count
    std::map<std::string, std::map<std::pair<std::size_t, std::size_t>, int>> binary;
    std::vector<std::string> labels;
    std::size_t total = 0;
    std::size_t dropped = 0;
  };

  static Side collect(const Graph& graph, const std::vector<std::string>& vars, bool strict,
                      const char* side_name) {
    Side side;
    side.unary.resize(vars.size());
    side.labels.resize(vars.size());
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < vars.size(); ++i) index.emplace(vars[i], i);
    auto drop = [&](const std::string& what) {
      if (strict)
        throw SmatchError(std::string(side_name) + " graph has a triple whose source is not a "
                          "variable: " + what);
      ++side.dropped;
    };

    for (const Instance& inst : graph.instances) {
      const std::size_t i = index.at(inst.variable);
      side.labels[i] = inst.label;
      ++side.unary[i]["instance\x1f" + inst.label];
      ++side.total;
    }
    if (auto it = index.find(graph.top); it != index.end()) {
      ++side.unary[it->second]["TOP"];
      ++side.total;
    }
    for (const Edge& e : graph.edges) {
      auto s = index.find(e.source);
      auto t = index.find(e.target);
      if (s == index.end() || t == index.end()) {
        drop(e.source + " " + e.role + " " + e.target);
        continue;
      }
      ++side.binary[role_name(e.role)][{s->second, t->second}];
      ++side.total;
    }
    for (const Attribute& a : graph.attributes) {
      auto v = index.find(a.variable);
      if (a.inverted || v == index.end()) {
        drop(a.constant + " " + a.role + " " + a.variable);
        continue;
      }
      ++side.unary[v->second]["attr\x1f" + role_name(a.role) + "\x1f" + a.constant];
      ++side.total;
    }
    return side;
  }

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::string> test_vars_;
  std::vector<std::string> gold_vars_;
  std::vector<std::string> test_labels_;
  std::vector<std::string> gold_labels_;
  std::vector<int> unary_;
  std::vector<std::vector<std::pair<std::size_t, int>>> adjacency_;
  std::vector<int> best_gain_;
  std::size_t test_total_ = 0;
  std::size_t gold_total_ = 0;
  std::size_t dropped_test_ = 0;
  std::size_t dropped_gold_ = 0;
};

inline Mapping to_mapping(const MatchProblem& problem, const std::vector<int>& f) {
  Mapping mapping;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] >= 0)
      mapping.pairs.emplace(problem.test_vars()[i],
                            problem.gold_vars()[static_cast<std::size_t>(f[i])]);
  return mapping;
}

inline std::vector<int> from_mapping(const MatchProblem& problem, const Mapping& mapping) {
  std::unordered_map<std::string, int> test_index;
  std::unordered_map<std::string, int> gold_index;
  for (std::size_t i = 0; i < problem.n(); ++i) test_index[problem.test_vars()[i]] = int(i);
  for (std::size_t j = 0; j < problem.m(); ++j) gold_index[problem.gold_vars()[j]] = int(j);
  std::vector<int> f(problem.n(), -1);
  std::vector<bool> used(problem.m(), false);
  for (const auto& [t, g] : mapping.pairs) {
    auto ti = test_index.find(t);
    auto gi = gold_index.find(g);
    if (ti == test_index.end()) throw SmatchError("mapping names unknown test variable '" + t + "'");
    if (gi == gold_index.end()) throw SmatchError("mapping names unknown gold variable '" + g + "'");
    if (used[static_cast<std::size_t>(gi->second)])
      throw SmatchError("mapping is not injective at gold variable '" + g + "'");
    used[static_cast<std::size_t>(gi->second)] = true;
    f[static_cast<std::size_t>(ti->second)] = gi->second;
  }
  return f;
}

/// Steepest-ascent climb from `f`. Moves are reassigning one test variable
/// to a free gold variable and swapping the images of two test variables.
/// Among equal improvements the move keyed by the lowest (test index, new
/// gold index) wins.
inline int climb(const MatchProblem& problem, std::vector<int>& f) {
  const std::size_t n = problem.n();
  const std::size_t m = problem.m();
  int current = problem.score(f);
  std::vector<bool> used(m, false);
  for (int j : f)
    if (j >= 0) used[static_cast<std::size_t>(j)] = true;

  for (;;) {
    int best_delta = 0;
    std::tuple<std::size_t, std::size_t> best_key{n, m};
    enum class Kind { None, Reassign, Swap } best_kind = Kind::None;
    std::size_t best_a = 0;
    std::size_t best_b = 0;

    auto consider = [&](int delta, std::size_t i, int j, Kind kind, std::size_t a, std::size_t b) {
      const std::tuple<std::size_t, std::size_t> key{i, j < 0 ? m : static_cast<std::size_t>(j)};
      if (delta > best_delta || (delta == best_delta && delta > 0 && key < best_key)) {
        best_delta = delta;
        best_key = key;
        best_kind = kind;
        best_a = a;
        best_b = b;
      }
    };

    for (std::size_t i = 0; i < n; ++i) {
      const int old_gain = problem.gain(f, i, f[i]);
      for (std::size_t j = 0; j < m; ++j) {
        if (used[j] || !problem.candidate(i, j)) continue;
        consider(problem.gain(f, i, int(j)) - old_gain, i, int(j), Kind::Reassign, i, j);
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const int ja = f[a];
        const int jb = f[b];
        if (ja == jb) continue;  // both unmapped
        if ((jb < 0 || !problem.candidate(a, static_cast<std::size_t>(jb))) &&
            (ja < 0 || !problem.candidate(b, static_cast<std::size_t>(ja))))
          continue;
        f[a] = -1;
        f[b] = -1;
        const int before = problem.gain(f, a, ja) + problem.gain(f, b, jb) + problem.weight(a, ja, b, jb);
        const int after = problem.gain(f, a, jb) + problem.gain(f, b, ja) + problem.weight(a, jb, b, ja);
        f[a] = ja;
        f[b] = jb;
        consider(after - before, a, jb, Kind::Swap, a, b);
      }
    }

    if (best_kind == Kind::None) break;
    if (best_kind == Kind::Reassign) {
      if (f[best_a] >= 0) used[static_cast<std::size_t>(f[best_a])] = false;
      f[best_a] = static_cast<int>(best_b);
      used[best_b] = true;
    } else {
      std::swap(f[best_a], f[best_b]);
    }
    current += best_delta;
  }
  return current;
}

}  // namespace detail

/// Number of matching triples under `mapping`. Constant-sourced triples are
/// excluded from both sides (or rejected when strict).
inline std::size_t count_matches(const Graph& test, const Graph& gold, const Mapping& mapping,
                                 bool strict = false) {
  detail::MatchProblem problem(test, gold, strict);
  return static_cast<std::size_t>(problem.score(detail::from_mapping(problem, mapping)));
}

/// Greedy search with restarts. Restart 0 maps each test variable to the
/// lowest-indexed free gold variable with the same concept; later restarts
/// start from random candidate mappings drawn from `seed`.
inline std::pair<Mapping, std::size_t> hill_climb(const Graph& test, const Graph& gold,
                                                  std::size_t restarts, std::uint64_t seed,
                                                  bool strict = false,
                                                  std::size_t* restarts_used = nullptr) {
  if (restarts < 1) throw std::invalid_argument("hill_climb needs at least one restart");
  detail::MatchProblem problem(test, gold, strict);
  const std::size_t n = problem.n();
  const std::size_t m = problem.m();
  const int ceiling = static_cast<int>(std::min(problem.test_total(), problem.gold_total()));

  std::mt19937_64 rng(seed);
  std::vector<int> best_f(n, -1);
  int best = -1;
  std::size_t used_restarts = 0;
  for (std::size_t r = 0; r < restarts && best < ceiling; ++r) {
    ++used_restarts;
    std::vector<int> f(n, -1);
    std::vector<bool> used(m, false);
    if (r == 0) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
          if (!used[j] && problem.same_label(i, j)) {
            f[i] = int(j);
            used[j] = true;
            break;
          }
    } else {
      std::vector<std::size_t> order(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t i : order) {
        std::vector<std::size_t> options;
        for (std::size_t j = 0; j < m; ++j)
          if (!used[j] && problem.candidate(i, j)) options.push_back(j);
        if (options.empty()) continue;
        const std::size_t j = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
        f[i] = int(j);
        used[j] = true;
      }
    }
    const int score = detail::climb(problem, f);
    if (score > best) {
      best = score;
      best_f = f;
    }
  }
  if (restarts_used) *restarts_used = used_restarts;
  return {detail::to_mapping(problem, best_f), static_cast<std::size_t>(best)};
}

namespace detail {

class ExhaustiveSearch {
 public:
  explicit ExhaustiveSearch(const MatchProblem& problem)
      : problem_(problem), f_(problem.n(), -1), used_(problem.m(), false), best_f_(f_) {
    const std::size_t n = problem.n();
    remaining_bound_.assign(n + 1, 0);
    for (std::size_t k = n; k-- > 0;) {
      int top = 0;
      for (std::size_t j = 0; j < problem.m(); ++j) top = std::max(top, problem.best_gain(k, j));
      remaining_bound_[k] = remaining_bound_[k + 1] + top;
    }
  }

  int run() {
    visit(0, 0);
    return best_;
  }

  const std::vector<int>& best_mapping() const { return best_f_; }

 private:
  void visit(std::size_t i, int score) {
    if (score + remaining_bound_[i] <= best_) return;
    if (i == problem_.n()) {
      best_ = score;
      best_f_ = f_;
      return;
    }
    for (std::size_t j = 0; j < problem_.m(); ++j) {
      if (used_[j] || !problem_.candidate(i, j)) continue;
      f_[i] = int(j);
      used_[j] = true;
      // Pairs of later variables are still unmapped, so this counts each
      // binary match exactly once.
      visit(i + 1, score + problem_.gain(f_, i, int(j)));
      used_[j] = false;
      f_[i] = -1;
    }
    visit(i + 1, score);
  }

  const MatchProblem& problem_;
  std::vector<int> f_;
  std::vector<bool> used_;
  std::vector<int> best_f_;
  std::vector<int> remaining_bound_;
  int best_ = -1;
};

}  // namespace detail

/// Exact maximum over all injective mappings, by exhaustive search with
/// bound pruning over the smaller variable set.
inline std::pair<Mapping, std::size_t> brute_force_map(const Graph& test, const Graph& gold,
                                                       std::size_t bound = 8,
                                                       bool strict = false) {
  detail::MatchProblem problem(test, gold, strict);
  if (std::min(problem.n(), problem.m()) > bound)
    throw SmatchError("exhaustive mapping limited to " + std::to_string(bound) +
                      " variables on the smaller side; got " +
                      std::to_string(std::min(problem.n(), problem.m())));
  if (problem.m() < problem.n()) {
    detail::MatchProblem flipped = problem.transposed();
    detail::ExhaustiveSearch search(flipped);
    const int best = search.run();
    Mapping mapping;
    const auto& g = search.best_mapping();
    for (std::size_t j = 0; j < g.size(); ++j)
      if (g[j] >= 0) mapping.pairs.emplace(problem.test_vars()[static_cast<std::size_t>(g[j])],
                                           problem.gold_vars()[j]);
    return {mapping, static_cast<std::size_t>(best)};
  }
  detail::ExhaustiveSearch search(problem);
  const int best = search.run();
  return {detail::to_mapping(problem, search.best_mapping()), static_cast<std::size_t>(best)};
}

/// Scores one pair; the gold graph supplies the recall denominator.
inline ScoreReport score_pair(const Graph& test, const Graph& gold, const SmatchOptions& options = {}) {
  detail::MatchProblem problem(test, gold, options.strict);
  ScoreReport report;
  report.test_total = problem.test_total();
  report.gold_total = problem.gold_total();
  report.dropped_test = problem.dropped_test();
  report.dropped_gold = problem.dropped_gold();
  report.seed = options.seed;
  if (options.exact && std::min(problem.n(), problem.m()) <= options.exact_bound) {
    report.matched = brute_force_map(test, gold, options.exact_bound, options.strict).second;
  } else {
    std::size_t used = 0;
    report.matched =
        hill_climb(test, gold, options.restarts, options.seed, options.strict, &used).second;
    report.restarts_used = used;
  }
  return report;
}

struct CorpusScore {
  ScoreReport total;
  std::vector<ScoreReport> pairs;
};

/// Seed used for the pair at `index` of a corpus scored with `seed`.
inline std::uint64_t pair_seed(std::uint64_t seed, std::size_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Micro-averaged score over aligned (test, gold) pairs. Pairs may be scored
/// on several threads; the result does not depend on `jobs`.
inline CorpusScore score_corpus(const std::vector<std::pair<Graph, Graph>>& pairs,
                                const SmatchOptions& options = {}, unsigned jobs = 1) {
  CorpusScore result;
  result.pairs.resize(pairs.size());
  auto score_one = [&](std::size_t k) {
    SmatchOptions pair_options = options;
    pair_options.seed = pair_seed(options.seed, k);
    result.pairs[k] = score_pair(pairs[k].first, pairs[k].second, pair_options);
  };

  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(pairs.size())));
  if (jobs <= 1) {
    for (std::size_t k = 0; k < pairs.size(); ++k) score_one(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        try {
          for (std::size_t k = next++; k < pairs.size(); k = next++) score_one(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (std::thread& t : workers) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  for (const ScoreReport& r : result.pairs) result.total += r;
  result.total.seed = options.seed;
  return result;
}

}  // namespace amrnorm

#endif  // AMRNORM_SMATCH_HPP
