#pragma once

// Surjectivity and injectivity of the global map, decided on the
// output-labeled de Bruijn graph of the local rule.

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cadyn/alphabet.hpp"
#include "cadyn/configuration.hpp"
#include "cadyn/error.hpp"
#include "cadyn/rule.hpp"

namespace cadyn {

inline constexpr std::size_t kDefaultNodeBudget = 1u << 20;
inline constexpr std::size_t kDefaultSubsetBudget = 1u << 20;
inline constexpr std::size_t kDefaultPairBudget = 1u << 22;

/// Nodes are words of length d, edges words of length d+1. Edge e (read as a
/// base-#A number) runs from its d-prefix e / #A to its d-suffix e mod #A^d
/// and carries the label table(e).
class DeBruijnGraph {
 public:
  explicit DeBruijnGraph(const LocalRule& rule, std::size_t node_budget = kDefaultNodeBudget)
      : k_(rule.alphabet_size()),
        d_(rule.diameter()),
        nodes_(detail::checked_pow(k_, d_, node_budget, "de Bruijn graph")),
        labels_(rule.table()) {}

  std::size_t alphabet_size() const noexcept { return k_; }
  std::size_t overlap() const noexcept { return d_; }
  std::size_t node_count() const noexcept { return nodes_; }
  std::size_t edge_count() const noexcept { return labels_.size(); }

  std::size_t source(std::size_t e) const noexcept { return e / k_; }
  std::size_t target(std::size_t e) const noexcept { return e % nodes_; }
  Symbol label(std::size_t e) const noexcept { return labels_[e]; }

  /// The c-th outgoing edge of `node` (appends symbol c).
  std::size_t out_edge(std::size_t node, std::size_t c) const noexcept { return node * k_ + c; }
  /// The c-th incoming edge of `node` (prepends symbol c).
  std::size_t in_edge(std::size_t node, std::size_t c) const noexcept { return c * nodes_ + node; }

  Word node_word(std::size_t node) const {
    Word w(d_);
    for (std::size_t i = d_; i-- > 0;) {
      w[i] = static_cast<Symbol>(node % k_);
      node /= k_;
    }
    return w;
  }

  Symbol last_symbol(std::size_t node) const noexcept { return static_cast<Symbol>(node % k_); }
  Symbol first_symbol(std::size_t node) const noexcept {
    return d_ == 0 ? 0 : static_cast<Symbol>(node / (nodes_ / k_));
  }

 private:
  std::size_t k_;
  std::size_t d_;
  std::size_t nodes_;
  std::vector<Symbol> labels_;
};

struct SurjectivityReport {
  bool surjective = false;
  std::optional<Word> orphan;
  std::vector<std::size_t> checked_balance_lengths;
};

/// Distinct equal-length u, v with apply_rule_word(wuw) == apply_rule_word(wvw), |w| = d.
struct Diamond {
  Word boundary;
  Word first;
  Word second;
};

struct InjectivityReport {
  bool injective = false;
  std::optional<Diamond> diamond;
  /// Two distinct spatially periodic points with the same image. Present when
  /// the rule is non-injective but has no diamond (surjective, non-injective).
  std::optional<std::pair<CyclicConfiguration, CyclicConfiguration>> collision;
};

struct DecisionOptions {
  std::size_t node_budget = kDefaultNodeBudget;
  std::size_t subset_budget = kDefaultSubsetBudget;
  std::size_t pair_budget = kDefaultPairBudget;
  /// Balance counts are re-checked on every word up to this length.
  std::size_t balance_length = 3;
  /// ... as long as #A^length stays below this.
  std::size_t balance_word_budget = 100'000;
};

/// Number of words v with |v| = |u| + d and apply_rule_word(rule, v) = u.
inline std::uint64_t count_preimages(const LocalRule& rule, const Word& u,
                                     std::size_t node_budget = kDefaultNodeBudget) {
  if (u.empty()) throw PreconditionError("count_preimages: word must be non-empty");
  DeBruijnGraph g(rule, node_budget);
  std::vector<std::uint64_t> paths(g.node_count(), 1), next(g.node_count());
  for (Symbol c : u) {
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      if (g.label(e) == c) next[g.target(e)] += paths[g.source(e)];
    paths.swap(next);
  }
  std::uint64_t total = 0;
  for (auto p : paths) total += p;
  return total;
}

namespace detail {

using Bitset = std::vector<std::uint64_t>;

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto w : b) h = (h ^ w) * 0x100000001b3ull + (h >> 7);
    return h;
  }
};

inline bool bitset_empty(const Bitset& b) {
  for (auto w : b)
    if (w) return false;
  return true;
}

}  // namespace detail

/// Decides surjectivity by determinizing the de Bruijn graph from the full node
/// set. A reachable empty subset yields the shortest, lexicographically least
/// orphan word.
inline SurjectivityReport is_surjective(const LocalRule& rule, const DecisionOptions& opt = {}) {
  SurjectivityReport report;
  const auto k = rule.alphabet_size();

  if (rule.diameter() == 0) {
    std::vector<bool> hit(k, false);
    for (Symbol s : rule.table()) hit[s] = true;
    for (std::size_t c = 0; c < k; ++c) {
      if (!hit[c]) {
        report.orphan = Word{static_cast<Symbol>(c)};
        return report;
      }
    }
    report.surjective = true;
  } else {
    DeBruijnGraph g(rule, opt.node_budget);
    const auto n = g.node_count();
    const auto blocks = (n + 63) / 64;

    std::vector<detail::Bitset> subsets;
    std::vector<std::pair<std::size_t, Symbol>> parent;  // (subset id, symbol)
    std::unordered_map<detail::Bitset, std::size_t, detail::BitsetHash> ids;

    detail::Bitset full(blocks, ~0ull);
    if (n % 64) full.back() = (1ull << (n % 64)) - 1;
    subsets.push_back(full);
    parent.emplace_back(0, 0);
    ids.emplace(full, 0);

    auto spell = [&](std::size_t id, Symbol last) {
      Word w{last};
      while (id != 0) {
        w.push_back(parent[id].second);
        id = parent[id].first;
      }
      return Word(w.rbegin(), w.rend());
    };

    for (std::size_t head = 0; head < subsets.size(); ++head) {
      for (std::size_t c = 0; c < k; ++c) {
        detail::Bitset next(blocks, 0);
        const auto& cur = subsets[head];
        for (std::size_t v = 0; v < n; ++v) {
          if (!(cur[v / 64] >> (v % 64) & 1)) continue;
          for (std::size_t a = 0; a < k; ++a) {
            auto e = g.out_edge(v, a);
            if (g.label(e) == c) {
              auto t = g.target(e);
              next[t / 64] |= 1ull << (t % 64);
            }
          }
        }
        if (detail::bitset_empty(next)) {
          report.orphan = spell(head, static_cast<Symbol>(c));
          return report;
        }
        if (ids.find(next) == ids.end()) {
          if (subsets.size() >= opt.subset_budget)
            throw ResourceError("is_surjective: subset budget exhausted");
          ids.emplace(next, subsets.size());
          subsets.push_back(std::move(next));
          parent.emplace_back(head, static_cast<Symbol>(c));
        }
      }
    }
    report.surjective = true;
  }

  // Balance: every word has exactly #A^d preimages.
  std::uint64_t expected = 1;
  for (std::size_t i = 0; i < rule.diameter(); ++i) expected *= k;
  std::size_t words = 1;
  for (std::size_t len = 1; len <= opt.balance_length; ++len) {
    words *= k;
    if (words > opt.balance_word_budget) break;
    for_each_word(k, len, [&](const Word& u) {
      if (count_preimages(rule, u, opt.node_budget) != expected)
        throw std::logic_error("is_surjective: balance check failed on a surjective rule");
    });
    report.checked_balance_lengths.push_back(len);
  }
  return report;
}

namespace detail {

inline std::optional<Diamond> cellwise_diamond(const LocalRule& rule) {
  const auto k = rule.alphabet_size();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      if (rule.at(a) == rule.at(b))
        return Diamond{{}, {static_cast<Symbol>(a)}, {static_cast<Symbol>(b)}};
  return std::nullopt;
}

/// Shortest diamond, searching boundary words in lexicographic order. Without a
/// bound the search is exhaustive over the finite pair graph.
inline std::optional<Diamond> search_diamond(const LocalRule& rule, std::optional<std::size_t> max_len,
                                             const DecisionOptions& opt) {
  if (rule.diameter() == 0) return cellwise_diamond(rule);
  DeBruijnGraph g(rule, opt.node_budget);
  const auto n = g.node_count();
  const auto k = g.alphabet_size();
  const auto d = g.overlap();
  if (n > opt.pair_budget / n / 2) throw ResourceError("find_diamond: pair graph exceeds budget");

  // State: (p * n + q) * 2 + diverged.
  const std::size_t states = n * n * 2;
  std::optional<Diamond> best;
  std::size_t best_edges = 0;
  std::vector<std::size_t> dist(states), from(states);
  constexpr auto kUnseen = static_cast<std::size_t>(-1);

  for (std::size_t w = 0; w < n; ++w) {
    std::fill(dist.begin(), dist.end(), kUnseen);
    const std::size_t start = (w * n + w) * 2;
    const std::size_t goal = start + 1;
    dist[start] = 0;
    std::deque<std::size_t> queue{start};
    while (!queue.empty() && dist[goal] == kUnseen) {
      auto s = queue.front();
      queue.pop_front();
      if (max_len && dist[s] >= *max_len + d) continue;
      if (best && dist[s] + 1 >= best_edges) continue;
      const auto p = s / 2 / n, q = s / 2 % n;
      const bool div = s & 1;
      for (std::size_t a = 0; a < k; ++a) {
        auto e1 = g.out_edge(p, a);
        for (std::size_t b = 0; b < k; ++b) {
          auto e2 = g.out_edge(q, b);
          if (g.label(e1) != g.label(e2)) continue;
          auto tp = g.target(e1), tq = g.target(e2);
          std::size_t t = (tp * n + tq) * 2 + ((div || tp != tq) ? 1 : 0);
          if (dist[t] != kUnseen) continue;
          dist[t] = dist[s] + 1;
          from[t] = s;
          queue.push_back(t);
        }
      }
    }
    if (dist[goal] == kUnseen) continue;
    // Recover the node sequences.
    std::vector<std::size_t> chain;
    for (std::size_t s = goal; s != start; s = from[s]) chain.push_back(s);
    std::reverse(chain.begin(), chain.end());
    Word first = g.node_word(w), second = g.node_word(w);
    for (auto s : chain) {
      first.push_back(g.last_symbol(s / 2 / n));
      second.push_back(g.last_symbol(s / 2 % n));
    }
    Diamond dm;
    dm.boundary = g.node_word(w);
    dm.first.assign(first.begin() + static_cast<long>(d), first.end() - static_cast<long>(d));
    dm.second.assign(second.begin() + static_cast<long>(d), second.end() - static_cast<long>(d));
    if (!best || chain.size() < best_edges) {
      best = std::move(dm);
      best_edges = chain.size();
    }
  }
  return best;
}

}  // namespace detail

/// Default bound under which absence of a diamond is conclusive: #A^(2d) + d.
inline std::size_t default_diamond_bound(const LocalRule& rule) {
  std::size_t b = 1;
  for (std::size_t i = 0; i < 2 * rule.diameter(); ++i) b *= rule.alphabet_size();
  return b + rule.diameter();
}

/// Shortest diamond (w, u, v) with |u| = |v| <= max_len, if any.
inline std::optional<Diamond> find_diamond(const LocalRule& rule, std::size_t max_len,
                                           const DecisionOptions& opt = {}) {
  if (max_len < 1) throw PreconditionError("find_diamond: max_len must be at least 1");
  return detail::search_diamond(rule, max_len, opt);
}

inline std::optional<Diamond> find_diamond(const LocalRule& rule) {
  return find_diamond(rule, default_diamond_bound(rule));
}

/// Decides injectivity on A^Z via the pair graph: keep pairs of de Bruijn nodes
/// lying on a bi-infinite path of equally labeled edge pairs; F is injective iff
/// only diagonal pairs survive.
inline InjectivityReport is_injective(const LocalRule& rule, const DecisionOptions& opt = {}) {
  InjectivityReport report;
  if (rule.diameter() == 0) {
    report.diamond = detail::cellwise_diamond(rule);
    report.injective = !report.diamond.has_value();
    if (report.diamond) {
      report.collision.emplace(CyclicConfiguration(report.diamond->first),
                               CyclicConfiguration(report.diamond->second));
    }
    return report;
  }

  DeBruijnGraph g(rule, opt.node_budget);
  const auto n = g.node_count();
  const auto k = g.alphabet_size();
  if (n > opt.pair_budget / n) throw ResourceError("is_injective: pair graph exceeds budget");
  const auto N = n * n;

  std::vector<std::vector<std::size_t>> succ(N), pred(N);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          auto e1 = g.out_edge(p, a), e2 = g.out_edge(q, b);
          if (g.label(e1) != g.label(e2)) continue;
          auto t = g.target(e1) * n + g.target(e2);
          succ[p * n + q].push_back(t);
          pred[t].push_back(p * n + q);
        }
      }
    }
  }

  // Trim nodes without a predecessor or successor until stable.
  std::vector<std::size_t> indeg(N), outdeg(N);
  std::vector<bool> alive(N, true);
  std::deque<std::size_t> dead;
  for (std::size_t v = 0; v < N; ++v) {
    indeg[v] = pred[v].size();
    outdeg[v] = succ[v].size();
    if (indeg[v] == 0 || outdeg[v] == 0) {
      alive[v] = false;
      dead.push_back(v);
    }
  }
  while (!dead.empty()) {
    auto v = dead.front();
    dead.pop_front();
    for (auto t : succ[v])
      if (alive[t] && --indeg[t] == 0) {
        alive[t] = false;
        dead.push_back(t);
      }
    for (auto s : pred[v])
      if (alive[s] && --outdeg[s] == 0) {
        alive[s] = false;
        dead.push_back(s);
      }
  }

  std::vector<std::size_t> off_diagonal;
  for (std::size_t v = 0; v < N; ++v)
    if (alive[v] && v / n != v % n) off_diagonal.push_back(v);
  report.injective = off_diagonal.empty();
  if (report.injective) return report;

  report.diamond = detail::search_diamond(rule, std::nullopt, opt);
  if (report.diamond) return report;

  // No diamond: some surviving off-diagonal pair lies on a cycle.
  std::vector<std::size_t> from(N);
  for (auto origin : off_diagonal) {
    std::vector<bool> seen(N, false);
    std::deque<std::size_t> queue{origin};
    seen[origin] = true;
    bool closed = false;
    std::size_t last = origin;
    while (!queue.empty() && !closed) {
      auto v = queue.front();
      queue.pop_front();
      for (auto t : succ[v]) {
        if (!alive[t]) continue;
        if (t == origin) {
          closed = true;
          last = v;
          break;
        }
        if (!seen[t]) {
          seen[t] = true;
          from[t] = v;
          queue.push_back(t);
        }
      }
    }
    if (!closed) continue;
    std::vector<std::size_t> cycle;
    for (auto v = last; v != origin; v = from[v]) cycle.push_back(v);
    cycle.push_back(origin);
    std::reverse(cycle.begin(), cycle.end());
    Word x, y;
    for (auto v : cycle) {
      x.push_back(g.first_symbol(v / n));
      y.push_back(g.first_symbol(v % n));
    }
    report.collision.emplace(CyclicConfiguration(std::move(x)), CyclicConfiguration(std::move(y)));
    return report;
  }
  throw std::logic_error("is_injective: non-injective rule without a witness");
}

}  // namespace cadyn
