#pragma once

// Blocking words: sound certification by a three-valued abstract run, exact
// bounded refutation by set-valued simulation, rule-level equicontinuity
// classification on top of both.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cadyn/alphabet.hpp"
#include "cadyn/detail/parallel.hpp"
#include "cadyn/error.hpp"
#include "cadyn/rule.hpp"

namespace cadyn {

/// Word w, column width s and offset p: the column covers cells p .. p+s.
struct BlockingQuery {
  Word word;
  std::size_t width = 1;
  std::size_t offset = 0;

  void validate() const {
    if (width < 1) throw PreconditionError("blocking query: width must be positive");
    if (word.size() < width) throw PreconditionError("blocking query: |w| must be at least s");
    if (offset > word.size() - width) throw PreconditionError("blocking query: offset outside [0, |w|-s]");
  }
};

/// Cells over A ∪ {unknown} on the fixed window [first, first + size).
struct AbstractWord {
  long long first = 0;
  Word cells;

  long long last() const noexcept { return first + static_cast<long long>(cells.size()) - 1; }
  Symbol at(long long i) const {
    if (i < first || i > last()) return kUnknown;
    return cells[static_cast<std::size_t>(i - first)];
  }
  bool known(long long i) const { return at(i) != kUnknown; }

  friend bool operator==(const AbstractWord&, const AbstractWord&) = default;
};

/// Three-valued lifting of a local rule, memoized over neighborhood patterns.
class AbstractRule {
 public:
  explicit AbstractRule(const LocalRule& rule) : rule_(rule) {}

  const LocalRule& rule() const noexcept { return rule_; }

  /// The output shared by every completion of the unknown cells, or kUnknown.
  Symbol lift(const Word& pattern) const {
    auto it = memo_.find(pattern);
    if (it != memo_.end()) return it->second;
    const auto k = rule_.alphabet_size();
    std::vector<std::size_t> holes;
    Word nb = pattern;
    for (std::size_t i = 0; i < nb.size(); ++i)
      if (nb[i] == kUnknown) {
        holes.push_back(i);
        nb[i] = 0;
      }
    Symbol result = rule_(nb);
    bool agree = true;
    while (agree) {
      std::size_t h = 0;
      for (; h < holes.size(); ++h) {
        if (++nb[holes[h]] < k) break;
        nb[holes[h]] = 0;
      }
      if (h == holes.size()) break;
      agree = rule_(nb) == result;
    }
    if (!agree) result = kUnknown;
    memo_.emplace(pattern, result);
    return result;
  }

  AbstractWord step(const AbstractWord& aw) const {
    AbstractWord out{aw.first, Word(aw.cells.size())};
    Word nb(rule_.neighborhood_size());
    for (std::size_t j = 0; j < aw.cells.size(); ++j) {
      const long long i = aw.first + static_cast<long long>(j);
      for (std::size_t t = 0; t < nb.size(); ++t)
        nb[t] = aw.at(i + rule_.memory() + static_cast<long long>(t));
      out.cells[j] = lift(nb);
    }
    return out;
  }

 private:
  const LocalRule& rule_;
  mutable std::unordered_map<Word, Symbol, WordHash> memo_;
};

inline AbstractWord abstract_step(const LocalRule& rule, const AbstractWord& aw) {
  return AbstractRule(rule).step(aw);
}

struct Certified {
  std::size_t preperiod = 0;
  std::size_t period = 1;
  /// Column contents at steps 0 .. preperiod + period - 1.
  std::vector<Word> column_words;
};

/// Two concrete extensions of w over the dependence cone [cone_start, ...] whose
/// columns differ after `step` applications.
struct Refuted {
  std::size_t step = 0;
  long long cone_start = 0;
  Word first_extension;
  Word second_extension;
  Word first_column;
  Word second_column;
};

struct Inconclusive {
  std::size_t steps_used = 0;
  std::size_t budget = 0;
  std::string reason;
};

using BlockingVerdict = std::variant<Certified, Refuted, Inconclusive>;

struct BlockingOptions {
  /// Extra unknown cells on each side of the abstract window.
  std::size_t margin = 0;
  /// Cap on the achievable-column set during refutation.
  std::size_t set_budget = 4096;
  /// Cap on the dependence-cone width during refutation.
  std::size_t cone_budget = 64;
};

namespace detail {

inline AbstractWord initial_abstract(const BlockingQuery& q, long long lo, long long hi) {
  AbstractWord aw{lo, Word(static_cast<std::size_t>(hi - lo + 1), kUnknown)};
  for (std::size_t i = 0; i < q.word.size(); ++i)
    aw.cells[static_cast<std::size_t>(static_cast<long long>(i) - lo)] = q.word[i];
  return aw;
}

inline std::optional<Word> column_of(const AbstractWord& aw, const BlockingQuery& q) {
  Word col;
  for (std::size_t c = q.offset; c <= q.offset + q.width; ++c) {
    auto v = aw.at(static_cast<long long>(c));
    if (v == kUnknown) return std::nullopt;
    col.push_back(v);
  }
  return col;
}

/// Images of all cone words (fixed cells from w, free cells elsewhere), each
/// with a representative preimage. Sweeps left to right keeping only the last
/// d input symbols and the output so far.
inline std::map<Word, Word> first_images(const LocalRule& rule, const Word& pattern, std::size_t cap) {
  const auto k = rule.alphabet_size();
  const auto d = rule.diameter();
  // key = tail (last min(j, d) inputs) ++ outputs
  std::map<Word, Word> frontier{{Word{}, Word{}}};
  for (std::size_t j = 0; j < pattern.size(); ++j) {
    std::map<Word, Word> next;
    const std::size_t tail_len = std::min(j, d);
    for (const auto& [key, rep] : frontier) {
      Word tail(key.begin(), key.begin() + static_cast<long>(tail_len));
      Word outs(key.begin() + static_cast<long>(tail_len), key.end());
      for (std::size_t c = 0; c < k; ++c) {
        if (pattern[j] != kUnknown && pattern[j] != c) continue;
        Word nb = tail;
        nb.push_back(static_cast<Symbol>(c));
        Word new_outs = outs;
        if (nb.size() == d + 1) {
          new_outs.push_back(rule(nb));
          nb.erase(nb.begin());
        }
        Word new_key = nb;
        new_key.insert(new_key.end(), new_outs.begin(), new_outs.end());
        if (next.find(new_key) != next.end()) continue;
        Word new_rep = rep;
        new_rep.push_back(static_cast<Symbol>(c));
        next.emplace(std::move(new_key), std::move(new_rep));
        if (next.size() > cap) throw ResourceError("refute_blocking: state-set budget exceeded");
      }
    }
    frontier.swap(next);
  }
  std::map<Word, Word> images;
  for (auto& [key, rep] : frontier) {
    Word outs(key.begin() + static_cast<long>(std::min(pattern.size(), d)), key.end());
    images.emplace(std::move(outs), rep);
  }
  return images;
}

}  // namespace detail

/// Exact bounded search for two extensions of w whose columns differ. Steps
/// where a three-valued run already pins the column are skipped; the others
/// are settled by set-valued simulation of the whole dependence cone.
inline std::optional<Refuted> refute_blocking(const LocalRule& rule, const BlockingQuery& q,
                                              std::size_t max_steps, const BlockingOptions& opt = {}) {
  q.validate();
  if (max_steps < 1) throw PreconditionError("refute_blocking: max_steps must be positive");
  const long long m = rule.memory(), a = rule.anticipation();
  const long long p = static_cast<long long>(q.offset), s = static_cast<long long>(q.width);
  const long long N = static_cast<long long>(max_steps);
  const long long lo = std::min({0LL, p + N * m, p});
  const long long hi = std::max({static_cast<long long>(q.word.size()) - 1, p + s + N * a, p + s});

  AbstractRule abstract(rule);
  AbstractWord aw = detail::initial_abstract(q, lo, hi);
  for (std::size_t n = 0; n <= max_steps; ++n) {
    if (n > 0) aw = abstract.step(aw);
    if (detail::column_of(aw, q)) continue;

    const long long c0 = p + static_cast<long long>(n) * m;
    const long long c1 = p + s + static_cast<long long>(n) * a;
    if (static_cast<std::size_t>(c1 - c0 + 1) > opt.cone_budget)
      throw ResourceError("refute_blocking: dependence cone wider than budget");
    Word pattern(static_cast<std::size_t>(c1 - c0 + 1), kUnknown);
    for (long long i = c0; i <= c1; ++i)
      if (i >= 0 && i < static_cast<long long>(q.word.size()))
        pattern[static_cast<std::size_t>(i - c0)] = q.word[static_cast<std::size_t>(i)];

    std::map<Word, Word> reachable;
    if (n == 0) {
      // The column itself reaches outside w.
      Word first = pattern, second = pattern;
      for (std::size_t i = 0; i < pattern.size(); ++i)
        if (pattern[i] == kUnknown) {
          first[i] = 0;
          second[i] = 1;
          for (std::size_t j = i + 1; j < pattern.size(); ++j)
            if (pattern[j] == kUnknown) first[j] = second[j] = 0;
          break;
        }
      return Refuted{0, c0, first, second, first, second};
    }
    reachable = detail::first_images(rule, pattern, opt.set_budget * std::max<std::size_t>(1, rule.alphabet_size()));
    if (reachable.size() > opt.set_budget) throw ResourceError("refute_blocking: state-set budget exceeded");
    for (std::size_t t = 1; t < n && reachable.size() > 1; ++t) {
      std::map<Word, Word> next;
      for (const auto& [word, rep] : reachable) next.emplace(apply_rule_word(rule, word), rep);
      reachable.swap(next);
    }
    if (reachable.size() >= 2) {
      auto it = reachable.begin();
      Refuted r;
      r.step = n;
      r.cone_start = c0;
      r.first_column = it->first;
      r.first_extension = it->second;
      ++it;
      r.second_column = it->first;
      r.second_extension = it->second;
      return r;
    }
  }
  return std::nullopt;
}

/// Certifies, refutes, or gives up on "w is s-blocking at offset p".
///
/// The abstract run starts from w with unknown cells around it. Its state space
/// is finite, so it becomes periodic; if the column is determined at every step
/// through one full abstract cycle it is determined forever.
inline BlockingVerdict verify_blocking(const LocalRule& rule, const BlockingQuery& q, std::size_t max_steps,
                                       const BlockingOptions& opt = {}) {
  q.validate();
  if (max_steps < 1) throw PreconditionError("verify_blocking: max_steps must be positive");
  const auto margin = static_cast<long long>(opt.margin);
  const long long lo = std::min<long long>(0, static_cast<long long>(q.offset)) - margin;
  const long long hi =
      std::max<long long>(static_cast<long long>(q.word.size()) - 1,
                          static_cast<long long>(q.offset + q.width)) + margin;

  AbstractRule abstract(rule);
  AbstractWord aw = detail::initial_abstract(q, lo, hi);
  std::unordered_map<Word, std::size_t, WordHash> seen;
  std::vector<Word> columns;
  for (std::size_t n = 0;; ++n) {
    if (auto hit = seen.find(aw.cells); hit != seen.end()) {
      Certified c;
      c.preperiod = hit->second;
      c.period = n - hit->second;
      c.column_words = std::move(columns);
      return c;
    }
    auto col = detail::column_of(aw, q);
    if (!col) {
      try {
        if (auto witness = refute_blocking(rule, q, max_steps, opt)) return *witness;
        return Inconclusive{n, max_steps, "column undetermined by the abstract run; no disagreement found"};
      } catch (const ResourceError& e) {
        return Inconclusive{n, max_steps, e.what()};
      }
    }
    if (n >= max_steps) return Inconclusive{n, max_steps, "abstract run did not close a cycle"};
    columns.push_back(std::move(*col));
    seen.emplace(aw.cells, n);
    aw = abstract.step(aw);
  }
}

struct BlockingHit {
  Word word;
  std::size_t offset = 0;
  Certified certificate;
};

struct LengthStats {
  std::size_t length = 0;
  std::size_t certified = 0;
  std::size_t refuted = 0;
  std::size_t inconclusive = 0;
};

struct BlockingSearch {
  std::vector<BlockingHit> hits;
  std::vector<LengthStats> per_length;
};

/// Runs every query (w, s, p) for |w| in [s, max_len] in length-then-lex order.
/// A word counts as a hit with the first offset that certifies.
inline BlockingSearch search_blocking_words(const LocalRule& rule, std::size_t s, std::size_t max_len,
                                            std::size_t max_steps, const BlockingOptions& opt = {},
                                            std::size_t threads = 0) {
  if (s < 1) throw PreconditionError("find_blocking_words: s must be positive");
  BlockingSearch out;
  for (std::size_t len = s; len <= max_len; ++len) {
    auto words = all_words(rule.alphabet_size(), len);
    struct WordResult {
      std::optional<BlockingHit> hit;
      std::size_t certified = 0, refuted = 0, inconclusive = 0;
    };
    auto results = detail::parallel_map(
        words.size(),
        [&](std::size_t i) {
          WordResult r;
          for (std::size_t p = 0; p + s <= len; ++p) {
            auto v = verify_blocking(rule, BlockingQuery{words[i], s, p}, max_steps, opt);
            if (auto* c = std::get_if<Certified>(&v)) {
              ++r.certified;
              if (!r.hit) r.hit = BlockingHit{words[i], p, *c};
            } else if (std::holds_alternative<Refuted>(v)) {
              ++r.refuted;
            } else {
              ++r.inconclusive;
            }
          }
          return r;
        },
        threads);
    LengthStats stats{len, 0, 0, 0};
    for (auto& r : results) {
      stats.certified += r.certified;
      stats.refuted += r.refuted;
      stats.inconclusive += r.inconclusive;
      if (r.hit) out.hits.push_back(std::move(*r.hit));
    }
    out.per_length.push_back(stats);
  }
  return out;
}

inline std::vector<BlockingHit> find_blocking_words(const LocalRule& rule, std::size_t s, std::size_t max_len,
                                                    std::size_t max_steps, const BlockingOptions& opt = {}) {
  return search_blocking_words(rule, s, max_len, max_steps, opt).hits;
}

/// First certified blocking word in length-then-lex order, searching word by
/// word and stopping at the first hit.
inline std::optional<BlockingHit> first_blocking_word(const LocalRule& rule, std::size_t s, std::size_t max_len,
                                                      std::size_t max_steps, const BlockingOptions& opt = {}) {
  for (std::size_t len = s; len <= max_len; ++len) {
    std::optional<BlockingHit> found;
    for_each_word(rule.alphabet_size(), len, [&](const Word& w) {
      for (std::size_t p = 0; !found && p + s <= len; ++p) {
        auto v = verify_blocking(rule, BlockingQuery{w, s, p}, max_steps, opt);
        if (auto* c = std::get_if<Certified>(&v)) found = BlockingHit{w, p, *c};
      }
    });
    if (found) return found;
  }
  return std::nullopt;
}

// Kurka-style classification

enum class KurkaClass {
  EquicontinuousCertified,
  AlmostEquicontinuousEvidence,
  SensitiveEvidence,
  Unknown,
};

inline const char* to_string(KurkaClass c) {
  switch (c) {
    case KurkaClass::EquicontinuousCertified: return "EquicontinuousCertified";
    case KurkaClass::AlmostEquicontinuousEvidence: return "AlmostEquicontinuousEvidence";
    case KurkaClass::SensitiveEvidence: return "SensitiveEvidence";
    case KurkaClass::Unknown: return "Unknown";
  }
  return "?";
}

struct KurkaBudgets {
  std::size_t max_len = 4;
  std::size_t max_steps = 64;
  std::size_t max_map_period = 8;
  std::size_t table_budget = 1'000'000;
  BlockingOptions blocking{};
};

struct KurkaClassification {
  KurkaClass kind = KurkaClass::Unknown;
  /// F^(m+p) = F^m: set for EquicontinuousCertified.
  std::size_t map_preperiod = 0;
  std::size_t map_period = 0;
  std::optional<BlockingHit> blocking_word;
  std::vector<LengthStats> per_length;
};

/// Least (m, p) with F^(m+p) = F^m and m + p <= max_total, searching by m + p.
/// Stops quietly when the next iterate would exceed the table budget.
inline std::optional<std::pair<std::size_t, std::size_t>> eventual_map_period(const LocalRule& rule,
                                                                               std::size_t max_total,
                                                                               std::size_t table_budget) {
  std::vector<LocalRule> powers{identity_rule(rule.alphabet())};
  for (std::size_t n = 1; n <= max_total; ++n) {
    try {
      detail::checked_pow(rule.alphabet_size(), n * rule.diameter() + 1, table_budget, "iterate");
      powers.push_back(compose(rule, powers.back(), table_budget));
    } catch (const ResourceError&) {
      return std::nullopt;
    }
    for (std::size_t m = 0; m < n; ++m)
      if (same_global_map(powers[n], powers[m], table_budget * 4)) return std::pair{m, n - m};
  }
  return std::nullopt;
}

inline KurkaClassification classify_kurka(const LocalRule& rule, const KurkaBudgets& budgets = {}) {
  KurkaClassification out;
  if (auto mp = eventual_map_period(rule, budgets.max_map_period, budgets.table_budget)) {
    out.kind = KurkaClass::EquicontinuousCertified;
    out.map_preperiod = mp->first;
    out.map_period = mp->second;
    return out;
  }
  const auto s = static_cast<std::size_t>(std::max(rule.radius(), 1));
  auto search = search_blocking_words(rule, s, budgets.max_len, budgets.max_steps, budgets.blocking);
  out.per_length = search.per_length;
  if (!search.hits.empty()) {
    out.kind = KurkaClass::AlmostEquicontinuousEvidence;
    out.blocking_word = search.hits.front();
    return out;
  }
  const bool refuted_everywhere =
      !search.per_length.empty() &&
      std::all_of(search.per_length.begin(), search.per_length.end(),
                  [](const LengthStats& st) { return st.refuted > 0; });
  out.kind = refuted_everywhere ? KurkaClass::SensitiveEvidence : KurkaClass::Unknown;
  return out;
}

}  // namespace cadyn
