#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cadyn/alphabet.hpp"
#include "cadyn/error.hpp"

namespace cadyn {

/// Default cap on the number of table entries any materialized rule may hold.
inline constexpr std::size_t kDefaultTableBudget = 10'000'000;

namespace detail {

/// base^exp, or throws ResourceError once the value exceeds `budget`.
inline std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t budget,
                               const char* what) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (v > budget / base) {
      throw ResourceError(std::string(what) + ": " + std::to_string(base) + "^" +
                          std::to_string(exp) + " exceeds budget " + std::to_string(budget));
    }
    v *= base;
  }
  if (v > budget) throw ResourceError(std::string(what) + ": exceeds budget " + std::to_string(budget));
  return v;
}

inline std::vector<std::size_t> powers(std::size_t base, std::size_t count) {
  std::vector<std::size_t> p(count + 1, 1);
  for (std::size_t i = 1; i <= count; ++i) p[i] = p[i - 1] * base;
  return p;
}

}  // namespace detail

/// Local rule of a one-dimensional cellular automaton:
///   F(x)_i = table(x_{i+memory} ... x_{i+anticipation}).
/// The table is indexed by the neighborhood word read as a base-#A number,
/// leftmost cell most significant.
class LocalRule {
 public:
  LocalRule(Alphabet alphabet, int memory, int anticipation, std::vector<Symbol> table)
      : alphabet_(std::move(alphabet)),
        memory_(memory),
        anticipation_(anticipation),
        table_(std::move(table)) {
    if (memory_ > anticipation_) throw PreconditionError("memory must not exceed anticipation");
    std::size_t expected = detail::checked_pow(alphabet_.size(), neighborhood_size(),
                                               std::numeric_limits<std::size_t>::max() / 2,
                                               "rule table");
    if (table_.size() != expected) {
      throw PreconditionError("rule table has " + std::to_string(table_.size()) +
                              " entries, expected " + std::to_string(expected));
    }
    for (Symbol s : table_)
      if (s >= alphabet_.size()) throw PreconditionError("rule table output outside alphabet");
  }

  /// Builds the table by evaluating `fn` on every neighborhood word.
  static LocalRule from_function(Alphabet alphabet, int memory, int anticipation,
                                 const std::function<Symbol(const Word&)>& fn,
                                 std::size_t budget = kDefaultTableBudget) {
    if (memory > anticipation) throw PreconditionError("memory must not exceed anticipation");
    const auto k = alphabet.size();
    const auto n = static_cast<std::size_t>(anticipation - memory + 1);
    std::vector<Symbol> table;
    table.reserve(detail::checked_pow(k, n, budget, "rule table"));
    for_each_word(k, n, [&](const Word& w) { table.push_back(fn(w)); });
    return LocalRule(std::move(alphabet), memory, anticipation, std::move(table));
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t alphabet_size() const noexcept { return alphabet_.size(); }
  int memory() const noexcept { return memory_; }
  int anticipation() const noexcept { return anticipation_; }
  int radius() const noexcept { return std::max({-memory_, anticipation_, 0}); }
  std::size_t diameter() const noexcept { return static_cast<std::size_t>(anticipation_ - memory_); }
  std::size_t neighborhood_size() const noexcept { return diameter() + 1; }
  const std::vector<Symbol>& table() const noexcept { return table_; }

  std::size_t encode(std::span<const Symbol> neighborhood) const {
    std::size_t idx = 0;
    for (Symbol s : neighborhood) idx = idx * alphabet_.size() + s;
    return idx;
  }

  Word decode(std::size_t index) const {
    Word w(neighborhood_size());
    for (std::size_t i = w.size(); i-- > 0;) {
      w[i] = static_cast<Symbol>(index % alphabet_.size());
      index /= alphabet_.size();
    }
    return w;
  }

  Symbol operator()(std::span<const Symbol> neighborhood) const {
    if (neighborhood.size() != neighborhood_size())
      throw PreconditionError("neighborhood has wrong length");
    return table_[encode(neighborhood)];
  }

  Symbol at(std::size_t index) const { return table_[index]; }

  friend bool operator==(const LocalRule& a, const LocalRule& b) {
    return a.memory_ == b.memory_ && a.anticipation_ == b.anticipation_ &&
           a.alphabet_ == b.alphabet_ && a.table_ == b.table_;
  }

 private:
  Alphabet alphabet_;
  int memory_;
  int anticipation_;
  std::vector<Symbol> table_;
};

/// Image of a finite word: output position j reads u_j ... u_{j+d}.
inline Word apply_rule_word(const LocalRule& rule, const Word& u) {
  const auto n = rule.neighborhood_size();
  if (u.size() < n) {
    throw PreconditionError("word of length " + std::to_string(u.size()) +
                            " is shorter than the neighborhood (" + std::to_string(n) + ")");
  }
  const auto k = rule.alphabet_size();
  std::size_t top = 1;
  for (std::size_t i = 1; i < n; ++i) top *= k;
  Word out;
  out.reserve(u.size() - n + 1);
  std::size_t idx = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (j >= n) idx -= u[j - n] * top;
    idx = idx * k + u[j];
    if (j + 1 >= n) out.push_back(rule.at(idx));
  }
  return out;
}

/// Local rule of outer ∘ inner. Memory and anticipation add.
inline LocalRule compose(const LocalRule& outer, const LocalRule& inner,
                         std::size_t budget = kDefaultTableBudget) {
  if (!(outer.alphabet() == inner.alphabet())) throw AlphabetMismatch("compose: alphabets differ");
  const auto k = outer.alphabet_size();
  const auto d_out = outer.diameter();
  const auto d_in = inner.diameter();
  const auto total = d_out + d_in + 1;
  const auto entries = detail::checked_pow(k, total, budget, "compose");
  const auto pw = detail::powers(k, total);
  std::vector<Symbol> table(entries);
  for (std::size_t idx = 0; idx < entries; ++idx) {
    std::size_t out_idx = 0;
    for (std::size_t j = 0; j <= d_out; ++j) {
      // cells j .. j+d_in of the combined neighborhood
      std::size_t slice = (idx / pw[d_out - j]) % pw[d_in + 1];
      out_idx = out_idx * k + inner.at(slice);
    }
    table[idx] = outer.at(out_idx);
  }
  return LocalRule(outer.alphabet(), outer.memory() + inner.memory(),
                   outer.anticipation() + inner.anticipation(), std::move(table));
}

/// Local rule of F^p.
inline LocalRule iterate_rule(const LocalRule& rule, std::size_t p,
                              std::size_t budget = kDefaultTableBudget) {
  if (p == 0) throw PreconditionError("iterate_rule: p must be positive");
  detail::checked_pow(rule.alphabet_size(), p * rule.diameter() + 1, budget, "iterate_rule");
  LocalRule acc = rule;
  for (std::size_t i = 1; i < p; ++i) acc = compose(rule, acc, budget);
  return acc;
}

/// Same global map, read through the larger neighborhood [memory, anticipation].
inline LocalRule widen(const LocalRule& rule, int memory, int anticipation,
                       std::size_t budget = kDefaultTableBudget) {
  if (memory > rule.memory() || anticipation < rule.anticipation())
    throw PreconditionError("widen: target neighborhood must contain the rule's");
  const auto offset = static_cast<std::size_t>(rule.memory() - memory);
  const auto n = rule.neighborhood_size();
  return LocalRule::from_function(
      rule.alphabet(), memory, anticipation,
      [&](const Word& w) {
        return rule(std::span<const Symbol>(w).subspan(offset, n));
      },
      budget);
}

/// True iff both rules define the same global map on A^Z.
inline bool same_global_map(const LocalRule& a, const LocalRule& b,
                            std::size_t budget = kDefaultTableBudget) {
  if (!(a.alphabet() == b.alphabet())) return false;
  const int m = std::min(a.memory(), b.memory());
  const int an = std::max(a.anticipation(), b.anticipation());
  if (a.memory() == m && b.memory() == m && a.anticipation() == an && b.anticipation() == an)
    return a.table() == b.table();
  return widen(a, m, an, budget).table() == widen(b, m, an, budget).table();
}

/// True iff F is the identity, i.e. every neighborhood maps to its cell 0.
inline bool is_identity_rule(const LocalRule& rule) {
  if (rule.memory() > 0 || rule.anticipation() < 0) return false;
  const auto center = static_cast<std::size_t>(-rule.memory());
  for (std::size_t idx = 0; idx < rule.table().size(); ++idx)
    if (rule.at(idx) != rule.decode(idx)[center]) return false;
  return true;
}

// Standard rules

inline LocalRule identity_rule(Alphabet alphabet) {
  std::vector<Symbol> table(alphabet.size());
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = static_cast<Symbol>(i);
  return LocalRule(std::move(alphabet), 0, 0, std::move(table));
}

/// σ(x)_i = x_{i+1}.
inline LocalRule shift_rule(Alphabet alphabet) {
  auto r = identity_rule(alphabet);
  return LocalRule(std::move(alphabet), 1, 1, r.table());
}

/// Cellwise x ↦ x + step mod k over the digit alphabet.
inline LocalRule rotation_rule(std::size_t k, std::size_t step = 1) {
  std::vector<Symbol> table(k);
  for (std::size_t i = 0; i < k; ++i) table[i] = static_cast<Symbol>((i + step) % k);
  return LocalRule(Alphabet::digits(k), 0, 0, std::move(table));
}

inline LocalRule constant_rule(Alphabet alphabet, Symbol value, int memory = 0, int anticipation = 0) {
  return LocalRule::from_function(std::move(alphabet), memory, anticipation,
                                  [&](const Word&) { return value; });
}

/// Rule whose table digits are the base-k digits of `number` (table index 0 is
/// the least significant digit). With k = 2, m = -1, a = 1 this is the Wolfram
/// numbering of elementary CA.
inline LocalRule numbered_rule(std::size_t k, int memory, int anticipation, std::uint64_t number) {
  if (memory > anticipation) throw PreconditionError("memory must not exceed anticipation");
  const auto entries = detail::checked_pow(k, static_cast<std::size_t>(anticipation - memory + 1),
                                           kDefaultTableBudget, "numbered_rule");
  std::vector<Symbol> table(entries);
  for (auto& t : table) {
    t = static_cast<Symbol>(number % k);
    number /= k;
  }
  if (number != 0) throw PreconditionError("rule number out of range for this rule space");
  return LocalRule(Alphabet::digits(k), memory, anticipation, std::move(table));
}

inline LocalRule eca_rule(unsigned number) {
  if (number > 255) throw PreconditionError("elementary rule number must be in [0, 255]");
  return numbered_rule(2, -1, 1, number);
}

}  // namespace cadyn
