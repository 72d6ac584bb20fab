#pragma once

// Rule-space enumeration with predicate filtering.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cadyn/blocking.hpp"
#include "cadyn/decision.hpp"
#include "cadyn/error.hpp"
#include "cadyn/rule.hpp"
#include "cadyn/rule_io.hpp"

namespace cadyn {

/// All rules over the digit alphabet of size k with neighborhood [memory, anticipation].
struct RuleSpace {
  std::size_t k = 2;
  int memory = -1;
  int anticipation = 1;

  static RuleSpace eca() { return {2, -1, 1}; }

  /// Number of rules, or nullopt when it does not fit in 64 bits.
  std::optional<std::uint64_t> size() const {
    const auto entries = detail::checked_pow(k, static_cast<std::size_t>(anticipation - memory + 1),
                                             kDefaultTableBudget, "rule space");
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < entries; ++i) {
      if (n > UINT64_MAX / k) return std::nullopt;
      n *= k;
    }
    return n;
  }

  LocalRule rule(std::uint64_t number) const { return numbered_rule(k, memory, anticipation, number); }
  std::string name(std::uint64_t number) const { return numbered_rule_name(k, memory, anticipation, number); }
};

/// Parses "eca" or "K:M:A" (e.g. "3:-1:0").
inline RuleSpace parse_rule_space(std::string_view text) {
  if (text == "eca") return RuleSpace::eca();
  auto parts = detail::split(text, ':');
  if (parts.size() != 3) throw ParseError("rule space must be 'eca' or K:M:A");
  RuleSpace s{static_cast<std::size_t>(detail::parse_int(parts[0], "alphabet size")),
              static_cast<int>(detail::parse_int(parts[1], "memory")),
              static_cast<int>(detail::parse_int(parts[2], "anticipation"))};
  if (s.k < 2 || s.k > 36 || s.memory > s.anticipation) throw ParseError("invalid rule space");
  return s;
}

struct ScanPredicates {
  bool surjective = false;
  bool injective = false;
  /// Require a certified blocking word of width s and length <= max_len.
  std::optional<std::size_t> blocking_width;
  std::size_t blocking_max_len = 4;
  std::size_t blocking_steps = 64;
  /// Require no certificate F^(m+p) = F^m with m + p <= this bound.
  std::optional<std::size_t> not_eventually_periodic;
  std::size_t table_budget = 1'000'000;
};

struct ScanHit {
  std::uint64_t number = 0;
  std::string name;
  std::optional<BlockingHit> blocking;
};

/// Rules of `space` passing every requested predicate. Exhaustive scans go in
/// rule-number order; with `sample` set, that many rule numbers are drawn from
/// a seeded generator and reported in draw order.
inline std::vector<ScanHit> scan_rules(const RuleSpace& space, const ScanPredicates& pred,
                                       std::optional<std::size_t> sample = std::nullopt, std::uint64_t seed = 0,
                                       std::size_t threads = 0) {
  std::vector<std::uint64_t> numbers;
  const auto total = space.size();
  if (sample) {
    std::mt19937_64 rng(seed);
    const std::uint64_t hi = total ? *total - 1 : UINT64_MAX;
    std::uniform_int_distribution<std::uint64_t> dist(0, hi);
    for (std::size_t i = 0; i < *sample; ++i) numbers.push_back(dist(rng));
  } else {
    if (!total || *total > 50'000'000) throw ResourceError("rule space too large for an exhaustive scan; use --sample");
    numbers.resize(*total);
    for (std::uint64_t i = 0; i < *total; ++i) numbers[i] = i;
  }

  auto results = detail::parallel_map(
      numbers.size(),
      [&](std::size_t i) -> std::optional<ScanHit> {
        const auto rule = space.rule(numbers[i]);
        ScanHit hit{numbers[i], space.name(numbers[i]), std::nullopt};
        if (pred.surjective && !is_surjective(rule).surjective) return std::nullopt;
        if (pred.injective && !is_injective(rule).injective) return std::nullopt;
        if (pred.not_eventually_periodic &&
            eventual_map_period(rule, *pred.not_eventually_periodic, pred.table_budget))
          return std::nullopt;
        if (pred.blocking_width) {
          hit.blocking = first_blocking_word(rule, *pred.blocking_width, pred.blocking_max_len, pred.blocking_steps);
          if (!hit.blocking) return std::nullopt;
        }
        return hit;
      },
      threads);

  std::vector<ScanHit> hits;
  for (auto& r : results)
    if (r) hits.push_back(std::move(*r));
  return hits;
}

}  // namespace cadyn
