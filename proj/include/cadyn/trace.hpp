#pragma once

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "cadyn/alphabet.hpp"
#include "cadyn/configuration.hpp"
#include "cadyn/error.hpp"
#include "cadyn/rule.hpp"

namespace cadyn {

inline constexpr std::size_t kDefaultOrbitBudget = 1u << 20;

/// F^(m+p)(x) = F^m(x) with p minimal and m minimal given p.
struct OrbitSummary {
  std::size_t preperiod = 0;
  std::size_t period = 1;
  /// F^t(x) for t = 0 .. preperiod + period - 1.
  std::vector<CyclicConfiguration> snapshots;

  /// F^t(x) for any t >= 0.
  const CyclicConfiguration& at(std::size_t t) const {
    if (t < snapshots.size()) return snapshots[t];
    return snapshots[preperiod + (t - preperiod) % period];
  }
};

inline OrbitSummary orbit_cycle(const LocalRule& rule, const CyclicConfiguration& x,
                                std::size_t max_steps = kDefaultOrbitBudget) {
  OrbitSummary out;
  std::unordered_map<Word, std::size_t, WordHash> seen;
  CyclicConfiguration y = x;
  for (std::size_t t = 0;; ++t) {
    auto [it, inserted] = seen.emplace(y.key(), t);
    if (!inserted) {
      out.preperiod = it->second;
      out.period = t - it->second;
      return out;
    }
    if (t >= max_steps)
      throw ResourceError("orbit_cycle: no repetition within " + std::to_string(max_steps) + " steps");
    out.snapshots.push_back(y);
    y = step_cyclic(rule, y);
  }
}

/// The eventually periodic sequence F^n(x)(i1, i2).
struct ColumnTrace {
  long long i1 = 0;
  long long i2 = 0;
  /// words[n] for n = 0 .. preperiod + period - 1.
  std::vector<Word> words;
  std::size_t preperiod = 0;
  std::size_t period = 1;
  std::size_t orbit_preperiod = 0;
  std::size_t orbit_period = 1;

  const Word& at(std::size_t n) const {
    if (n < words.size()) return words[n];
    return words[preperiod + (n - preperiod) % period];
  }
};

namespace detail {

/// Minimal (preperiod, period) of a sequence known to satisfy
/// seq(n + p) = seq(n) for n >= m.
template <typename At>
std::pair<std::size_t, std::size_t> minimize_cycle(std::size_t m, std::size_t p, At&& at) {
  std::size_t best = p;
  for (std::size_t q = 1; q < p; ++q) {
    if (p % q) continue;
    bool ok = true;
    for (std::size_t j = 0; j < p && ok; ++j) ok = at(m + j) == at(m + (j + q) % p);
    if (ok) {
      best = q;
      break;
    }
  }
  std::size_t start = m;
  while (start > 0 && at(start - 1) == at(start - 1 + best)) --start;
  return {start, best};
}

}  // namespace detail

inline ColumnTrace trace_from_orbit(const OrbitSummary& orbit, long long i1, long long i2) {
  if (i1 > i2) throw PreconditionError("column_trace: i1 must not exceed i2");
  ColumnTrace tr;
  tr.i1 = i1;
  tr.i2 = i2;
  tr.orbit_preperiod = orbit.preperiod;
  tr.orbit_period = orbit.period;
  std::vector<Word> all;
  for (const auto& snap : orbit.snapshots) all.push_back(snap.window(i1, i2));
  auto at = [&](std::size_t n) -> const Word& {
    if (n < all.size()) return all[n];
    return all[orbit.preperiod + (n - orbit.preperiod) % orbit.period];
  };
  auto [m, p] = detail::minimize_cycle(orbit.preperiod, orbit.period, at);
  tr.preperiod = m;
  tr.period = p;
  for (std::size_t n = 0; n < m + p; ++n) tr.words.push_back(at(n));
  return tr;
}

inline ColumnTrace column_trace(const LocalRule& rule, const CyclicConfiguration& x, long long i1, long long i2,
                                std::size_t max_steps = kDefaultOrbitBudget) {
  if (i1 > i2) throw PreconditionError("column_trace: i1 must not exceed i2");
  return trace_from_orbit(orbit_cycle(rule, x, max_steps), i1, i2);
}

/// Whether two column traces agree for every time step. Comparing up to
/// max preperiod + lcm of periods is exact.
inline bool same_trace(const ColumnTrace& a, const ColumnTrace& b) {
  const auto horizon = std::max(a.preperiod, b.preperiod) + std::lcm(a.period, b.period);
  for (std::size_t n = 0; n < horizon; ++n)
    if (a.at(n) != b.at(n)) return false;
  return true;
}

/// x R y iff F^j(x)(i1, i2) = F^j(y)(i1, i2) for all j >= 0.
inline bool same_gilman_class(const LocalRule& rule, const CyclicConfiguration& x, const CyclicConfiguration& y,
                              long long i1, long long i2, std::size_t max_steps = kDefaultOrbitBudget) {
  return same_trace(column_trace(rule, x, i1, i2, max_steps), column_trace(rule, y, i1, i2, max_steps));
}

/// Whether F(x) R F(y), given x R y. Always true by the forward-invariance of
/// the relation; exposed so that property can be tested.
inline bool class_forward_consistency(const LocalRule& rule, const CyclicConfiguration& x,
                                      const CyclicConfiguration& y, long long i1, long long i2,
                                      std::size_t max_steps = kDefaultOrbitBudget) {
  if (!same_gilman_class(rule, x, y, i1, i2, max_steps))
    throw PreconditionError("class_forward_consistency: x and y are not in the same class");
  return same_gilman_class(rule, step_cyclic(rule, x), step_cyclic(rule, y), i1, i2, max_steps);
}

/// The periodic point (x_center y_center x_center)^∞ with the middle letter of
/// y_center at coordinate 0 (the left one of the two middles for even length).
inline CyclicConfiguration embed_periodic(const Word& x_center, const Word& y_center) {
  if (x_center.empty() || y_center.empty()) throw PreconditionError("embed_periodic: words must be non-empty");
  Word u = x_center;
  u.insert(u.end(), y_center.begin(), y_center.end());
  u.insert(u.end(), x_center.begin(), x_center.end());
  return CyclicConfiguration(std::move(u), x_center.size() + (y_center.size() - 1) / 2);
}

}  // namespace cadyn
