#pragma once

// Periodic factors Z/pZ read off a column trace, their verification, and the
// period-spectrum experiment over embedded periodic points.

#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cadyn/alphabet.hpp"
#include "cadyn/blocking.hpp"
#include "cadyn/configuration.hpp"
#include "cadyn/error.hpp"
#include "cadyn/rule.hpp"
#include "cadyn/trace.hpp"

namespace cadyn {

/// π: W → Z/pZ, W the union of cylinders [phase_words[k]] at position i1.
/// The target map is n ↦ n + 1 mod p.
struct PeriodicFactor {
  std::size_t period = 1;
  std::size_t preperiod = 0;
  long long i1 = 0;
  long long i2 = 0;
  std::vector<Word> phase_words;
  CyclicConfiguration base;
};

/// Window word -> residue mod `modulus`. Several words may share a residue,
/// which is how quotients Z/pZ → Z/qZ of a factor are expressed.
struct PhaseMap {
  long long i1 = 0;
  long long i2 = 0;
  std::size_t modulus = 1;
  std::map<Word, std::size_t> residue;

  std::optional<std::size_t> operator()(const CyclicConfiguration& y) const {
    auto it = residue.find(y.window(i1, i2));
    if (it == residue.end()) return std::nullopt;
    return it->second;
  }
};

inline PhaseMap phase_map(const PeriodicFactor& f) {
  PhaseMap pm{f.i1, f.i2, f.period, {}};
  for (std::size_t k = 0; k < f.phase_words.size(); ++k) pm.residue.emplace(f.phase_words[k], k);
  return pm;
}

/// Composes π with the reduction Z/pZ → Z/qZ.
inline PhaseMap quotient(const PhaseMap& pm, std::size_t q) {
  if (q == 0 || pm.modulus % q) throw PreconditionError("quotient: q must divide the factor period");
  PhaseMap out{pm.i1, pm.i2, q, {}};
  for (const auto& [w, k] : pm.residue) out.residue.emplace(w, k % q);
  return out;
}

/// Smallest q such that the cycle of words repeats with period q. Throws when
/// two phases carry the same word without such a sub-period.
inline std::size_t consistent_subperiod(const std::vector<Word>& cycle) {
  const auto p = cycle.size();
  if (p == 0) throw PreconditionError("consistent_subperiod: empty cycle");
  std::size_t q = p;
  for (std::size_t c = 1; c < p; ++c) {
    if (p % c) continue;
    bool ok = true;
    for (std::size_t j = 0; j < p && ok; ++j) ok = cycle[j] == cycle[(j + c) % p];
    if (ok) {
      q = c;
      break;
    }
  }
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = a + 1; b < q; ++b)
      if (cycle[a] == cycle[b])
        throw IllDefinedFactorError("phase words at phases " + std::to_string(a) + " and " + std::to_string(b) +
                                        " coincide; the phase map is not a function of the window",
                                    a, b);
  return q;
}

inline PeriodicFactor factor_from_trace(const ColumnTrace& tr, const CyclicConfiguration& base) {
  std::vector<Word> cycle(tr.words.begin() + static_cast<long>(tr.preperiod), tr.words.end());
  const auto q = consistent_subperiod(cycle);
  cycle.resize(q);
  return PeriodicFactor{q, tr.preperiod, tr.i1, tr.i2, std::move(cycle), base};
}

inline PeriodicFactor build_factor(const LocalRule& rule, const CyclicConfiguration& x, long long i1, long long i2,
                                   std::size_t max_steps = kDefaultOrbitBudget) {
  return factor_from_trace(column_trace(rule, x, i1, i2, max_steps), x);
}

struct FactorViolation {
  CyclicConfiguration point;
  std::size_t phase = 0;
  /// Residue of F(point), absent when F(point) left W.
  std::optional<std::size_t> image_phase;
};

struct FactorVerification {
  std::size_t enumerated = 0;
  std::size_t checked = 0;
  std::vector<FactorViolation> violations;

  bool passed() const noexcept { return violations.empty(); }
};

/// Checks π(F(y)) = π(y) + 1 mod p on every cyclic configuration y of period at
/// most `period_bound` that lies in W. Each configuration is visited once,
/// whatever period word represents it.
inline FactorVerification verify_factor(const LocalRule& rule, const PhaseMap& pm, std::size_t period_bound) {
  FactorVerification report;
  std::set<Word> visited;
  for (std::size_t L = 1; L <= period_bound; ++L) {
    for_each_word(rule.alphabet_size(), L, [&](const Word& u) {
      CyclicConfiguration y(u);
      if (!visited.insert(y.key()).second) return;
      ++report.enumerated;
      auto phase = pm(y);
      if (!phase) return;
      ++report.checked;
      auto image = pm(step_cyclic(rule, y));
      if (!image || *image != (*phase + 1) % pm.modulus) report.violations.push_back({y, *phase, image});
    });
  }
  return report;
}

inline FactorVerification verify_factor(const LocalRule& rule, const PeriodicFactor& f, std::size_t period_bound) {
  return verify_factor(rule, phase_map(f), period_bound);
}

inline bool divisor_check(std::size_t system_period, std::size_t factor_period) {
  if (system_period == 0 || factor_period == 0) throw PreconditionError("divisor_check: periods must be positive");
  return system_period % factor_period == 0;
}

struct SpectrumEntry {
  Word y;
  std::size_t trace_preperiod = 0;
  std::size_t trace_period = 0;
  std::size_t factor_period = 0;
  std::size_t running_lcm = 1;
  std::optional<std::string> error;
};

struct SpectrumReport {
  std::vector<SpectrumEntry> entries;
  std::set<std::size_t> periods;
  std::size_t lcm = 1;
  /// Running lcm after all y of each length, in increasing length order.
  std::vector<std::pair<std::size_t, std::size_t>> lcm_by_length;
  /// Some entry raised the running lcm strictly above an earlier value.
  bool lcm_grew = false;
  /// The running lcm strictly increases between two consecutive y-lengths.
  bool lcm_grew_with_length = false;
  /// Advisory: x_center itself certified as an s-blocking word.
  bool x_center_certified = false;
};

/// For each y: the periodic point (x_center y x_center)^∞, its column trace at
/// [i1, i2] and the period of the resulting factor. Errors are kept per entry.
inline SpectrumReport period_spectrum(const LocalRule& rule, const Word& x_center, const std::vector<Word>& y_windows,
                                      long long i1, long long i2, std::size_t max_steps = kDefaultOrbitBudget,
                                      std::size_t blocking_steps = 64) {
  SpectrumReport report;
  const auto s = static_cast<std::size_t>(std::max(rule.radius(), 1));
  if (x_center.size() >= s) {
    for (std::size_t p = 0; p + s <= x_center.size() && !report.x_center_certified; ++p)
      report.x_center_certified =
          std::holds_alternative<Certified>(verify_blocking(rule, BlockingQuery{x_center, s, p}, blocking_steps));
  }

  auto results = detail::parallel_map(y_windows.size(), [&](std::size_t i) {
    SpectrumEntry e;
    e.y = y_windows[i];
    try {
      auto x = embed_periodic(x_center, e.y);
      auto tr = column_trace(rule, x, i1, i2, max_steps);
      e.trace_preperiod = tr.preperiod;
      e.trace_period = tr.period;
      e.factor_period = factor_from_trace(tr, x).period;
    } catch (const Error& err) {
      e.error = err.what();
    }
    return e;
  });

  std::size_t lcm = 1;
  std::optional<std::size_t> current_length;
  for (auto& e : results) {
    if (current_length && *current_length != e.y.size()) report.lcm_by_length.emplace_back(*current_length, lcm);
    current_length = e.y.size();
    if (!e.error) {
      auto next = std::lcm(lcm, e.factor_period);
      if (next > lcm) report.lcm_grew = report.lcm_grew || report.periods.size() > 0;
      lcm = next;
      report.periods.insert(e.factor_period);
    }
    e.running_lcm = lcm;
    report.entries.push_back(std::move(e));
  }
  if (current_length) report.lcm_by_length.emplace_back(*current_length, lcm);
  for (std::size_t i = 1; i < report.lcm_by_length.size(); ++i)
    if (report.lcm_by_length[i].second > report.lcm_by_length[i - 1].second) report.lcm_grew_with_length = true;
  report.lcm = lcm;
  return report;
}

/// All words over `symbols` with length in [1, max_len], length-then-lex order.
inline std::vector<Word> words_over(const Word& symbols, std::size_t max_len) {
  std::vector<Word> out;
  for (std::size_t len = 1; len <= max_len; ++len)
    for_each_word(symbols.size(), len, [&](const Word& idx) {
      Word w;
      for (auto i : idx) w.push_back(symbols[i]);
      out.push_back(std::move(w));
    });
  return out;
}

}  // namespace cadyn
