#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cadyn/alphabet.hpp"
#include "cadyn/error.hpp"
#include "cadyn/rule.hpp"

namespace cadyn {

namespace detail {

inline std::size_t mod(long long i, std::size_t n) {
  auto r = i % static_cast<long long>(n);
  return static_cast<std::size_t>(r < 0 ? r + static_cast<long long>(n) : r);
}

/// Smallest q dividing |w| with w = (w_0..w_{q-1})^{|w|/q}.
inline std::size_t primitive_period(const Word& w) {
  const auto n = w.size();
  for (std::size_t q = 1; q < n; ++q) {
    if (n % q) continue;
    bool ok = true;
    for (std::size_t i = q; i < n && ok; ++i) ok = w[i] == w[i - q];
    if (ok) return q;
  }
  return n;
}

}  // namespace detail

/// Spatially periodic configuration x with x_i = word[(i + phase) mod L].
///
/// The user's period word is kept as given (it may be imprimitive). Equality
/// and hashing go through key(): the primitive root read from coordinate 0.
class CyclicConfiguration {
 public:
  CyclicConfiguration() = default;

  explicit CyclicConfiguration(Word period_word, std::size_t phase = 0)
      : word_(std::move(period_word)), phase_(phase) {
    if (word_.empty()) throw PreconditionError("cyclic configuration needs a non-empty period word");
    if (phase_ >= word_.size()) throw PreconditionError("phase must lie in [0, L)");
  }

  const Word& period_word() const noexcept { return word_; }
  std::size_t period() const noexcept { return word_.size(); }
  std::size_t phase() const noexcept { return phase_; }

  Symbol at(long long i) const { return word_[detail::mod(i + static_cast<long long>(phase_), word_.size())]; }

  /// x(i1, i2) = x_{i1} ... x_{i2}.
  Word window(long long i1, long long i2) const {
    if (i1 > i2) throw PreconditionError("window: i1 must not exceed i2");
    Word out;
    out.reserve(static_cast<std::size_t>(i2 - i1 + 1));
    for (long long i = i1; i <= i2; ++i) out.push_back(at(i));
    return out;
  }

  /// Primitive root of the configuration read starting at coordinate 0.
  Word key() const {
    Word aligned = window(0, static_cast<long long>(word_.size()) - 1);
    aligned.resize(detail::primitive_period(aligned));
    return aligned;
  }

  /// σ^k(x), i.e. (σ^k x)_i = x_{i+k}.
  CyclicConfiguration shifted(long long k) const {
    return CyclicConfiguration(word_, detail::mod(static_cast<long long>(phase_) + k, word_.size()));
  }

  friend bool operator==(const CyclicConfiguration& a, const CyclicConfiguration& b) {
    return a.key() == b.key();
  }

 private:
  Word word_;
  std::size_t phase_ = 0;
};

/// F(x). Keeps the period length and phase of x.
inline CyclicConfiguration step_cyclic(const LocalRule& rule, const CyclicConfiguration& x) {
  const auto& u = x.period_word();
  const auto L = u.size();
  const auto n = rule.neighborhood_size();
  Word out(L);
  Word nb(n);
  for (std::size_t j = 0; j < L; ++j) {
    for (std::size_t t = 0; t < n; ++t)
      nb[t] = u[detail::mod(static_cast<long long>(j) + rule.memory() + static_cast<long long>(t), L)];
    out[j] = rule(nb);
  }
  return CyclicConfiguration(std::move(out), x.phase());
}

inline CyclicConfiguration step_cyclic(const LocalRule& rule, const CyclicConfiguration& x,
                                       std::size_t steps) {
  CyclicConfiguration y = x;
  for (std::size_t t = 0; t < steps; ++t) y = step_cyclic(rule, y);
  return y;
}

/// Distance 2^-n between configurations; `exponent` is empty for equal points.
struct Distance {
  std::optional<std::size_t> exponent;

  bool is_zero() const noexcept { return !exponent.has_value(); }
  double value() const { return exponent ? std::ldexp(1.0, -static_cast<int>(*exponent)) : 0.0; }

  friend bool operator==(const Distance&, const Distance&) = default;
  friend bool operator<(const Distance& a, const Distance& b) {
    if (a.is_zero()) return !b.is_zero();
    if (b.is_zero()) return false;
    return *a.exponent > *b.exponent;
  }
  friend bool operator<=(const Distance& a, const Distance& b) { return !(b < a); }
};

/// d(x, y) = 2^-n with n the least i >= 0 such that x_i != y_i or x_-i != y_-i.
inline Distance distance(const CyclicConfiguration& x, const CyclicConfiguration& y) {
  const auto horizon = std::lcm(x.period(), y.period());
  for (std::size_t i = 0; i < horizon; ++i) {
    const auto si = static_cast<long long>(i);
    if (x.at(si) != y.at(si) || x.at(-si) != y.at(-si)) return Distance{i};
  }
  return Distance{};
}

/// Rows F^t(x)(i1, i2) for t = 0 .. steps.
struct SpaceTimeBlock {
  long long i1 = 0;
  long long i2 = 0;
  std::vector<Word> rows;

  std::size_t width() const noexcept { return static_cast<std::size_t>(i2 - i1 + 1); }
};

inline SpaceTimeBlock space_time(const LocalRule& rule, const CyclicConfiguration& x, std::size_t steps,
                                 long long i1, long long i2) {
  SpaceTimeBlock block{i1, i2, {}};
  block.rows.reserve(steps + 1);
  CyclicConfiguration y = x;
  for (std::size_t t = 0; t <= steps; ++t) {
    block.rows.push_back(y.window(i1, i2));
    if (t < steps) y = step_cyclic(rule, y);
  }
  return block;
}

}  // namespace cadyn

template <>
struct std::hash<cadyn::CyclicConfiguration> {
  std::size_t operator()(const cadyn::CyclicConfiguration& x) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto s : x.key()) h = (h ^ s) * 1099511628211ull;
    return h;
  }
};
