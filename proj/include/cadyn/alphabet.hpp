#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cadyn/error.hpp"

namespace cadyn {

/// Index of a symbol in its alphabet's declared order.
using Symbol = std::uint8_t;

/// Finite word over an alphabet, stored as symbol indices.
using Word = std::vector<Symbol>;

/// Reserved value used by three-valued words for "unknown".
inline constexpr Symbol kUnknown = 0xFF;

/// Ordered set of named symbols. Symbols are arbitrary printable tokens; when
/// every token is a single character, words are written by concatenation,
/// otherwise tokens are joined with '|'.
class Alphabet {
 public:
  static constexpr std::size_t kMaxSize = 254;

  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> symbols) : names_(std::move(symbols)) {
    if (names_.size() < 2) throw PreconditionError("alphabet needs at least two symbols");
    if (names_.size() > kMaxSize) throw PreconditionError("alphabet too large");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      const auto& n = names_[i];
      if (n.empty() || n.find('|') != std::string::npos)
        throw PreconditionError("invalid symbol name '" + n + "'");
      if (!index_.emplace(n, static_cast<Symbol>(i)).second)
        throw PreconditionError("duplicate symbol '" + n + "'");
      single_char_ = single_char_ && n.size() == 1;
    }
  }

  /// Alphabet {"0", "1", ..., "k-1"}; digits beyond 9 continue with letters.
  static Alphabet digits(std::size_t k) {
    static constexpr std::string_view kChars = "0123456789abcdefghijklmnopqrstuvwxyz";
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i)
      names.push_back(i < kChars.size() ? std::string(1, kChars[i]) : "s" + std::to_string(i));
    return Alphabet(std::move(names));
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& symbols() const noexcept { return names_; }
  const std::string& name(Symbol s) const { return names_.at(s); }
  bool single_char() const noexcept { return single_char_; }

  Symbol index(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw ParseError("unknown symbol '" + std::string(name) + "'");
    return it->second;
  }

  bool contains(const Word& w) const {
    return std::all_of(w.begin(), w.end(), [&](Symbol s) { return s < size(); });
  }

  Word parse(std::string_view text) const {
    Word out;
    if (text.empty()) return out;
    if (single_char_ && text.find('|') == std::string_view::npos) {
      for (char c : text) out.push_back(index(std::string_view(&c, 1)));
      return out;
    }
    std::size_t start = 0;
    while (true) {
      auto bar = text.find('|', start);
      out.push_back(index(text.substr(start, bar - start)));
      if (bar == std::string_view::npos) break;
      start = bar + 1;
    }
    return out;
  }

  std::string format(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!single_char_ && i > 0) out += '|';
      out += w[i] == kUnknown ? std::string("?") : name(w[i]);
    }
    return out;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Symbol> index_;
  bool single_char_ = true;
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto s : w) h = (h ^ s) * 1099511628211ull;
    return h;
  }
};

/// Calls fn(word) for every word of the given length in lexicographic order of
/// the alphabet's declared symbol order.
template <typename Fn>
void for_each_word(std::size_t alphabet_size, std::size_t length, Fn&& fn) {
  Word w(length, 0);
  while (true) {
    fn(static_cast<const Word&>(w));
    std::size_t i = length;
    while (i > 0) {
      --i;
      if (++w[i] < alphabet_size) break;
      w[i] = 0;
      if (i == 0) return;
    }
    if (length == 0) return;
  }
}

/// All words of the given length, lexicographically ordered.
inline std::vector<Word> all_words(std::size_t alphabet_size, std::size_t length) {
  std::vector<Word> out;
  for_each_word(alphabet_size, length, [&](const Word& w) { out.push_back(w); });
  return out;
}

}  // namespace cadyn
