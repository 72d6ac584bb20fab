#pragma once

// Rule files, rule shorthands ("eca:N", "tab:K:M:A:N", "zoo:NAME") and the
// built-in rule zoo.

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cadyn/alphabet.hpp"
#include "cadyn/error.hpp"
#include "cadyn/rule.hpp"

namespace cadyn {

using json = nlohmann::json;

inline json rule_to_json(const LocalRule& rule) {
  json table = json::object();
  for (std::size_t idx = 0; idx < rule.table().size(); ++idx)
    table[rule.alphabet().format(rule.decode(idx))] = rule.alphabet().name(rule.at(idx));
  return json{{"alphabet", rule.alphabet().symbols()},
              {"memory", rule.memory()},
              {"anticipation", rule.anticipation()},
              {"table", std::move(table)}};
}

inline LocalRule rule_from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw ParseError("rule document must be a JSON object");
    for (const char* field : {"alphabet", "memory", "anticipation", "table"})
      if (!doc.contains(field)) throw ParseError(std::string("rule document lacks \"") + field + "\"");
    Alphabet alphabet(doc.at("alphabet").get<std::vector<std::string>>());
    const int m = doc.at("memory").get<int>();
    const int a = doc.at("anticipation").get<int>();
    if (m > a) throw ParseError("memory must not exceed anticipation");
    const auto& entries = doc.at("table");
    if (!entries.is_object()) throw ParseError("\"table\" must be an object");
    const auto n = static_cast<std::size_t>(a - m + 1);
    const auto size = detail::checked_pow(alphabet.size(), n, kDefaultTableBudget, "rule table");
    std::vector<Symbol> table(size);
    std::vector<bool> seen(size, false);
    for (const auto& [key, value] : entries.items()) {
      Word nb = alphabet.parse(key);
      if (nb.size() != n) throw ParseError("neighborhood '" + key + "' has the wrong length");
      std::size_t idx = 0;
      for (Symbol s : nb) idx = idx * alphabet.size() + s;
      if (seen[idx]) throw ParseError("neighborhood '" + key + "' listed twice");
      seen[idx] = true;
      table[idx] = alphabet.index(value.get<std::string>());
    }
    for (std::size_t idx = 0; idx < size; ++idx)
      if (!seen[idx]) throw ParseError("rule table is not total: " + std::to_string(size) + " entries expected");
    return LocalRule(std::move(alphabet), m, a, std::move(table));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed rule document: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

inline LocalRule rule_from_json_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return rule_from_json(doc);
}

struct ZooEntry {
  std::string name;
  std::string description;
  LocalRule rule;
  bool surjective;
  bool injective;
  /// Certified blocking word with s = max(radius, 1), if the rule has one.
  std::optional<std::string> blocking_word;
  /// Expected classify_kurka outcome, by name.
  std::string classification;
};

/// The rule of the {w, 0, r} example: F(x)_i = f(x_{i-1}, x_i).
inline LocalRule wall_signal_rule() {
  Alphabet abc({"w", "0", "r"});
  std::vector<Symbol> table(9);
  auto set = [&](const char* nb, const char* out) {
    Word w = abc.parse(nb);
    table[w[0] * 3 + w[1]] = abc.index(out);
  };
  set("wr", "r"); set("w0", "0"); set("ww", "w");
  set("rr", "0"); set("r0", "r"); set("rw", "w");
  set("0r", "0"); set("00", "0"); set("0w", "w");
  return LocalRule(std::move(abc), -1, 0, std::move(table));
}

/// Walls w are fixed; between walls, a cell next to a wall keeps its value and
/// every other cell adds its left neighbour mod 2. Surjective, has blocking
/// words, not eventually periodic.
inline LocalRule wall_xor_rule() {
  Alphabet abc({"w", "0", "1"});
  return LocalRule::from_function(abc, -1, 0, [](const Word& nb) -> Symbol {
    const Symbol left = nb[0], self = nb[1];
    if (self == 0 || left == 0) return self;
    return static_cast<Symbol>(1 + ((left - 1) ^ (self - 1)));
  });
}

inline const std::vector<ZooEntry>& zoo() {
  static const std::vector<ZooEntry> entries = [] {
    std::vector<ZooEntry> z;
    z.push_back({"paper3", "walls w, signals r bouncing off walls over {w,0,r}", wall_signal_rule(), false, false, "ww",
                 "AlmostEquicontinuousEvidence"});
    z.push_back({"identity", "binary identity", identity_rule(Alphabet::digits(2)), true, true, "00",
                 "EquicontinuousCertified"});
    z.push_back({"shift", "binary left shift, F(x)_i = x_{i+1}", shift_rule(Alphabet::digits(2)), true, true,
                 std::nullopt, "SensitiveEvidence"});
    z.push_back({"rot3", "cellwise x -> x+1 mod 3", rotation_rule(3), true, true, "00",
                 "EquicontinuousCertified"});
    z.push_back({"rule90", "elementary rule 90, XOR of the outer neighbours", eca_rule(90), true, false,
                 std::nullopt, "SensitiveEvidence"});
    z.push_back({"wallxor", "fixed walls w with XOR-of-left dynamics in between", wall_xor_rule(), true, false, "ww",
                 "AlmostEquicontinuousEvidence"});
    return z;
  }();
  return entries;
}

inline const ZooEntry& zoo_entry(std::string_view name) {
  for (const auto& e : zoo())
    if (e.name == name) return e;
  throw ParseError("unknown zoo rule '" + std::string(name) + "'");
}

namespace detail {

inline long long parse_int(std::string_view s, const char* what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(std::string("invalid ") + what + " '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

/// Name of a numbered rule as accepted by resolve_rule.
inline std::string numbered_rule_name(std::size_t k, int memory, int anticipation, std::uint64_t number) {
  if (k == 2 && memory == -1 && anticipation == 1) return "eca:" + std::to_string(number);
  return "tab:" + std::to_string(k) + ":" + std::to_string(memory) + ":" + std::to_string(anticipation) + ":" +
         std::to_string(number);
}

/// Resolves "eca:N", "tab:K:M:A:N", "zoo:NAME" or a path to a JSON rule file.
inline LocalRule resolve_rule(std::string_view source) {
  if (source.rfind("eca:", 0) == 0) {
    auto n = detail::parse_int(source.substr(4), "elementary rule number");
    if (n < 0 || n > 255) throw ParseError("elementary rule number must be in [0, 255]");
    return eca_rule(static_cast<unsigned>(n));
  }
  if (source.rfind("zoo:", 0) == 0) return zoo_entry(source.substr(4)).rule;
  if (source.rfind("tab:", 0) == 0) {
    auto parts = detail::split(source.substr(4), ':');
    if (parts.size() != 4) throw ParseError("expected tab:K:M:A:N");
    auto k = detail::parse_int(parts[0], "alphabet size");
    auto m = detail::parse_int(parts[1], "memory");
    auto a = detail::parse_int(parts[2], "anticipation");
    auto n = detail::parse_int(parts[3], "rule number");
    if (k < 2 || k > 36 || n < 0) throw ParseError("tab: alphabet size in [2, 36], rule number non-negative");
    try {
      return numbered_rule(static_cast<std::size_t>(k), static_cast<int>(m), static_cast<int>(a),
                           static_cast<std::uint64_t>(n));
    } catch (const Error& e) {
      throw ParseError(e.what());
    }
  }
  std::ifstream in{std::string(source)};
  if (!in) throw ParseError("cannot open rule file '" + std::string(source) + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return rule_from_json_text(buf.str());
}

}  // namespace cadyn
