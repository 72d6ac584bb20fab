#pragma once

#include <string>
#include <vector>

#include "cadyn/alphabet.hpp"
#include "cadyn/configuration.hpp"
#include "cadyn/error.hpp"

namespace cadyn {

/// One display character per symbol, in declared alphabet order.
inline std::string default_palette(const Alphabet& alphabet) {
  static const std::string kFallback = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
  std::string palette;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (alphabet.single_char()) {
      palette += alphabet.name(static_cast<Symbol>(i));
    } else {
      palette += i < kFallback.size() ? kFallback[i] : '?';
    }
  }
  return palette;
}

inline std::string render_ascii(const SpaceTimeBlock& block, const std::string& palette) {
  std::string out;
  out.reserve((block.width() + 1) * block.rows.size());
  for (const auto& row : block.rows) {
    for (Symbol s : row) {
      if (s >= palette.size()) throw PreconditionError("palette has no character for symbol " + std::to_string(s));
      out += palette[s];
    }
    out += '\n';
  }
  return out;
}

/// Gray level of symbol index k: floor(255 k / (#A - 1)).
inline unsigned char gray_level(std::size_t symbol, std::size_t alphabet_size) {
  return static_cast<unsigned char>(255 * symbol / (alphabet_size - 1));
}

/// Binary P5 image, one byte per cell, one row per time step.
inline std::string render_pgm(const SpaceTimeBlock& block, std::size_t alphabet_size) {
  std::string out = "P5\n" + std::to_string(block.width()) + " " + std::to_string(block.rows.size()) + "\n255\n";
  for (const auto& row : block.rows)
    for (Symbol s : row) out += static_cast<char>(gray_level(s, alphabet_size));
  return out;
}

}  // namespace cadyn
