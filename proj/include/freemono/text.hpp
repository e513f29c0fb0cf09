// Letter syntax for words: a, b, c, ... are x1, x2, x3, ...; uppercase is the
// inverse; "1" or "" is the identity.

#ifndef FREEMONO_TEXT_HPP_
#define FREEMONO_TEXT_HPP_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "freemono/words.hpp"

namespace freemono {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxTextRank = 26;

inline Word parse_word(std::string_view text, int rank) {
  if (text.empty() || text == "1") return {};
  std::vector<Letter> raw;
  raw.reserve(text.size());
  for (char c : text) {
    int index = 0;
    Letter sign = 1;
    if (c >= 'a' && c <= 'z') {
      index = c - 'a' + 1;
    } else if (c >= 'A' && c <= 'Z') {
      index = c - 'A' + 1;
      sign = -1;
    } else {
      throw ParseError(std::string("unknown character '") + c + "' in word \"" +
                       std::string(text) + "\"");
    }
    if (index > rank) {
      throw ParseError(std::string("letter '") + c + "' is beyond rank " +
                       std::to_string(rank));
    }
    raw.push_back(sign * index);
  }
  return Word(raw);
}

inline std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  out.reserve(w.size());
  for (Letter a : w) {
    if (index_of(a) > kMaxTextRank) {
      throw std::out_of_range("generator index too large for letter syntax");
    }
    char base = a > 0 ? 'a' : 'A';
    out.push_back(static_cast<char>(base + index_of(a) - 1));
  }
  return out;
}

inline std::string join_words(std::span<const Word> ws, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (i) out += sep;
    out += to_string(ws[i]);
  }
  return out;
}

}  // namespace freemono

#endif  // FREEMONO_TEXT_HPP_
