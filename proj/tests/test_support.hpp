#ifndef FREEMONO_TESTS_TEST_SUPPORT_HPP_
#define FREEMONO_TESTS_TEST_SUPPORT_HPP_

#include <cstddef>
#include <random>
#include <vector>

#include "freemono/text.hpp"
#include "freemono/words.hpp"

namespace freemono::testing {

inline Word W(const char* text, int rank = 26) { return parse_word(text, rank); }

inline std::vector<Letter> random_letters(std::mt19937_64& rng, int rank,
                                          std::size_t len) {
  std::uniform_int_distribution<int> pick(1, rank);
  std::bernoulli_distribution neg(0.5);
  std::vector<Letter> raw(len);
  for (auto& a : raw) a = pick(rng) * (neg(rng) ? -1 : 1);
  return raw;
}

// Uniformly chosen reduced word of exactly `len` letters.
inline Word random_reduced(std::mt19937_64& rng, int rank, std::size_t len) {
  std::vector<Letter> raw;
  std::uniform_int_distribution<int> pick(0, 2 * rank - 1);
  while (raw.size() < len) {
    Letter a = letter_from_rank(pick(rng));
    if (!raw.empty() && raw.back() == -a) continue;
    raw.push_back(a);
  }
  return Word(raw);
}

}  // namespace freemono::testing

#endif  // FREEMONO_TESTS_TEST_SUPPORT_HPP_
