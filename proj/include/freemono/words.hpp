// Free-group word arithmetic.
//
// A letter is a nonzero signed integer: +i denotes the generator x_i and -i
// its inverse. A Word is always freely reduced; every constructor reduces.

#ifndef FREEMONO_WORDS_HPP_
#define FREEMONO_WORDS_HPP_

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace freemono {

using Letter = std::int32_t;

inline constexpr Letter inverse(Letter a) noexcept { return -a; }
inline constexpr int index_of(Letter a) noexcept { return a < 0 ? -a : a; }
inline constexpr int sign_of(Letter a) noexcept { return a < 0 ? -1 : 1; }

// Position of a letter in the fixed order x1 < X1 < x2 < X2 < ...; used for
// every lexicographic comparison in the library.
inline constexpr int letter_rank(Letter a) noexcept {
  return 2 * (index_of(a) - 1) + (a < 0 ? 1 : 0);
}
inline constexpr Letter letter_from_rank(int r) noexcept {
  return (r % 2 == 0) ? (r / 2 + 1) : -(r / 2 + 1);
}

// Freely reduced word. The empty word is the identity.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters)
      : Word(std::span<const Letter>(letters.begin(), letters.size())) {}
  explicit Word(std::span<const Letter> raw) { append_reduced(raw); }
  explicit Word(const std::vector<Letter>& raw)
      : Word(std::span<const Letter>(raw)) {}

  static Word letter(Letter a) { return Word{a}; }

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const noexcept { return letters_[i]; }
  Letter front() const noexcept { return letters_.front(); }
  Letter back() const noexcept { return letters_.back(); }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }
  std::span<const Letter> letters() const noexcept { return letters_; }

  // Largest generator index occurring in the word (0 for the identity).
  int max_index() const noexcept {
    int m = 0;
    for (Letter a : letters_) m = std::max(m, index_of(a));
    return m;
  }

  // Appends raw letters, cancelling as it goes (single stack pass).
  Word& append_reduced(std::span<const Letter> raw) {
    for (Letter a : raw) {
      if (a == 0) throw std::invalid_argument("letter 0 is not a generator");
      if (!letters_.empty() && letters_.back() == -a) {
        letters_.pop_back();
      } else {
        letters_.push_back(a);
      }
    }
    return *this;
  }
  Word& operator*=(const Word& rhs) { return append_reduced(rhs.letters_); }

  Word subword(std::size_t pos, std::size_t len) const {
    Word w;
    w.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                      letters_.begin() + static_cast<std::ptrdiff_t>(pos + len));
    return w;
  }

  friend bool operator==(const Word&, const Word&) = default;

  // Short-lex order under letter_rank.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() <=> b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] != b[i]) return letter_rank(a[i]) <=> letter_rank(b[i]);
    }
    return std::strong_ordering::equal;
  }

 private:
  std::vector<Letter> letters_;
};

inline Word operator*(Word lhs, const Word& rhs) { return lhs *= rhs; }

inline Word reduce(std::span<const Letter> raw) { return Word(raw); }

inline Word invert(const Word& w) {
  std::vector<Letter> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[w.size() - 1 - i] = -w[i];
  return Word(out);
}

inline Word power(const Word& w, int k) {
  Word base = k < 0 ? invert(w) : w;
  Word out;
  for (int i = 0; i < std::abs(k); ++i) out *= base;
  return out;
}

// Replaces letter x_i of `tmpl` with images[i-1] (inverted for x_i^-1).
inline Word substitute(const Word& tmpl, std::span<const Word> images) {
  Word out;
  for (Letter a : tmpl) {
    auto i = static_cast<std::size_t>(index_of(a));
    if (i > images.size()) {
      throw std::out_of_range("substitute: template letter x" +
                              std::to_string(i) + " has no image");
    }
    const Word& img = images[i - 1];
    if (a > 0) {
      out.append_reduced(img.letters());
    } else {
      for (auto it = img.letters().rbegin(); it != img.letters().rend(); ++it) {
        Letter b = -*it;
        out.append_reduced(std::span<const Letter>(&b, 1));
      }
    }
  }
  return out;
}

using AbelianVector = std::vector<long>;

inline AbelianVector abelianize(std::span<const Letter> letters, int rank) {
  AbelianVector v(static_cast<std::size_t>(rank), 0);
  for (Letter a : letters) {
    auto i = static_cast<std::size_t>(index_of(a));
    if (i > v.size()) throw std::out_of_range("abelianize: letter beyond rank");
    v[i - 1] += sign_of(a);
  }
  return v;
}
inline AbelianVector abelianize(const Word& w, int rank) {
  return abelianize(w.letters(), rank);
}

struct CyclicReduction {
  Word core;
  Word conjugator;  // w == conjugator * core * conjugator^-1
};

inline CyclicReduction cyclic_reduce(const Word& w) {
  std::size_t i = 0;
  std::size_t j = w.size();
  while (j - i >= 2 && w[i] == -w[j - 1]) {
    ++i;
    --j;
  }
  return {w.subword(i, j - i), w.subword(0, i)};
}

inline bool is_cyclically_reduced(const Word& w) {
  return w.size() < 2 || w.front() != -w.back();
}

// Rotation by k of a cyclically reduced word: letters k..end then 0..k.
inline Word rotate(const Word& w, std::size_t k) {
  std::vector<Letter> out(w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
  out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
  return Word(out);
}

// Least rotation of a cyclically reduced word and the offset it starts at.
// Quadratic scan; the words handled here are short.
inline std::pair<Word, std::size_t> least_rotation(const Word& core) {
  const std::size_t n = core.size();
  std::size_t best = 0;
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t t = 0; t < n; ++t) {
      Letter a = core[(k + t) % n];
      Letter b = core[(best + t) % n];
      if (a != b) {
        if (letter_rank(a) < letter_rank(b)) best = k;
        break;
      }
    }
  }
  return {rotate(core, best), best};
}

// Canonical representative of the conjugacy class of w.
inline Word cyclic_normal_form(const Word& w) {
  return least_rotation(cyclic_reduce(w).core).first;
}

inline long gcd_of(const AbelianVector& v) {
  long g = 0;
  for (long x : v) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Letter a : w) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(a));
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Ambient free group F_n; carries the rank for validation and enumeration.
class FreeGroup {
 public:
  explicit FreeGroup(int rank) : rank_(rank) {
    if (rank < 1) throw std::invalid_argument("rank must be at least 1");
  }
  int rank() const noexcept { return rank_; }

  bool contains(const Word& w) const noexcept { return w.max_index() <= rank_; }
  void require(const Word& w) const {
    if (!contains(w)) {
      throw std::invalid_argument("word uses a generator beyond rank " +
                                  std::to_string(rank_));
    }
  }

  // Calls f(w) for every reduced word of length exactly `len`, in short-lex
  // order.
  template <typename F>
  void for_each_word_of_length(std::size_t len, F&& f) const {
    std::vector<Letter> buf(len);
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
      if (pos == len) {
        Word w;
        w.append_reduced(buf);
        f(w);
        return;
      }
      for (int r = 0; r < 2 * rank_; ++r) {
        Letter a = letter_from_rank(r);
        if (pos > 0 && buf[pos - 1] == -a) continue;
        buf[pos] = a;
        rec(pos + 1);
      }
    };
    rec(0);
  }

  // All reduced words of length <= max_len, short-lex order, identity first.
  std::vector<Word> words_up_to(std::size_t max_len) const {
    std::vector<Word> out;
    for (std::size_t len = 0; len <= max_len; ++len) {
      for_each_word_of_length(len, [&](const Word& w) { out.push_back(w); });
    }
    return out;
  }

 private:
  int rank_;
};

}  // namespace freemono

#endif  // FREEMONO_WORDS_HPP_
