// Whitehead automorphisms, peak-reduction minimization and orbit search.
//
// Type II convention, for multiplier a and cut set S (a in S, a^-1 not in S),
// applied to a letter x other than a^{+-1}:
//
//   x in S, x^-1 not in S   ->  x a
//   x not in S, x^-1 in S   ->  a^-1 x
//   x, x^-1 both in S       ->  a^-1 x a
//   neither                 ->  x
//
// and a -> a. Cut sets are bitmasks indexed by letter_rank.
//
// Orbit search works on tuples of cyclic words (the setting where peak
// reduction holds); exact equality for a single word is restored with a
// conjugator. Tuples of more than one word are searched as tuples of ordinary
// words, where every certificate is replayed before it is returned.

#ifndef FREEMONO_WHITEHEAD_HPP_
#define FREEMONO_WHITEHEAD_HPP_

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "freemono/text.hpp"
#include "freemono/words.hpp"

namespace freemono {

using CutSet = std::uint64_t;

inline constexpr CutSet letter_bit(Letter a) noexcept {
  return CutSet{1} << letter_rank(a);
}

class WhiteheadAut {
 public:
  enum class Kind : std::uint8_t { kPermutation = 1, kMultiplier = 2 };

  // Signed permutation: images[i] is the image of x_{i+1}.
  static WhiteheadAut permutation(std::vector<Letter> images) {
    WhiteheadAut w;
    w.kind_ = Kind::kPermutation;
    w.rank_ = static_cast<int>(images.size());
    std::vector<bool> hit(images.size() + 1, false);
    for (Letter a : images) {
      auto i = static_cast<std::size_t>(index_of(a));
      if (a == 0 || i > images.size() || hit[i]) {
        throw std::invalid_argument("not a signed permutation");
      }
      hit[i] = true;
    }
    w.perm_ = std::move(images);
    w.fill_images();
    return w;
  }

  static WhiteheadAut identity(int rank) {
    std::vector<Letter> id(static_cast<std::size_t>(rank));
    for (int i = 0; i < rank; ++i) id[static_cast<std::size_t>(i)] = i + 1;
    return permutation(std::move(id));
  }

  static WhiteheadAut multiplier(int rank, Letter a, CutSet cut) {
    if (a == 0 || index_of(a) > rank) throw std::invalid_argument("bad multiplier");
    if (!(cut & letter_bit(a)) || (cut & letter_bit(-a))) {
      throw std::invalid_argument("cut set must contain the multiplier but not its inverse");
    }
    if (cut >> (2 * rank)) throw std::invalid_argument("cut set beyond rank");
    WhiteheadAut w;
    w.kind_ = Kind::kMultiplier;
    w.rank_ = rank;
    w.mult_ = a;
    w.cut_ = cut;
    w.fill_images();
    return w;
  }

  Kind kind() const noexcept { return kind_; }
  int rank() const noexcept { return rank_; }
  Letter multiplier_letter() const noexcept { return mult_; }
  CutSet cut() const noexcept { return cut_; }

  // Image of a signed letter.
  const Word& image(Letter x) const noexcept {
    return images_[static_cast<std::size_t>(letter_rank(x))];
  }

  Word apply(const Word& w) const {
    Word out;
    for (Letter x : w) out *= image(x);
    return out;
  }

  bool is_identity() const noexcept {
    for (int r = 0; r < 2 * rank_; ++r) {
      const Word& img = images_[static_cast<std::size_t>(r)];
      if (img.size() != 1 || img[0] != letter_from_rank(r)) return false;
    }
    return true;
  }

  WhiteheadAut inverse() const {
    if (kind_ == Kind::kMultiplier) {
      return multiplier(rank_, -mult_, (cut_ & ~letter_bit(mult_)) | letter_bit(-mult_));
    }
    std::vector<Letter> inv(perm_.size());
    for (std::size_t i = 0; i < perm_.size(); ++i) {
      Letter img = perm_[i];
      inv[static_cast<std::size_t>(index_of(img) - 1)] =
          sign_of(img) * static_cast<Letter>(i + 1);
    }
    return permutation(std::move(inv));
  }

  // "typeI a->b b->A" or "typeII a=b S={b,a}".
  std::string to_string() const {
    std::ostringstream os;
    if (kind_ == Kind::kPermutation) {
      os << "typeI";
      for (std::size_t i = 0; i < perm_.size(); ++i) {
        os << ' ' << freemono::to_string(Word{static_cast<Letter>(i + 1)}) << "->"
           << freemono::to_string(Word{perm_[i]});
      }
    } else {
      os << "typeII a=" << freemono::to_string(Word{mult_}) << " S={"
         << freemono::to_string(Word{mult_});
      for (int r = 0; r < 2 * rank_; ++r) {
        Letter x = letter_from_rank(r);
        if (x != mult_ && (cut_ & letter_bit(x))) os << ',' << freemono::to_string(Word{x});
      }
      os << '}';
    }
    return os.str();
  }

  static WhiteheadAut parse(std::string_view line, int rank) {
    std::istringstream is{std::string(line)};
    std::string head;
    is >> head;
    if (head == "typeI") {
      std::vector<Letter> images(static_cast<std::size_t>(rank), 0);
      std::string tok;
      while (is >> tok) {
        auto arrow = tok.find("->");
        if (arrow == std::string::npos) throw ParseError("bad typeI token: " + tok);
        Word from = parse_word(tok.substr(0, arrow), rank);
        Word to = parse_word(tok.substr(arrow + 2), rank);
        if (from.size() != 1 || from[0] < 0 || to.size() != 1) {
          throw ParseError("bad typeI token: " + tok);
        }
        images[static_cast<std::size_t>(from[0] - 1)] = to[0];
      }
      return permutation(std::move(images));
    }
    if (head == "typeII") {
      std::string a_tok, s_tok;
      is >> a_tok >> s_tok;
      if (a_tok.rfind("a=", 0) != 0 || s_tok.rfind("S={", 0) != 0 || s_tok.back() != '}') {
        throw ParseError("bad typeII line: " + std::string(line));
      }
      Word a = parse_word(a_tok.substr(2), rank);
      if (a.size() != 1) throw ParseError("bad multiplier: " + a_tok);
      CutSet cut = 0;
      std::string body = s_tok.substr(3, s_tok.size() - 4);
      std::istringstream parts(body);
      std::string item;
      while (std::getline(parts, item, ',')) {
        Word x = parse_word(item, rank);
        if (x.size() != 1) throw ParseError("bad cut-set letter: " + item);
        cut |= letter_bit(x[0]);
      }
      return multiplier(rank, a[0], cut);
    }
    throw ParseError("unknown automorphism kind: " + head);
  }

  // Order used for tie-breaking: kind, then multiplier, then cut set.
  friend std::strong_ordering operator<=>(const WhiteheadAut& x, const WhiteheadAut& y) {
    if (auto c = x.kind_ <=> y.kind_; c != 0) return c;
    if (x.kind_ == Kind::kMultiplier) {
      if (auto c = letter_rank(x.mult_) <=> letter_rank(y.mult_); c != 0) return c;
      return x.cut_ <=> y.cut_;
    }
    return x.perm_ <=> y.perm_;
  }
  friend bool operator==(const WhiteheadAut& x, const WhiteheadAut& y) {
    return (x <=> y) == 0;
  }

 private:
  WhiteheadAut() = default;

  void fill_images() {
    images_.assign(static_cast<std::size_t>(2 * rank_), Word{});
    for (int r = 0; r < 2 * rank_; ++r) {
      Letter x = letter_from_rank(r);
      Word img;
      if (kind_ == Kind::kPermutation) {
        Letter y = perm_[static_cast<std::size_t>(index_of(x) - 1)];
        img = Word{x > 0 ? y : -y};
      } else if (index_of(x) == index_of(mult_)) {
        img = Word{x};
      } else {
        std::vector<Letter> raw;
        if (cut_ & letter_bit(-x)) raw.push_back(-mult_);
        raw.push_back(x);
        if (cut_ & letter_bit(x)) raw.push_back(mult_);
        img = Word(raw);
      }
      images_[static_cast<std::size_t>(r)] = std::move(img);
    }
  }

  Kind kind_ = Kind::kPermutation;
  int rank_ = 0;
  std::vector<Letter> perm_;
  Letter mult_ = 0;
  CutSet cut_ = 0;
  std::vector<Word> images_;
};

// Identity, the Type I generators (transpositions and single inversions) and
// every Type II automorphism, in that order; Type II sorted by (multiplier,
// cut set).
inline std::vector<WhiteheadAut> enumerate_whitehead(int rank) {
  if (rank < 1) throw std::invalid_argument("rank must be at least 1");
  std::vector<WhiteheadAut> out;
  out.push_back(WhiteheadAut::identity(rank));
  auto id = [&] {
    std::vector<Letter> p(static_cast<std::size_t>(rank));
    for (int i = 0; i < rank; ++i) p[static_cast<std::size_t>(i)] = i + 1;
    return p;
  };
  for (int i = 0; i < rank; ++i) {
    for (int j = i + 1; j < rank; ++j) {
      auto p = id();
      std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
      out.push_back(WhiteheadAut::permutation(std::move(p)));
    }
  }
  for (int i = 0; i < rank; ++i) {
    auto p = id();
    p[static_cast<std::size_t>(i)] = -(i + 1);
    out.push_back(WhiteheadAut::permutation(std::move(p)));
  }
  for (int r = 0; r < 2 * rank; ++r) {
    Letter a = letter_from_rank(r);
    std::vector<int> free_ranks;
    for (int s = 0; s < 2 * rank; ++s) {
      if (index_of(letter_from_rank(s)) != index_of(a)) free_ranks.push_back(s);
    }
    for (CutSet m = 0; m < (CutSet{1} << free_ranks.size()); ++m) {
      CutSet cut = letter_bit(a);
      for (std::size_t b = 0; b < free_ranks.size(); ++b) {
        if (m & (CutSet{1} << b)) cut |= CutSet{1} << free_ranks[b];
      }
      out.push_back(WhiteheadAut::multiplier(rank, a, cut));
    }
  }
  std::stable_sort(out.begin() + 1, out.end());
  return out;
}

// Composition sequence (applied left to right) followed by conjugation:
// image(w) = conjugator * steps(w) * conjugator^-1.
struct OrbitCertificate {
  int rank = 1;
  std::vector<WhiteheadAut> steps;
  Word conjugator;

  Word apply(const Word& w) const {
    Word out = w;
    for (const WhiteheadAut& s : steps) out = s.apply(out);
    return conjugator * out * invert(conjugator);
  }

  // Images of x_1..x_n under the whole automorphism.
  std::vector<Word> generator_images() const {
    std::vector<Word> out;
    for (int i = 1; i <= rank; ++i) out.push_back(apply(Word{i}));
    return out;
  }

  std::string serialize() const {
    std::string out;
    for (const WhiteheadAut& s : steps) out += s.to_string() + "\n";
    out += "conj " + to_string(conjugator) + "\n";
    return out;
  }

  static OrbitCertificate parse(std::string_view text, int rank) {
    OrbitCertificate c;
    c.rank = rank;
    std::istringstream is{std::string(text)};
    std::string line;
    bool have_conj = false;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      if (line.rfind("conj ", 0) == 0) {
        c.conjugator = parse_word(line.substr(5), rank);
        have_conj = true;
      } else {
        c.steps.push_back(WhiteheadAut::parse(line, rank));
      }
    }
    if (!have_conj) throw ParseError("certificate lacks a conj line");
    return c;
  }
};

inline std::size_t cyclic_length(const Word& w) { return cyclic_reduce(w).core.size(); }

// gcd of the exponent sums; constant on Aut(F_n)-orbits.
inline long orbit_gcd_invariant(const Word& w, int rank) {
  return gcd_of(abelianize(w, rank));
}

struct Minimized {
  std::vector<Word> words;
  std::vector<WhiteheadAut> steps;
};

enum class OrbitMode {
  kCyclic,  // tuples of conjugacy classes
  kExact,   // tuples of elements
};

struct TupleHash {
  std::size_t operator()(const std::vector<Word>& t) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    WordHash wh;
    for (const Word& w : t) h = (h ^ wh(w)) * 1099511628211ull + 0x7f4a7c15;
    return h;
  }
};

class Whitehead {
 public:
  explicit Whitehead(int rank) : rank_(rank), all_(enumerate_whitehead(rank)) {
    for (const WhiteheadAut& a : all_) {
      if (a.is_identity()) continue;
      moves_.push_back(a);
      if (a.kind() == WhiteheadAut::Kind::kMultiplier) shortening_.push_back(a);
    }
  }

  int rank() const noexcept { return rank_; }
  const std::vector<WhiteheadAut>& automorphisms() const noexcept { return all_; }

  // Canonical representative of a tuple: least rotations in cyclic mode,
  // the words themselves in exact mode.
  static std::vector<Word> canonical(std::span<const Word> ws, OrbitMode mode) {
    std::vector<Word> out;
    out.reserve(ws.size());
    for (const Word& w : ws) {
      out.push_back(mode == OrbitMode::kCyclic ? cyclic_normal_form(w) : w);
    }
    return out;
  }

  static std::size_t total_length(std::span<const Word> ws, OrbitMode mode) {
    std::size_t n = 0;
    for (const Word& w : ws) n += mode == OrbitMode::kCyclic ? cyclic_length(w) : w.size();
    return n;
  }

  std::vector<Word> apply(const WhiteheadAut& a, std::span<const Word> ws,
                          OrbitMode mode) const {
    std::vector<Word> out;
    out.reserve(ws.size());
    for (const Word& w : ws) {
      Word img = a.apply(w);
      out.push_back(mode == OrbitMode::kCyclic ? cyclic_reduce(img).core : std::move(img));
    }
    return out;
  }

  // Greedy descent: apply the least Type II automorphism that strictly
  // shortens the tuple until none does.
  Minimized minimize(std::span<const Word> ws, OrbitMode mode = OrbitMode::kCyclic) const {
    Minimized m;
    for (const Word& w : ws) {
      require_rank(w);
      m.words.push_back(mode == OrbitMode::kCyclic ? cyclic_reduce(w).core : w);
    }
    std::size_t len = total_length(m.words, mode);
    bool improved = true;
    while (improved) {
      improved = false;
      for (const WhiteheadAut& a : shortening_) {
        auto next = apply(a, m.words, mode);
        std::size_t next_len = total_length(next, mode);
        if (next_len < len) {
          m.words = std::move(next);
          m.steps.push_back(a);
          len = next_len;
          improved = true;
          break;
        }
      }
    }
    return m;
  }

  // Breadth-first exploration of the minimal level of an orbit, expanded on
  // demand. Nodes are canonical tuples.
  class Orbit {
   public:
    Orbit(const Whitehead& wh, std::span<const Word> ws, OrbitMode mode)
        : wh_(&wh), mode_(mode), source_(ws.begin(), ws.end()) {
      Minimized m = wh.minimize(ws, mode);
      to_min_ = std::move(m.steps);
      min_length_ = total_length(m.words, mode);
      add(canonical(m.words, mode), -1, -1);
    }

    std::size_t minimal_length() const noexcept { return min_length_; }
    OrbitMode mode() const noexcept { return mode_; }
    std::size_t explored() const noexcept { return nodes_.size(); }
    const std::vector<WhiteheadAut>& to_minimal() const noexcept { return to_min_; }

    // Path of moves from the minimized source to the canonical tuple, if the
    // tuple lies on the minimal level of this orbit.
    std::optional<std::vector<WhiteheadAut>> path_to(const std::vector<Word>& target,
                                                     std::size_t max_nodes) {
      for (;;) {
        if (auto it = index_.find(target); it != index_.end()) return path(it->second);
        if (head_ >= nodes_.size() || nodes_.size() >= max_nodes) return std::nullopt;
        expand(head_++);
      }
    }

    bool exhausted() const noexcept { return head_ >= nodes_.size(); }

   private:
    struct Node {
      std::vector<Word> tuple;
      int parent;
      int move;
    };

    void add(std::vector<Word> t, int parent, int move) {
      auto [it, inserted] = index_.try_emplace(t, static_cast<int>(nodes_.size()));
      if (inserted) nodes_.push_back({std::move(t), parent, move});
    }

    void expand(std::size_t i) {
      const auto& moves = wh_->moves_;
      for (std::size_t k = 0; k < moves.size(); ++k) {
        auto next = wh_->apply(moves[k], nodes_[i].tuple, mode_);
        if (total_length(next, mode_) != min_length_) continue;
        add(canonical(next, mode_), static_cast<int>(i), static_cast<int>(k));
      }
    }

    std::vector<WhiteheadAut> path(int node) const {
      std::vector<WhiteheadAut> out;
      while (nodes_[static_cast<std::size_t>(node)].parent >= 0) {
        out.push_back(wh_->moves_[static_cast<std::size_t>(nodes_[static_cast<std::size_t>(node)].move)]);
        node = nodes_[static_cast<std::size_t>(node)].parent;
      }
      std::reverse(out.begin(), out.end());
      return out;
    }

    const Whitehead* wh_;
    OrbitMode mode_;
    std::vector<Word> source_;
    std::vector<WhiteheadAut> to_min_;
    std::size_t min_length_ = 0;
    std::vector<Node> nodes_;
    std::unordered_map<std::vector<Word>, int, TupleHash> index_;
    std::size_t head_ = 0;
  };

  static constexpr std::size_t kDefaultNodeLimit = 5'000'000;

  // Certificate for an automorphism sending us[i] to vs[i] exactly for all i,
  // or nullopt. Single words use the cyclic search plus a conjugator; longer
  // tuples use the exact-word search.
  std::optional<OrbitCertificate> equivalent(std::span<const Word> us,
                                             std::span<const Word> vs) const {
    Orbit orbit = make_orbit(us);
    return certify(orbit, us, vs);
  }

  Orbit make_orbit(std::span<const Word> us) const {
    for (const Word& w : us) require_rank(w);
    std::vector<Word> u = nontrivial(us);
    return Orbit(*this, u, u.size() <= 1 ? OrbitMode::kCyclic : OrbitMode::kExact);
  }

  // Uses a prepared orbit of `us` (see make_orbit); reusable across targets.
  std::optional<OrbitCertificate> certify(Orbit& orbit, std::span<const Word> us,
                                          std::span<const Word> vs,
                                          std::size_t max_nodes = kDefaultNodeLimit) const {
    if (us.size() != vs.size() || us.empty()) {
      throw std::invalid_argument("tuples must have equal, nonzero arity");
    }
    for (const Word& w : vs) require_rank(w);
    for (std::size_t i = 0; i < us.size(); ++i) {
      if (us[i].empty() != vs[i].empty()) return std::nullopt;
    }
    OrbitCertificate cert;
    cert.rank = rank_;
    std::vector<Word> u = nontrivial(us);
    std::vector<Word> v = nontrivial(vs);
    if (u.empty()) return cert;
    if (u.size() == 1 && orbit_gcd_invariant(u[0], rank_) != orbit_gcd_invariant(v[0], rank_)) {
      return std::nullopt;
    }
    const OrbitMode mode = u.size() == 1 ? OrbitMode::kCyclic : OrbitMode::kExact;
    if (orbit.mode() != mode) throw std::invalid_argument("orbit prepared for another tuple");
    Minimized mv = minimize(v, mode);
    if (total_length(mv.words, mode) != orbit.minimal_length()) return std::nullopt;
    auto middle = orbit.path_to(canonical(mv.words, mode), max_nodes);
    if (!middle) return std::nullopt;

    cert.steps = orbit.to_minimal();
    cert.steps.insert(cert.steps.end(), middle->begin(), middle->end());
    for (auto it = mv.steps.rbegin(); it != mv.steps.rend(); ++it) {
      cert.steps.push_back(it->inverse());
    }
    if (mode == OrbitMode::kCyclic) {
      auto c = conjugator_between(cert.apply(u[0]), v[0]);
      if (!c) return std::nullopt;
      cert.conjugator = std::move(*c);
    }
    for (std::size_t i = 0; i < us.size(); ++i) {
      if (cert.apply(us[i]) != vs[i]) return std::nullopt;
    }
    return cert;
  }

  // c with c * from * c^-1 == to, when the two are conjugate.
  static std::optional<Word> conjugator_between(const Word& from, const Word& to) {
    auto [core1, p] = cyclic_reduce(from);
    auto [core2, q] = cyclic_reduce(to);
    if (core1.size() != core2.size()) return std::nullopt;
    for (std::size_t k = 0; k < std::max<std::size_t>(core1.size(), 1); ++k) {
      if (rotate(core1, k % std::max<std::size_t>(core1.size(), 1)) != core2) continue;
      Word x = core1.subword(0, k);
      return q * invert(x) * invert(p);
    }
    return std::nullopt;
  }

 private:
  void require_rank(const Word& w) const {
    if (w.max_index() > rank_) {
      throw std::invalid_argument("word uses a generator beyond rank " + std::to_string(rank_));
    }
  }

  static std::vector<Word> nontrivial(std::span<const Word> ws) {
    std::vector<Word> out;
    for (const Word& w : ws) {
      if (!w.empty()) out.push_back(w);
    }
    return out;
  }

  int rank_;
  std::vector<WhiteheadAut> all_;
  std::vector<WhiteheadAut> moves_;
  std::vector<WhiteheadAut> shortening_;
};

inline Minimized minimize(std::span<const Word> ws, int rank) {
  return Whitehead(rank).minimize(ws);
}

inline std::optional<OrbitCertificate> equivalent(std::span<const Word> us,
                                                  std::span<const Word> vs, int rank) {
  return Whitehead(rank).equivalent(us, vs);
}

}  // namespace freemono

#endif  // FREEMONO_WHITEHEAD_HPP_
