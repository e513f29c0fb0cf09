// Monomorphism problem: is there an injective f: F_n -> F_n with f(u) = v
// (or f(u_j) = v_j for a tuple)?
//
// For each candidate subgroup H = <b_1..b_m> with v = w(b_1..b_m), ask the
// Whitehead search whether u(z_1..z_n) and w(z_1..z_m) lie in one
// Aut(F_n)-orbit. If an automorphism a does it, f(x_i) = a(z_i) evaluated at
// (b_1..b_m, c_1..c_{n-m}), where the c_j extend the b_i to n free
// generators.

#ifndef FREEMONO_DECIDER_HPP_
#define FREEMONO_DECIDER_HPP_

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "freemono/stallings.hpp"
#include "freemono/subgroup_search.hpp"
#include "freemono/text.hpp"
#include "freemono/whitehead.hpp"
#include "freemono/words.hpp"

namespace freemono {

enum class Strategy { kExhaustive, kTestSub };

inline const char* to_string(Strategy s) {
  return s == Strategy::kExhaustive ? "exhaustive" : "testsub";
}

struct Witness {
  std::vector<Word> images;  // f(x_1), ..., f(x_n)
};

struct Trace {
  std::string route;  // "empty-source", "empty-target", "rank-one", "search"
  std::size_t candidates = 0;
  std::size_t whitehead_calls = 0;
  std::optional<TestCandidate> accepted;
  std::optional<OrbitCertificate> certificate;
  std::vector<GraphCount> per_graph;
  double candidate_seconds = 0;
  double whitehead_seconds = 0;
};

struct Verdict {
  bool yes = false;
  std::optional<Witness> witness;
  Trace trace;
};

// True iff images define a monomorphism sending every us[j] to vs[j].
inline bool validate_witness(std::span<const Word> us, std::span<const Word> vs,
                             const Witness& w, int rank) {
  if (static_cast<int>(w.images.size()) != rank) return false;
  for (std::size_t j = 0; j < us.size(); ++j) {
    if (substitute(us[j], w.images) != vs[j]) return false;
  }
  return image_rank(w.images, rank) == rank;
}

// Greedy completion of a free basis of a rank-m subgroup to n free
// generators, scanning words in short-lex order.
inline std::vector<Word> extend_to_rank(std::span<const Word> basis, int rank) {
  std::vector<Word> cur(basis.begin(), basis.end());
  if (!is_free_basis(cur, rank)) throw std::invalid_argument("not a free basis");
  FreeGroup f(rank);
  for (std::size_t len = 1; static_cast<int>(cur.size()) < rank; ++len) {
    if (len > 64) throw std::logic_error("extension search did not terminate");
    f.for_each_word_of_length(len, [&](const Word& c) {
      if (static_cast<int>(cur.size()) == rank) return;
      cur.push_back(c);
      if (!is_free_basis(cur, rank)) cur.pop_back();
    });
  }
  return std::vector<Word>(cur.begin() + static_cast<std::ptrdiff_t>(basis.size()), cur.end());
}

// f(x_i) = a(z_i)(b_1..b_m, c_1..c_{n-m}).
inline Witness build_witness(std::span<const Word> basis, const OrbitCertificate& cert, int rank) {
  std::vector<Word> full(basis.begin(), basis.end());
  for (Word& c : extend_to_rank(basis, rank)) full.push_back(std::move(c));
  Witness w;
  for (const Word& img : cert.generator_images()) w.images.push_back(substitute(img, full));
  return w;
}

// First n-tuple of words of length <= bound (odometer over short-lex lists)
// that is a monomorphism sending us to vs.
inline std::optional<Witness> oracle(std::span<const Word> us, std::span<const Word> vs, int rank,
                                     std::size_t bound) {
  if (us.size() != vs.size()) throw std::invalid_argument("arity mismatch");
  auto words = FreeGroup(rank).words_up_to(bound);
  std::vector<std::size_t> idx(static_cast<std::size_t>(rank), 0);
  std::vector<Word> images(static_cast<std::size_t>(rank));
  for (;;) {
    for (std::size_t i = 0; i < idx.size(); ++i) images[i] = words[idx[i]];
    bool hit = true;
    for (std::size_t j = 0; j < us.size() && hit; ++j) hit = substitute(us[j], images) == vs[j];
    if (hit && image_rank(images, rank) == rank) return Witness{images};
    std::size_t k = idx.size();
    while (k > 0) {
      --k;
      if (++idx[k] < words.size()) break;
      idx[k] = 0;
      if (k == 0) return std::nullopt;
    }
  }
}

inline std::optional<Witness> oracle(const Word& u, const Word& v, int rank, std::size_t bound) {
  return oracle(std::span<const Word>(&u, 1), std::span<const Word>(&v, 1), rank, bound);
}

class Decider {
 public:
  explicit Decider(int rank) : rank_(rank), group_(rank) {}

  int rank() const noexcept { return rank_; }

  Verdict decide(const Word& u, const Word& v, Strategy s = Strategy::kTestSub) {
    return decide_multi(std::span<const Word>(&u, 1), std::span<const Word>(&v, 1), s);
  }

  Verdict decide_multi(std::span<const Word> us, std::span<const Word> vs,
                       Strategy s = Strategy::kTestSub) {
    Reduced r = prepare(us, vs);
    if (r.verdict) return *std::move(r.verdict);
    auto t0 = std::chrono::steady_clock::now();
    const CandidateSet& cands = candidates(r.vs, s);
    double gen = seconds_since(t0);
    Verdict out = search(r.us, r.vs, cands.candidates);
    out.trace.per_graph = cands.per_graph;
    out.trace.candidate_seconds = gen;
    if (out.witness) out.witness = lift(r, us, vs, *out.witness);
    return out;
  }

  // Same as decide_multi but with a caller-supplied candidate list for the
  // (nontrivial) targets.
  Verdict decide_with_candidates(std::span<const Word> us, std::span<const Word> vs,
                                 const std::vector<TestCandidate>& cands) {
    Reduced r = prepare(us, vs);
    if (r.verdict) return *std::move(r.verdict);
    Verdict out = search(r.us, r.vs, cands);
    if (out.witness) out.witness = lift(r, us, vs, *out.witness);
    return out;
  }

  // Candidates for nontrivial targets; cached per target tuple and strategy.
  const CandidateSet& candidates(std::span<const Word> vs, Strategy s) {
    std::vector<Word> key(vs.begin(), vs.end());
    auto& cache = s == Strategy::kExhaustive ? exhaustive_cache_ : testsub_cache_;
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    CandidateSet set;
    if (s == Strategy::kTestSub) {
      set = generate_candidates(vs, rank_);
    } else {
      std::size_t len = 0;
      for (const Word& v : vs) len = std::max(len, v.size());
      auto& idx = baseline_[len];
      if (!idx) idx = std::make_unique<BaselineIndex>(rank_, len);
      set = idx->candidates(vs);
    }
    return cache.emplace(std::move(key), std::move(set)).first->second;
  }

  void clear_caches() {
    testsub_cache_.clear();
    exhaustive_cache_.clear();
    orbits_.clear();
  }

 private:
  struct Reduced {
    std::optional<Verdict> verdict;
    std::vector<Word> us, vs;
  };

  static double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  static Verdict degenerate(bool yes, std::string route, std::optional<Witness> w = {}) {
    Verdict v;
    v.yes = yes;
    v.witness = std::move(w);
    v.trace.route = std::move(route);
    return v;
  }

  Witness identity() const {
    Witness w;
    for (int i = 1; i <= rank_; ++i) w.images.push_back(Word{i});
    return w;
  }

  // Drops coordinates with u_j = v_j = 1 and settles the trivial cases.
  Reduced prepare(std::span<const Word> us, std::span<const Word> vs) {
    if (us.size() != vs.size() || us.empty()) {
      throw std::invalid_argument("tuples must have equal, nonzero arity");
    }
    for (const Word& w : us) group_.require(w);
    for (const Word& w : vs) group_.require(w);
    Reduced r;
    for (std::size_t j = 0; j < us.size(); ++j) {
      if (us[j].empty() && !vs[j].empty()) {
        r.verdict = degenerate(false, "empty-source");
        return r;
      }
      if (!us[j].empty() && vs[j].empty()) {
        r.verdict = degenerate(false, "empty-target");
        return r;
      }
      if (!us[j].empty()) {
        r.us.push_back(us[j]);
        r.vs.push_back(vs[j]);
      }
    }
    if (r.us.empty()) {
      r.verdict = degenerate(true, "empty-source", identity());
      return r;
    }
    if (rank_ == 1) r.verdict = rank_one(r.us, r.vs);
    return r;
  }

  // x -> x^k with k != 0 and k * e(u_j) = e(v_j) for all j.
  static Verdict rank_one(std::span<const Word> us, std::span<const Word> vs) {
    long k = 0;
    for (std::size_t j = 0; j < us.size(); ++j) {
      long e = abelianize(us[j], 1)[0];
      long d = abelianize(vs[j], 1)[0];
      if (d % e != 0 || d / e == 0) return degenerate(false, "rank-one");
      if (k != 0 && k != d / e) return degenerate(false, "rank-one");
      k = d / e;
    }
    return degenerate(true, "rank-one", Witness{{power(Word{1}, static_cast<int>(k))}});
  }

  Whitehead::Orbit& orbit_of(const std::vector<Word>& us) {
    auto it = orbits_.find(us);
    if (it == orbits_.end()) {
      if (!whitehead_) whitehead_ = std::make_unique<Whitehead>(rank_);
      it = orbits_.emplace(us, std::make_unique<Whitehead::Orbit>(whitehead_->make_orbit(us)))
               .first;
    }
    return *it->second;
  }

  Verdict search(const std::vector<Word>& us, const std::vector<Word>& vs,
                 const std::vector<TestCandidate>& cands) {
    Verdict out;
    out.trace.route = "search";
    out.trace.candidates = cands.size();
    auto t0 = std::chrono::steady_clock::now();
    Whitehead::Orbit& orbit = orbit_of(us);
    for (const TestCandidate& c : cands) {
      if (c.m() > rank_) continue;
      ++out.trace.whitehead_calls;
      auto cert = whitehead_->certify(orbit, us, c.expressions);
      if (!cert) continue;
      Witness w = build_witness(c.basis, *cert, rank_);
      if (!validate_witness(us, vs, w, rank_)) {
        throw std::logic_error("constructed witness failed validation");
      }
      out.yes = true;
      out.witness = std::move(w);
      out.trace.accepted = c;
      out.trace.certificate = std::move(cert);
      break;
    }
    out.trace.whitehead_seconds = seconds_since(t0);
    return out;
  }

  // The witness for the reduced tuple also serves the full one.
  Witness lift(const Reduced&, std::span<const Word> us, std::span<const Word> vs, Witness w) const {
    if (!validate_witness(us, vs, w, rank_)) {
      throw std::logic_error("witness does not satisfy the full tuple");
    }
    return w;
  }

  int rank_;
  FreeGroup group_;
  std::unique_ptr<Whitehead> whitehead_;
  std::unordered_map<std::vector<Word>, std::unique_ptr<Whitehead::Orbit>, TupleHash> orbits_;
  std::unordered_map<std::vector<Word>, CandidateSet, TupleHash> testsub_cache_;
  std::unordered_map<std::vector<Word>, CandidateSet, TupleHash> exhaustive_cache_;
  std::map<std::size_t, std::unique_ptr<BaselineIndex>> baseline_;
};

inline Verdict decide(const Word& u, const Word& v, int rank,
                      Strategy s = Strategy::kTestSub) {
  return Decider(rank).decide(u, v, s);
}

inline Verdict decide_multi(std::span<const Word> us, std::span<const Word> vs, int rank,
                            Strategy s = Strategy::kTestSub) {
  return Decider(rank).decide_multi(us, vs, s);
}

}  // namespace freemono

#endif  // FREEMONO_DECIDER_HPP_
