// Candidate subgroups H = <b_1..b_m> containing v, with |b_i| <= |v| and v
// written over the basis using every b_i.
//
// generate_candidates reads v as a loop through labelled topological graphs:
// arcs met during the reading take the next piece of v as their label, arcs
// never met are filled with words of length 1..3. baseline_candidates is the
// direct search over all generating sets of short words.

#ifndef FREEMONO_SUBGROUP_SEARCH_HPP_
#define FREEMONO_SUBGROUP_SEARCH_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "freemono/stallings.hpp"
#include "freemono/text.hpp"
#include "freemono/topograph.hpp"
#include "freemono/words.hpp"

namespace freemono {

// Label per arc, read from arc.source to arc.target. Empty means blank.
struct ArcLabeling {
  TopoGraph graph;
  std::vector<Word> labels;
  std::vector<bool> visible;

  int invisible_count() const {
    return static_cast<int>(std::count(visible.begin(), visible.end(), false));
  }
};

// One step of a reading: arc index and direction (+1 along, -1 against).
struct ArcStep {
  int arc;
  int dir;
};

struct TestCandidate {
  std::vector<Word> basis;
  std::vector<Word> expressions;  // one per target word, over rank m
  GraphKey key;
  bool uses_every_generator = true;

  int m() const noexcept { return static_cast<int>(basis.size()); }
  const Word& expression() const { return expressions.front(); }
  std::size_t total_length() const {
    std::size_t n = 0;
    for (const Word& b : basis) n += b.size();
    return n;
  }

  friend bool operator<(const TestCandidate& x, const TestCandidate& y) {
    if (x.m() != y.m()) return x.m() < y.m();
    if (x.total_length() != y.total_length()) return x.total_length() < y.total_length();
    if (x.basis != y.basis) return x.basis < y.basis;
    if (x.expressions != y.expressions) return x.expressions < y.expressions;
    return x.key < y.key;
  }
};

// Replaces each basis element by the lesser of it and its inverse, sorts the
// basis, and rewrites the expressions to match.
inline void normalize(TestCandidate& c) {
  const std::size_t m = c.basis.size();
  std::vector<int> sign(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    Word inv = invert(c.basis[i]);
    if (inv < c.basis[i]) {
      c.basis[i] = std::move(inv);
      sign[i] = -1;
    }
  }
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return c.basis[x] < c.basis[y]; });
  std::vector<Letter> new_index(m);
  std::vector<Word> sorted(m);
  for (std::size_t k = 0; k < m; ++k) {
    sorted[k] = c.basis[order[k]];
    new_index[order[k]] = static_cast<Letter>(k + 1);
  }
  c.basis = std::move(sorted);
  for (Word& w : c.expressions) {
    std::vector<Letter> raw;
    for (Letter a : w) {
      auto i = static_cast<std::size_t>(index_of(a) - 1);
      raw.push_back(sign_of(a) * sign[i] * new_index[i]);
    }
    w = Word(raw);
  }
}

inline std::string to_string(const TestCandidate& c) {
  std::string out = "basis=[" + join_words(c.basis, ",") + "] w=";
  for (std::size_t j = 0; j < c.expressions.size(); ++j) {
    if (j) out += ';';
    out += to_string(c.expressions[j]);
  }
  return out;
}

struct GraphCount {
  int g = 0;
  int graph = 0;            // index in enumerate_topographs(g)
  std::size_t readings = 0; // labellings in which every target reads as a loop
  std::size_t candidates = 0;
};

struct CandidateSet {
  std::vector<TestCandidate> candidates;
  std::vector<GraphCount> per_graph;
  std::size_t labelings = 0;
  std::size_t distinct_subgroups = 0;
};

struct SearchOptions {
  std::optional<std::uint64_t> shuffle_seed;  // permute enumeration orders
  std::size_t max_fill_length = 3;
};

// Distinct subwords of v, empty word first, then short-lex.
inline std::vector<Word> distinct_subwords(const Word& v) {
  std::vector<Word> out{Word{}};
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t len = 1; i + len <= v.size(); ++len) out.push_back(v.subword(i, len));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Calls f on every k-tuple of (possibly empty) subwords of v, subwords with
// equal content counted once per position.
inline void for_each_subword_morphism(const Word& v, int k,
                                      const std::function<void(const std::vector<Word>&)>& f) {
  if (v.empty() || k < 1) throw std::invalid_argument("need nonempty v and k >= 1");
  auto subs = distinct_subwords(v);
  std::vector<Word> cur(static_cast<std::size_t>(k));
  auto rec = [&](auto&& self, std::size_t pos) -> void {
    if (pos == cur.size()) {
      f(cur);
      return;
    }
    for (const Word& s : subs) {
      cur[pos] = s;
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
}

inline std::vector<std::vector<Word>> subword_morphisms(const Word& v, int k) {
  std::vector<std::vector<Word>> out;
  for_each_subword_morphism(v, k, [&](const std::vector<Word>& t) { out.push_back(t); });
  return out;
}

namespace search_detail {

inline std::uint64_t bit(Letter a) { return std::uint64_t{1} << letter_rank(a); }

// Letters leaving each vertex of a labelled graph; nullopt on a clash.
inline std::optional<std::vector<std::uint64_t>> outgoing(const TopoGraph& g,
                                                          std::span<const Word> labels) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(g.vertex_count()), 0);
  for (int i = 0; i < g.arc_count(); ++i) {
    const Word& l = labels[static_cast<std::size_t>(i)];
    if (l.empty()) continue;
    const Arc& a = g.arc(i);
    for (auto [v, x] : {std::pair{a.source, l.front()}, std::pair{a.target, -l.back()}}) {
      auto& m = out[static_cast<std::size_t>(v)];
      if (m & bit(x)) return std::nullopt;
      m |= bit(x);
    }
  }
  return out;
}

inline Word oriented(const Word& label, int dir) { return dir > 0 ? label : invert(label); }

// Words spelled by tree paths from the basepoint.
inline std::vector<Word> tree_paths(const TopoGraph& g, std::span<const int> tree,
                                    std::span<const Word> labels) {
  std::vector<Word> path(static_cast<std::size_t>(g.vertex_count()));
  std::vector<bool> seen(path.size(), false);
  seen[0] = true;
  for (bool grew = true; grew;) {
    grew = false;
    for (int i : tree) {
      const Arc& a = g.arc(i);
      const Word& l = labels[static_cast<std::size_t>(i)];
      auto s = static_cast<std::size_t>(a.source), t = static_cast<std::size_t>(a.target);
      if (seen[s] && !seen[t]) {
        path[t] = path[s] * l;
        seen[t] = grew = true;
      } else if (seen[t] && !seen[s]) {
        path[s] = path[t] * invert(l);
        seen[s] = grew = true;
      }
    }
  }
  return path;
}

struct TreeBasis {
  std::vector<Word> basis;
  std::vector<int> generator_of_arc;  // -1 for tree arcs
};

inline TreeBasis tree_basis(const TopoGraph& g, std::span<const int> tree,
                            std::span<const Word> labels) {
  auto path = tree_paths(g, tree, labels);
  TreeBasis tb;
  tb.generator_of_arc.assign(static_cast<std::size_t>(g.arc_count()), -1);
  std::vector<bool> in_tree(static_cast<std::size_t>(g.arc_count()), false);
  for (int i : tree) in_tree[static_cast<std::size_t>(i)] = true;
  for (int i = 0; i < g.arc_count(); ++i) {
    if (in_tree[static_cast<std::size_t>(i)]) continue;
    const Arc& a = g.arc(i);
    tb.generator_of_arc[static_cast<std::size_t>(i)] = static_cast<int>(tb.basis.size());
    tb.basis.push_back(path[static_cast<std::size_t>(a.source)] *
                       labels[static_cast<std::size_t>(i)] *
                       invert(path[static_cast<std::size_t>(a.target)]));
  }
  return tb;
}

inline Word expression_of(std::span<const ArcStep> steps, const TreeBasis& tb) {
  Word w;
  for (const ArcStep& s : steps) {
    int gen = tb.generator_of_arc[static_cast<std::size_t>(s.arc)];
    if (gen >= 0) w *= Word{s.dir * (gen + 1)};
  }
  return w;
}

inline bool uses_all(std::span<const Word> exprs, int m) {
  std::vector<bool> hit(static_cast<std::size_t>(m), false);
  for (const Word& w : exprs) {
    for (Letter a : w) hit[static_cast<std::size_t>(index_of(a) - 1)] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

// Reduced closed paths at the basepoint of length <= max_len, one of each
// inverse pair, short-lex.
inline std::vector<Word> short_loops(const CoreGraph& h, std::size_t max_len) {
  std::vector<Word> out;
  std::vector<Letter> buf;
  const int n = h.ambient_rank();
  auto rec = [&](auto&& self, int x) -> void {
    if (!buf.empty() && x == 0) {
      Word w(buf);
      if (w <= invert(w)) out.push_back(w);
    }
    if (buf.size() == max_len) return;
    for (int r = 0; r < 2 * n; ++r) {
      Letter a = letter_from_rank(r);
      if (!buf.empty() && buf.back() == -a) continue;
      int y = h.next(x, a);
      if (y == CoreGraph::kNone) continue;
      buf.push_back(a);
      self(self, y);
      buf.pop_back();
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

inline long det(std::vector<std::vector<long>> a) {
  const std::size_t k = a.size();
  if (k == 0) return 1;
  if (k == 1) return a[0][0];
  long d = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<std::vector<long>> minor;
    for (std::size_t r = 1; r < k; ++r) {
      std::vector<long> row;
      for (std::size_t j = 0; j < k; ++j) {
        if (j != c) row.push_back(a[r][j]);
      }
      minor.push_back(std::move(row));
    }
    long t = a[0][c] * det(std::move(minor));
    d += c % 2 ? -t : t;
  }
  return d;
}

// gcd of the maximal minors is 1 iff the rows extend to a basis of Z^m.
inline bool extends_to_unimodular(const std::vector<std::vector<long>>& rows, std::size_t m) {
  const std::size_t k = rows.size();
  long g = 0;
  std::vector<std::size_t> cols;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (g == 1) return;
    if (cols.size() == k) {
      std::vector<std::vector<long>> sq;
      for (const auto& r : rows) {
        std::vector<long> row;
        for (std::size_t c : cols) row.push_back(r[c]);
        sq.push_back(std::move(row));
      }
      g = std::gcd(g, std::abs(det(std::move(sq))));
      return;
    }
    for (std::size_t c = from; c < m; ++c) {
      cols.push_back(c);
      self(self, c + 1);
      cols.pop_back();
    }
  };
  rec(rec, 0);
  return g == 1;
}

// Some basis of h made of loops of length <= max_len over which every target
// is written using all basis elements; the first in lexicographic order of
// index sets.
inline std::optional<TestCandidate> short_basis_search(const CoreGraph& h,
                                                       std::span<const Word> vs,
                                                       std::size_t max_len) {
  const int m = h.rank();
  auto loops = short_loops(h, max_len);
  if (loops.size() < static_cast<std::size_t>(m)) return std::nullopt;
  // No short basis unless the short loops already generate h.
  if (build_core_graph(loops, h.ambient_rank()).key() != h.key()) return std::nullopt;
  // Homology classes in H_1(h) = Z^m; a basis has to be unimodular there.
  std::vector<std::vector<long>> homology;
  for (const Word& l : loops) {
    auto e = abelianize(*h.member(l), m);
    homology.emplace_back(e.begin(), e.end());
  }
  std::vector<std::size_t> chosen;
  std::vector<std::vector<long>> rows;
  std::optional<TestCandidate> found;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (found) return;
    if (static_cast<int>(chosen.size()) == m) {
      std::vector<Word> basis;
      for (std::size_t i : chosen) basis.push_back(loops[i]);
      CoreGraph sub = build_core_graph(basis, h.ambient_rank());
      if (sub.key() != h.key() || sub.edge_count() != h.edge_count()) return;
      TestCandidate c;
      c.basis = std::move(basis);
      c.key = h.key();
      for (const Word& v : vs) c.expressions.push_back(*sub.member(v));
      if (!uses_all(c.expressions, m)) return;
      normalize(c);
      found = std::move(c);
      return;
    }
    for (std::size_t i = from; i < loops.size() && !found; ++i) {
      chosen.push_back(i);
      rows.push_back(homology[i]);
      if (extends_to_unimodular(rows, static_cast<std::size_t>(m))) self(self, i + 1);
      rows.pop_back();
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  return found;
}

// Candidate for a fully labelled graph whose core graph is h: the best
// spanning-tree basis, else any short basis.
inline std::optional<TestCandidate> candidate_for(
    const TopoGraph& g, const std::vector<std::vector<int>>& trees,
    std::span<const Word> labels, const std::vector<bool>& visible,
    const std::vector<std::vector<ArcStep>>& readings, std::span<const Word> vs,
    const CoreGraph& h, std::size_t max_len) {
  std::optional<TestCandidate> best;
  for (const auto& tree : trees) {
    std::vector<bool> in_tree(static_cast<std::size_t>(g.arc_count()), false);
    for (int i : tree) in_tree[static_cast<std::size_t>(i)] = true;
    bool ok = true;
    for (int i = 0; i < g.arc_count() && ok; ++i) {
      if (!in_tree[static_cast<std::size_t>(i)] && !visible[static_cast<std::size_t>(i)]) ok = false;
    }
    if (!ok) continue;
    TreeBasis tb = tree_basis(g, tree, labels);
    if (std::any_of(tb.basis.begin(), tb.basis.end(),
                    [&](const Word& b) { return b.size() > max_len; })) {
      continue;
    }
    TestCandidate c;
    c.basis = tb.basis;
    c.key = h.key();
    for (std::size_t j = 0; j < vs.size(); ++j) {
      c.expressions.push_back(expression_of(readings[j], tb));
      if (substitute(c.expressions.back(), c.basis) != vs[j]) {
        throw std::logic_error("tree expression does not evaluate to the target");
      }
    }
    normalize(c);
    if (!best || c < *best) best = std::move(c);
  }
  if (best) return best;
  return short_basis_search(h, vs, max_len);
}

// Depth-first reading of the targets through one topological graph.
class Reader {
 public:
  Reader(const TopoGraph& g, int graph_index, const std::vector<std::vector<int>>& trees,
         std::span<const Word> vs, int rank, const std::vector<Word>& fills,
         std::mt19937_64* rng, std::unordered_set<GraphKey, GraphKeyHash>& seen,
         std::vector<TestCandidate>& out, GraphCount& count, std::size_t& labelings)
      : g_(g), trees_(trees), vs_(vs), rank_(rank), fills_(fills), rng_(rng), seen_(seen),
        out_(out), count_(count), labelings_(labelings) {
    (void)graph_index;
    labels_.assign(static_cast<std::size_t>(g.arc_count()), Word{});
    out_letters_.assign(static_cast<std::size_t>(g.vertex_count()), 0);
    readings_.resize(vs.size());
    for (const Word& v : vs) max_len_ = std::max(max_len_, v.size());
  }

  void run() { step(0, 0, 0); }

 private:
  struct End {
    int arc;
    int dir;
    int other;
  };

  bool labelled(int arc) const { return !labels_[static_cast<std::size_t>(arc)].empty(); }

  void set_label(int arc, Word l) {
    const Arc& a = g_.arc(arc);
    out_letters_[static_cast<std::size_t>(a.source)] |= bit(l.front());
    out_letters_[static_cast<std::size_t>(a.target)] |= bit(-l.back());
    labels_[static_cast<std::size_t>(arc)] = std::move(l);
  }

  void clear_label(int arc) {
    const Arc& a = g_.arc(arc);
    const Word& l = labels_[static_cast<std::size_t>(arc)];
    out_letters_[static_cast<std::size_t>(a.source)] &= ~bit(l.front());
    out_letters_[static_cast<std::size_t>(a.target)] &= ~bit(-l.back());
    labels_[static_cast<std::size_t>(arc)] = Word{};
  }

  // Unlabelled arc ends at p, one per class of interchangeable parallel arcs.
  std::vector<End> free_ends(int p) const {
    std::vector<End> ends;
    std::vector<std::pair<int, int>> classes;
    for (int i = 0; i < g_.arc_count(); ++i) {
      if (labelled(i)) continue;
      const Arc& a = g_.arc(i);
      if (a.source != p && a.target != p) continue;
      std::pair<int, int> cls{a.source, a.target};
      if (std::find(classes.begin(), classes.end(), cls) != classes.end()) continue;
      classes.push_back(cls);
      if (a.source == p) ends.push_back({i, +1, a.target});
      if (a.target == p && a.source != p) ends.push_back({i, -1, a.source});
    }
    if (rng_) std::shuffle(ends.begin(), ends.end(), *rng_);
    return ends;
  }

  void step(std::size_t j, std::size_t i, int p) {
    const Word& v = vs_[j];
    if (i == v.size()) {
      if (p != 0) return;
      if (j + 1 < vs_.size()) {
        step(j + 1, 0, 0);
      } else {
        fill();
      }
      return;
    }
    const Letter x = v[i];
    if (out_letters_[static_cast<std::size_t>(p)] & bit(x)) {
      // Forced: follow the labelled arc leaving p with x.
      for (int a = 0; a < g_.arc_count(); ++a) {
        if (!labelled(a)) continue;
        const Arc& arc = g_.arc(a);
        const Word& l = labels_[static_cast<std::size_t>(a)];
        for (int dir : {+1, -1}) {
          int from = dir > 0 ? arc.source : arc.target;
          if (from != p) continue;
          Letter first = dir > 0 ? l.front() : -l.back();
          if (first != x) continue;
          Word piece = oriented(l, dir);
          if (i + piece.size() > v.size() || v.subword(i, piece.size()) != piece) return;
          readings_[j].push_back({a, dir});
          step(j, i + piece.size(), dir > 0 ? arc.target : arc.source);
          readings_[j].pop_back();
          return;
        }
      }
      return;
    }
    for (const End& e : free_ends(p)) {
      for (std::size_t len = 1; i + len <= v.size(); ++len) {
        Word piece = v.subword(i, len);
        Letter arrive = -piece.back();
        std::uint64_t at_q = out_letters_[static_cast<std::size_t>(e.other)];
        if (e.other == p) at_q |= bit(x);
        if (at_q & bit(arrive)) continue;
        set_label(e.arc, oriented(piece, e.dir));
        readings_[j].push_back({e.arc, e.dir});
        step(j, i + len, e.other);
        readings_[j].pop_back();
        clear_label(e.arc);
      }
    }
  }

  void fill() {
    std::vector<int> blank;
    for (int a = 0; a < g_.arc_count(); ++a) {
      if (!labelled(a)) blank.push_back(a);
    }
    if (static_cast<int>(blank.size()) > 2 * g_.rank() - 1) return;
    std::vector<bool> visible(static_cast<std::size_t>(g_.arc_count()), true);
    for (int a : blank) visible[static_cast<std::size_t>(a)] = false;
    fill_from(blank, 0, visible);
  }

  void fill_from(const std::vector<int>& blank, std::size_t k, const std::vector<bool>& visible) {
    if (k == blank.size()) {
      emit(visible);
      return;
    }
    int a = blank[k];
    const Arc& arc = g_.arc(a);
    // Every edge of a core graph lies on the loop of some basis element, and
    // those are no longer than max_len_.
    auto d = distances_from_base();
    std::size_t reach = d[static_cast<std::size_t>(arc.source)] + d[static_cast<std::size_t>(arc.target)];
    if (reach >= max_len_) return;
    const std::size_t room = max_len_ - reach;
    for (const Word& w : fills_) {
      if (w.size() > room) continue;
      std::uint64_t at_s = out_letters_[static_cast<std::size_t>(arc.source)];
      if (at_s & bit(w.front())) continue;
      std::uint64_t at_t = out_letters_[static_cast<std::size_t>(arc.target)];
      if (arc.target == arc.source) at_t |= bit(w.front());
      if (at_t & bit(-w.back())) continue;
      set_label(a, w);
      fill_from(blank, k + 1, visible);
      clear_label(a);
    }
  }

  void emit(const std::vector<bool>& visible) {
    ++labelings_;
    ++count_.readings;
    auto d = distances_from_base();
    for (int i = 0; i < g_.arc_count(); ++i) {
      const Arc& a = g_.arc(i);
      if (d[static_cast<std::size_t>(a.source)] + labels_[static_cast<std::size_t>(i)].size() +
              d[static_cast<std::size_t>(a.target)] > max_len_) {
        return;
      }
    }
    const auto& tree0 = trees_.front();
    auto basis0 = tree_basis(g_, tree0, labels_).basis;
    CoreGraph h = build_core_graph(basis0, rank_);
    if (h.rank() != g_.rank() || h.edge_count() != total_label_length()) {
      throw std::logic_error("labelled graph is not folded");
    }
    if (!seen_.insert(h.key()).second) return;
    auto c = candidate_for(g_, trees_, labels_, visible, readings_, vs_, h, max_len_);
    if (!c) return;
    ++count_.candidates;
    out_.push_back(std::move(*c));
  }

  // Label-length distances from the basepoint; blank arcs count 1.
  std::vector<std::size_t> distances_from_base() const {
    const std::size_t inf = std::size_t{1} << 30;
    std::vector<std::size_t> d(static_cast<std::size_t>(g_.vertex_count()), inf);
    d[0] = 0;
    for (bool changed = true; changed;) {
      changed = false;
      for (int i = 0; i < g_.arc_count(); ++i) {
        const Arc& a = g_.arc(i);
        std::size_t w = std::max<std::size_t>(1, labels_[static_cast<std::size_t>(i)].size());
        auto& ds = d[static_cast<std::size_t>(a.source)];
        auto& dt = d[static_cast<std::size_t>(a.target)];
        if (ds + w < dt) dt = ds + w, changed = true;
        if (dt + w < ds) ds = dt + w, changed = true;
      }
    }
    return d;
  }

  std::size_t total_label_length() const {
    std::size_t n = 0;
    for (const Word& l : labels_) n += l.size();
    return n;
  }

  const TopoGraph& g_;
  const std::vector<std::vector<int>>& trees_;
  std::span<const Word> vs_;
  int rank_;
  const std::vector<Word>& fills_;
  std::mt19937_64* rng_;
  std::unordered_set<GraphKey, GraphKeyHash>& seen_;
  std::vector<TestCandidate>& out_;
  GraphCount& count_;
  std::size_t& labelings_;
  std::vector<Word> labels_;
  std::vector<std::uint64_t> out_letters_;
  std::vector<std::vector<ArcStep>> readings_;
  std::size_t max_len_ = 0;
};

inline void require_targets(std::span<const Word> vs, int rank) {
  if (vs.empty()) throw std::invalid_argument("no target words");
  FreeGroup f(rank);
  for (const Word& v : vs) {
    if (v.empty()) throw std::invalid_argument("target words must be nontrivial");
    f.require(v);
  }
}

inline std::vector<Word> fill_words(int rank, std::size_t max_len) {
  FreeGroup f(rank);
  std::vector<Word> out;
  for (std::size_t len = 1; len <= max_len; ++len) {
    f.for_each_word_of_length(len, [&](const Word& w) { out.push_back(w); });
  }
  return out;
}

}  // namespace search_detail

// Cached Top(g) with spanning trees.
struct TopoCatalog {
  std::vector<TopoGraph> graphs;
  std::vector<std::vector<std::vector<int>>> trees;

  static const TopoCatalog& of(int g) {
    static std::map<int, TopoCatalog> cache;
    auto it = cache.find(g);
    if (it == cache.end()) {
      TopoCatalog c;
      c.graphs = enumerate_topographs(g);
      for (const auto& t : c.graphs) c.trees.push_back(t.spanning_trees());
      it = cache.emplace(g, std::move(c)).first;
    }
    return it->second;
  }
};

// Test-subgroup candidates for all targets at once: every target reads as a
// loop at the basepoint, basis words are no longer than the longest target,
// and together the expressions use every basis element.
inline CandidateSet generate_candidates(std::span<const Word> vs, int rank,
                                        const SearchOptions& opts = {}) {
  search_detail::require_targets(vs, rank);
  CandidateSet result;
  std::unordered_set<GraphKey, GraphKeyHash> seen;
  auto fills = search_detail::fill_words(rank, opts.max_fill_length);
  std::optional<std::mt19937_64> rng;
  if (opts.shuffle_seed) {
    rng.emplace(*opts.shuffle_seed);
    std::shuffle(fills.begin(), fills.end(), *rng);
  }
  for (int g = 1; g <= rank; ++g) {
    const TopoCatalog& cat = TopoCatalog::of(g);
    std::vector<int> order(cat.graphs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    if (rng) std::shuffle(order.begin(), order.end(), *rng);
    for (int gi : order) {
      GraphCount count{g, gi, 0, 0};
      search_detail::Reader reader(cat.graphs[static_cast<std::size_t>(gi)], gi,
                                   cat.trees[static_cast<std::size_t>(gi)], vs, rank, fills,
                                   rng ? &*rng : nullptr, seen, result.candidates, count,
                                   result.labelings);
      reader.run();
      result.per_graph.push_back(count);
    }
  }
  std::sort(result.per_graph.begin(), result.per_graph.end(),
            [](const GraphCount& x, const GraphCount& y) {
              return std::pair{x.g, x.graph} < std::pair{y.g, y.graph};
            });
  std::sort(result.candidates.begin(), result.candidates.end());
  result.distinct_subgroups = seen.size();
  return result;
}

inline CandidateSet generate_candidates(const Word& v, int rank, const SearchOptions& opts = {}) {
  return generate_candidates(std::span<const Word>(&v, 1), rank, opts);
}

// Traces v through a fully labelled graph from the basepoint.
inline std::optional<std::vector<ArcStep>> trace_loop(const ArcLabeling& l, const Word& v) {
  const TopoGraph& g = l.graph;
  std::vector<ArcStep> steps;
  int p = 0;
  std::size_t i = 0;
  while (i < v.size()) {
    bool moved = false;
    for (int a = 0; a < g.arc_count() && !moved; ++a) {
      const Word& lab = l.labels[static_cast<std::size_t>(a)];
      if (lab.empty()) continue;
      for (int dir : {+1, -1}) {
        int from = dir > 0 ? g.arc(a).source : g.arc(a).target;
        if (from != p) continue;
        Word piece = search_detail::oriented(lab, dir);
        if (piece.front() != v[i]) continue;
        if (i + piece.size() > v.size() || v.subword(i, piece.size()) != piece) {
          return std::nullopt;
        }
        steps.push_back({a, dir});
        i += piece.size();
        p = dir > 0 ? g.arc(a).target : g.arc(a).source;
        moved = true;
        break;
      }
    }
    if (!moved) return std::nullopt;
  }
  if (p != 0) return std::nullopt;
  return steps;
}

// Expression of v over the basis of the first spanning tree, when v reads
// as a loop at the basepoint meeting every non-tree arc.
inline std::optional<Word> read_loop(const ArcLabeling& l, const Word& v) {
  auto steps = trace_loop(l, v);
  if (!steps) return std::nullopt;
  auto trees = l.graph.spanning_trees();
  if (trees.empty()) return std::nullopt;
  auto tb = search_detail::tree_basis(l.graph, trees.front(), l.labels);
  Word w = search_detail::expression_of(*steps, tb);
  if (!search_detail::uses_all(std::span<const Word>(&w, 1), static_cast<int>(tb.basis.size()))) {
    return std::nullopt;
  }
  return w;
}

// Labellings of g with labels[i] on arc i in either orientation; blank
// (empty) entries are filled with every word of length 1..3. Foldable
// results and those with more than 2g-1 blank arcs are dropped; the rest are
// distinct as labelled graphs.
inline std::vector<ArcLabeling> label_graph(const TopoGraph& g, std::span<const Word> labels,
                                            int rank) {
  if (static_cast<int>(labels.size()) != g.arc_count()) {
    throw std::invalid_argument("need one label per arc");
  }
  std::vector<bool> visible(labels.size());
  int blanks = 0;
  for (std::size_t a = 0; a < labels.size(); ++a) {
    visible[a] = !labels[a].empty();
    blanks += visible[a] ? 0 : 1;
  }
  std::vector<ArcLabeling> out;
  if (blanks > 2 * g.rank() - 1) return out;
  auto fills = search_detail::fill_words(rank, 3);
  auto trees = g.spanning_trees();
  std::unordered_set<GraphKey, GraphKeyHash> seen;
  std::vector<Word> cur(labels.size());
  std::function<void(std::size_t)> rec = [&](std::size_t a) {
    if (a == cur.size()) {
      auto basis = search_detail::tree_basis(g, trees.front(), cur).basis;
      GraphKey key = build_core_graph(basis, rank).key();
      if (seen.insert(key).second) out.push_back({g, cur, visible});
      return;
    }
    std::vector<Word> options;
    if (visible[a]) {
      options = {labels[a], invert(labels[a])};
    } else {
      options = fills;
    }
    for (const Word& w : options) {
      cur[a] = w;
      if (search_detail::outgoing(g, cur)) rec(a + 1);
    }
    cur[a] = Word{};
  };
  rec(0);
  return out;
}

// The direct search: all sets of at most n words of length <= max |v_j|,
// up to order and inversion, that freely generate a subgroup containing
// every v_j. One candidate per subgroup (the least one); its
// uses_every_generator flag is set if any generating set of that subgroup
// writes the targets using all of its elements.
class BaselineIndex {
 public:
  BaselineIndex(int rank, std::size_t max_len) : rank_(rank), max_len_(max_len) {
    FreeGroup f(rank);
    std::vector<Word> reps;
    for (std::size_t len = 1; len <= max_len; ++len) {
      f.for_each_word_of_length(len, [&](const Word& w) {
        if (w < invert(w)) reps.push_back(w);
      });
    }
    std::vector<Word> chosen;
    auto rec = [&](auto&& self, std::size_t from) -> void {
      if (!chosen.empty()) sets_.push_back({chosen, build_core_graph(chosen, rank)});
      if (static_cast<int>(chosen.size()) == rank) return;
      for (std::size_t i = from; i < reps.size(); ++i) {
        chosen.push_back(reps[i]);
        if (is_free_basis(chosen, rank)) self(self, i + 1);
        chosen.pop_back();
      }
    };
    rec(rec, 0);
  }

  int rank() const noexcept { return rank_; }
  std::size_t max_length() const noexcept { return max_len_; }
  std::size_t generating_sets() const noexcept { return sets_.size(); }

  CandidateSet candidates(std::span<const Word> vs) const {
    search_detail::require_targets(vs, rank_);
    std::size_t len = 0;
    for (const Word& v : vs) len = std::max(len, v.size());
    if (len > max_len_) throw std::invalid_argument("target longer than the index bound");
    std::map<GraphKey, TestCandidate> best;
    std::size_t tried = 0;
    for (const auto& [basis, graph] : sets_) {
      if (std::any_of(basis.begin(), basis.end(), [&](const Word& b) { return b.size() > len; })) {
        continue;
      }
      ++tried;
      TestCandidate c;
      bool in = true;
      for (const Word& v : vs) {
        auto e = graph.member(v);
        if (!e) {
          in = false;
          break;
        }
        c.expressions.push_back(*e);
      }
      if (!in) continue;
      c.basis = basis;
      c.key = graph.key();
      c.uses_every_generator = search_detail::uses_all(c.expressions, c.m());
      normalize(c);
      auto it = best.find(c.key);
      if (it == best.end()) {
        best.emplace(c.key, std::move(c));
      } else {
        bool full = it->second.uses_every_generator || c.uses_every_generator;
        if (c < it->second) it->second = std::move(c);
        it->second.uses_every_generator = full;
      }
    }
    CandidateSet out;
    out.labelings = tried;
    for (auto& [key, c] : best) out.candidates.push_back(std::move(c));
    std::sort(out.candidates.begin(), out.candidates.end());
    out.distinct_subgroups = out.candidates.size();
    return out;
  }

 private:
  struct Entry {
    std::vector<Word> basis;
    CoreGraph graph;
  };
  int rank_;
  std::size_t max_len_;
  std::vector<Entry> sets_;
};

inline CandidateSet baseline_candidates(std::span<const Word> vs, int rank) {
  std::size_t len = 0;
  for (const Word& v : vs) len = std::max(len, v.size());
  return BaselineIndex(rank, len).candidates(vs);
}

}  // namespace freemono

#endif  // FREEMONO_SUBGROUP_SEARCH_HPP_
