// Stallings core graphs of finitely generated subgroups of F_n.
//
// build() folds the wedge of generator loops with a union-find over vertices.
// Every edge carries a trace: a word over the generator indices. The folding
// maintains the invariant that for any closed path at the basepoint the
// product of traces, evaluated at the generators, equals the label of the
// path. Merging vertex R into Q along edges e1 (to Q) and e2 (to R) leaving a
// common vertex gives R the potential trace(e2)^-1 * trace(e1), so membership
// rewriting reduces to reading a word and multiplying traces.

#ifndef FREEMONO_STALLINGS_HPP_
#define FREEMONO_STALLINGS_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "freemono/text.hpp"
#include "freemono/words.hpp"

namespace freemono {

// Canonical encoding of a basepointed folded graph; equal keys iff the
// labelled basepointed graphs are isomorphic.
using GraphKey = std::vector<std::int32_t>;

struct GraphKeyHash {
  std::size_t operator()(const GraphKey& k) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : k) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(x));
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct GraphEdge {
  int source;
  Letter label;  // positive generator index
  int target;
};

class CoreGraph {
 public:
  static constexpr int kNone = -1;

  int ambient_rank() const noexcept { return rank_; }
  std::size_t vertex_count() const noexcept { return vertices_; }
  std::size_t edge_count() const noexcept { return edges_; }
  int basepoint() const noexcept { return 0; }

  // |E| - |V| + 1.
  int rank() const noexcept {
    return static_cast<int>(edges_) - static_cast<int>(vertices_) + 1;
  }

  const std::vector<Word>& generators() const noexcept { return generators_; }

  int next(int vertex, Letter a) const noexcept {
    return next_[slot(vertex, a)];
  }
  const Word& trace(int vertex, Letter a) const noexcept {
    return traces_[slot(vertex, a)];
  }

  // Vertices are numbered in breadth-first order from the basepoint with
  // letters taken in letter_rank order, so the transition table itself is a
  // canonical form.
  const GraphKey& key() const noexcept { return key_; }

  std::vector<GraphEdge> edges() const {
    std::vector<GraphEdge> out;
    for (std::size_t v = 0; v < vertices_; ++v) {
      for (int i = 1; i <= rank_; ++i) {
        int t = next(static_cast<int>(v), i);
        if (t != kNone) out.push_back({static_cast<int>(v), i, t});
      }
    }
    return out;
  }

  // Endpoint of the path reading w from `from`, or kNone.
  int read(const Word& w, int from = 0) const noexcept {
    int x = from;
    for (Letter a : w) {
      if (index_of(a) > rank_) return kNone;
      x = next(x, a);
      if (x == kNone) return kNone;
    }
    return x;
  }

  bool accepts(const Word& w) const noexcept { return read(w) == 0; }

  // Expression of w over the recorded generators (x_i stands for
  // generators()[i-1]), or nullopt when w is not in the subgroup.
  std::optional<Word> member(const Word& w) const {
    Word expr;
    int x = 0;
    for (Letter a : w) {
      if (index_of(a) > rank_) return std::nullopt;
      int y = next(x, a);
      if (y == kNone) return std::nullopt;
      expr *= trace(x, a);
      x = y;
    }
    if (x != 0) return std::nullopt;
    return expr;
  }

  // Free basis read off the breadth-first spanning tree: one element per
  // non-tree edge, in edge order.
  std::vector<Word> spanning_tree_basis() const {
    std::vector<Word> to_vertex(vertices_);
    std::vector<bool> seen(vertices_, false);
    std::vector<std::pair<int, Letter>> tree_in(vertices_, {kNone, 0});
    std::vector<int> queue{0};
    seen[0] = true;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int x = queue[qi];
      for (int r = 0; r < 2 * rank_; ++r) {
        Letter a = letter_from_rank(r);
        int y = next(x, a);
        if (y == kNone || seen[static_cast<std::size_t>(y)]) continue;
        seen[static_cast<std::size_t>(y)] = true;
        tree_in[static_cast<std::size_t>(y)] = {x, a};
        to_vertex[static_cast<std::size_t>(y)] =
            to_vertex[static_cast<std::size_t>(x)] * Word{a};
        queue.push_back(y);
      }
    }
    std::vector<Word> basis;
    for (const GraphEdge& e : edges()) {
      auto t = static_cast<std::size_t>(e.target);
      if (tree_in[t].first == e.source && tree_in[t].second == e.label) continue;
      auto s = static_cast<std::size_t>(e.source);
      if (tree_in[s].first == e.target && tree_in[s].second == -e.label) {
        continue;
      }
      basis.push_back(to_vertex[s] * Word{e.label} * invert(to_vertex[t]));
    }
    return basis;
  }

  // One edge per line, "src --letter--> dst", basepoint written as '*'.
  std::string dump() const {
    std::ostringstream os;
    auto name = [](int v) { return v == 0 ? std::string("*") : std::to_string(v); };
    os << "vertices " << vertices_ << " edges " << edges_ << " rank " << rank()
       << "\n";
    for (const GraphEdge& e : edges()) {
      os << name(e.source) << " --" << to_string(Word{e.label}) << "--> "
         << name(e.target) << "\n";
    }
    return os.str();
  }

 private:
  friend class Folder;

  std::size_t slot(int vertex, Letter a) const noexcept {
    return static_cast<std::size_t>(vertex) * static_cast<std::size_t>(2 * rank_) +
           static_cast<std::size_t>(letter_rank(a));
  }

  int rank_ = 1;
  std::size_t vertices_ = 1;
  std::size_t edges_ = 0;
  std::vector<int> next_;
  std::vector<Word> traces_;
  std::vector<Word> generators_;
  GraphKey key_;
};

// Folding engine. With a seed, the worklist is processed in a shuffled order;
// the resulting graph does not depend on it.
class Folder {
 public:
  explicit Folder(int rank,
                  std::optional<std::uint64_t> shuffle_seed = std::nullopt)
      : rank_(rank) {
    if (shuffle_seed) rng_.emplace(*shuffle_seed);
  }

  CoreGraph build(std::span<const Word> generators) {
    parent_.assign(1, 0);
    potential_.assign(1, Word{});
    incident_.assign(1, {});
    edges_.clear();
    for (std::size_t j = 0; j < generators.size(); ++j) {
      const Word& g = generators[j];
      if (g.max_index() > rank_) {
        throw std::invalid_argument("generator uses a letter beyond the rank");
      }
      if (g.empty()) continue;
      int prev = 0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        int cur = (k + 1 == g.size()) ? 0 : new_vertex();
        Word trace = k == 0 ? Word{static_cast<Letter>(j + 1)} : Word{};
        add_edge(prev, g[k], cur, std::move(trace));
        prev = cur;
      }
    }
    fold();
    prune();
    return finish(generators);
  }

 private:
  struct Edge {
    int source;
    Letter label;  // positive
    int target;
    Word trace;
    bool alive = true;
  };

  int new_vertex() {
    parent_.push_back(static_cast<int>(parent_.size()));
    potential_.emplace_back();
    incident_.emplace_back();
    return static_cast<int>(parent_.size()) - 1;
  }

  void add_edge(int from, Letter a, int to, Word trace) {
    if (a < 0) {
      std::swap(from, to);
      a = -a;
      trace = invert(trace);
    }
    edges_.push_back({from, a, to, std::move(trace)});
    int id = static_cast<int>(edges_.size()) - 1;
    incident_[static_cast<std::size_t>(from)].push_back(id);
    if (to != from) incident_[static_cast<std::size_t>(to)].push_back(id);
  }

  // Root of x; afterwards potential_[x] is relative to that root.
  int find(int x) {
    auto ux = static_cast<std::size_t>(x);
    int p = parent_[ux];
    if (p == x) return x;
    int r = find(p);
    if (p != r) {
      potential_[ux] = potential_[ux] * potential_[static_cast<std::size_t>(p)];
      parent_[ux] = r;
    }
    return r;
  }

  Word effective_trace(const Edge& e) {
    find(e.source);
    find(e.target);
    return invert(potential_[static_cast<std::size_t>(e.source)]) * e.trace *
           potential_[static_cast<std::size_t>(e.target)];
  }

  // Edges leaving root p by signed letter s, as (edge id, far end, trace).
  struct Outgoing {
    int edge;
    int far;
    Word trace;
  };

  void fold() {
    std::vector<int> work;
    for (std::size_t v = 0; v < parent_.size(); ++v) work.push_back(static_cast<int>(v));
    std::vector<int> seen(static_cast<std::size_t>(2 * rank_));
    while (!work.empty()) {
      std::size_t pick = work.size() - 1;
      if (rng_) pick = std::uniform_int_distribution<std::size_t>(0, pick)(*rng_);
      int p = work[pick];
      work[pick] = work.back();
      work.pop_back();
      if (find(p) != p) continue;

      auto& inc = incident_[static_cast<std::size_t>(p)];
      std::erase_if(inc, [&](int id) { return !edges_[static_cast<std::size_t>(id)].alive; });
      if (rng_) std::shuffle(inc.begin(), inc.end(), *rng_);
      std::fill(seen.begin(), seen.end(), -1);

      const std::vector<int> scan = inc;  // merge() may grow inc
      for (int id : scan) {
        const Edge& e = edges_[static_cast<std::size_t>(id)];
        bool clash = false;
        for (int dir = 0; dir < 2 && !clash; ++dir) {
          int from = dir == 0 ? e.source : e.target;
          if (find(from) != p) continue;
          Letter s = dir == 0 ? e.label : -e.label;
          auto r = static_cast<std::size_t>(letter_rank(s));
          if (seen[r] == -1) {
            seen[r] = id;
          } else if (seen[r] != id) {
            work.push_back(merge(p, s, seen[r], id));
            clash = true;
          }
        }
        if (clash) {
          work.push_back(find(p));
          break;
        }
      }
    }
  }

  Outgoing orient(int id, int p, Letter s) {
    const Edge& e = edges_[static_cast<std::size_t>(id)];
    Word t = effective_trace(e);
    if (e.label == s && find(e.source) == p) return {id, find(e.target), t};
    return {id, find(e.source), invert(t)};
  }

  // Folds edge id2 onto id1 and returns the surviving far-end root.
  int merge(int p, Letter s, int id1, int id2) {
    Outgoing o1 = orient(id1, p, s);
    Outgoing o2 = orient(id2, p, s);
    int q = o1.far;
    int r = o2.far;
    if (q != r) {
      Word delta = invert(o2.trace) * o1.trace;  // potential of r over q
      if (r == 0) {
        std::swap(q, r);
        delta = invert(delta);
      }
      auto ur = static_cast<std::size_t>(r);
      parent_[ur] = q;
      potential_[ur] = std::move(delta);
      auto& into = incident_[static_cast<std::size_t>(q)];
      into.insert(into.end(), incident_[ur].begin(), incident_[ur].end());
      incident_[ur].clear();
    }
    edges_[static_cast<std::size_t>(id2)].alive = false;
    return q;
  }

  // Removes dangling non-basepoint vertices of degree <= 1.
  void prune() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<int> degree(parent_.size(), 0);
      for (const Edge& e : edges_) {
        if (!e.alive) continue;
        ++degree[static_cast<std::size_t>(find(e.source))];
        ++degree[static_cast<std::size_t>(find(e.target))];
      }
      for (Edge& e : edges_) {
        if (!e.alive) continue;
        int s = find(e.source);
        int t = find(e.target);
        if ((s != 0 && degree[static_cast<std::size_t>(s)] == 1) ||
            (t != 0 && degree[static_cast<std::size_t>(t)] == 1)) {
          e.alive = false;
          changed = true;
        }
      }
    }
  }

  CoreGraph finish(std::span<const Word> generators) {
    CoreGraph g;
    g.rank_ = rank_;
    g.generators_.assign(generators.begin(), generators.end());
    const std::size_t width = static_cast<std::size_t>(2 * rank_);

    // Transition table over roots, then breadth-first relabel from 0.
    std::vector<std::vector<std::pair<int, Word>>> out(parent_.size());
    for (auto& row : out) row.assign(width, {CoreGraph::kNone, Word{}});
    for (const Edge& e : edges_) {
      if (!e.alive) continue;
      int s = find(e.source);
      int t = find(e.target);
      Word tr = effective_trace(e);
      out[static_cast<std::size_t>(s)][static_cast<std::size_t>(letter_rank(e.label))] = {t, tr};
      out[static_cast<std::size_t>(t)][static_cast<std::size_t>(letter_rank(-e.label))] = {s, invert(tr)};
    }
    std::vector<int> fresh(parent_.size(), CoreGraph::kNone);
    std::vector<int> order{0};
    fresh[0] = 0;
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
      const auto& row = out[static_cast<std::size_t>(order[qi])];
      for (std::size_t r = 0; r < width; ++r) {
        int y = row[r].first;
        if (y != CoreGraph::kNone && fresh[static_cast<std::size_t>(y)] == CoreGraph::kNone) {
          fresh[static_cast<std::size_t>(y)] = static_cast<int>(order.size());
          order.push_back(y);
        }
      }
    }
    g.vertices_ = order.size();
    g.next_.assign(g.vertices_ * width, CoreGraph::kNone);
    g.traces_.assign(g.vertices_ * width, Word{});
    std::size_t ends = 0;
    for (std::size_t v = 0; v < order.size(); ++v) {
      const auto& row = out[static_cast<std::size_t>(order[v])];
      for (std::size_t r = 0; r < width; ++r) {
        if (row[r].first == CoreGraph::kNone) continue;
        g.next_[v * width + r] = fresh[static_cast<std::size_t>(row[r].first)];
        g.traces_[v * width + r] = row[r].second;
        ++ends;
      }
    }
    g.edges_ = ends / 2;
    g.key_.reserve(g.next_.size() + 2);
    g.key_.push_back(rank_);
    g.key_.push_back(static_cast<std::int32_t>(g.vertices_));
    g.key_.insert(g.key_.end(), g.next_.begin(), g.next_.end());
    return g;
  }

  int rank_;
  std::optional<std::mt19937_64> rng_;
  std::vector<int> parent_;
  std::vector<Word> potential_;
  std::vector<std::vector<int>> incident_;
  std::vector<Edge> edges_;
};

inline CoreGraph build_core_graph(std::span<const Word> generators, int rank) {
  return Folder(rank).build(generators);
}

inline CoreGraph build_core_graph(std::span<const Word> generators, int rank,
                                  std::uint64_t shuffle_seed) {
  return Folder(rank, shuffle_seed).build(generators);
}

inline std::optional<Word> member(const CoreGraph& g, const Word& w) {
  return g.member(w);
}

// Rank of the subgroup generated by the images; an endomorphism of F_n is
// injective iff this equals n.
inline int image_rank(std::span<const Word> images, int rank) {
  return build_core_graph(images, rank).rank();
}

inline bool is_free_basis(std::span<const Word> words, int rank) {
  for (const Word& w : words) {
    if (w.empty()) return false;
  }
  return build_core_graph(words, rank).rank() == static_cast<int>(words.size());
}

}  // namespace freemono

#endif  // FREEMONO_STALLINGS_HPP_
