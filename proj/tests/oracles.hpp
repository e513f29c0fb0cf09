// Brute-force reference computations shared by the unit and acceptance
// suites. None of these go through the code paths they are used to check.

#ifndef FREEMONO_TESTS_ORACLES_HPP_
#define FREEMONO_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "freemono/words.hpp"

namespace freemono::oracles {

// Images of the signed letters under a Whitehead automorphism, computed
// straight from the case table (no shared code with WhiteheadAut).
inline std::vector<Word> type2_images(int rank, Letter a, const std::set<Letter>& cut) {
  std::vector<Word> img;
  for (int i = 1; i <= rank; ++i) {
    Word w;
    if (i == index_of(a)) {
      w = Word{i};
    } else {
      bool in = cut.count(i) > 0;
      bool inv_in = cut.count(-i) > 0;
      if (in && !inv_in) w = Word{i, a};
      else if (!in && inv_in) w = Word{-a, i};
      else if (in && inv_in) w = Word{-a, i, a};
      else w = Word{i};
    }
    img.push_back(w);
  }
  return img;
}

// Generator images of every Whitehead generator of F_rank: all signed
// permutations and all Type II automorphisms.
inline std::vector<std::vector<Word>> whitehead_generator_images(int rank) {
  std::vector<std::vector<Word>> out;
  std::vector<int> perm(static_cast<std::size_t>(rank));
  std::iota(perm.begin(), perm.end(), 1);
  do {
    for (int signs = 0; signs < (1 << rank); ++signs) {
      std::vector<Word> img;
      for (int i = 0; i < rank; ++i) {
        Letter y = perm[static_cast<std::size_t>(i)];
        img.push_back(Word{(signs >> i) & 1 ? -y : y});
      }
      out.push_back(img);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<Letter> letters;
  for (int i = 1; i <= rank; ++i) {
    letters.push_back(i);
    letters.push_back(-i);
  }
  for (Letter a : letters) {
    std::vector<Letter> others;
    for (Letter x : letters) {
      if (index_of(x) != index_of(a)) others.push_back(x);
    }
    for (std::size_t m = 0; m < (std::size_t{1} << others.size()); ++m) {
      std::set<Letter> cut{a};
      for (std::size_t b = 0; b < others.size(); ++b) {
        if (m & (std::size_t{1} << b)) cut.insert(others[b]);
      }
      out.push_back(type2_images(rank, a, cut));
    }
  }
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Partition of `words` into Aut(F_rank)-orbits (exact images) discovered by
// composing Whitehead generators up to `depth` times, discarding
// intermediate words longer than `cap`. Returns a class label per word.
inline std::vector<std::size_t> automorphism_classes(const std::vector<Word>& words, int rank,
                                                     int depth, std::size_t cap) {
  auto gens = whitehead_generator_images(rank);
  std::unordered_map<Word, std::size_t, WordHash> index;
  for (std::size_t i = 0; i < words.size(); ++i) index[words[i]] = i;
  UnionFind uf(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::unordered_set<Word, WordHash> seen{words[i]};
    std::vector<Word> frontier{words[i]};
    for (int d = 0; d < depth && !frontier.empty(); ++d) {
      std::vector<Word> next;
      for (const Word& w : frontier) {
        for (const auto& g : gens) {
          Word img = substitute(w, g);
          if (img.size() > cap || !seen.insert(img).second) continue;
          if (auto it = index.find(img); it != index.end()) uf.unite(i, it->second);
          next.push_back(img);
        }
      }
      frontier = std::move(next);
    }
  }
  std::vector<std::size_t> label(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) label[i] = uf.find(i);
  return label;
}

// Count of basepointed multigraphs of rank g (all non-base vertices of
// degree >= 3, connected) up to isomorphism fixing vertex 0, straight from
// the definition: every symmetric multiplicity matrix with the right edge
// total, canonized by trying all vertex relabelings. Vertex counts run one
// past the point where the degree condition makes graphs impossible, so
// `overflow` must come back 0.
struct TopoCount {
  std::size_t graphs = 0;
  std::size_t overflow = 0;
  int max_edges = 0;
  int max_vertices = 0;
};

inline TopoCount brute_force_topographs(int g) {
  TopoCount out;
  for (int nv = 1; nv <= 2 * g + 1; ++nv) {
    const int ne = g + nv - 1;
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < nv; ++i) {
      for (int j = i; j < nv; ++j) cells.push_back({i, j});
    }
    std::set<std::vector<int>> seen;
    std::vector<int> mult(cells.size(), 0);
    auto accept = [&] {
      std::vector<int> deg(static_cast<std::size_t>(nv), 0);
      UnionFind uf(static_cast<std::size_t>(nv));
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (!mult[c]) continue;
        auto [i, j] = cells[c];
        deg[static_cast<std::size_t>(i)] += mult[c];
        deg[static_cast<std::size_t>(j)] += mult[c];
        uf.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
      for (int v = 0; v < nv; ++v) {
        if (uf.find(static_cast<std::size_t>(v)) != uf.find(0)) return;
        if (v > 0 && deg[static_cast<std::size_t>(v)] < 3) return;
      }
      std::vector<int> perm(static_cast<std::size_t>(nv));
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<int> best;
      do {
        std::vector<int> m(static_cast<std::size_t>(nv * nv), 0);
        for (std::size_t c = 0; c < cells.size(); ++c) {
          auto [i, j] = cells[c];
          int a = perm[static_cast<std::size_t>(i)], b = perm[static_cast<std::size_t>(j)];
          m[static_cast<std::size_t>(a * nv + b)] = m[static_cast<std::size_t>(b * nv + a)] = mult[c];
        }
        if (best.empty() || m < best) best = m;
      } while (std::next_permutation(perm.begin() + 1, perm.end()));
      if (seen.insert(best).second) {
        if (nv > 2 * g) ++out.overflow;
        ++out.graphs;
        out.max_edges = std::max(out.max_edges, ne);
        out.max_vertices = std::max(out.max_vertices, nv);
      }
    };
    // Cells go row by row, so vertex i's degree is final once row i is done.
    std::vector<int> deg(static_cast<std::size_t>(nv), 0);
    auto rec = [&](auto&& self, std::size_t c, int left) -> void {
      if (c > 0 && (c == cells.size() || cells[c].first != cells[c - 1].first)) {
        int row = cells[c - 1].first;
        if (row > 0 && deg[static_cast<std::size_t>(row)] < 3) return;
      }
      if (c == cells.size()) {
        if (left == 0) accept();
        return;
      }
      auto [i, j] = cells[c];
      for (int k = 0; k <= left; ++k) {
        mult[c] = k;
        deg[static_cast<std::size_t>(i)] += k;
        deg[static_cast<std::size_t>(j)] += k;
        self(self, c + 1, left - k);
        deg[static_cast<std::size_t>(i)] -= k;
        deg[static_cast<std::size_t>(j)] -= k;
      }
      mult[c] = 0;
    };
    rec(rec, 0, ne);
  }
  return out;
}

}  // namespace freemono::oracles

#endif  // FREEMONO_TESTS_ORACLES_HPP_
