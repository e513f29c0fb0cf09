// Basepointed multigraphs of rank g in which every vertex other than the
// basepoint has degree at least 3. Vertex 0 is the basepoint.

#ifndef FREEMONO_TOPOGRAPH_HPP_
#define FREEMONO_TOPOGRAPH_HPP_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace freemono {

struct Arc {
  int source;
  int target;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

class TopoGraph {
 public:
  TopoGraph() = default;
  TopoGraph(int vertices, std::vector<Arc> arcs) : vertices_(vertices), arcs_(std::move(arcs)) {
    for (const Arc& a : arcs_) {
      if (a.source < 0 || a.target < 0 || a.source >= vertices_ || a.target >= vertices_) {
        throw std::invalid_argument("arc endpoint out of range");
      }
    }
  }

  int vertex_count() const noexcept { return vertices_; }
  int arc_count() const noexcept { return static_cast<int>(arcs_.size()); }
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  const Arc& arc(int i) const { return arcs_[static_cast<std::size_t>(i)]; }
  int rank() const noexcept { return arc_count() - vertices_ + 1; }

  int degree(int v) const noexcept {
    int d = 0;
    for (const Arc& a : arcs_) d += (a.source == v) + (a.target == v);
    return d;
  }

  bool connected() const {
    std::vector<int> parent(static_cast<std::size_t>(vertices_));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
      return x;
    };
    int parts = vertices_;
    for (const Arc& a : arcs_) {
      int x = find(a.source), y = find(a.target);
      if (x != y) {
        parent[static_cast<std::size_t>(x)] = y;
        --parts;
      }
    }
    return parts == 1;
  }

  // Degree condition, connectivity and the edge/vertex bounds for its rank.
  bool well_formed() const {
    if (vertices_ < 1 || !connected()) return false;
    for (int v = 1; v < vertices_; ++v) {
      if (degree(v) < 3) return false;
    }
    int g = rank();
    if (g >= 1 && (arc_count() > 3 * g - 1 || vertices_ > 2 * g)) return false;
    return true;
  }

  // Sorted undirected arc list minimized over relabelings of the non-base
  // vertices. Equal iff isomorphic fixing the basepoint.
  std::vector<Arc> canonical_arcs() const {
    std::vector<int> perm(static_cast<std::size_t>(vertices_));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Arc> best;
    bool have = false;
    do {
      std::vector<Arc> cur;
      cur.reserve(arcs_.size());
      for (const Arc& a : arcs_) {
        int s = perm[static_cast<std::size_t>(a.source)];
        int t = perm[static_cast<std::size_t>(a.target)];
        cur.push_back({std::min(s, t), std::max(s, t)});
      }
      std::sort(cur.begin(), cur.end());
      if (!have || cur < best) {
        best = std::move(cur);
        have = true;
      }
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return best;
  }

  // All spanning trees as sorted lists of arc indices, lexicographic order.
  std::vector<std::vector<int>> spanning_trees() const {
    std::vector<std::vector<int>> out;
    std::vector<int> chosen;
    const int need = vertices_ - 1;
    auto is_tree = [&] {
      std::vector<int> parent(static_cast<std::size_t>(vertices_));
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
        return x;
      };
      for (int i : chosen) {
        int x = find(arc(i).source), y = find(arc(i).target);
        if (x == y) return false;
        parent[static_cast<std::size_t>(x)] = y;
      }
      return true;
    };
    auto rec = [&](auto&& self, int from) -> void {
      if (static_cast<int>(chosen.size()) == need) {
        if (is_tree()) out.push_back(chosen);
        return;
      }
      for (int i = from; i < arc_count(); ++i) {
        if (arc(i).source == arc(i).target) continue;
        chosen.push_back(i);
        self(self, i + 1);
        chosen.pop_back();
      }
    };
    rec(rec, 0);
    return out;
  }

  // "vertices V arcs E rank g" then one adjacency line per vertex.
  std::string to_string() const {
    std::ostringstream os;
    auto name = [](int v) { return v == 0 ? std::string("*") : std::to_string(v); };
    os << "vertices " << vertices_ << " arcs " << arc_count() << " rank " << rank() << "\n";
    for (int v = 0; v < vertices_; ++v) {
      os << name(v) << ":";
      for (const Arc& a : arcs_) {
        if (a.source == v) os << ' ' << name(a.target);
        if (a.target == v && a.source != v) os << ' ' << name(a.source);
        if (a.source == v && a.target == v) os << ' ' << name(v);
      }
      os << "\n";
    }
    return os.str();
  }

 private:
  int vertices_ = 1;
  std::vector<Arc> arcs_;
};

// Top(g), up to isomorphism fixing the basepoint. Ordered by vertex count,
// then canonical arc list.
inline std::vector<TopoGraph> enumerate_topographs(int g) {
  if (g < 1) throw std::invalid_argument("rank must be at least 1");
  std::vector<TopoGraph> out;
  for (int nv = 1; nv <= 2 * g; ++nv) {
    const int ne = g + nv - 1;
    if (ne > 3 * g - 1) break;
    std::vector<Arc> pairs;
    for (int i = 0; i < nv; ++i) {
      for (int j = i; j < nv; ++j) pairs.push_back({i, j});
    }
    std::set<std::vector<Arc>> seen;
    std::vector<int> deg(static_cast<std::size_t>(nv), 0);
    std::vector<Arc> chosen;
    auto deficit = [&] {
      int d = deg[0] == 0 ? 1 : 0;
      for (int v = 1; v < nv; ++v) d += std::max(0, 3 - deg[static_cast<std::size_t>(v)]);
      return d;
    };
    // Multisets of arcs in nondecreasing pair order.
    auto rec = [&](auto&& self, std::size_t from) -> void {
      int left = ne - static_cast<int>(chosen.size());
      if (deficit() > 2 * left) return;
      if (left == 0) {
        TopoGraph t(nv, chosen);
        if (!t.well_formed()) return;
        auto key = t.canonical_arcs();
        if (seen.insert(key).second) out.emplace_back(nv, std::move(key));
        return;
      }
      for (std::size_t p = from; p < pairs.size(); ++p) {
        const Arc& a = pairs[p];
        chosen.push_back(a);
        ++deg[static_cast<std::size_t>(a.source)];
        ++deg[static_cast<std::size_t>(a.target)];
        self(self, p);
        --deg[static_cast<std::size_t>(a.source)];
        --deg[static_cast<std::size_t>(a.target)];
        chosen.pop_back();
      }
    };
    auto first = out.size();
    rec(rec, 0);
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
              [](const TopoGraph& x, const TopoGraph& y) { return x.arcs() < y.arcs(); });
  }
  return out;
}

}  // namespace freemono

#endif  // FREEMONO_TOPOGRAPH_HPP_
