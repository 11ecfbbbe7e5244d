#pragma once

// Color-preserving automorphism groups of dense arc-colored digraphs via
// individualization-refinement, plus digraph isomorphism through the colored
// disjoint union, orbital colorings of permutation groups, 2-closure, and
// arc-transitivity.
//
// The search refines with iterated signature counting (directed 1-WL over
// arc colors), individualizes inside the first smallest non-singleton cell,
// compares every leaf against the first leaf, prunes siblings on the first
// path by orbits of the already-found automorphisms, prunes whole subtrees
// by an isomorphism-invariant node hash, and jumps back to the deepest
// first-path ancestor whenever a new automorphism is found.  All candidate
// automorphisms are verified arc-by-arc before being kept, so pruning and
// hashing can only cost time, never correctness.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cci/digraph.hpp"
#include "cci/perm.hpp"
#include "cci/stab_chain.hpp"

namespace cci {

struct SearchBudget {
  std::uint64_t max_nodes = 10'000'000;
};

// Distinguished abort: under a too-small budget the search throws instead of
// ever returning a wrong answer.
struct BudgetExceeded : std::runtime_error {
  BudgetExceeded()
      : std::runtime_error("automorphism search: node budget exceeded") {}
};

struct AutResult {
  std::vector<Perm> generators;  // each one verified color-preserving
  unsigned long long order = 1;  // exact order of the generated group
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Ordered partition of the vertices; every cell is kept ascending.
struct Partition {
  std::vector<int> cell_of;
  std::vector<std::vector<int>> cells;
};

inline void recompute_cell_of(Partition& p) {
  for (std::size_t c = 0; c < p.cells.size(); ++c)
    for (int v : p.cells[c]) p.cell_of[static_cast<std::size_t>(v)] = static_cast<int>(c);
}

// Cells grouped by diagonal color, ordered by color value.
inline Partition initial_partition(const ColoredDigraph& cd) {
  Partition p;
  p.cell_of.assign(static_cast<std::size_t>(cd.n), 0);
  std::map<int, std::vector<int>> by_color;
  for (int v = 0; v < cd.n; ++v) by_color[cd.at(v, v)].push_back(v);
  for (auto& [color, verts] : by_color) p.cells.push_back(std::move(verts));
  recompute_cell_of(p);
  return p;
}

// One signature-splitting round; true iff some cell split.  The signature of
// a vertex is a commutative hash over all other vertices of (their cell, arc
// color out, arc color in), so it depends only on count data and is invariant
// across isomorphic configurations.  Sub-cells are ordered by signature.
inline bool refine_round(const ColoredDigraph& cd, Partition& p) {
  const int n = cd.n;
  std::vector<std::uint64_t> sig(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    std::uint64_t s = 0;
    for (int u = 0; u < n; ++u)
      s += mix64((static_cast<std::uint64_t>(p.cell_of[static_cast<std::size_t>(u)]) << 48) ^
                 (static_cast<std::uint64_t>(cd.at(v, u)) << 24) ^
                 static_cast<std::uint64_t>(cd.at(u, v)));
    sig[static_cast<std::size_t>(v)] = s;
  }
  std::vector<std::vector<int>> out;
  out.reserve(p.cells.size());
  const std::size_t before = p.cells.size();
  for (auto& cell : p.cells) {
    if (cell.size() == 1) {
      out.push_back(std::move(cell));
      continue;
    }
    std::sort(cell.begin(), cell.end(), [&](int a, int b) {
      const std::uint64_t sa = sig[static_cast<std::size_t>(a)];
      const std::uint64_t sb = sig[static_cast<std::size_t>(b)];
      return sa != sb ? sa < sb : a < b;
    });
    std::size_t start = 0;
    for (std::size_t i = 1; i <= cell.size(); ++i)
      if (i == cell.size() ||
          sig[static_cast<std::size_t>(cell[i])] != sig[static_cast<std::size_t>(cell[start])]) {
        out.emplace_back(cell.begin() + static_cast<std::ptrdiff_t>(start),
                         cell.begin() + static_cast<std::ptrdiff_t>(i));
        start = i;
      }
  }
  const bool split = out.size() > before;
  p.cells = std::move(out);
  recompute_cell_of(p);
  return split;
}

inline void refine(const ColoredDigraph& cd, Partition& p) {
  while (refine_round(cd, p)) {
  }
}

// Isomorphism-invariant hash of a refined node: the cell-size sequence plus
// the exact multiset of (cell of u, cell of v, color u->v) over all pairs.
inline std::uint64_t node_invariant(const ColoredDigraph& cd, const Partition& p) {
  std::uint64_t h = 0x243f6a8885a308d3ull;
  for (const auto& cell : p.cells) h = mix64(h ^ cell.size());
  std::uint64_t s = 0;
  for (int u = 0; u < cd.n; ++u)
    for (int v = 0; v < cd.n; ++v)
      s += mix64((static_cast<std::uint64_t>(p.cell_of[static_cast<std::size_t>(u)]) << 36) ^
                 (static_cast<std::uint64_t>(p.cell_of[static_cast<std::size_t>(v)]) << 24) ^
                 static_cast<std::uint64_t>(cd.at(u, v)));
  return mix64(h ^ s);
}

inline Partition individualize(const Partition& p, int cell_idx, int v) {
  Partition q;
  q.cell_of = p.cell_of;
  q.cells.reserve(p.cells.size() + 1);
  for (std::size_t c = 0; c < p.cells.size(); ++c) {
    if (static_cast<int>(c) != cell_idx) {
      q.cells.push_back(p.cells[c]);
      continue;
    }
    q.cells.push_back({v});
    std::vector<int> rest;
    rest.reserve(p.cells[c].size() - 1);
    for (int u : p.cells[c])
      if (u != v) rest.push_back(u);
    q.cells.push_back(std::move(rest));
  }
  recompute_cell_of(q);
  return q;
}

// First smallest non-singleton cell, or -1 when the partition is discrete.
inline int target_cell(const Partition& p) {
  int best = -1;
  std::size_t best_size = std::numeric_limits<std::size_t>::max();
  for (std::size_t c = 0; c < p.cells.size(); ++c)
    if (p.cells[c].size() > 1 && p.cells[c].size() < best_size) {
      best = static_cast<int>(c);
      best_size = p.cells[c].size();
    }
  return best;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

class AutSearch {
 public:
  AutSearch(const ColoredDigraph& cd, SearchBudget budget) : cd_(cd), budget_(budget) {}

  AutResult run() {
    AutResult result;
    if (cd_.n == 0) return result;
    Partition p = initial_partition(cd_);
    refine(cd_, p);
    dfs(p, 0);
    result.generators = gens_;
    result.order = StabilizerChain::build(cd_.n, gens_).order();
    return result;
  }

 private:
  void dfs(const Partition& p, int depth) {
    if (++nodes_ > budget_.max_nodes) throw BudgetExceeded();
    const std::uint64_t inv = node_invariant(cd_, p);
    if (!zeta_done_) {
      zeta_inv_.push_back(inv);  // first path: one entry per depth
    } else if (depth >= static_cast<int>(zeta_inv_.size()) ||
               inv != zeta_inv_[static_cast<std::size_t>(depth)]) {
      return;  // cannot lead to a leaf equivalent to the first one
    }

    const int tc = target_cell(p);
    if (tc < 0) {
      handle_leaf(p);
      return;
    }

    const std::vector<int> branch = p.cells[static_cast<std::size_t>(tc)];
    const bool entered_on_zeta = !zeta_done_ || path_matches_zeta(depth);
    std::vector<int> explored;
    UnionFind uf(cd_.n);
    std::size_t uf_gens = std::numeric_limits<std::size_t>::max();

    for (int v : branch) {
      if (zeta_done_ && entered_on_zeta && !explored.empty()) {
        if (uf_gens != gens_.size()) {
          build_prefix_uf(uf, depth);
          uf_gens = gens_.size();
        }
        bool redundant = false;
        for (int u : explored)
          if (uf.find(u) == uf.find(v)) {
            redundant = true;
            break;
          }
        if (redundant) continue;
      }
      path_.push_back(v);
      if (!zeta_done_) zeta_branches_.push_back(v);
      Partition q = individualize(p, tc, v);
      refine(cd_, q);
      dfs(q, depth + 1);
      path_.pop_back();
      explored.push_back(v);
      if (jump_to_ >= 0) {
        if (jump_to_ != depth) return;  // keep unwinding to the ancestor
        jump_to_ = -1;                  // arrived at the deepest common node
      }
    }
  }

  void handle_leaf(const Partition& p) {
    std::vector<int> lab(p.cells.size());
    for (std::size_t i = 0; i < p.cells.size(); ++i) lab[i] = p.cells[i][0];
    if (!zeta_done_) {
      zeta_done_ = true;
      zeta_lab_ = std::move(lab);
      return;
    }
    if (lab.size() != zeta_lab_.size()) return;
    std::vector<int> img(static_cast<std::size_t>(cd_.n));
    for (std::size_t i = 0; i < lab.size(); ++i)
      img[static_cast<std::size_t>(zeta_lab_[i])] = lab[i];
    Perm g(std::move(img));
    if (g.is_identity()) return;
    for (int u = 0; u < cd_.n; ++u)
      for (int v = 0; v < cd_.n; ++v)
        if (cd_.at(u, v) != cd_.at(g[u], g[v])) return;
    gens_.push_back(std::move(g));
    jump_to_ = lcp_with_zeta();
  }

  bool path_matches_zeta(int depth) const {
    if (depth > static_cast<int>(zeta_branches_.size())) return false;
    for (int i = 0; i < depth; ++i)
      if (path_[static_cast<std::size_t>(i)] != zeta_branches_[static_cast<std::size_t>(i)])
        return false;
    return true;
  }

  int lcp_with_zeta() const {
    int l = 0;
    while (l < static_cast<int>(path_.size()) &&
           l < static_cast<int>(zeta_branches_.size()) &&
           path_[static_cast<std::size_t>(l)] == zeta_branches_[static_cast<std::size_t>(l)])
      ++l;
    return l;
  }

  // Orbits of the found generators that fix the first-path prefix pointwise;
  // a subgroup of the true prefix stabilizer, so skipping inside a class is
  // always sound.
  void build_prefix_uf(UnionFind& uf, int depth) {
    uf = UnionFind(cd_.n);
    for (const Perm& g : gens_) {
      bool fixes = true;
      for (int i = 0; i < depth && fixes; ++i)
        fixes = g[zeta_branches_[static_cast<std::size_t>(i)]] ==
                zeta_branches_[static_cast<std::size_t>(i)];
      if (!fixes) continue;
      for (int v = 0; v < cd_.n; ++v) uf.unite(v, g[v]);
    }
  }

  const ColoredDigraph& cd_;
  SearchBudget budget_;
  std::uint64_t nodes_ = 0;
  bool zeta_done_ = false;
  std::vector<std::uint64_t> zeta_inv_;
  std::vector<int> zeta_branches_;
  std::vector<int> zeta_lab_;
  std::vector<int> path_;
  std::vector<Perm> gens_;
  int jump_to_ = -1;
};

}  // namespace detail

inline AutResult automorphism_group(const ColoredDigraph& cd, SearchBudget budget = {}) {
  detail::AutSearch search(cd, budget);
  return search.run();
}

inline AutResult automorphism_group(const Digraph& d, SearchBudget budget = {}) {
  return automorphism_group(to_colored(d), budget);
}

// Stable refinement classes from the diagonal-color partition, before any
// individualization.  Refinement never splits below the orbits of the true
// automorphism group, so every automorphism preserves these classes.
inline std::vector<int> equitable_classes(const ColoredDigraph& cd) {
  detail::Partition p = detail::initial_partition(cd);
  detail::refine(cd, p);
  return p.cell_of;
}

// Arc-preserving vertex bijection between two digraphs, if one exists.  Runs
// the automorphism search on the colored disjoint union, with a shared
// palette inside the blocks and a distinct cross-block color, so every
// automorphism maps blocks wholesale; the blocks swap iff some generator
// swaps them.  The returned map is verified arc-by-arc.
inline std::optional<Perm> isomorphism(const Digraph& d1, const Digraph& d2,
                                       SearchBudget budget = {}) {
  if (d1.n() != d2.n()) return std::nullopt;
  const int n = d1.n();
  if (n == 0) return Perm();
  if (d1 == d2) return Perm::identity(n);
  if (d1.arc_count() != d2.arc_count()) return std::nullopt;

  ColoredDigraph u;
  u.n = 2 * n;
  u.num_colors = 4;
  u.color.assign(static_cast<std::size_t>(u.n) * u.n, 3);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      u.at(a, b) = a == b ? 0 : (d1.arc(a, b) ? 1 : 2);
      u.at(n + a, n + b) = a == b ? 0 : (d2.arc(a, b) ? 1 : 2);
    }

  const AutResult aut = automorphism_group(u, budget);
  for (const Perm& g : aut.generators) {
    if (g[0] < n) continue;  // block-preserving
    std::vector<int> img(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) img[static_cast<std::size_t>(v)] = g[v] - n;
    Perm f(std::move(img));
    if (!is_digraph_isomorphism(d1, d2, f))
      throw std::logic_error("isomorphism: candidate failed verification");
    return f;
  }
  return std::nullopt;
}

// Colors = orbits of the generated group on ordered pairs, numbered by first
// appearance in row-major order (so a transitive group puts the diagonal at
// color 0).  Forward closure under the generators suffices: in a finite
// group every inverse is a positive power.
inline ColoredDigraph orbital_coloring(const std::vector<Perm>& gens, int n) {
  for (const Perm& g : gens)
    if (g.degree() != n)
      throw std::invalid_argument("orbital_coloring: generator degree mismatch");
  ColoredDigraph cd;
  cd.n = n;
  cd.color.assign(static_cast<std::size_t>(n) * n, -1);
  int next = 0;
  std::vector<int> queue;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (cd.at(u, v) != -1) continue;
      const int c = next++;
      cd.at(u, v) = c;
      queue.assign(1, u * n + v);
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const int pu = queue[head] / n, pv = queue[head] % n;
        for (const Perm& g : gens) {
          const int iu = g[pu], iv = g[pv];
          if (cd.at(iu, iv) == -1) {
            cd.at(iu, iv) = c;
            queue.push_back(iu * n + iv);
          }
        }
      }
    }
  cd.num_colors = next;
  return cd;
}

// Largest subgroup of Sym(n) preserving every orbital of the given group:
// the automorphism group of the orbital coloring.  Always contains the input
// group; equals it exactly when that group is 2-closed.
inline AutResult two_closure(const std::vector<Perm>& gens, int n,
                             SearchBudget budget = {}) {
  return automorphism_group(orbital_coloring(gens, n), budget);
}

// True iff the group generated by aut.generators moves one arc onto every
// arc.  Requires the generators to be automorphisms of d (returns false on
// any violation it happens to see).
inline bool arc_transitive(const Digraph& d, const AutResult& aut) {
  const auto arcs = d.arcs_sorted();
  if (arcs.empty()) return true;
  const int n = d.n();
  std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
  std::vector<int> queue;
  const int start = arcs[0].first * n + arcs[0].second;
  seen[static_cast<std::size_t>(start)] = 1;
  queue.assign(1, start);
  std::size_t reached = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head] / n, v = queue[head] % n;
    for (const Perm& g : aut.generators) {
      const int w = g[u] * n + g[v];
      if (!seen[static_cast<std::size_t>(w)]) {
        if (!d.arc(g[u], g[v])) return false;
        seen[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
        ++reached;
      }
    }
  }
  return reached == d.arc_count();
}

}  // namespace cci
