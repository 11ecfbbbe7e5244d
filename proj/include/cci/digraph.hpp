#pragma once

// Dense digraphs and arc-colored digraphs on at most a few thousand vertices,
// plus the Cayley/Haar/circulant constructions and the text serialisation
// used by the command-line harness.
//
// Arc convention for Cayley digraphs: (x, y) is an arc iff x * y^{-1} lies in
// the connection set.  Right translations x -> x*g are then automorphisms.

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cci/group_table.hpp"
#include "cci/perm.hpp"

namespace cci {

class Digraph {
 public:
  Digraph() = default;

  explicit Digraph(int n) : n_(n), words_((static_cast<std::size_t>(n) + 63) / 64),
                            rows_(static_cast<std::size_t>(n) * ((static_cast<std::size_t>(n) + 63) / 64)) {
    if (n < 0 || n > 4096) throw std::invalid_argument("Digraph: vertex count out of range");
  }

  int n() const { return n_; }

  void add_arc(int u, int v) {
    check(u);
    check(v);
    rows_[static_cast<std::size_t>(u) * words_ + static_cast<std::size_t>(v) / 64] |=
        (std::uint64_t{1} << (v % 64));
  }

  bool arc(int u, int v) const {
    check(u);
    check(v);
    return (rows_[static_cast<std::size_t>(u) * words_ + static_cast<std::size_t>(v) / 64] >>
            (v % 64)) & 1u;
  }

  int out_degree(int u) const {
    check(u);
    int d = 0;
    for (std::size_t w = 0; w < words_; ++w)
      d += __builtin_popcountll(rows_[static_cast<std::size_t>(u) * words_ + w]);
    return d;
  }

  std::size_t arc_count() const {
    std::size_t c = 0;
    for (std::uint64_t w : rows_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  bool is_symmetric() const {
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v)
        if (arc(u, v) != arc(v, u)) return false;
    return true;
  }

  std::vector<std::pair<int, int>> arcs_sorted() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(arc_count());
    for (int u = 0; u < n_; ++u)
      for (int v = 0; v < n_; ++v)
        if (arc(u, v)) out.emplace_back(u, v);
    return out;
  }

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  void check(int v) const {
    if (v < 0 || v >= n_) throw std::out_of_range("Digraph: vertex out of range");
  }

  int n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> rows_;
};

// Arc-colored digraph: color[u][v] for every ordered pair, with color 0 on
// the diagonal whenever the coloring is vertex-transitive (all constructions
// in this library arrange that).  Colors are consecutive small integers.
struct ColoredDigraph {
  int n = 0;
  int num_colors = 0;
  std::vector<int> color;  // row-major n*n

  int at(int u, int v) const { return color[static_cast<std::size_t>(u) * n + v]; }
  int& at(int u, int v) { return color[static_cast<std::size_t>(u) * n + v]; }
};

// Plain digraph as a 3-coloring: diagonal 0, arc 1, non-arc 2.
inline ColoredDigraph to_colored(const Digraph& d) {
  ColoredDigraph cd;
  cd.n = d.n();
  cd.num_colors = 3;
  cd.color.assign(static_cast<std::size_t>(cd.n) * cd.n, 0);
  for (int u = 0; u < cd.n; ++u)
    for (int v = 0; v < cd.n; ++v)
      cd.at(u, v) = (u == v) ? 0 : (d.arc(u, v) ? 1 : 2);
  return cd;
}

// Cayley digraph: arc (x, y) iff mul(x, inv(y)) is in s.  The identity is
// rejected from s (no loops).
inline Digraph cayley(const GroupTable& r, const std::vector<int>& s) {
  const int n = r.order();
  std::vector<char> in_s(static_cast<std::size_t>(n), 0);
  for (int e : s) {
    if (e < 0 || e >= n) throw std::out_of_range("cayley: connection element out of range");
    if (e == 0) throw std::invalid_argument("cayley: the identity may not be a connection element");
    in_s[static_cast<std::size_t>(e)] = 1;
  }
  Digraph d(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (in_s[static_cast<std::size_t>(r.mul(x, r.inv(y)))]) d.add_arc(x, y);
  return d;
}

// Haar (bi-coset) graph: vertices g and n+h for g, h in the group; the edge
// set is {{g, n + mul(s, g)} : s in the connection set}, realised as a
// symmetric digraph.  Loops cannot occur (the two sides are disjoint).
inline Digraph haar(const GroupTable& g, const std::vector<int>& s) {
  const int n = g.order();
  Digraph d(2 * n);
  for (int e : s) {
    if (e < 0 || e >= n) throw std::out_of_range("haar: connection element out of range");
    for (int v = 0; v < n; ++v) {
      const int w = n + g.mul(e, v);
      d.add_arc(v, w);
      d.add_arc(w, v);
    }
  }
  return d;
}

// Circulant digraph Cay(Z_n, diffs): arc (u, v) iff (u - v) mod n in diffs.
inline Digraph circulant(int n, const std::vector<int>& diffs) {
  return cayley(GroupTable::cyclic(n), diffs);
}

// Subgraph induced on the given vertices (which become 0..k-1 in the given
// order; the order must be duplicate-free).
inline Digraph induced_subgraph(const Digraph& d, const std::vector<int>& verts) {
  {
    std::vector<int> copy = verts;
    std::sort(copy.begin(), copy.end());
    if (std::adjacent_find(copy.begin(), copy.end()) != copy.end())
      throw std::invalid_argument("induced_subgraph: duplicate vertex");
  }
  Digraph out(static_cast<int>(verts.size()));
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = 0; j < verts.size(); ++j)
      if (i != j && d.arc(verts[i], verts[j])) out.add_arc(static_cast<int>(i), static_cast<int>(j));
  return out;
}

// Two-colors the underlying undirected graph if possible.  On success the
// optional out-parameter receives the side (0/1) of every vertex; isolated
// vertices land on side 0.
inline bool is_bipartite(const Digraph& d, std::vector<int>* side_out = nullptr) {
  const int n = d.n();
  std::vector<int> side(static_cast<std::size_t>(n), -1);
  std::vector<int> queue;
  for (int s = 0; s < n; ++s) {
    if (side[static_cast<std::size_t>(s)] != -1) continue;
    side[static_cast<std::size_t>(s)] = 0;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      for (int v = 0; v < n; ++v) {
        if (!d.arc(u, v) && !d.arc(v, u)) continue;
        if (side[static_cast<std::size_t>(v)] == -1) {
          side[static_cast<std::size_t>(v)] = 1 - side[static_cast<std::size_t>(u)];
          queue.push_back(v);
        } else if (side[static_cast<std::size_t>(v)] == side[static_cast<std::size_t>(u)]) {
          return false;
        }
      }
    }
  }
  if (side_out) *side_out = std::move(side);
  return true;
}

// Checks that the permutation maps arcs onto arcs bijectively.
inline bool is_digraph_automorphism(const Digraph& d, const Perm& p) {
  if (p.degree() != d.n()) return false;
  for (int u = 0; u < d.n(); ++u)
    for (int v = 0; v < d.n(); ++v)
      if (d.arc(u, v) != d.arc(p[u], p[v])) return false;
  return true;
}

// Checks that p maps d1 onto d2 arc by arc.
inline bool is_digraph_isomorphism(const Digraph& d1, const Digraph& d2, const Perm& p) {
  if (d1.n() != d2.n() || p.degree() != d1.n()) return false;
  for (int u = 0; u < d1.n(); ++u)
    for (int v = 0; v < d1.n(); ++v)
      if (d1.arc(u, v) != d2.arc(p[u], p[v])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Text formats.
// ---------------------------------------------------------------------------

// "n m" on the first line, then m lines "u v" in lexicographic order.
inline std::string to_text(const Digraph& d) {
  std::ostringstream os;
  const auto arcs = d.arcs_sorted();
  os << d.n() << ' ' << arcs.size() << '\n';
  for (const auto& [u, v] : arcs) os << u << ' ' << v << '\n';
  return os.str();
}

inline Digraph digraph_from_text(const std::string& text) {
  std::istringstream is(text);
  int n = 0;
  std::size_t m = 0;
  if (!(is >> n >> m)) throw std::invalid_argument("digraph_from_text: bad header");
  Digraph d(n);
  for (std::size_t i = 0; i < m; ++i) {
    int u = 0, v = 0;
    if (!(is >> u >> v)) throw std::invalid_argument("digraph_from_text: truncated arc list");
    d.add_arc(u, v);
  }
  return d;
}

// "n c" on the first line, then n rows of n space-separated colors.
inline std::string to_text(const ColoredDigraph& cd) {
  std::ostringstream os;
  os << cd.n << ' ' << cd.num_colors << '\n';
  for (int u = 0; u < cd.n; ++u) {
    for (int v = 0; v < cd.n; ++v) {
      if (v) os << ' ';
      os << cd.at(u, v);
    }
    os << '\n';
  }
  return os.str();
}

inline ColoredDigraph colored_from_text(const std::string& text) {
  std::istringstream is(text);
  ColoredDigraph cd;
  if (!(is >> cd.n >> cd.num_colors)) throw std::invalid_argument("colored_from_text: bad header");
  cd.color.assign(static_cast<std::size_t>(cd.n) * cd.n, 0);
  for (int u = 0; u < cd.n; ++u)
    for (int v = 0; v < cd.n; ++v)
      if (!(is >> cd.at(u, v))) throw std::invalid_argument("colored_from_text: truncated matrix");
  return cd;
}

}  // namespace cci
