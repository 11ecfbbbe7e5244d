#pragma once

// Abstract finite groups as explicit multiplication tables with the identity
// at index 0, plus deterministic generating tuples, isomorphism search and
// streaming automorphism enumeration.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cci/perm.hpp"

namespace cci {

class GroupTable {
 public:
  GroupTable() : n_(1), mul_{0}, inv_{0} {}

  // Validates: Latin square, identity at 0, associativity.
  static GroupTable from_mul(int n, std::vector<std::uint16_t> mul) {
    if (n <= 0 || n > 65535)
      throw std::invalid_argument("GroupTable: order out of range");
    if (mul.size() != static_cast<std::size_t>(n) * n)
      throw std::invalid_argument("GroupTable: table size mismatch");
    GroupTable g;
    g.n_ = n;
    g.mul_ = std::move(mul);
    for (int a = 0; a < n; ++a) {
      if (g.mul(0, a) != a || g.mul(a, 0) != a)
        throw std::invalid_argument("GroupTable: index 0 is not the identity");
      std::vector<char> row(n, 0), col(n, 0);
      for (int b = 0; b < n; ++b) {
        int r = g.mul(a, b), c = g.mul(b, a);
        if (r < 0 || r >= n || c >= n || row[r] || col[c])
          throw std::invalid_argument("GroupTable: not a Latin square");
        row[r] = col[c] = 1;
      }
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
            throw std::invalid_argument("GroupTable: not associative");
    g.fill_inverses();
    return g;
  }

  // Table of the subgroup generated by `gens`, elements sorted so the
  // identity (lexicographically least permutation) lands at index 0.
  // Entry mul(i,j) is the index of compose(p_i, p_j).
  static GroupTable from_perm_closure(const std::vector<Perm>& gens,
                                      std::vector<Perm>* elements_out = nullptr) {
    if (gens.empty())
      throw std::invalid_argument("from_perm_closure: need at least one generator");
    const int degree = gens[0].degree();
    std::vector<Perm> elems{Perm::identity(degree)};
    // Right-multiplication closure starting from the identity.
    for (std::size_t head = 0; head < elems.size(); ++head) {
      for (const Perm& s : gens) {
        Perm w = compose(elems[head], s);
        if (std::find(elems.begin(), elems.end(), w) == elems.end()) {
          if (elems.size() >= 65535)
            throw std::invalid_argument("from_perm_closure: order above 65535");
          elems.push_back(std::move(w));
        }
      }
    }
    std::sort(elems.begin(), elems.end());
    const int n = static_cast<int>(elems.size());
    auto index_of = [&](const Perm& p) {
      return static_cast<int>(
          std::lower_bound(elems.begin(), elems.end(), p) - elems.begin());
    };
    GroupTable g;
    g.n_ = n;
    g.mul_.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        g.mul_[static_cast<std::size_t>(i) * n + j] =
            static_cast<std::uint16_t>(index_of(compose(elems[i], elems[j])));
    g.fill_inverses();
    if (elements_out) *elements_out = std::move(elems);
    return g;
  }

  static GroupTable cyclic(int n) {
    std::vector<std::uint16_t> mul(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        mul[static_cast<std::size_t>(a) * n + b] =
            static_cast<std::uint16_t>((a + b) % n);
    return from_mul(n, std::move(mul));
  }

  // For abelian A: the group A x <s> with s of order two inverting A.
  // Element e*n + a encodes the word a*s^e; (a s^e)(b s^d) = a b^((-1)^e) s^(e^d).
  static GroupTable generalized_dihedral(const GroupTable& a) {
    if (!a.is_abelian())
      throw std::invalid_argument("generalized_dihedral: base group not abelian");
    const int m = a.order(), n = 2 * m;
    std::vector<std::uint16_t> mul(static_cast<std::size_t>(n) * n);
    for (int e = 0; e < 2; ++e)
      for (int x = 0; x < m; ++x)
        for (int d = 0; d < 2; ++d)
          for (int y = 0; y < m; ++y) {
            int yy = e ? a.inv(y) : y;
            mul[static_cast<std::size_t>(e * m + x) * n + (d * m + y)] =
                static_cast<std::uint16_t>((e ^ d) * m + a.mul(x, yy));
          }
    return from_mul(n, std::move(mul));
  }

  static GroupTable dihedral(int m) { return generalized_dihedral(cyclic(m)); }

  static GroupTable quaternion8() {
    // Index: 0:+1 1:-1 2:+i 3:-i 4:+j 5:-j 6:+k 7:-k.
    // axis products (axes e,i,j,k = 0..3): sign and resulting axis.
    static const int axis[4][4] = {
        {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sign[4][4] = {
        {+1, +1, +1, +1}, {+1, -1, +1, -1}, {+1, -1, -1, +1}, {+1, +1, -1, -1}};
    std::vector<std::uint16_t> mul(64);
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        int ax = a / 2, bx = b / 2;
        int s = (a % 2 ? -1 : 1) * (b % 2 ? -1 : 1) * sign[ax][bx];
        mul[static_cast<std::size_t>(a) * 8 + b] =
            static_cast<std::uint16_t>(2 * axis[ax][bx] + (s < 0 ? 1 : 0));
      }
    return from_mul(8, std::move(mul));
  }

  static GroupTable direct_product(const GroupTable& a, const GroupTable& b) {
    const int na = a.order(), nb = b.order(), n = na * nb;
    std::vector<std::uint16_t> mul(static_cast<std::size_t>(n) * n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        mul[static_cast<std::size_t>(x) * n + y] = static_cast<std::uint16_t>(
            a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb));
    return from_mul(n, std::move(mul));
  }

  int order() const { return n_; }
  int mul(int a, int b) const {
    return mul_[static_cast<std::size_t>(a) * n_ + b];
  }
  int inv(int a) const { return inv_[a]; }

  int order_of(int a) const {
    int k = 1, x = a;
    while (x != 0) {
      x = mul(x, a);
      ++k;
    }
    return k;
  }

  bool is_abelian() const {
    for (int a = 0; a < n_; ++a)
      for (int b = a + 1; b < n_; ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  std::vector<int> element_orders() const {
    std::vector<int> out(n_);
    for (int a = 0; a < n_; ++a) out[a] = order_of(a);
    return out;
  }

  // Subgroup generated by `seed`, as a sorted list of element indices.
  std::vector<int> subgroup_closure(const std::vector<int>& seed) const {
    std::vector<char> in(n_, 0);
    std::vector<int> span{0};
    in[0] = 1;
    for (std::size_t head = 0; head < span.size(); ++head)
      for (int s : seed) {
        int w = mul(span[head], s);
        if (!in[w]) {
          in[w] = 1;
          span.push_back(w);
        }
      }
    std::sort(span.begin(), span.end());
    return span;
  }

  // Greedy deterministic generating tuple: repeatedly adjoin the smallest
  // element outside the span so far.
  std::vector<int> generating_tuple() const {
    std::vector<int> tuple;
    std::vector<char> in(n_, 0);
    in[0] = 1;
    int covered = 1;
    while (covered < n_) {
      int next = -1;
      for (int x = 0; x < n_; ++x)
        if (!in[x]) {
          next = x;
          break;
        }
      tuple.push_back(next);
      for (int x : subgroup_closure(tuple))
        if (!in[x]) {
          in[x] = 1;
          ++covered;
        }
    }
    return tuple;
  }

 private:
  int n_;
  std::vector<std::uint16_t> mul_;
  std::vector<std::uint16_t> inv_;

  void fill_inverses() {
    inv_.assign(n_, 0);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        if (mul(a, b) == 0) {
          inv_[a] = static_cast<std::uint16_t>(b);
          break;
        }
  }
};

namespace detail {

// Propagate the partial map tuple[j] -> img[j] (j < t) from the identity
// across the subgroup the prefix generates.  Returns true iff the map
// extends to a well-defined injective homomorphism there; on return `f`
// holds that extension and `reached` lists the domain elements touched
// (caller must reset `f`/`used` via `reached` afterwards).
inline bool prefix_hom_ok(const GroupTable& a, const GroupTable& b,
                          const std::vector<int>& tuple,
                          const std::vector<int>& img, int t,
                          std::vector<int>& f, std::vector<char>& used,
                          std::vector<int>& reached) {
  reached.clear();
  f[0] = 0;
  used[0] = 1;
  reached.push_back(0);
  for (std::size_t head = 0; head < reached.size(); ++head) {
    int u = reached[head];
    for (int j = 0; j < t; ++j) {
      int w = a.mul(u, tuple[j]);
      int fw = b.mul(f[u], img[j]);
      if (f[w] == -1) {
        if (used[fw]) return false;
        f[w] = fw;
        used[fw] = 1;
        reached.push_back(w);
      } else if (f[w] != fw) {
        return false;
      }
    }
  }
  return true;
}

inline void reset_scratch(std::vector<int>& f, std::vector<char>& used,
                          const std::vector<int>& reached) {
  for (int u : reached) {
    used[f[u]] = 0;
    f[u] = -1;
  }
}

// Depth-first search over images of a generating tuple of `a` inside `b`,
// pruning by element order and by partial-homomorphism consistency at every
// prefix.  Calls `on_iso` with each full isomorphism (as the image array of
// all of `a`); stops early if `on_iso` returns true.
inline void hom_dfs(const GroupTable& a, const GroupTable& b,
                    const std::function<bool(const std::vector<int>&)>& on_iso) {
  if (a.order() != b.order()) return;
  std::vector<int> oa = a.element_orders(), ob = b.element_orders();
  {
    std::vector<int> sa = oa, sb = ob;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return;
  }
  const std::vector<int> tuple = a.generating_tuple();
  const int k = static_cast<int>(tuple.size());
  std::vector<std::vector<int>> cand(k);
  for (int t = 0; t < k; ++t)
    for (int x = 0; x < b.order(); ++x)
      if (ob[x] == oa[tuple[t]]) cand[t].push_back(x);

  std::vector<int> img(k, 0);
  std::vector<int> f(a.order(), -1);
  std::vector<char> used(b.order(), 0);
  std::vector<int> reached;
  bool stop = false;

  std::function<void(int)> rec = [&](int t) {
    if (stop) return;
    bool ok = prefix_hom_ok(a, b, tuple, img, t, f, used, reached);
    if (ok && t == k) {
      // Prefix spans all of `a`: injective homomorphism onto `b`.
      if (on_iso(f)) stop = true;
    }
    reset_scratch(f, used, reached);
    if (!ok || t == k) return;
    for (int c : cand[t]) {
      img[t] = c;
      rec(t + 1);
      if (stop) return;
    }
  };
  rec(0);
}

}  // namespace detail

// First isomorphism a -> b found by the deterministic search, if any.
inline std::optional<std::vector<int>> find_isomorphism(const GroupTable& a,
                                                        const GroupTable& b) {
  std::optional<std::vector<int>> result;
  detail::hom_dfs(a, b, [&](const std::vector<int>& f) {
    result = f;
    return true;
  });
  return result;
}

inline bool is_isomorphic(const GroupTable& a, const GroupTable& b) {
  return find_isomorphism(a, b).has_value();
}

// Streams every automorphism of `g` through `cb` (if given); returns the
// total count.
inline unsigned long long enumerate_automorphisms(
    const GroupTable& g,
    const std::function<void(const std::vector<int>&)>& cb = nullptr) {
  unsigned long long count = 0;
  detail::hom_dfs(g, g, [&](const std::vector<int>& f) {
    ++count;
    if (cb) cb(f);
    return false;
  });
  return count;
}

struct NamedGroup {
  std::string name;
  GroupTable table;
};

// One representative per isomorphism type, orders 1 through 6.
inline std::vector<NamedGroup> groups_through_order6() {
  std::vector<NamedGroup> out;
  out.push_back({"Z1", GroupTable::cyclic(1)});
  out.push_back({"Z2", GroupTable::cyclic(2)});
  out.push_back({"Z3", GroupTable::cyclic(3)});
  out.push_back({"Z4", GroupTable::cyclic(4)});
  out.push_back({"Z2xZ2", GroupTable::direct_product(GroupTable::cyclic(2),
                                                     GroupTable::cyclic(2))});
  out.push_back({"Z5", GroupTable::cyclic(5)});
  out.push_back({"Z6", GroupTable::cyclic(6)});
  out.push_back({"S3", GroupTable::dihedral(3)});
  return out;
}

// One representative per isomorphism type of order 8.
inline std::vector<NamedGroup> groups_of_order8() {
  std::vector<NamedGroup> out;
  out.push_back({"Z8", GroupTable::cyclic(8)});
  out.push_back({"Z4xZ2", GroupTable::direct_product(GroupTable::cyclic(4),
                                                     GroupTable::cyclic(2))});
  out.push_back(
      {"Z2xZ2xZ2",
       GroupTable::direct_product(
           GroupTable::cyclic(2),
           GroupTable::direct_product(GroupTable::cyclic(2),
                                      GroupTable::cyclic(2)))});
  out.push_back({"D8", GroupTable::dihedral(4)});
  out.push_back({"Q8", GroupTable::quaternion8()});
  return out;
}

}  // namespace cci
