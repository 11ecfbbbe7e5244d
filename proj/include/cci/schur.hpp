#pragma once
// Schur rings over a finite group, working in the integral group algebra.
//
// A Schur ring is described here by a partition of the element indices of a
// GroupTable into classes such that the class sums span a subring of the
// group algebra: the identity forms its own class, every class is mapped onto
// a class by inversion, and the product of any two class sums is constant on
// every class.  The module provides exact group-algebra arithmetic (64-bit
// coefficients with loud overflow detection), partition utilities, the
// transitivity module of a point stabiliser, the smallest Schur-ring
// partition whose span contains a given subset's simple quantity, the
// automorphism group of the colouring induced by a partition, and a full
// check of the product table of the stabiliser-orbit class sums for the
// bracket groups of matgroup.hpp.

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cci/aut_search.hpp"
#include "cci/digraph.hpp"
#include "cci/fq.hpp"
#include "cci/group_table.hpp"
#include "cci/matgroup.hpp"
#include "cci/perm.hpp"
#include "cci/perm_group.hpp"

namespace cci {

// ---------------------------------------------------------------------------
// Group algebra vectors.
// ---------------------------------------------------------------------------

// One integer coefficient per element index of a GroupTable.  All arithmetic
// below is overflow-checked: an out-of-range intermediate throws instead of
// wrapping, so results are exact whenever a value is returned.
using GroupVec = std::vector<long long>;

inline long long checked_add(long long a, long long b) {
  long long r = 0;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("group algebra: addition overflows 64 bits");
  return r;
}

inline long long checked_mul(long long a, long long b) {
  long long r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("group algebra: multiplication overflows 64 bits");
  return r;
}

// 0/1 indicator vector of a subset of element indices.
inline GroupVec simple_quantity(int n, const std::vector<int>& s) {
  if (n < 0) throw std::invalid_argument("simple_quantity: negative length");
  GroupVec v(static_cast<std::size_t>(n), 0);
  for (int x : s) {
    if (x < 0 || x >= n) throw std::out_of_range("simple_quantity: element out of range");
    v[static_cast<std::size_t>(x)] = 1;
  }
  return v;
}

inline void check_vec(const GroupTable& t, const GroupVec& u, const char* who) {
  if (static_cast<int>(u.size()) != t.order())
    throw std::invalid_argument(std::string(who) + ": vector length does not match the group order");
}

// Convolution product: the coefficient of g in u*v is the sum of u_h * v_k
// over all factorisations h*k = g.
inline GroupVec gmul(const GroupTable& t, const GroupVec& u, const GroupVec& v) {
  check_vec(t, u, "gmul");
  check_vec(t, v, "gmul");
  const int n = t.order();
  GroupVec out(static_cast<std::size_t>(n), 0);
  for (int h = 0; h < n; ++h) {
    if (u[static_cast<std::size_t>(h)] == 0) continue;
    const long long uh = u[static_cast<std::size_t>(h)];
    for (int k = 0; k < n; ++k) {
      if (v[static_cast<std::size_t>(k)] == 0) continue;
      auto& slot = out[static_cast<std::size_t>(t.mul(h, k))];
      slot = checked_add(slot, checked_mul(uh, v[static_cast<std::size_t>(k)]));
    }
  }
  return out;
}

inline GroupVec vec_add(const GroupVec& u, const GroupVec& v) {
  if (u.size() != v.size()) throw std::invalid_argument("vec_add: length mismatch");
  GroupVec out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = checked_add(u[i], v[i]);
  return out;
}

inline GroupVec vec_scale(GroupVec u, long long c) {
  for (auto& x : u) x = checked_mul(x, c);
  return u;
}

// Pointwise (Hadamard, or Schur) product.
inline GroupVec hadamard(const GroupVec& u, const GroupVec& v) {
  if (u.size() != v.size()) throw std::invalid_argument("hadamard: length mismatch");
  GroupVec out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = checked_mul(u[i], v[i]);
  return out;
}

// 0/1 indicator of the positions where u takes the value c.
inline GroupVec level_set(const GroupVec& u, long long c) {
  GroupVec out(u.size(), 0);
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] == c) out[i] = 1;
  return out;
}

// ---------------------------------------------------------------------------
// Class partitions.
// ---------------------------------------------------------------------------

// A partition of the element indices 0..n-1 into classes.  make_partition
// normalises: members ascending within each class, classes ordered by
// (size, smallest member).  When the partition is a Schur ring this places
// the identity class {0} first, so the induced colouring gives the diagonal
// colour 0.
struct SRingPartition {
  std::vector<std::vector<int>> classes;
  std::vector<int> class_of;  // element index -> class index

  int n() const { return static_cast<int>(class_of.size()); }
  int rank() const { return static_cast<int>(classes.size()); }
};

inline SRingPartition make_partition(int n, std::vector<std::vector<int>> classes) {
  if (n < 0) throw std::invalid_argument("make_partition: negative length");
  SRingPartition p;
  for (auto& cls : classes) {
    if (cls.empty()) continue;
    std::sort(cls.begin(), cls.end());
    p.classes.push_back(std::move(cls));
  }
  std::sort(p.classes.begin(), p.classes.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a.front() < b.front();
            });
  p.class_of.assign(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < p.classes.size(); ++i)
    for (int x : p.classes[i]) {
      if (x < 0 || x >= n) throw std::invalid_argument("make_partition: element out of range");
      if (p.class_of[static_cast<std::size_t>(x)] != -1)
        throw std::invalid_argument("make_partition: classes overlap");
      p.class_of[static_cast<std::size_t>(x)] = static_cast<int>(i);
    }
  for (int x = 0; x < n; ++x)
    if (p.class_of[static_cast<std::size_t>(x)] == -1)
      throw std::invalid_argument("make_partition: classes do not cover every element");
  return p;
}

// One line per class, members space-separated, classes in partition order.
inline std::string to_text(const SRingPartition& p) {
  std::string out;
  for (const auto& cls : p.classes) {
    for (std::size_t i = 0; i < cls.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(cls[i]);
    }
    out += '\n';
  }
  return out;
}

inline SRingPartition partition_from_text(int n, const std::string& text) {
  std::vector<std::vector<int>> classes;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::vector<int> cls;
    int x = 0;
    while (ls >> x) cls.push_back(x);
    if (!ls.eof()) throw std::invalid_argument("partition_from_text: bad token");
    if (!cls.empty()) classes.push_back(std::move(cls));
  }
  return make_partition(n, std::move(classes));
}

namespace detail {

// Product of two class sums.  Coefficients are bounded by the class sizes,
// far below 64 bits, so plain increments are exact.
inline GroupVec class_product(const GroupTable& t, const std::vector<int>& a,
                              const std::vector<int>& b) {
  GroupVec w(static_cast<std::size_t>(t.order()), 0);
  for (int x : a)
    for (int y : b) ++w[static_cast<std::size_t>(t.mul(x, y))];
  return w;
}

}  // namespace detail

// Checks whether the partition is a Schur ring over the group: the identity
// is its own class, inversion maps every class onto a class, and every
// product of two class sums is constant on every class.  A structurally
// malformed partition (not covering 0..n-1 disjointly, or class_of out of
// sync with classes) throws invalid_argument; axiom failures return false.
inline bool is_sring(const GroupTable& t, const SRingPartition& p) {
  const int n = t.order();
  if (p.n() != n)
    throw std::invalid_argument("is_sring: partition length does not match the group order");
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < p.classes.size(); ++i) {
    if (p.classes[i].empty()) throw std::invalid_argument("is_sring: empty class");
    for (int x : p.classes[i]) {
      if (x < 0 || x >= n) throw std::invalid_argument("is_sring: element out of range");
      if (owner[static_cast<std::size_t>(x)] != -1)
        throw std::invalid_argument("is_sring: classes overlap");
      owner[static_cast<std::size_t>(x)] = static_cast<int>(i);
    }
  }
  for (int x = 0; x < n; ++x) {
    if (owner[static_cast<std::size_t>(x)] == -1)
      throw std::invalid_argument("is_sring: classes do not cover every element");
    if (p.class_of[static_cast<std::size_t>(x)] != owner[static_cast<std::size_t>(x)])
      throw std::invalid_argument("is_sring: class_of is out of sync with classes");
  }

  if (p.classes[static_cast<std::size_t>(p.class_of[0])].size() != 1) return false;

  for (const auto& cls : p.classes) {
    std::vector<int> image;
    image.reserve(cls.size());
    for (int x : cls) image.push_back(t.inv(x));
    std::sort(image.begin(), image.end());
    if (image != p.classes[static_cast<std::size_t>(p.class_of[static_cast<std::size_t>(image.front())] )])
      return false;
  }

  for (const auto& a : p.classes)
    for (const auto& b : p.classes) {
      const GroupVec w = detail::class_product(t, a, b);
      for (const auto& cls : p.classes) {
        const long long c0 = w[static_cast<std::size_t>(cls.front())];
        for (int x : cls)
          if (w[static_cast<std::size_t>(x)] != c0) return false;
      }
    }
  return true;
}

// Orbit partition of a group of permutations of the element indices that
// fixes the identity: the transitivity module.  Its class sums always span a
// Schur ring.
inline SRingPartition transitivity_module(const GroupTable& t, const std::vector<Perm>& ge_gens) {
  const int n = t.order();
  for (const Perm& g : ge_gens) {
    if (g.degree() != n)
      throw std::invalid_argument("transitivity_module: generator degree does not match the group order");
    if (g[0] != 0)
      throw std::invalid_argument("transitivity_module: generators must fix the identity element");
  }
  return make_partition(n, orbit_partition(ge_gens, n));
}

// The coarsest Schur-ring partition whose span contains the simple quantity
// of s.  Starts from {identity}, s minus the identity, and the rest, then
// alternates two forced refinements until stable: split every class by the
// class of the inverse of each member, and split every class by the
// coefficient every product of two class sums assigns to each member.  Each
// split is necessary in any Schur ring containing the seed, so the fixed
// point is the unique coarsest one.
inline SRingPartition generated_sring(const GroupTable& t, const std::vector<int>& s) {
  const int n = t.order();
  std::vector<char> in_s(static_cast<std::size_t>(n), 0);
  for (int x : s) {
    if (x < 0 || x >= n) throw std::out_of_range("generated_sring: element out of range");
    in_s[static_cast<std::size_t>(x)] = 1;
  }
  std::vector<int> inside, outside;
  for (int x = 1; x < n; ++x) (in_s[static_cast<std::size_t>(x)] ? inside : outside).push_back(x);
  std::vector<std::vector<int>> seed{{0}};
  if (!inside.empty()) seed.push_back(std::move(inside));
  if (!outside.empty()) seed.push_back(std::move(outside));
  SRingPartition p = make_partition(n, std::move(seed));

  // Regroups every class by the key function; returns whether anything split.
  auto split_all = [&](auto&& key) {
    std::vector<std::vector<int>> next;
    bool split = false;
    for (const auto& cls : p.classes) {
      if (cls.size() == 1) {
        next.push_back(cls);
        continue;
      }
      std::map<long long, std::vector<int>> groups;
      for (int x : cls) groups[key(x)].push_back(x);
      if (groups.size() > 1) split = true;
      for (auto& [value, members] : groups) next.push_back(std::move(members));
    }
    if (split) p = make_partition(n, std::move(next));
    return split;
  };

  for (bool changed = true; changed;) {
    changed = false;
    while (split_all([&](int x) { return static_cast<long long>(p.class_of[static_cast<std::size_t>(t.inv(x))]); }))
      changed = true;
    // Restart the pair scan after every split so the class list stays valid.
    for (bool split = true; split;) {
      split = false;
      for (std::size_t i = 0; i < p.classes.size() && !split; ++i)
        for (std::size_t j = 0; j < p.classes.size() && !split; ++j) {
          const GroupVec w = detail::class_product(t, p.classes[i], p.classes[j]);
          split = split_all([&](int x) { return w[static_cast<std::size_t>(x)]; });
        }
      if (split) changed = true;
    }
  }
  return p;
}

// Automorphism group of the colouring that gives the pair (x, y) the class
// of x * y^{-1}.  Requires the partition to be a Schur ring (throws
// invalid_argument otherwise); the identity class makes the diagonal a
// colour of its own, as the search requires.
inline AutResult sring_aut(const GroupTable& t, const SRingPartition& p, SearchBudget budget = {}) {
  if (!is_sring(t, p))
    throw std::invalid_argument("sring_aut: partition is not a Schur ring over the group");
  const int n = t.order();
  ColoredDigraph cd;
  cd.n = n;
  cd.num_colors = p.rank();
  cd.color.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      cd.at(x, y) = p.class_of[static_cast<std::size_t>(t.mul(x, t.inv(y)))];
  return automorphism_group(cd, budget);
}

// ---------------------------------------------------------------------------
// The product table of the stabiliser-orbit class sums for the bracket
// group H over F_q.
// ---------------------------------------------------------------------------

// Outcome of checking every product of two stabiliser-orbit class sums
// against its closed form.  Nine families of identities cover all pairs of
// singleton S_a = {[1,(a,0)]}, single coset C_b = {[1,(z,b)] : z} with b != 0,
// and parabolic P_t = {[-1,(t+z^2,2z)] : z} sums:
//
//   S_a S_r = S_{a+r}              C_b S_r = C_b
//   S_a C_s = C_s                  C_b C_s = q C_{b+s}   (b+s != 0)
//   S_a P_t = P_{t-a}              C_b C_{-b} = q H2
//   P_c S_r = P_{c+r}              C_b P_t = H - H1
//   P_c C_s = H - H1               P_c P_t = q S_{t-c} + (H1 - H2)
//
// where H1 = {[1,(x,y)]} and H2 = {[1,(t,0)]} are the subgroups of order q^2
// and q.
struct Table1Report {
  int q = 0;
  long long checks = 0;
  std::vector<std::string> mismatches;  // labels of failed identities

  bool all_match() const { return mismatches.empty(); }
};

inline Table1Report verify_table1(int q) {
  if (!is_odd_prime(q)) throw std::invalid_argument("verify_table1: q must be an odd prime");
  const GroupTable h = h_bracket_table(q);
  const int n = h.order();
  Table1Report rep;
  rep.q = q;

  auto singleton = [&](int a) {
    GroupVec v(static_cast<std::size_t>(n), 0);
    v[static_cast<std::size_t>(h_index(HElem{1, mod_norm(a, q), 0}, q))] = 1;
    return v;
  };
  auto coset = [&](int b) {
    GroupVec v(static_cast<std::size_t>(n), 0);
    for (int z = 0; z < q; ++z) v[static_cast<std::size_t>(h_index(HElem{1, z, mod_norm(b, q)}, q))] = 1;
    return v;
  };
  auto parabolic = [&](int t) {
    GroupVec v(static_cast<std::size_t>(n), 0);
    for (int z = 0; z < q; ++z)
      v[static_cast<std::size_t>(
          h_index(HElem{-1, mod_add(mod_norm(t, q), mod_mul(z, z, q), q), mod_mul(2, z, q)}, q))] = 1;
    return v;
  };
  GroupVec h1(static_cast<std::size_t>(n), 0);  // subgroup of the [1,*] elements
  for (int i = 0; i < q * q; ++i) h1[static_cast<std::size_t>(i)] = 1;
  GroupVec h2(static_cast<std::size_t>(n), 0);  // subgroup of the [1,(t,0)] elements
  for (int t = 0; t < q; ++t) h2[static_cast<std::size_t>(t * q)] = 1;
  GroupVec upper(static_cast<std::size_t>(n), 0);  // complement of h1: the [-1,*] elements
  for (int i = q * q; i < n; ++i) upper[static_cast<std::size_t>(i)] = 1;
  GroupVec h1_minus_h2(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < q * q; ++i)
    h1_minus_h2[static_cast<std::size_t>(i)] = h1[static_cast<std::size_t>(i)] - h2[static_cast<std::size_t>(i)];

  auto expect = [&](const GroupVec& got, const GroupVec& want, std::string label) {
    ++rep.checks;
    if (got != want) rep.mismatches.push_back(std::move(label));
  };
  auto tag = [](const char* fam, const char* u, int a, const char* v, int b) {
    return std::string(fam) + " " + u + "=" + std::to_string(a) + " " + v + "=" + std::to_string(b);
  };

  for (int a = 0; a < q; ++a) {
    for (int r = 0; r < q; ++r)
      expect(gmul(h, singleton(a), singleton(r)), singleton(a + r), tag("S*S", "a", a, "r", r));
    for (int s = 1; s < q; ++s)
      expect(gmul(h, singleton(a), coset(s)), coset(s), tag("S*C", "a", a, "s", s));
    for (int t = 0; t < q; ++t)
      expect(gmul(h, singleton(a), parabolic(t)), parabolic(t - a + q), tag("S*P", "a", a, "t", t));
  }
  for (int b = 1; b < q; ++b) {
    for (int r = 0; r < q; ++r)
      expect(gmul(h, coset(b), singleton(r)), coset(b), tag("C*S", "b", b, "r", r));
    for (int s = 1; s < q; ++s) {
      const GroupVec want = (b + s) % q == 0 ? vec_scale(h2, q) : vec_scale(coset(b + s), q);
      expect(gmul(h, coset(b), coset(s)), want, tag("C*C", "b", b, "s", s));
    }
    for (int t = 0; t < q; ++t)
      expect(gmul(h, coset(b), parabolic(t)), upper, tag("C*P", "b", b, "t", t));
  }
  for (int c = 0; c < q; ++c) {
    for (int r = 0; r < q; ++r)
      expect(gmul(h, parabolic(c), singleton(r)), parabolic(c + r), tag("P*S", "c", c, "r", r));
    for (int s = 1; s < q; ++s)
      expect(gmul(h, parabolic(c), coset(s)), upper, tag("P*C", "c", c, "s", s));
    for (int t = 0; t < q; ++t)
      expect(gmul(h, parabolic(c), parabolic(t)),
             vec_add(vec_scale(singleton(t - c + q), q), h1_minus_h2), tag("P*P", "c", c, "t", t));
  }
  return rep;
}

}  // namespace cci
