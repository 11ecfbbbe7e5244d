#pragma once

// Generalised dihedral groups Dih(A) = A . <x> with x^2 = 1 and x inverting
// every element of the abelian group A, their regular permutation
// representations, and the order-54 worked example over Z_3^3 together with
// its 9-involution Cayley graph and Haar-graph realisation.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "cci/digraph.hpp"
#include "cci/group_table.hpp"
#include "cci/perm.hpp"

namespace cci {

// Right translation v -> v*g as a permutation of the element indices of t.
inline Perm right_regular_perm(const GroupTable& t, int g) {
  std::vector<int> img(static_cast<std::size_t>(t.order()));
  for (int v = 0; v < t.order(); ++v) img[static_cast<std::size_t>(v)] = t.mul(v, g);
  return Perm(std::move(img));
}

inline std::vector<Perm> right_regular_perms(const GroupTable& t,
                                             const std::vector<int>& gens) {
  std::vector<Perm> out;
  out.reserve(gens.size());
  for (int g : gens) out.push_back(right_regular_perm(t, g));
  return out;
}

// Regular permutation representation of Dih(A) for an abelian permutation
// group A given by generators.
//
// Element indices: the elements of A occupy 0..|A|-1 (their sorted order as
// permutations), the coset A*x occupies |A|..2|A|-1, and the inverting
// involution x itself sits at index |A|.
struct DihedralRep {
  GroupTable a_table;            // A as an abstract table
  GroupTable table;              // Dih(A), order 2|A|
  std::vector<Perm> a_elements;  // sorted elements of A (original degree)
  std::vector<int> a_gen_indices;  // indices in `table` of the input generators
  int involution = 0;              // index of x in `table` (= |A|)
  std::vector<Perm> regular;  // right-regular images of a_gen_indices then x
};

inline DihedralRep dih(const std::vector<Perm>& a_gens) {
  if (a_gens.empty()) throw std::invalid_argument("dih: need at least one generator");
  for (std::size_t i = 0; i < a_gens.size(); ++i)
    for (std::size_t j = i + 1; j < a_gens.size(); ++j)
      if (compose(a_gens[i], a_gens[j]) != compose(a_gens[j], a_gens[i]))
        throw std::invalid_argument("dih: generators do not commute");

  DihedralRep rep;
  rep.a_table = GroupTable::from_perm_closure(a_gens, &rep.a_elements);
  rep.table = GroupTable::generalized_dihedral(rep.a_table);
  rep.involution = rep.a_table.order();
  for (const Perm& g : a_gens) {
    const auto it = std::lower_bound(rep.a_elements.begin(), rep.a_elements.end(), g);
    rep.a_gen_indices.push_back(static_cast<int>(it - rep.a_elements.begin()));
  }
  std::vector<int> gens = rep.a_gen_indices;
  gens.push_back(rep.involution);
  rep.regular = right_regular_perms(rep.table, gens);
  return rep;
}

// The order-54 example: A = <(0 1 2), (3 4 5), (6 7 8)> = Z_3^3, R = Dih(A)
// as the closure of A and x = (0 1)(3 4)(6 7) inside Sym(9), and the Cayley
// graph of R on the 9-element connection set of involutions
//   { w*x : w in {1, e1, e2, e3, e1e2, e1^2e2^2, e2e3, e2^2e3^2, e1^2e2^2e3^2} }.
struct SpecialCase {
  GroupTable r;                // order 54, identity at 0
  std::vector<Perm> r_points;  // sorted degree-9 permutation elements of R
  std::vector<int> s;          // connection set (indices into r), size 9
  std::vector<int> a_indices;  // the index-2 abelian subgroup A, size 27
  int x_index = 0;             // index of x
  Digraph gamma;               // cayley(r, s)
};

inline SpecialCase special_case_z27() {
  const int deg = 9;
  const Perm e1 = perm_from_cycles(deg, {{0, 1, 2}});
  const Perm e2 = perm_from_cycles(deg, {{3, 4, 5}});
  const Perm e3 = perm_from_cycles(deg, {{6, 7, 8}});
  const Perm x = perm_from_cycles(deg, {{0, 1}, {3, 4}, {6, 7}});

  SpecialCase sc;
  sc.r = GroupTable::from_perm_closure({e1, e2, e3, x}, &sc.r_points);
  const auto index_of = [&](const Perm& p) {
    const auto it = std::lower_bound(sc.r_points.begin(), sc.r_points.end(), p);
    if (it == sc.r_points.end() || *it != p)
      throw std::logic_error("special_case_z27: element not found in closure");
    return static_cast<int>(it - sc.r_points.begin());
  };

  const Perm e1e1 = compose(e1, e1), e2e2 = compose(e2, e2), e3e3 = compose(e3, e3);
  const std::vector<Perm> words = {
      Perm::identity(deg),
      e1,
      e2,
      e3,
      compose(e1, e2),
      compose(e1e1, e2e2),
      compose(e2, e3),
      compose(e2e2, e3e3),
      compose(compose(e1e1, e2e2), e3e3),
  };
  for (const Perm& w : words) sc.s.push_back(index_of(compose(w, x)));

  sc.a_indices = sc.r.subgroup_closure({index_of(e1), index_of(e2), index_of(e3)});
  sc.x_index = index_of(x);
  sc.gamma = cayley(sc.r, sc.s);
  return sc;
}

// Haar-graph realisation of the order-54 example: an explicit vertex map
// phi from gamma onto haar(a_table, s_a), where a_table is A as an abstract
// table and s_a collects the A-parts w of the connection elements w*x.
//
// phi sends u in A to its inverse's position on side 0 and u = w*x in A*x to
// the position of w on side 1; arc u -> v with u*v^{-1} = s*x then matches
// the Haar edge pattern because A is abelian.
struct HaarRealization {
  GroupTable a_table;  // A = Z_3^3 as an abstract table, order 27
  std::vector<int> s_a;  // A-parts of the connection set, size 9
  Perm phi;              // vertex bijection gamma -> haar(a_table, s_a)
};

inline HaarRealization haar_realization(const SpecialCase& sc) {
  const int m = static_cast<int>(sc.a_indices.size());
  // Position of each R index inside the sorted list a_indices (-1 outside A).
  std::vector<int> pos(static_cast<std::size_t>(sc.r.order()), -1);
  for (int i = 0; i < m; ++i) pos[static_cast<std::size_t>(sc.a_indices[i])] = i;

  // A as a table in the same sorted order as a_indices.  The permutation
  // elements of A sort identically as a sublist of r_points, so this matches
  // from_perm_closure on A's own generators.
  std::vector<std::uint16_t> mul(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int p = pos[static_cast<std::size_t>(sc.r.mul(sc.a_indices[i], sc.a_indices[j]))];
      if (p < 0) throw std::logic_error("haar_realization: subgroup not closed");
      mul[static_cast<std::size_t>(i) * m + j] = static_cast<std::uint16_t>(p);
    }

  HaarRealization hr;
  hr.a_table = GroupTable::from_mul(m, std::move(mul));
  for (int s : sc.s) {
    const int w = sc.r.mul(s, sc.x_index);  // (w*x)*x = w
    if (pos[static_cast<std::size_t>(w)] < 0)
      throw std::logic_error("haar_realization: connection element has no A-part");
    hr.s_a.push_back(pos[static_cast<std::size_t>(w)]);
  }

  std::vector<int> img(static_cast<std::size_t>(sc.r.order()));
  for (int u = 0; u < sc.r.order(); ++u) {
    if (pos[static_cast<std::size_t>(u)] >= 0)
      img[static_cast<std::size_t>(u)] = pos[static_cast<std::size_t>(sc.r.inv(u))];
    else
      img[static_cast<std::size_t>(u)] = m + pos[static_cast<std::size_t>(sc.r.mul(u, sc.x_index))];
  }
  hr.phi = Perm(std::move(img));
  return hr;
}

}  // namespace cci
