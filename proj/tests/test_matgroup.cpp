#include <algorithm>
#include <set>
#include <unordered_set>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "cci/fq.hpp"
#include "cci/group_table.hpp"
#include "cci/matgroup.hpp"
#include "cci/perm.hpp"
#include "cci/perm_group.hpp"
#include "cci/stab_chain.hpp"

using namespace cci;

namespace {

std::vector<HElem> all_h(int q) {
  std::vector<HElem> v;
  for (int i = 0; i < h_degree(q); ++i) v.push_back(h_at(i, q));
  return v;
}

std::vector<DElem> all_d(int q) {
  std::vector<DElem> v;
  for (int a : {1, -1})
    for (int x = 0; x < q; ++x) v.push_back(DElem{a, x});
  return v;
}

std::unordered_set<std::uint64_t> code_set(const std::vector<Mat3>& ms) {
  std::unordered_set<std::uint64_t> s;
  for (const Mat3& m : ms) s.insert(mat_code(m));
  return s;
}

}  // namespace

TEST_CASE("field helpers") {
  REQUIRE(is_odd_prime(3));
  REQUIRE(is_odd_prime(13));
  REQUIRE_FALSE(is_odd_prime(2));
  REQUIRE_FALSE(is_odd_prime(9));
  REQUIRE_FALSE(is_odd_prime(1));
  REQUIRE(mod_norm(-1, 7) == 6);
  REQUIRE(mod_norm(15, 7) == 1);
  for (int q : {3, 5, 7, 11, 13}) {
    REQUIRE(mod_mul(half(q), 2, q) == 1);
    for (int a = 1; a < q; ++a) REQUIRE(mod_mul(a, mod_inv(a, q), q) == 1);
  }
  REQUIRE_THROWS_AS(mod_inv(0, 5), std::domain_error);
  REQUIRE(mod_pow(3, 6, 11) == 3);
  REQUIRE(mod_pow(5, 6, 13) == 12);
}

TEST_CASE("matrix arithmetic") {
  const int q = 7;
  Mat3 id = mat_identity(q);
  Mat3 m;
  m.q = q;
  m.a = {{{1, 2, 3}, {0, 1, 4}, {0, 0, 1}}};
  REQUIRE(mat_mul(m, id) == m);
  REQUIRE(mat_mul(id, m) == m);
  REQUIRE(mat_mul(m, mat_inv(m)) == id);
  REQUIRE(mat_mul(mat_inv(m), m) == id);
  REQUIRE(mat_det(m) == 1);
  Mat3 sing;
  sing.q = q;
  sing.a = {{{1, 0, 0}, {0, 1, 0}, {1, 0, 0}}};
  REQUIRE(mat_det(sing) == 0);
  REQUIRE_THROWS_AS(mat_inv(sing), std::domain_error);
  REQUIRE(mat_code(m) != mat_code(id));
}

TEST_CASE("bracket products match the matrix embeddings") {
  for (int q : {3, 5}) {
    // D-brackets multiply in the same order as their matrices.
    for (const DElem& u : all_d(q))
      for (const DElem& v : all_d(q)) {
        REQUIRE(m_d(d_mul(u, v, q), q) == mat_mul(m_d(u, q), m_d(v, q)));
      }
    // H-brackets multiply in the opposite order of their matrices ...
    for (const HElem& u : all_h(q))
      for (const HElem& v : all_h(q)) {
        REQUIRE(m_h(h_mul(u, v, q), q) == mat_mul(m_h(v, q), m_h(u, q)));
      }
    // ... while the mirror group K realises the same bracket product in
    // direct matrix order.
    for (const HElem& u : all_h(q))
      for (const HElem& v : all_h(q)) {
        REQUIRE(m_k(h_mul(u, v, q), q) == mat_mul(m_k(u, q), m_k(v, q)));
      }
    for (const DElem& u : all_d(q)) REQUIRE(m_d(d_inv(u, q), q) == mat_inv(m_d(u, q)));
    for (const HElem& u : all_h(q)) {
      REQUIRE(m_h(h_inv(u, q), q) == mat_inv(m_h(u, q)));
      REQUIRE(h_mul(u, h_inv(u, q), q) == h_identity());
    }
  }
}

TEST_CASE("stabiliser conjugation formula agrees with matrix conjugation") {
  for (int q : {3, 5, 7}) {
    for (const HElem& h : all_h(q))
      for (const DElem& d : all_d(q)) {
        const Mat3 lhs = mat_mul(mat_inv(m_d(d, q)), mat_mul(m_h(h, q), m_d(d, q)));
        REQUIRE(lhs == m_h(d_act_h(h, d, q), q));
      }
  }
}

TEST_CASE("group construction and subgroup relations") {
  for (int q : {3, 5, 7}) {
    const MatGroups mg = build_groups(q);
    const std::size_t qq = static_cast<std::size_t>(q);
    REQUIRE(mg.d_elems.size() == 2 * qq);
    REQUIRE(mg.h_elems.size() == 2 * qq * qq);
    REQUIRE(mg.k_elems.size() == 2 * qq * qq);
    REQUIRE(mg.g_elems.size() == 4 * qq * qq * qq);

    const auto dset = code_set(mg.d_elems);
    const auto hset = code_set(mg.h_elems);
    const auto kset = code_set(mg.k_elems);
    const auto gset = code_set(mg.g_elems);

    // D meets H trivially; H and K are contained in G.
    int common = 0;
    for (const Mat3& m : mg.d_elems)
      if (hset.count(mat_code(m))) ++common;
    REQUIRE(common == 1);
    for (const Mat3& m : mg.h_elems) REQUIRE(gset.count(mat_code(m)) == 1);
    for (const Mat3& m : mg.k_elems) REQUIRE(gset.count(mat_code(m)) == 1);

    // H and K are normal in G; D is not, and has trivial core.
    for (const Mat3& g : mg.g_elems) {
      const Mat3 gi = mat_inv(g);
      for (const Mat3& h : mg.h_gens) REQUIRE(hset.count(mat_code(mat_mul(gi, mat_mul(h, g)))) == 1);
      for (const Mat3& k : mg.k_gens) REQUIRE(kset.count(mat_code(mat_mul(gi, mat_mul(k, g)))) == 1);
    }
    for (const Mat3& d : mg.d_elems) {
      if (d == mat_identity(q)) continue;
      bool escapes = false;
      for (const Mat3& g : mg.g_elems) {
        if (!dset.count(mat_code(mat_mul(mat_inv(g), mat_mul(d, g))))) {
          escapes = true;
          break;
        }
      }
      REQUIRE(escapes);  // every nontrivial element of D leaves D under some conjugation
    }

    // G = H D with unique factorisation.
    std::unordered_set<std::uint64_t> products;
    for (const Mat3& h : mg.h_elems)
      for (const Mat3& d : mg.d_elems) products.insert(mat_code(mat_mul(h, d)));
    REQUIRE(products.size() == mg.g_elems.size());
    for (const Mat3& g : mg.g_elems) {
      const HDParts p = hd_parts(g);
      REQUIRE(mat_mul(m_h(p.h, q), m_d(p.d, q)) == g);
    }
  }
}

TEST_CASE("coset action: homomorphism, faithfulness, regular restriction") {
  for (int q : {3, 5}) {
    const MatGroups mg = build_groups(q);
    const int n = h_degree(q);

    // Homomorphism on all pairs of generators and a few longer words.
    std::vector<Mat3> words = mg.g_gens;
    words.push_back(mat_mul(mg.g_gens[0], mg.g_gens[3]));
    words.push_back(mat_mul(mg.g_gens[4], mg.g_gens[1]));
    for (const Mat3& m : words)
      for (const Mat3& w : words)
        REQUIRE(coset_perm(q, mat_mul(m, w)) == compose(coset_perm(q, m), coset_perm(q, w)));

    // The image of G is faithful of order 4q^3 and transitive.
    PermGroup gimg(n, coset_perms(q, mg.g_gens));
    REQUIRE(gimg.order() == 4ull * q * q * q);
    REQUIRE(gimg.is_transitive());

    // The stabiliser of the identity label is the image of D.
    for (const Mat3& d : mg.d_gens) REQUIRE(coset_perm(q, d)[0] == 0);
    PermGroup dimg(n, coset_perms(q, mg.d_gens));
    REQUIRE(dimg.order() == 2ull * q);

    // Restricted to H the action is right multiplication by inverses.
    for (const HElem& h0 : all_h(q)) {
      const Perm pi = coset_perm(q, m_h(h0, q));
      for (int i = 0; i < n; ++i)
        REQUIRE(pi[i] == h_index(h_mul(h_at(i, q), h_inv(h0, q), q), q));
    }

    // The images of H and K act regularly.
    PermGroup himg(n, coset_perms(q, mg.h_gens));
    PermGroup kimg(n, coset_perms(q, mg.k_gens));
    REQUIRE(himg.is_regular());
    REQUIRE(kimg.is_regular());
  }
}

TEST_CASE("orbit families match the brute-force stabiliser orbits") {
  for (int q : {3, 5, 7}) {
    const MatGroups mg = build_groups(q);
    const int n = h_degree(q);
    const auto fams = orbit_families(q);
    REQUIRE(static_cast<int>(fams.size()) == family_count(q));

    // Counts by kind: q singletons, (q-1)/2 merged cosets, q parabolics.
    int singles = 0, cosets = 0, parabolics = 0;
    for (const auto& f : fams) {
      if (f.kind == FamilyKind::Singleton) {
        ++singles;
        REQUIRE(f.members.size() == 1);
      } else if (f.kind == FamilyKind::Coset) {
        ++cosets;
        REQUIRE(f.members.size() == static_cast<std::size_t>(2 * q));
      } else {
        ++parabolics;
        REQUIRE(f.members.size() == static_cast<std::size_t>(q));
      }
    }
    REQUIRE(singles == q);
    REQUIRE(cosets == (q - 1) / 2);
    REQUIRE(parabolics == q);

    // The families are exactly the orbits of the stabiliser's image.
    const auto brute = orbit_partition(coset_perms(q, mg.d_gens), n);
    std::vector<std::vector<int>> declared;
    for (const auto& f : fams) declared.push_back(f.members);
    std::sort(declared.begin(), declared.end());
    auto brute_sorted = brute;
    std::sort(brute_sorted.begin(), brute_sorted.end());
    REQUIRE(declared == brute_sorted);

    // Membership classification agrees, and the total mass is |H|.
    std::size_t mass = 0;
    for (std::size_t fi = 0; fi < fams.size(); ++fi) {
      mass += fams[fi].members.size();
      for (int m : fams[fi].members)
        REQUIRE(family_index_of(h_at(m, q), q) == static_cast<int>(fi));
    }
    REQUIRE(mass == static_cast<std::size_t>(n));

    // Inverse pairing: S_t pairs with S_{-t}, cosets and parabolics are
    // self-paired; the only self-paired singleton is S_0.
    for (std::size_t fi = 0; fi < fams.size(); ++fi) {
      std::vector<int> inv_members;
      for (int m : fams[fi].members) inv_members.push_back(h_index(h_inv(h_at(m, q), q), q));
      std::sort(inv_members.begin(), inv_members.end());
      const auto& f = fams[fi];
      if (f.kind == FamilyKind::Singleton) {
        const auto& expect = fams[static_cast<std::size_t>(mod_norm(-f.t, q))].members;
        REQUIRE(inv_members == expect);
        if (f.t != 0) REQUIRE(inv_members != f.members);
      } else {
        REQUIRE(inv_members == f.members);
      }
    }
  }
  // The family size multiset at q = 3.
  std::multiset<std::size_t> sizes;
  for (const auto& f : orbit_families(3)) sizes.insert(f.members.size());
  REQUIRE(sizes == std::multiset<std::size_t>{1, 1, 1, 3, 3, 3, 6});
}

TEST_CASE("alpha is an involution fixing G and D and swapping H with K") {
  for (int q : {3, 5}) {
    const MatGroups mg = build_groups(q);
    const auto dset = code_set(mg.d_elems);
    const auto hset = code_set(mg.h_elems);
    const auto kset = code_set(mg.k_elems);
    const auto gset = code_set(mg.g_elems);
    for (const Mat3& g : mg.g_elems) {
      REQUIRE(alpha(alpha(g)) == g);
      REQUIRE(gset.count(mat_code(alpha(g))) == 1);
    }
    // alpha respects products: it is an automorphism on G.
    for (const Mat3& g : mg.g_gens)
      for (const Mat3& w : mg.g_gens) REQUIRE(alpha(mat_mul(g, w)) == mat_mul(alpha(g), alpha(w)));
    for (const Mat3& d : mg.d_elems) REQUIRE(dset.count(mat_code(alpha(d))) == 1);
    for (const Mat3& h : mg.h_elems) REQUIRE(kset.count(mat_code(alpha(h))) == 1);
    for (const Mat3& k : mg.k_elems) REQUIRE(hset.count(mat_code(alpha(k))) == 1);
    // Explicit image of an H-bracket under alpha.
    for (const HElem& h : all_h(q)) {
      Mat3 expect;
      expect.q = q;
      const int af = sign_to_field(h.a, q);
      expect.a = {{{1, mod_norm(-static_cast<long long>(h.a) * h.y, q),
                    mod_norm(-static_cast<long long>(h.a) * h.x, q)},
                   {0, af, 0},
                   {0, 0, af}}};
      REQUIRE(alpha(m_h(h, q)) == expect);
    }
  }
}

TEST_CASE("alpha_hat companions") {
  for (int q : {3, 5, 7}) {
    const MatGroups mg = build_groups(q);
    const auto dset = code_set(mg.d_elems);
    for (const HElem& h : all_h(q)) {
      // The right-coset companion satisfies h^alpha (alpha_hat(h))^{-1} in D.
      const Mat3 w = mat_mul(alpha(m_h(h, q)), mat_inv(m_h(alpha_hat(h, q), q)));
      REQUIRE(dset.count(mat_code(w)) == 1);
      // The left-coset companion is the H-part of alpha itself.
      REQUIRE(hd_parts(alpha(m_h(h, q))).h == alpha_hat_left(h, q));
      // Both maps fix the identity and act on families by
      // S_t -> S_{-t}, C_t -> C_t, P_t -> P_{-t}.
      for (const HElem hh : {alpha_hat(h, q), alpha_hat_left(h, q)}) {
        const int fi = family_index_of(h, q);
        const int fo = family_index_of(hh, q);
        const auto fams = orbit_families(q);
        const Family& f = fams[static_cast<std::size_t>(fi)];
        int expect;
        if (f.kind == FamilyKind::Singleton)
          expect = mod_norm(-f.t, q);
        else if (f.kind == FamilyKind::Coset)
          expect = fi;
        else
          expect = q + (q - 1) / 2 + mod_norm(-f.t, q);
        REQUIRE(fo == expect);
      }
    }
    REQUIRE(alpha_hat(h_identity(), q) == h_identity());
    REQUIRE(alpha_hat_left(h_identity(), q) == h_identity());
    REQUIRE(alpha_hat_perm(q)[0] == 0);
    REQUIRE(alpha_hat_left_perm(q)[0] == 0);
    // Both are involutions of the label set.
    const Perm ar = alpha_hat_perm(q);
    const Perm al = alpha_hat_left_perm(q);
    REQUIRE(compose(ar, ar).is_identity());
    REQUIRE(compose(al, al).is_identity());
  }

  // Conjugation by the left companion normalises the image of G in the coset
  // action; the right-coset companion does not in this labelling.
  for (int q : {3, 5}) {
    const MatGroups mg = build_groups(q);
    StabilizerChain chain = StabilizerChain::build(h_degree(q), coset_perms(q, mg.g_gens));
    const Perm al = alpha_hat_left_perm(q);
    const Perm ar = alpha_hat_perm(q);
    bool left_normalises = true, right_normalises = true;
    for (const Mat3& g : mg.g_gens) {
      const Perm pi = coset_perm(q, g);
      if (!chain.contains(conjugate(pi, al))) left_normalises = false;
      if (!chain.contains(conjugate(pi, ar))) right_normalises = false;
    }
    REQUIRE(left_normalises);
    REQUIRE_FALSE(right_normalises);
  }
}

TEST_CASE("parameter choice and connection sets") {
  REQUIRE(choose_x(7) == 3);
  REQUIRE(choose_x(11) == 3);
  REQUIRE(choose_x(13) == 5);
  REQUIRE_THROWS_AS(choose_x(5), std::invalid_argument);

  REQUIRE(build_t_set(3).size() == 4);
  REQUIRE(build_t_set(5).size() == 6);
  REQUIRE(build_t_set(7).size() == 35);
  REQUIRE(build_t_set(11).size() == 55);
  REQUIRE(build_t_set(11, 4).size() == 55);
  REQUIRE(build_t_set(13).size() == 65);

  // Inverse closure: the sets are symmetric for q >= 7 and directed below.
  auto closed_under_inverse = [](int q, const std::vector<int>& s) {
    std::set<int> ss(s.begin(), s.end());
    for (int i : s)
      if (!ss.count(h_index(h_inv(h_at(i, q), q), q))) return false;
    return true;
  };
  REQUIRE_FALSE(closed_under_inverse(3, build_t_set(3)));
  REQUIRE_FALSE(closed_under_inverse(5, build_t_set(5)));
  REQUIRE(closed_under_inverse(7, build_t_set(7)));
  REQUIRE(closed_under_inverse(11, build_t_set(11)));
  REQUIRE(closed_under_inverse(5, build_symmetric_set(5)));
  REQUIRE(build_symmetric_set(5).size() == 7);

  // The partner set is the alpha_hat image, under either companion.
  for (int q : {3, 5, 7, 11}) {
    const auto t = build_t_set(q);
    const auto tp = build_t_prime_set(q);
    for (const Perm& a : {alpha_hat_perm(q), alpha_hat_left_perm(q)}) {
      std::vector<int> image;
      for (int i : t) image.push_back(a[i]);
      std::sort(image.begin(), image.end());
      REQUIRE(image == tp);
    }
  }
}

TEST_CASE("H as an abstract table is generalised dihedral") {
  for (int q : {3, 5}) {
    const GroupTable h = h_bracket_table(q);
    REQUIRE(h.order() == 2 * q * q);
    int involutions = 0, order_q = 0;
    for (int e = 0; e < h.order(); ++e) {
      const int o = h.order_of(e);
      if (o == 2) ++involutions;
      if (o == q) ++order_q;
    }
    REQUIRE(involutions == q * q);
    REQUIRE(order_q == q * q - 1);
    const GroupTable zq2 = GroupTable::direct_product(GroupTable::cyclic(q), GroupTable::cyclic(q));
    REQUIRE(is_isomorphic(h, GroupTable::generalized_dihedral(zq2)));
  }
}
