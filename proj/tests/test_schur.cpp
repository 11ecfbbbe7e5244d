#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "cci/group_table.hpp"
#include "cci/matgroup.hpp"
#include "cci/perm.hpp"
#include "cci/perm_group.hpp"
#include "cci/schur.hpp"

using namespace cci;

namespace {

GroupVec class_vec(int n, const std::vector<int>& members) { return simple_quantity(n, members); }

// Every class of fine lies inside a single class of coarse.
bool refines(const SRingPartition& fine, const SRingPartition& coarse) {
  if (fine.n() != coarse.n()) return false;
  for (const auto& cls : fine.classes)
    for (int x : cls)
      if (coarse.class_of[x] != coarse.class_of[cls.front()]) return false;
  return true;
}

SRingPartition discrete_partition(int n) {
  std::vector<std::vector<int>> classes;
  classes.reserve(n);
  for (int x = 0; x < n; ++x) classes.push_back({x});
  return make_partition(n, std::move(classes));
}

SRingPartition coset_module(int q) {
  const MatGroups mg = build_groups(q);
  return transitivity_module(h_bracket_table(q), coset_perms(q, mg.d_gens));
}

std::vector<int> coset_class(int q, int b) {
  std::vector<int> out;
  for (int z = 0; z < q; ++z) out.push_back(h_index(HElem{1, z, mod_norm(b, q)}, q));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> parabolic_class(int q, int t) {
  std::vector<int> out;
  for (int z = 0; z < q; ++z)
    out.push_back(h_index(HElem{-1, mod_add(mod_norm(t, q), mod_mul(z, z, q), q), mod_mul(2, z, q)}, q));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("group algebra arithmetic is exact and loud") {
  const GroupTable z4 = GroupTable::cyclic(4);

  SECTION("simple quantities") {
    const GroupVec v = simple_quantity(4, {1, 3, 1});
    REQUIRE(v == GroupVec{0, 1, 0, 1});
    REQUIRE_THROWS_AS(simple_quantity(4, {4}), std::out_of_range);
    REQUIRE_THROWS_AS(simple_quantity(4, {-1}), std::out_of_range);

    const GroupVec t7 = simple_quantity(h_degree(7), build_t_set(7));
    long long weight = 0;
    for (long long c : t7) weight += c;
    REQUIRE(weight == 35);  // three parabolic classes of size 7 plus a coset pair of size 14
  }

  SECTION("identity element is a unit for the convolution") {
    const GroupTable d6 = GroupTable::dihedral(6);
    const GroupVec e = simple_quantity(d6.order(), {0});
    std::mt19937_64 rng(0x5EEDC0DE1234ULL);
    GroupVec u(d6.order());
    for (auto& x : u) x = static_cast<long long>(rng() % 101) - 50;
    REQUIRE(gmul(d6, e, u) == u);
    REQUIRE(gmul(d6, u, e) == u);
  }

  SECTION("associativity and distributivity on seeded dense vectors") {
    const GroupTable d6 = GroupTable::dihedral(6);
    std::mt19937_64 rng(0x5EEDC0DE5678ULL);
    auto rand_vec = [&] {
      GroupVec v(d6.order());
      for (auto& x : v) x = static_cast<long long>(rng() % 41) - 20;
      return v;
    };
    for (int trial = 0; trial < 8; ++trial) {
      const GroupVec u = rand_vec(), v = rand_vec(), w = rand_vec();
      REQUIRE(gmul(d6, gmul(d6, u, v), w) == gmul(d6, u, gmul(d6, v, w)));
      REQUIRE(gmul(d6, u, vec_add(v, w)) == vec_add(gmul(d6, u, v), gmul(d6, u, w)));
    }
  }

  SECTION("convolution is group multiplication on basis vectors") {
    const GroupTable s3 = GroupTable::dihedral(3);
    for (int a = 0; a < s3.order(); ++a)
      for (int b = 0; b < s3.order(); ++b) {
        const GroupVec prod = gmul(s3, simple_quantity(6, {a}), simple_quantity(6, {b}));
        REQUIRE(prod == simple_quantity(6, {s3.mul(a, b)}));
      }
  }

  SECTION("hadamard product and level sets") {
    const GroupVec u{3, 0, 2, 3};
    const GroupVec v{1, 5, 0, 2};
    REQUIRE(hadamard(u, v) == GroupVec{3, 0, 0, 6});
    REQUIRE(level_set(u, 3) == GroupVec{1, 0, 0, 1});
    REQUIRE(level_set(u, 7) == GroupVec{0, 0, 0, 0});

    // Reconstruction: summing c * level_set(u, c) over the values of u gives u back.
    GroupVec rebuilt(u.size(), 0);
    for (long long c : std::set<long long>(u.begin(), u.end()))
      rebuilt = vec_add(rebuilt, vec_scale(level_set(u, c), c));
    REQUIRE(rebuilt == u);
  }

  SECTION("overflow throws instead of wrapping") {
    GroupVec big(4, 0);
    big[0] = 1LL << 40;
    big[1] = 1LL << 40;
    REQUIRE_THROWS_AS(gmul(z4, big, big), std::overflow_error);
    REQUIRE_THROWS_AS(hadamard(big, big), std::overflow_error);
    REQUIRE_THROWS_AS(vec_scale(big, 1LL << 40), std::overflow_error);
    GroupVec max(4, 0);
    max[2] = std::numeric_limits<long long>::max();
    REQUIRE_THROWS_AS(vec_add(max, max), std::overflow_error);
  }

  SECTION("length mismatches are rejected") {
    REQUIRE_THROWS_AS(gmul(z4, GroupVec(3, 0), GroupVec(4, 0)), std::invalid_argument);
    REQUIRE_THROWS_AS(hadamard(GroupVec(3, 0), GroupVec(4, 0)), std::invalid_argument);
  }
}

TEST_CASE("class partitions normalise, validate and serialise") {
  SECTION("normalisation orders classes by size then smallest member") {
    const SRingPartition p = make_partition(6, {{5, 3}, {0}, {4, 1, 2}});
    REQUIRE(p.classes == std::vector<std::vector<int>>{{0}, {3, 5}, {1, 2, 4}});
    REQUIRE(p.class_of == std::vector<int>{0, 2, 2, 1, 2, 1});
    REQUIRE(p.rank() == 3);
    REQUIRE(p.n() == 6);
  }

  SECTION("ties between equal-sized classes break on the smallest member") {
    const SRingPartition p = make_partition(4, {{3, 2}, {1, 0}});
    REQUIRE(p.classes == std::vector<std::vector<int>>{{0, 1}, {2, 3}});
  }

  SECTION("malformed inputs throw") {
    REQUIRE_THROWS_AS(make_partition(3, {{0, 1}}), std::invalid_argument);          // misses 2
    REQUIRE_THROWS_AS(make_partition(3, {{0, 1}, {1, 2}}), std::invalid_argument);  // overlap
    REQUIRE_THROWS_AS(make_partition(3, {{0, 1, 3}}), std::invalid_argument);       // out of range
  }

  SECTION("text round-trip") {
    const SRingPartition p = make_partition(5, {{0}, {2, 1}, {3, 4}});
    REQUIRE(to_text(p) == "0\n1 2\n3 4\n");
    const SRingPartition back = partition_from_text(5, to_text(p));
    REQUIRE(back.classes == p.classes);
    REQUIRE(back.class_of == p.class_of);
    REQUIRE_THROWS_AS(partition_from_text(2, "0 x\n1\n"), std::invalid_argument);
  }
}

TEST_CASE("transitivity modules are schur rings") {
  SECTION("the trivial stabiliser gives the discrete partition") {
    const GroupTable z6 = GroupTable::cyclic(6);
    const SRingPartition p = transitivity_module(z6, {Perm::identity(6)});
    REQUIRE(p.rank() == 6);
    REQUIRE(is_sring(z6, p));
  }

  SECTION("the full point stabiliser gives the rank-two partition") {
    const GroupTable z5 = GroupTable::cyclic(5);
    const std::vector<Perm> ge{perm_from_cycles(5, {{1, 2}}), perm_from_cycles(5, {{1, 2, 3, 4}})};
    const SRingPartition p = transitivity_module(z5, ge);
    REQUIRE(p.classes == std::vector<std::vector<int>>{{0}, {1, 2, 3, 4}});
    REQUIRE(is_sring(z5, p));
  }

  SECTION("the coset module lists one class per stabiliser orbit") {
    const SRingPartition p = coset_module(5);
    REQUIRE(p.rank() == family_count(5));
    std::vector<std::vector<int>> fam_classes;
    for (const Family& f : orbit_families(5)) fam_classes.push_back(f.members);
    REQUIRE(p.classes == make_partition(h_degree(5), std::move(fam_classes)).classes);
    REQUIRE(is_sring(h_bracket_table(5), p));
  }

  SECTION("bad generators are rejected") {
    const GroupTable z6 = GroupTable::cyclic(6);
    REQUIRE_THROWS_AS(transitivity_module(z6, {Perm::identity(5)}), std::invalid_argument);
    const Perm shift = perm_from_cycles(6, {{0, 1, 2, 3, 4, 5}});
    REQUIRE_THROWS_AS(transitivity_module(z6, {shift}), std::invalid_argument);
  }
}

TEST_CASE("schur ring axioms accept and reject the right partitions") {
  SECTION("group-case rings on a small group") {
    const GroupTable z4 = GroupTable::cyclic(4);
    REQUIRE(is_sring(z4, discrete_partition(4)));
    REQUIRE(is_sring(z4, make_partition(4, {{0}, {1, 2, 3}})));
    REQUIRE(is_sring(z4, make_partition(4, {{0}, {2}, {1, 3}})));
    // {1} is not inverse-closed and {2,3} is not a coset: both axioms fail.
    REQUIRE_FALSE(is_sring(z4, make_partition(4, {{0}, {1}, {2, 3}})));
    // The identity must be alone in its class.
    REQUIRE_FALSE(is_sring(z4, make_partition(4, {{0, 2}, {1, 3}})));
  }

  SECTION("splitting one merged coset pair but not the other breaks closure") {
    const int q = 5;
    const GroupTable h = h_bracket_table(q);
    std::vector<std::vector<int>> classes;
    for (int a = 0; a < q; ++a) classes.push_back({h_index(HElem{1, a, 0}, q)});
    classes.push_back(coset_class(q, 1));
    classes.push_back(coset_class(q, 4));
    std::vector<int> merged_cosets = coset_class(q, 2);
    for (int x : coset_class(q, 3)) merged_cosets.push_back(x);
    classes.push_back(std::move(merged_cosets));
    std::vector<int> parabolics;
    for (int t = 0; t < q; ++t)
      for (int x : parabolic_class(q, t)) parabolics.push_back(x);
    classes.push_back(std::move(parabolics));
    // C_1 * C_1 = q C_2 is supported on only half of the merged class C_2 u C_3.
    REQUIRE_FALSE(is_sring(h, make_partition(h.order(), std::move(classes))));
  }

  SECTION("splitting every coset class keeps closure") {
    const int q = 5;
    const GroupTable h = h_bracket_table(q);
    std::vector<std::vector<int>> classes;
    for (int a = 0; a < q; ++a) classes.push_back({h_index(HElem{1, a, 0}, q)});
    for (int b = 1; b < q; ++b) classes.push_back(coset_class(q, b));
    std::vector<int> parabolics;
    for (int t = 0; t < q; ++t)
      for (int x : parabolic_class(q, t)) parabolics.push_back(x);
    classes.push_back(std::move(parabolics));
    REQUIRE(is_sring(h, make_partition(h.order(), std::move(classes))));
  }

  SECTION("structurally broken partitions throw") {
    const GroupTable z4 = GroupTable::cyclic(4);
    SRingPartition p = discrete_partition(4);
    p.class_of[1] = 2;  // out of sync with classes
    REQUIRE_THROWS_AS(is_sring(z4, p), std::invalid_argument);
    REQUIRE_THROWS_AS(is_sring(GroupTable::cyclic(5), discrete_partition(4)), std::invalid_argument);
  }
}

TEST_CASE("generated schur rings are the forced closures") {
  SECTION("the full non-identity class generates the rank-two ring") {
    for (const GroupTable& t : {GroupTable::cyclic(6), GroupTable::dihedral(4)}) {
      std::vector<int> all;
      for (int x = 1; x < t.order(); ++x) all.push_back(x);
      const SRingPartition p = generated_sring(t, all);
      REQUIRE(p.rank() == 2);
      REQUIRE(is_sring(t, p));
    }
  }

  SECTION("an inverse-closed difference set on a cycle") {
    const GroupTable z5 = GroupTable::cyclic(5);
    const SRingPartition p = generated_sring(z5, {1, 4});
    REQUIRE(p.classes == std::vector<std::vector<int>>{{0}, {1, 4}, {2, 3}});
    REQUIRE(is_sring(z5, p));

    // Every transitivity module keeping {1,4} together refines the closure.
    const SRingPartition fine =
        transitivity_module(z5, {perm_from_cycles(5, {{1, 4}})});
    REQUIRE(fine.classes == std::vector<std::vector<int>>{{0}, {2}, {3}, {1, 4}});
    REQUIRE(refines(fine, p));
    const SRingPartition exact =
        transitivity_module(z5, {perm_from_cycles(5, {{1, 4}, {2, 3}})});
    REQUIRE(exact.classes == p.classes);
  }

  SECTION("a one-sided generator forces the discrete ring on a cycle") {
    const GroupTable z4 = GroupTable::cyclic(4);
    REQUIRE(generated_sring(z4, {1}).rank() == 4);
    REQUIRE(generated_sring(z4, {2}).classes ==
            std::vector<std::vector<int>>{{0}, {2}, {1, 3}});
  }

  SECTION("idempotence: regenerating from a class union changes nothing") {
    const GroupTable z12 = GroupTable::cyclic(12);
    const SRingPartition p = generated_sring(z12, {2, 10});
    REQUIRE(is_sring(z12, p));
    for (const auto& cls : p.classes) {
      // p is itself a ring containing each class, so it refines the coarsest one.
      const SRingPartition coarsest = generated_sring(z12, cls);
      REQUIRE(refines(p, coarsest));
    }
    // The union of the generating class with the identity class regenerates p.
    std::vector<int> seed{0, 2, 10};
    REQUIRE(generated_sring(z12, seed).classes == p.classes);
  }

  SECTION("the distinguished connection set generates the full coset module at q = 3") {
    const GroupTable h = h_bracket_table(3);
    const SRingPartition gen = generated_sring(h, build_t_set(3));
    REQUIRE(gen.classes == coset_module(3).classes);
    REQUIRE(gen.rank() == family_count(3));
    REQUIRE(is_sring(h, gen));
  }

  SECTION("at q = 5 the closure is strictly coarser: all cosets merge") {
    const int q = 5;
    const GroupTable h = h_bracket_table(q);
    const SRingPartition gen = generated_sring(h, build_t_set(q));

    // The seed S_1 u P_0 has no coset part, so no product or level set ever
    // separates one merged coset family from the other: the twenty coset
    // elements stay in a single class and the closure has rank 11, one less
    // than the full module.
    std::vector<std::vector<int>> expected;
    for (int a = 0; a < q; ++a) expected.push_back({h_index(HElem{1, a, 0}, q)});
    std::vector<int> cosets;
    for (int b = 1; b < q; ++b)
      for (int x : coset_class(q, b)) cosets.push_back(x);
    expected.push_back(std::move(cosets));
    for (int t = 0; t < q; ++t) expected.push_back(parabolic_class(q, t));
    const SRingPartition want = make_partition(h.order(), std::move(expected));
    REQUIRE(is_sring(h, want));  // the coarse partition is independently closed
    REQUIRE(gen.classes == want.classes);
    REQUIRE(gen.rank() == family_count(q) - 1);

    const SRingPartition module = coset_module(q);
    REQUIRE(refines(module, gen));
    REQUIRE(gen.classes != module.classes);

    // Automorphism cross-check on independent machinery: the ring colouring
    // and the plain Cayley digraph agree, at twice the coset-action closure.
    REQUIRE(sring_aut(h, gen).order == 1000);
    REQUIRE(automorphism_group(cayley(h, build_t_set(q))).order == 1000);
  }

  SECTION("at q = 7 the subgroup line cannot split and the parabolics merge") {
    const int q = 7;
    const GroupTable h = h_bracket_table(q);
    const SRingPartition gen = generated_sring(h, build_t_set(q));

    // The six differences +-1, +-x, +-(x-1) exhaust the nonzero residues
    // modulo 7, so the level sets of the squared seed keep the line
    // H_2 \ {e} whole; the fixed point keeps the seed's parabolic triple
    // together and merges the four remaining parabolic families.
    std::vector<std::vector<int>> expected;
    expected.push_back({0});
    std::vector<int> line;
    for (int a = 1; a < q; ++a) line.push_back(h_index(HElem{1, a, 0}, q));
    expected.push_back(std::move(line));
    for (int t = 1; t <= (q - 1) / 2; ++t) {
      std::vector<int> pair = coset_class(q, t);
      for (int x : coset_class(q, q - t)) pair.push_back(x);
      expected.push_back(std::move(pair));
    }
    std::vector<int> seed_parab, rest_parab;
    for (int t = 0; t < q; ++t) {
      auto& dst = (t == 0 || t == 1 || t == choose_x(q)) ? seed_parab : rest_parab;
      for (int x : parabolic_class(q, t)) dst.push_back(x);
    }
    expected.push_back(std::move(seed_parab));
    expected.push_back(std::move(rest_parab));
    const SRingPartition want = make_partition(h.order(), std::move(expected));
    REQUIRE(is_sring(h, want));
    REQUIRE(gen.classes == want.classes);
    REQUIRE(gen.rank() == 7);
    REQUIRE(refines(coset_module(q), gen));

    // Yet the digraph's automorphism group is exactly the coset-action
    // closure: this ring is strictly smaller than the orbit module of its
    // own automorphism group.
    REQUIRE(sring_aut(h, gen).order == 1372);
    REQUIRE(automorphism_group(cayley(h, build_t_set(q))).order == 1372);
  }

  SECTION("the admissible parameter recovers full equality at q = 11") {
    const int q = 11;
    const GroupTable h = h_bracket_table(q);
    const SRingPartition gen = generated_sring(h, build_t_set(q, choose_x(q)));
    REQUIRE(gen.classes == coset_module(q).classes);
    REQUIRE(gen.rank() == family_count(q));
  }
}

TEST_CASE("ring automorphism groups") {
  SECTION("the discrete ring leaves only the right translations") {
    for (const GroupTable& t : {GroupTable::cyclic(6), GroupTable::dihedral(3)}) {
      const AutResult aut = sring_aut(t, discrete_partition(t.order()));
      REQUIRE(aut.order == static_cast<unsigned long long>(t.order()));
      PermGroup pg(t.order(), aut.generators);
      for (int g = 0; g < t.order(); ++g) {
        std::vector<int> img(t.order());
        for (int x = 0; x < t.order(); ++x) img[x] = t.mul(x, g);
        REQUIRE(pg.contains(Perm(img)));
      }
    }
  }

  SECTION("the rank-two ring admits the full symmetric group") {
    const GroupTable z4 = GroupTable::cyclic(4);
    const AutResult aut = sring_aut(z4, make_partition(4, {{0}, {1, 2, 3}}));
    REQUIRE(aut.order == 24);
  }

  SECTION("the coset module automorphisms form the closure of the coset action") {
    const int q = 5;
    const SRingPartition module = coset_module(q);
    const AutResult aut = sring_aut(h_bracket_table(q), module);
    REQUIRE(aut.order == 500);  // 4 q^3
    PermGroup pg(h_degree(q), aut.generators);
    for (const Perm& g : coset_perms(q, build_groups(q).g_gens)) REQUIRE(pg.contains(g));
  }

  SECTION("a partition that is not a ring is rejected") {
    const GroupTable z4 = GroupTable::cyclic(4);
    REQUIRE_THROWS_AS(sring_aut(z4, make_partition(4, {{0}, {1}, {2, 3}})), std::invalid_argument);
  }
}

TEST_CASE("stabiliser-orbit class sums multiply in closed form") {
  for (int q : {3, 5, 7}) {
    const Table1Report rep = verify_table1(q);
    INFO("q = " << q);
    REQUIRE(rep.q == q);
    REQUIRE(rep.checks == static_cast<long long>(3 * q - 1) * (3 * q - 1));
    REQUIRE(rep.all_match());
  }
  REQUIRE_THROWS_AS(verify_table1(9), std::invalid_argument);
}

TEST_CASE("the squared connection set separates the orbit families at q = 11") {
  const int q = 11;
  const int x = choose_x(q);
  REQUIRE(x == 3);
  const GroupTable h = h_bracket_table(q);
  const int n = h.order();
  const GroupVec t_vec = simple_quantity(n, build_t_set(q));
  const GroupVec t2 = gmul(h, t_vec, t_vec);

  // Expected coefficients, one value per orbit family: 5q at the identity,
  // 3q on the six singletons separated by the parameter, 2q on the remaining
  // singletons, q+9 on the coset pair at double the merged index, 9 on the
  // other cosets, 12 on the parabolic half.
  GroupVec want(n, 0);
  auto put = [&](const std::vector<int>& members, long long c) {
    for (int m : members) want[m] = c;
  };
  put({0}, 5 * q);
  const std::set<int> near{1, q - 1, x, q - x, x - 1, q - (x - 1)};
  for (int a = 1; a < q; ++a)
    put({h_index(HElem{1, a, 0}, q)}, near.count(a) ? 3 * q : 2 * q);
  for (int b = 1; b < q; ++b) put(coset_class(q, b), (b == 2 || b == q - 2) ? q + 9 : 9);
  for (int t = 0; t < q; ++t) put(parabolic_class(q, t), 12);
  REQUIRE(t2 == want);

  // The level sets cut out exactly the advertised unions.
  GroupVec upper(n, 0);
  for (int i = q * q; i < n; ++i) upper[i] = 1;
  REQUIRE(level_set(t2, 12) == upper);
  std::vector<int> c2 = coset_class(q, 2);
  for (int m : coset_class(q, q - 2)) c2.push_back(m);
  REQUIRE(level_set(t2, q + 9) == simple_quantity(n, c2));
  REQUIRE(level_set(t2, 5 * q) == simple_quantity(n, {0}));
  REQUIRE(hadamard(t2, simple_quantity(n, coset_class(q, 2))) ==
          vec_scale(simple_quantity(n, coset_class(q, 2)), q + 9));

  // Reconstruction from all level sets.
  GroupVec rebuilt(n, 0);
  for (long long c : std::set<long long>(t2.begin(), t2.end()))
    rebuilt = vec_add(rebuilt, vec_scale(level_set(t2, c), c));
  REQUIRE(rebuilt == t2);
}

TEST_CASE("the two canonical subgroups behave as subgroups") {
  for (int q : {3, 5, 7}) {
    const GroupTable h = h_bracket_table(q);
    const int n = h.order();
    GroupVec h1(n, 0), h2(n, 0);
    for (int i = 0; i < q * q; ++i) h1[i] = 1;
    for (int t = 0; t < q; ++t) h2[t * q] = 1;
    // An indicator vector of a subgroup squares to its order times itself.
    REQUIRE(gmul(h, h1, h1) == vec_scale(h1, q * q));
    REQUIRE(gmul(h, h2, h2) == vec_scale(h2, q));
    // H2 is inside H1, and both contain the identity.
    REQUIRE(hadamard(h1, h2) == h2);
    REQUIRE(h1[0] == 1);
  }
}
