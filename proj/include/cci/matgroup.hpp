#pragma once

// Upper-triangular 3x3 matrix groups over F_q (q an odd prime), the bracket
// coordinates for their distinguished subgroups D, H and K, the permutation
// action of the big group G on the coset space G/D, the stabiliser-orbit
// families on H, the anti-transpose outer automorphism alpha, and the
// connection sets used by the Cayley-isomorphism certificates.
//
// Conventions, fixed once and used everywhere:
//   * D-brackets:  [a,x]   with a in {+1,-1}, x in F_q, as the matrix
//                  [[a, ax, a*x^2/2], [0, 1, x], [0, 0, a]].
//   * H-brackets:  [a,(x,y)] as the matrix [[a,0,x],[0,a,y],[0,0,1]].
//   * K-brackets:  [a,(x,y)] as the matrix [[1,x,y],[0,a,0],[0,0,a]].
//   * d_mul implements [a,x][b,y] = [ab, bx+y]; under m_d this agrees with
//     matrix multiplication taken in the same order.
//   * h_mul implements [a,v][b,w] = [ab, bv+w]; under m_h this corresponds to
//     matrix multiplication taken in the *opposite* order, i.e.
//     m_h(h_mul(u,v)) == m_d-style product m_h(v)*m_h(u).  h_mul is the group
//     law of H used by every Cayley digraph and Schur-ring computation.
//   * The coset space G/D is labelled by H-parts of the unique factorisation
//     g = m_h(h) * m_d(d); the right action (gD)^m = m^{-1} g D then restricts
//     on H to right multiplication by h_mul, and the stabiliser of the label
//     of D acts by the conjugation formula d_act_h.

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "cci/fq.hpp"
#include "cci/group_table.hpp"
#include "cci/perm.hpp"

namespace cci {

// ---------------------------------------------------------------------------
// Matrices over F_q.
// ---------------------------------------------------------------------------

struct Mat3 {
  int q = 0;
  std::array<std::array<int, 3>, 3> a{};

  friend bool operator==(const Mat3&, const Mat3&) = default;
};

inline Mat3 mat_identity(int q) {
  Mat3 m;
  m.q = q;
  for (int i = 0; i < 3; ++i) m.a[i][i] = 1;
  return m;
}

inline Mat3 mat_mul(const Mat3& u, const Mat3& v) {
  if (u.q != v.q) throw std::invalid_argument("mat_mul: mixed moduli");
  Mat3 r;
  r.q = u.q;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      long long s = 0;
      for (int k = 0; k < 3; ++k) s += static_cast<long long>(u.a[i][k]) * v.a[k][j];
      r.a[i][j] = mod_norm(s, u.q);
    }
  return r;
}

inline int mat_det(const Mat3& m) {
  long long d = static_cast<long long>(m.a[0][0]) * m.a[1][1] * m.a[2][2] +
                static_cast<long long>(m.a[0][1]) * m.a[1][2] * m.a[2][0] +
                static_cast<long long>(m.a[0][2]) * m.a[1][0] * m.a[2][1] -
                static_cast<long long>(m.a[0][2]) * m.a[1][1] * m.a[2][0] -
                static_cast<long long>(m.a[0][0]) * m.a[1][2] * m.a[2][1] -
                static_cast<long long>(m.a[0][1]) * m.a[1][0] * m.a[2][2];
  return mod_norm(d, m.q);
}

// Inverse via the adjugate; throws for singular input.
inline Mat3 mat_inv(const Mat3& m) {
  const int q = m.q;
  const int det = mat_det(m);
  if (det == 0) throw std::domain_error("mat_inv: singular matrix");
  const int dinv = mod_inv(det, q);
  auto cof = [&](int i, int j) {
    int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
    int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
    long long v = static_cast<long long>(m.a[r0][c0]) * m.a[r1][c1] -
                  static_cast<long long>(m.a[r0][c1]) * m.a[r1][c0];
    return mod_norm(v, q);
  };
  Mat3 r;
  r.q = q;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.a[i][j] = mod_mul(cof(j, i), dinv, q);
  return r;
}

// Injective base-q packing of the nine entries; used as a hash/set key.
inline std::uint64_t mat_code(const Mat3& m) {
  std::uint64_t c = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c = c * static_cast<std::uint64_t>(m.q) + static_cast<std::uint64_t>(m.a[i][j]);
  return c;
}

// Breadth-first closure of a generating set under multiplication, returned
// sorted by mat_code.  Throws if the closure exceeds `cap` elements.
inline std::vector<Mat3> mat_closure(const std::vector<Mat3>& gens, std::size_t cap = 1u << 20) {
  if (gens.empty()) throw std::invalid_argument("mat_closure: no generators");
  const int q = gens.front().q;
  std::unordered_set<std::uint64_t> seen;
  std::vector<Mat3> out;
  out.push_back(mat_identity(q));
  seen.insert(mat_code(out.front()));
  for (std::size_t head = 0; head < out.size(); ++head) {
    const Mat3 cur = out[head];
    for (const Mat3& g : gens) {
      Mat3 nm = mat_mul(cur, g);
      if (seen.insert(mat_code(nm)).second) {
        if (out.size() >= cap) throw std::runtime_error("mat_closure: cap exceeded");
        out.push_back(nm);
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Mat3& x, const Mat3& y) { return mat_code(x) < mat_code(y); });
  return out;
}

// ---------------------------------------------------------------------------
// Bracket coordinates.
// ---------------------------------------------------------------------------

struct DElem {
  int a = 1;  // +1 or -1
  int x = 0;  // in [0, q)
  friend bool operator==(const DElem&, const DElem&) = default;
};

struct HElem {
  int a = 1;  // +1 or -1
  int x = 0;  // in [0, q)
  int y = 0;  // in [0, q)
  friend bool operator==(const HElem&, const HElem&) = default;
};

inline void check_sign(int a) {
  if (a != 1 && a != -1) throw std::invalid_argument("bracket sign must be +1 or -1");
}

// [a,x][b,y] = [ab, bx + y].
inline DElem d_mul(const DElem& u, const DElem& v, int q) {
  return DElem{u.a * v.a, mod_norm(static_cast<long long>(v.a) * u.x + v.x, q)};
}

inline DElem d_inv(const DElem& u, int q) {
  return DElem{u.a, mod_norm(-static_cast<long long>(u.a) * u.x, q)};
}

// [a,(x,y)][b,(z,w)] = [ab, (bx + z, by + w)].
inline HElem h_mul(const HElem& u, const HElem& v, int q) {
  return HElem{u.a * v.a, mod_norm(static_cast<long long>(v.a) * u.x + v.x, q),
               mod_norm(static_cast<long long>(v.a) * u.y + v.y, q)};
}

inline HElem h_inv(const HElem& u, int q) {
  return HElem{u.a, mod_norm(-static_cast<long long>(u.a) * u.x, q),
               mod_norm(-static_cast<long long>(u.a) * u.y, q)};
}

inline HElem h_identity() { return HElem{1, 0, 0}; }

// The conjugation action of the stabiliser D on H:
//   [a,(x,y)] ^ [b,z]  =  [a, ((1-a) z^2 / 2 - b y z + x,  (a-1) z + b y)].
// Under the matrix embeddings this is m_d(d)^{-1} * m_h(h) * m_d(d).
inline HElem d_act_h(const HElem& h, const DElem& d, int q) {
  check_sign(h.a);
  check_sign(d.a);
  const int zz = mod_mul(d.x, d.x, q);
  const int quad = mod_mul(mod_norm(1 - h.a, q), mod_mul(zz, half(q), q), q);
  const int xp = mod_norm(quad - static_cast<long long>(d.a) * h.y % q * d.x + h.x, q);
  const int yp = mod_norm(static_cast<long long>(h.a - 1) * d.x + static_cast<long long>(d.a) * h.y, q);
  return HElem{h.a, xp, yp};
}

// ---------------------------------------------------------------------------
// Matrix embeddings of the bracket coordinates.
// ---------------------------------------------------------------------------

inline int sign_to_field(int a, int q) {
  check_sign(a);
  return a == 1 ? 1 : q - 1;
}

inline int field_to_sign(int v, int q) {
  if (v == 1) return 1;
  if (v == q - 1) return -1;
  throw std::invalid_argument("field value is not +-1");
}

inline Mat3 m_d(const DElem& d, int q) {
  const int af = sign_to_field(d.a, q);
  Mat3 m;
  m.q = q;
  m.a = {{{af, mod_mul(af, d.x, q), mod_mul(af, mod_mul(mod_mul(d.x, d.x, q), half(q), q), q)},
          {0, 1, mod_norm(d.x, q)},
          {0, 0, af}}};
  return m;
}

inline Mat3 m_h(const HElem& h, int q) {
  const int af = sign_to_field(h.a, q);
  Mat3 m;
  m.q = q;
  m.a = {{{af, 0, mod_norm(h.x, q)}, {0, af, mod_norm(h.y, q)}, {0, 0, 1}}};
  return m;
}

inline Mat3 m_k(const HElem& k, int q) {
  const int af = sign_to_field(k.a, q);
  Mat3 m;
  m.q = q;
  m.a = {{{1, mod_norm(k.x, q), mod_norm(k.y, q)}, {0, af, 0}, {0, 0, af}}};
  return m;
}

// ---------------------------------------------------------------------------
// Canonical labelling of H (and of the coset space G/D).
// ---------------------------------------------------------------------------

// Elements of H are numbered 0 .. 2q^2-1: index = s*q^2 + x*q + y where
// s = 0 for a = +1 and s = 1 for a = -1.  The identity [1,(0,0)] gets index 0.
inline int h_index(const HElem& h, int q) {
  check_sign(h.a);
  return (h.a == 1 ? 0 : q * q) + mod_norm(h.x, q) * q + mod_norm(h.y, q);
}

inline HElem h_at(int idx, int q) {
  if (idx < 0 || idx >= 2 * q * q) throw std::out_of_range("h_at: index out of range");
  const int s = idx / (q * q);
  const int r = idx % (q * q);
  return HElem{s == 0 ? 1 : -1, r / q, r % q};
}

inline int h_degree(int q) { return 2 * q * q; }

// Unique factorisation g = m_h(h) * m_d(d) of an element of G.
struct HDParts {
  HElem h;
  DElem d;
};

inline HDParts hd_parts(const Mat3& m) {
  const int q = m.q;
  if (m.a[1][0] != 0 || m.a[2][0] != 0 || m.a[2][1] != 0)
    throw std::invalid_argument("hd_parts: matrix is not upper triangular");
  const int b = field_to_sign(m.a[2][2], q);
  const int c = field_to_sign(m.a[1][1], q);
  if (mod_mul(m.a[0][0], mod_mul(m.a[1][1], m.a[2][2], q), q) != 1)
    throw std::invalid_argument("hd_parts: diagonal product is not 1");
  const int z = mod_norm(static_cast<long long>(c) * b * m.a[0][1], q);
  const int v = mod_norm((static_cast<long long>(m.a[1][2]) - static_cast<long long>(c) * z) * b, q);
  const long long czz = static_cast<long long>(c) * b * mod_mul(mod_mul(z, z, q), half(q), q);
  const int u = mod_norm((static_cast<long long>(m.a[0][2]) - czz) * b, q);
  HDParts parts{HElem{c, u, v}, DElem{b, z}};
  if (mat_mul(m_h(parts.h, q), m_d(parts.d, q)) != m)
    throw std::invalid_argument("hd_parts: matrix is not in G");
  return parts;
}

// The permutation of the coset labels induced by m under (gD)^m = m^{-1} g D.
inline Perm coset_perm(int q, const Mat3& m) {
  const Mat3 minv = mat_inv(m);
  std::vector<int> img(static_cast<std::size_t>(h_degree(q)));
  for (int i = 0; i < h_degree(q); ++i)
    img[static_cast<std::size_t>(i)] =
        h_index(hd_parts(mat_mul(minv, m_h(h_at(i, q), q))).h, q);
  return Perm(img);
}

inline std::vector<Perm> coset_perms(int q, const std::vector<Mat3>& ms) {
  std::vector<Perm> out;
  out.reserve(ms.size());
  for (const Mat3& m : ms) out.push_back(coset_perm(q, m));
  return out;
}

// ---------------------------------------------------------------------------
// The groups G = <H, D>, with K the mirror-image partner of H.
// ---------------------------------------------------------------------------

struct MatGroups {
  int q = 0;
  std::vector<Mat3> d_gens, h_gens, k_gens, g_gens;
  std::vector<Mat3> d_elems, h_elems, k_elems, g_elems;  // each sorted by mat_code
};

// Builds D, H, K and G = HD over F_q and verifies the expected orders
// |D| = 2q, |H| = |K| = 2q^2, |G| = 4q^3.
inline MatGroups build_groups(int q) {
  if (!is_odd_prime(q)) throw std::invalid_argument("build_groups: q must be an odd prime");
  MatGroups mg;
  mg.q = q;
  mg.d_gens = {m_d(DElem{-1, 0}, q), m_d(DElem{1, 1}, q)};
  mg.h_gens = {m_h(HElem{-1, 0, 0}, q), m_h(HElem{1, 1, 0}, q), m_h(HElem{1, 0, 1}, q)};
  mg.k_gens = {m_k(HElem{-1, 0, 0}, q), m_k(HElem{1, 1, 0}, q), m_k(HElem{1, 0, 1}, q)};
  mg.g_gens = mg.h_gens;
  mg.g_gens.insert(mg.g_gens.end(), mg.d_gens.begin(), mg.d_gens.end());
  mg.d_elems = mat_closure(mg.d_gens);
  mg.h_elems = mat_closure(mg.h_gens);
  mg.k_elems = mat_closure(mg.k_gens);
  mg.g_elems = mat_closure(mg.g_gens);
  const std::size_t qq = static_cast<std::size_t>(q);
  if (mg.d_elems.size() != 2 * qq || mg.h_elems.size() != 2 * qq * qq ||
      mg.k_elems.size() != 2 * qq * qq || mg.g_elems.size() != 4 * qq * qq * qq)
    throw std::logic_error("build_groups: unexpected group order");
  return mg;
}

// ---------------------------------------------------------------------------
// Stabiliser orbits on H: singleton, coset and parabolic families.
// ---------------------------------------------------------------------------

enum class FamilyKind { Singleton, Coset, Parabolic };

struct Family {
  FamilyKind kind = FamilyKind::Singleton;
  int t = 0;                 // S_t for t in [0,q); C_t for t in [1,(q-1)/2]; P_t for t in [0,q)
  std::vector<int> members;  // ascending element indices in the canonical H labelling
};

inline int family_count(int q) { return 2 * q + (q - 1) / 2; }

// Families are listed S_0..S_{q-1}, then C_1..C_{(q-1)/2}, then P_0..P_{q-1}.
inline int family_index_of(const HElem& h, int q) {
  if (h.a == 1) {
    if (h.y == 0) return mod_norm(h.x, q);
    const int t = std::min(mod_norm(h.y, q), q - mod_norm(h.y, q));
    return q + t - 1;
  }
  const int yh = mod_mul(mod_norm(h.y, q), half(q), q);
  const int t = mod_norm(static_cast<long long>(h.x) - mod_mul(yh, yh, q), q);
  return q + (q - 1) / 2 + t;
}

inline std::vector<Family> orbit_families(int q) {
  std::vector<Family> fams;
  fams.reserve(static_cast<std::size_t>(family_count(q)));
  for (int t = 0; t < q; ++t)
    fams.push_back(Family{FamilyKind::Singleton, t, {h_index(HElem{1, t, 0}, q)}});
  for (int t = 1; t <= (q - 1) / 2; ++t) {
    Family f{FamilyKind::Coset, t, {}};
    for (int z = 0; z < q; ++z) {
      f.members.push_back(h_index(HElem{1, z, t}, q));
      f.members.push_back(h_index(HElem{1, z, q - t}, q));
    }
    std::sort(f.members.begin(), f.members.end());
    fams.push_back(std::move(f));
  }
  for (int t = 0; t < q; ++t) {
    Family f{FamilyKind::Parabolic, t, {}};
    for (int z = 0; z < q; ++z)
      f.members.push_back(h_index(HElem{-1, mod_add(t, mod_mul(z, z, q), q), mod_mul(2, z, q)}, q));
    std::sort(f.members.begin(), f.members.end());
    fams.push_back(std::move(f));
  }
  return fams;
}

// Union of the members of the families with the given indices, sorted.
inline std::vector<int> family_union(const std::vector<Family>& fams, const std::vector<int>& which) {
  std::vector<int> out;
  for (int fi : which) {
    const auto& m = fams.at(static_cast<std::size_t>(fi)).members;
    out.insert(out.end(), m.begin(), m.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// The anti-transpose automorphism alpha and its companions on H.
// ---------------------------------------------------------------------------

// alpha(g) = s (g^{-1})^T s with s the antidiagonal involution; entrywise
// alpha(g)[i][j] = g^{-1}[2-j][2-i].  It is an involution of GL_3(F_q) fixing
// G and D setwise and swapping H with K.
inline Mat3 alpha(const Mat3& g) {
  const Mat3 gi = mat_inv(g);
  Mat3 r;
  r.q = g.q;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.a[i][j] = gi.a[2 - j][2 - i];
  return r;
}

// Bracket form of the induced map on right cosets: D h^alpha = D alpha_hat(h),
// with alpha_hat([a,(x,y)]) = [a, (y^2/2 - x, a y)].
inline HElem alpha_hat(const HElem& h, int q) {
  check_sign(h.a);
  const int yy2 = mod_mul(mod_mul(h.y, h.y, q), half(q), q);
  return HElem{h.a, mod_sub(yy2, mod_norm(h.x, q), q), mod_norm(static_cast<long long>(h.a) * h.y, q)};
}

// Bracket form of the induced map on the left-coset labels used by
// coset_perm: alpha_hat_left(h) is the H-part of alpha(m_h(h)), explicitly
// [a, (-x - a y^2/2, a y)].  Conjugating the coset action by this permutation
// sends the image of g in Sym(G/D) to the image of alpha(g); in particular it
// normalises the image of G and maps Cay(H,T) onto Cay(H,T') arc by arc.
inline HElem alpha_hat_left(const HElem& h, int q) {
  check_sign(h.a);
  const int yy2 = mod_mul(mod_mul(h.y, h.y, q), half(q), q);
  return HElem{h.a, mod_norm(-static_cast<long long>(h.x) - static_cast<long long>(h.a) * yy2, q),
               mod_norm(static_cast<long long>(h.a) * h.y, q)};
}

inline Perm alpha_hat_perm(int q) {
  std::vector<int> img(static_cast<std::size_t>(h_degree(q)));
  for (int i = 0; i < h_degree(q); ++i)
    img[static_cast<std::size_t>(i)] = h_index(alpha_hat(h_at(i, q), q), q);
  return Perm(img);
}

inline Perm alpha_hat_left_perm(int q) {
  std::vector<int> img(static_cast<std::size_t>(h_degree(q)));
  for (int i = 0; i < h_degree(q); ++i)
    img[static_cast<std::size_t>(i)] = h_index(alpha_hat_left(h_at(i, q), q), q);
  return Perm(img);
}

// ---------------------------------------------------------------------------
// Connection sets.
// ---------------------------------------------------------------------------

// Smallest admissible parabolic parameter for q >= 7: the least x >= 2 with
// x not in {0, +-1, +-2, 1/2} and x^6 != 1 in F_q.  For q = 7 no residue
// passes the power condition (every unit is a sixth root of 1), and the
// distinguished value is 3.
inline int choose_x(int q) {
  if (!is_odd_prime(q) || q < 7) throw std::invalid_argument("choose_x: requires a prime q >= 7");
  if (q == 7) return 3;
  for (int x = 2; x < q; ++x) {
    if (x == 1 || x == 2 || x == q - 1 || x == q - 2 || x == half(q)) continue;
    if (mod_pow(x, 6, q) == 1) continue;
    return x;
  }
  throw std::logic_error("choose_x: no admissible residue");
}

namespace detail {
inline std::vector<int> family_indices_for_t(int q, bool primed, int x) {
  // Families are indexed S_t -> t, C_t -> q + t - 1, P_t -> q + (q-1)/2 + t.
  const int c_base = q, p_base = q + (q - 1) / 2;
  if (q <= 5) {
    const int s = primed ? q - 1 : 1;
    return {s, p_base + 0};
  }
  if (x == 0) x = choose_x(q);
  if (x <= 1 || x >= q) throw std::invalid_argument("connection set: x must lie in 2..q-1");
  const int p1 = primed ? q - 1 : 1;
  const int px = primed ? q - x : x;
  // The coset pair C_1 u C_{-1} is a single merged family in the list.
  return {p_base + 0, p_base + p1, p_base + px, c_base + 0};
}
}  // namespace detail

// The distinguished connection set: S_1 u P_0 for q in {3,5}; for q >= 7,
// P_0 u P_1 u P_x u C_1 u C_{-1} with x = choose_x(q) unless given explicitly.
inline std::vector<int> build_t_set(int q, int x = 0) {
  return family_union(orbit_families(q), detail::family_indices_for_t(q, false, x));
}

// Its partner: S_{-1} u P_0 for q in {3,5}; P_0 u P_{-1} u P_{-x} u C_1 u
// C_{-1} for q >= 7.  Equals the alpha_hat image of build_t_set(q, x).
inline std::vector<int> build_t_prime_set(int q, int x = 0) {
  return family_union(orbit_families(q), detail::family_indices_for_t(q, true, x));
}

// The inverse-closed witness set P_0 u S_1 u S_{-1} used for small q.
inline std::vector<int> build_symmetric_set(int q) {
  const auto fams = orbit_families(q);
  return family_union(fams, {1, q - 1, q + (q - 1) / 2});
}

// ---------------------------------------------------------------------------
// H as an abstract group table in the canonical labelling.
// ---------------------------------------------------------------------------

inline GroupTable h_bracket_table(int q) {
  const int n = h_degree(q);
  std::vector<std::uint16_t> mul(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      mul[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] =
          static_cast<std::uint16_t>(h_index(h_mul(h_at(i, q), h_at(j, q), q), q));
  return GroupTable::from_mul(n, std::move(mul));
}

}  // namespace cci
