#pragma once

// Permutations of {0, ..., n-1} with left-to-right action: points are written
// on the left (x^g), and compose(p, q) applies p first, then q.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cci {

inline constexpr int kMaxDegree = 4096;

class Perm {
 public:
  Perm() = default;

  static Perm identity(int degree) {
    check_degree(degree);
    Perm p;
    p.img_.resize(degree);
    std::iota(p.img_.begin(), p.img_.end(), 0);
    return p;
  }

  explicit Perm(std::vector<int> images) : img_(std::move(images)) {
    check_degree(static_cast<int>(img_.size()));
    std::vector<char> seen(img_.size(), 0);
    for (int v : img_) {
      if (v < 0 || v >= static_cast<int>(img_.size()) || seen[v])
        throw std::invalid_argument("Perm: images are not a bijection");
      seen[v] = 1;
    }
  }

  int degree() const { return static_cast<int>(img_.size()); }
  int operator[](int i) const { return img_[i]; }
  const std::vector<int>& images() const { return img_; }

  bool is_identity() const {
    for (int i = 0; i < degree(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  // Smallest point moved, or -1 for the identity.
  int first_moved() const {
    for (int i = 0; i < degree(); ++i)
      if (img_[i] != i) return i;
    return -1;
  }

  Perm inverse() const {
    Perm r;
    r.img_.resize(img_.size());
    for (int i = 0; i < degree(); ++i) r.img_[img_[i]] = i;
    return r;
  }

  friend bool operator==(const Perm& a, const Perm& b) = default;
  friend auto operator<=>(const Perm& a, const Perm& b) = default;

  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (int v : img_) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }

  std::string to_cycle_string() const {
    std::string out;
    std::vector<char> done(img_.size(), 0);
    for (int i = 0; i < degree(); ++i) {
      if (done[i] || img_[i] == i) continue;
      out += '(';
      int j = i;
      bool first = true;
      while (!done[j]) {
        done[j] = 1;
        if (!first) out += ' ';
        out += std::to_string(j);
        first = false;
        j = img_[j];
      }
      out += ')';
    }
    return out.empty() ? std::string("()") : out;
  }

 private:
  static void check_degree(int n) {
    if (n <= 0 || n > kMaxDegree)
      throw std::invalid_argument("Perm: degree out of range (1.." +
                                  std::to_string(kMaxDegree) + ")");
  }

  std::vector<int> img_;
};

// Apply p first, then q: result maps i to q[p[i]].
inline Perm compose(const Perm& p, const Perm& q) {
  if (p.degree() != q.degree())
    throw std::invalid_argument("compose: degree mismatch");
  std::vector<int> img(p.degree());
  for (int i = 0; i < p.degree(); ++i) img[i] = q[p[i]];
  return Perm(std::move(img));
}

// Conjugate g^{-1} a g, computed in one pass: r[g[i]] = g[a[i]].
inline Perm conjugate(const Perm& a, const Perm& g) {
  if (a.degree() != g.degree())
    throw std::invalid_argument("conjugate: degree mismatch");
  std::vector<int> img(a.degree());
  for (int i = 0; i < a.degree(); ++i) img[g[i]] = g[a[i]];
  return Perm(std::move(img));
}

inline bool fixed_point_free(const Perm& p) {
  for (int i = 0; i < p.degree(); ++i)
    if (p[i] == i) return false;
  return true;
}

// Order as lcm of cycle lengths.
inline std::uint64_t order_of(const Perm& p) {
  std::vector<char> done(p.degree(), 0);
  std::uint64_t ord = 1;
  for (int i = 0; i < p.degree(); ++i) {
    if (done[i]) continue;
    std::uint64_t len = 0;
    int j = i;
    while (!done[j]) {
      done[j] = 1;
      ++len;
      j = p[j];
    }
    ord = std::lcm(ord, len);
  }
  return ord;
}

// Build a permutation of the given degree from disjoint cycles.
inline Perm perm_from_cycles(int degree,
                             const std::vector<std::vector<int>>& cycles) {
  std::vector<int> img(degree);
  std::iota(img.begin(), img.end(), 0);
  for (const auto& cyc : cycles) {
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      int from = cyc[k];
      int to = cyc[(k + 1) % cyc.size()];
      if (from < 0 || from >= degree)
        throw std::invalid_argument("perm_from_cycles: point out of range");
      img[from] = to;
    }
  }
  return Perm(std::move(img));
}

struct PermHash {
  std::size_t operator()(const Perm& p) const {
    return static_cast<std::size_t>(p.hash());
  }
};

}  // namespace cci
