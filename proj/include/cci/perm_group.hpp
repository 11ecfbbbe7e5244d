#pragma once

// A finitely generated permutation group with lazily built stabilizer chain
// and (capped) element cache, plus orbit and conjugacy utilities.

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "cci/perm.hpp"
#include "cci/stab_chain.hpp"

namespace cci {

inline std::vector<int> orbit_of(const std::vector<Perm>& gens, int degree,
                                 int point) {
  std::vector<char> seen(degree, 0);
  std::vector<int> out{point};
  seen[point] = 1;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const Perm& g : gens) {
      int img = g[out[i]];
      if (!seen[img]) {
        seen[img] = 1;
        out.push_back(img);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

// Orbit partition: classes in order of their smallest member.
inline std::vector<std::vector<int>> orbit_partition(
    const std::vector<Perm>& gens, int degree) {
  std::vector<char> seen(degree, 0);
  std::vector<std::vector<int>> parts;
  for (int p = 0; p < degree; ++p) {
    if (seen[p]) continue;
    auto orb = orbit_of(gens, degree, p);
    for (int v : orb) seen[v] = 1;
    parts.push_back(std::move(orb));
  }
  return parts;
}

class PermGroup {
 public:
  PermGroup() = default;
  PermGroup(int degree, std::vector<Perm> gens,
            unsigned long long element_cache_cap = 100000,
            unsigned long long enumeration_bound = 1000000)
      : degree_(degree),
        gens_(std::move(gens)),
        cache_cap_(element_cache_cap),
        enum_bound_(enumeration_bound) {
    if (degree <= 0 || degree > kMaxDegree)
      throw std::invalid_argument("PermGroup: degree out of range");
    for (const Perm& g : gens_)
      if (g.degree() != degree_)
        throw std::invalid_argument("PermGroup: generator degree mismatch");
  }

  int degree() const { return degree_; }
  const std::vector<Perm>& generators() const { return gens_; }

  const StabilizerChain& chain() const {
    if (!chain_)
      chain_ = std::make_shared<StabilizerChain>(
          StabilizerChain::build(degree_, gens_));
    return *chain_;
  }

  unsigned long long order() const { return chain().order(); }

  bool contains(const Perm& g) const { return chain().contains(g); }

  // Deterministic element list (transversal-product order); capped.
  const std::vector<Perm>& elements() const {
    if (!elems_) {
      if (order() > cache_cap_)
        throw std::invalid_argument("PermGroup::elements: order exceeds cache cap");
      elems_ = std::make_shared<std::vector<Perm>>(chain().elements(enum_bound_));
    }
    return *elems_;
  }

  std::vector<int> orbit(int point) const {
    return orbit_of(gens_, degree_, point);
  }
  std::vector<std::vector<int>> orbits() const {
    return orbit_partition(gens_, degree_);
  }
  bool is_transitive() const {
    return static_cast<int>(orbit(0).size()) == degree_;
  }

  // Regular: transitive with order equal to the degree.
  bool is_regular() const { return is_transitive() && order() == static_cast<unsigned long long>(degree_); }

 private:
  int degree_ = 1;
  std::vector<Perm> gens_;
  unsigned long long cache_cap_ = 100000;
  unsigned long long enum_bound_ = 1000000;
  mutable std::shared_ptr<StabilizerChain> chain_;
  mutable std::shared_ptr<std::vector<Perm>> elems_;
};

// First conjugator g (in ambient enumeration order) with A^g = B, if any.
// Uses A's generators only: gens(A)^g inside B plus |A| == |B| suffices.
inline std::optional<Perm> are_conjugate(const PermGroup& ambient,
                                         const PermGroup& a,
                                         const PermGroup& b) {
  if (a.order() != b.order()) return std::nullopt;
  std::optional<Perm> found;
  ambient.chain().enumerate(
      [&](const Perm& g) {
        if (found) return;
        for (const Perm& x : a.generators())
          if (!b.contains(conjugate(x, g))) return;
        found = g;
      });
  return found;
}

inline bool is_normal(const PermGroup& ambient, const PermGroup& a) {
  for (const Perm& g : ambient.generators())
    for (const Perm& x : a.generators())
      if (!a.contains(conjugate(x, g))) return false;
  return true;
}

}  // namespace cci
