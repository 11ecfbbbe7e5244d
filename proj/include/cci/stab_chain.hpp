#pragma once

// Deterministic Schreier-Sims stabilizer chains.
//
// Base points are chosen as the first point moved by the generator that
// created the level, and transversals are rebuilt by breadth-first search in
// generator order, so the chain is a pure function of the input generator
// sequence.  The construction runs full sweeps over Schreier generators until
// a complete sweep adds nothing; by Schreier's lemma the result is then a
// verified base and strong generating set.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cci/perm.hpp"

namespace cci {

class StabilizerChain {
 public:
  struct Level {
    int base = -1;
    // Generators first placed at this level; they fix the bases of all
    // earlier levels.  The group acting at a level is generated by the union
    // of `gens` over this level and every deeper one.
    std::vector<Perm> gens;
    std::vector<int> orbit;           // BFS discovery order, orbit[0] == base
    std::vector<int> where;           // point -> index in orbit, or -1
    std::vector<Perm> transversal;    // by orbit index: base^t == point
  };

  static StabilizerChain build(int degree, const std::vector<Perm>& gens) {
    StabilizerChain c;
    c.degree_ = degree;
    for (const Perm& g : gens) {
      if (g.degree() != degree)
        throw std::invalid_argument("StabilizerChain: generator degree mismatch");
      c.place(g, 0);
    }
    // Sweep until no Schreier generator fails to sift.  The generating set
    // of level lvl's group is the union of the generators stored at lvl and
    // at every deeper level (they all fix the bases above lvl).
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t lvl = 0; lvl < c.levels_.size() && !changed; ++lvl) {
        c.rebuild_orbit(lvl);
        const std::size_t orbit_size = c.levels_[lvl].orbit.size();
        for (std::size_t oi = 0; oi < orbit_size && !changed; ++oi) {
          for (std::size_t k = lvl; k < c.levels_.size() && !changed; ++k) {
            const std::size_t gcount = c.levels_[k].gens.size();
            for (std::size_t gi = 0; gi < gcount; ++gi) {
              Perm u = c.schreier_gen(lvl, static_cast<int>(oi),
                                      c.levels_[k].gens[gi]);
              auto [res, at] = c.sift_from(u, lvl + 1);
              if (!res.is_identity()) {
                c.place_at(res, at);  // may reallocate levels_
                changed = true;      // restart the sweep from the top
                break;
              }
            }
          }
        }
      }
    }
    c.order_ = 1;
    for (const Level& L : c.levels_)
      if (__builtin_mul_overflow(c.order_, L.orbit.size(), &c.order_))
        throw std::overflow_error("StabilizerChain: group order exceeds 64 bits");
    return c;
  }

  int degree() const { return degree_; }
  unsigned long long order() const { return order_; }
  const std::vector<Level>& levels() const { return levels_; }

  std::vector<int> base() const {
    std::vector<int> b;
    for (const Level& L : levels_) b.push_back(L.base);
    return b;
  }

  bool contains(const Perm& g) const {
    if (g.degree() != degree_) return false;
    auto [res, at] = sift_from(g, 0);
    (void)at;
    return res.is_identity();
  }

  // Residue of sifting g through the chain (identity iff member).
  Perm sift(const Perm& g) const { return sift_from(g, 0).first; }

  // Emit every element exactly once, in deterministic transversal-product
  // order.  Throws if the order exceeds `bound`.
  void enumerate(const std::function<void(const Perm&)>& emit,
                 unsigned long long bound = 1000000) const {
    if (order_ > bound)
      throw std::invalid_argument("StabilizerChain::enumerate: order exceeds bound");
    enum_rec(0, Perm::identity(degree_), emit);
  }

  std::vector<Perm> elements(unsigned long long bound = 1000000) const {
    std::vector<Perm> out;
    out.reserve(static_cast<std::size_t>(order_));
    enumerate([&](const Perm& p) { out.push_back(p); }, bound);
    return out;
  }

 private:
  // Sift from the given level; returns the residue and the level at which
  // sifting stopped (levels_.size() if it ran off the end).
  std::pair<Perm, std::size_t> sift_from(Perm g, std::size_t lvl) const {
    for (std::size_t i = lvl; i < levels_.size(); ++i) {
      if (g.is_identity()) return {g, i};
      const Level& L = levels_[i];
      int p = g[L.base];
      if (L.where[p] < 0) return {g, i};
      g = compose(g, L.transversal[L.where[p]].inverse());
    }
    return {g, levels_.size()};
  }

  void place(const Perm& g, std::size_t from_lvl) {
    if (g.is_identity()) return;
    auto [res, at] = sift_from(g, from_lvl);
    if (!res.is_identity()) place_at(res, at);
  }

  void place_at(const Perm& res, std::size_t lvl) {
    if (lvl == levels_.size()) {
      levels_.emplace_back();
      levels_.back().base = res.first_moved();
    }
    levels_[lvl].gens.push_back(res);
    rebuild_orbit(lvl);
  }

  void rebuild_orbit(std::size_t lvl) {
    Level& L = levels_[lvl];
    L.orbit.assign(1, L.base);
    L.where.assign(degree_, -1);
    L.where[L.base] = 0;
    L.transversal.assign(1, Perm::identity(degree_));
    for (std::size_t i = 0; i < L.orbit.size(); ++i) {
      for (std::size_t k = lvl; k < levels_.size(); ++k) {
        for (const Perm& s : levels_[k].gens) {
          int img = s[L.orbit[i]];
          if (L.where[img] < 0) {
            L.where[img] = static_cast<int>(L.orbit.size());
            L.orbit.push_back(img);
            L.transversal.push_back(compose(L.transversal[i], s));
          }
        }
      }
    }
  }

  Perm schreier_gen(std::size_t lvl, int orbit_index, const Perm& s) const {
    const Level& L = levels_[lvl];
    Perm ts = compose(L.transversal[orbit_index], s);
    int img = ts[L.base];
    return compose(ts, L.transversal[L.where[img]].inverse());
  }

  // Sifting decomposes g as "apply t_k (deepest level) first, ..., t_1
  // (level 0) last"; suffix accumulates the already-chosen shallower part.
  void enum_rec(std::size_t lvl, const Perm& suffix,
                const std::function<void(const Perm&)>& emit) const {
    if (lvl == levels_.size()) {
      emit(suffix);
      return;
    }
    for (const Perm& t : levels_[lvl].transversal)
      enum_rec(lvl + 1, compose(t, suffix), emit);
  }

  int degree_ = 0;
  unsigned long long order_ = 1;
  std::vector<Level> levels_;
};

}  // namespace cci
