#pragma once

#include <vector>

#include "endoq/endo.hpp"

namespace endoq {

struct NotAutomorphismError : std::runtime_error {
  NotAutomorphismError() : std::runtime_error("endomorphism is not an automorphism") {}
};
struct IsoFixedSetUnsupportedError : std::runtime_error {
  IsoFixedSetUnsupportedError()
      : std::runtime_error("fixed set of a staircase piece overlapping its image is not decidable") {}
};
struct NotCommutingError : std::runtime_error {
  NotCommutingError() : std::runtime_error("the automorphisms do not commute") {}
};

// {q : f(q) = q}, exact for piecewise-affine automorphisms; staircase pieces
// are admitted only when their domain and image do not meet.
inline QSet fixed_set(const Endo& f) {
  try {
    invert(f);
  } catch (const NotBijectiveError&) {
    throw NotAutomorphismError();
  }
  std::vector<QInterval> fixed;
  for (const auto& p : f.pieces()) {
    if (std::holds_alternative<IdentityMap>(p.map)) {
      fixed.push_back(p.domain);
      continue;
    }
    if (std::holds_alternative<AffineMap>(p.map)) {
      const auto& a = std::get<AffineMap>(p.map);
      if (a.a == 1) continue;  // translation, b != 0 after normalization
      Rational star = a.b / (1 - a.a);
      if (p.domain.contains(star)) fixed.push_back(QInterval::point(star));
      continue;
    }
    // staircase or chain: no fixed point possible when domain and image are
    // disjoint, undecidable otherwise
    QInterval e = map_interval(p.map, p.domain);
    if (intersect(p.domain, e)) throw IsoFixedSetUnsupportedError();
  }
  return QSet::normalize(std::move(fixed));
}

struct Orbital {
  enum class Sign { Up, Down, Fixed };
  QInterval support;
  Sign sign;
  Rational anchor;
};

// image of an interval under an endomorphism, as the hull of the per-piece
// images (exact for injective maps)
inline QInterval endo_image_of_interval(const Endo& g, const QInterval& iv) {
  std::optional<QInterval> acc;
  for (const auto& p : g.pieces()) {
    auto part = intersect(p.domain, iv);
    if (!part) continue;
    QInterval im = map_interval(p.map, *part);
    if (!acc) {
      acc = im;
    } else {
      if (compare(im.lo, acc->lo) == Ordering::Less ||
          (compare(im.lo, acc->lo) == Ordering::Equal && im.lo_closed))
        acc->lo = im.lo, acc->lo_closed = im.lo_closed;
      if (compare(im.hi, acc->hi) == Ordering::Greater ||
          (compare(im.hi, acc->hi) == Ordering::Equal && im.hi_closed))
        acc->hi = im.hi, acc->hi_closed = im.hi_closed;
    }
  }
  if (!acc) throw EmptyIntervalError();
  return *acc;
}

// U_f(x): the fixed point x itself, or the maximal fixed-point-free interval
// around x (which the f-iterates of x sweep entirely).
inline Orbital orbital(const Endo& f, const Rational& x) {
  QSet fs = fixed_set(f);
  if (fs.member(x)) return {QInterval::point(x), Orbital::Sign::Fixed, x};
  QSet moved = fs.complement();
  for (const auto& comp : moved.components()) {
    if (!comp.contains(x)) continue;
    Orbital::Sign s = f(x) > x ? Orbital::Sign::Up : Orbital::Sign::Down;
    return {comp, s, x};
  }
  throw std::logic_error("point neither fixed nor in the complement of the fixed set");
}

struct OrbitalPartition {
  std::vector<Orbital> infinite_orbitals;
  QSet fixed;
};

inline OrbitalPartition orbital_partition(const Endo& f) {
  OrbitalPartition out;
  out.fixed = fixed_set(f);
  QSet moved = out.fixed.complement();
  for (const auto& comp : moved.components()) {
    Rational a = pick_rational(comp);
    Orbital::Sign s = f(a) > a ? Orbital::Sign::Up : Orbital::Sign::Down;
    out.infinite_orbitals.push_back({comp, s, a});
  }
  return out;
}

// U_f(x) g = U_{g^-1 f g}(x g), both sides computed independently
inline bool check_conjugation(const Endo& f, const Endo& g, const Rational& x) {
  Orbital of = orbital(f, x);
  QInterval lhs = of.sign == Orbital::Sign::Fixed ? QInterval::point(g(x))
                                                  : endo_image_of_interval(g, of.support);
  Endo conj = compose(compose(invert(g), f), g);
  Orbital oc = orbital(conj, g(x));
  return lhs == oc.support;
}

// commuting g fixes every infinite orbital of f setwise
inline bool check_commuting_preserves(const Endo& f, const Endo& g, int depth = 10) {
  if (!equal(compose(f, g), compose(g, f), depth).is_true()) throw NotCommutingError();
  for (const auto& orb : orbital_partition(f).infinite_orbitals)
    if (endo_image_of_interval(g, orb.support) != orb.support) return false;
  return true;
}

}  // namespace endoq
