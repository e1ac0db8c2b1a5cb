#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <variant>
#include <vector>

#include "endoq/qset.hpp"

namespace endoq {

struct TypeMismatchError : std::runtime_error {
  TypeMismatchError() : std::runtime_error("interval endpoint shapes do not match") {}
};
struct NotBijectiveError : std::runtime_error {
  NotBijectiveError() : std::runtime_error("endomorphism is not bijective") {}
};
struct InvalidEndoError : std::runtime_error {
  explicit InvalidEndoError(const std::string& why) : std::runtime_error("invalid endomorphism: " + why) {}
};

// ---------------------------------------------------------------------------
// piece maps

struct IdentityMap {
  bool operator==(const IdentityMap&) const { return true; }
};
struct ConstMap {
  Rational value;
  bool operator==(const ConstMap& o) const { return value == o.value; }
};
struct AffineMap {
  Rational a;  // > 0
  Rational b;
  bool operator==(const AffineMap& o) const { return a == o.a && b == o.b; }
};
struct CanonIsoMap {
  QInterval src;
  QInterval dst;
  bool operator==(const CanonIsoMap& o) const { return src == o.src && dst == o.dst; }
};
using Fragment = std::variant<AffineMap, CanonIsoMap>;
struct IsoChainMap {
  std::vector<Fragment> links;
  bool operator==(const IsoChainMap& o) const { return links == o.links; }
};

using PieceMap = std::variant<IdentityMap, ConstMap, AffineMap, CanonIsoMap, IsoChainMap>;

// ---------------------------------------------------------------------------
// canonical anchors
//
// Every non-singleton interval carries a canonical ladder of rationals:
// a_0 = rational_between(lo, hi), a_{k+1} = rational_between(a_k, hi) and
// a_{-(k+1)} = rational_between(lo, a_{-k}). The ladder converges to both
// endpoints, so rung k of one interval can be mapped affinely onto rung k of
// another. Ladders depend only on the interval, which makes the rung
// isomorphism self-inverse under swapping and the identity on equal
// intervals.

namespace detail {

inline std::string ext_key(const ExtReal& e) {
  if (e.is_neg_inf()) return "-oo";
  if (e.is_pos_inf()) return "+oo";
  if (e.is_rational()) return e.rational().get_str();
  const auto& s = e.surd_parts();
  return s.a.get_str() + "~" + s.b.get_str() + "~" + s.d.get_str();
}

inline std::string interval_key(const QInterval& iv) {
  return (iv.lo_closed ? "[" : "(") + ext_key(iv.lo) + ";" + ext_key(iv.hi) +
         (iv.hi_closed ? "]" : ")");
}

struct AnchorLadder {
  Rational center;
  std::vector<Rational> up;    // a_1, a_2, ...
  std::vector<Rational> down;  // a_{-1}, a_{-2}, ...
};

inline Rational anchor(const QInterval& iv, long k) {
  static std::map<std::string, AnchorLadder> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, fresh] = cache.try_emplace(interval_key(iv));
  AnchorLadder& lad = it->second;
  if (fresh) lad.center = rational_between(iv.lo, iv.hi);
  if (k == 0) return lad.center;
  if (k > 0) {
    while (static_cast<long>(lad.up.size()) < k) {
      const Rational& last = lad.up.empty() ? lad.center : lad.up.back();
      lad.up.push_back(rational_between(ExtReal(last), iv.hi));
    }
    return lad.up[static_cast<size_t>(k - 1)];
  }
  long j = -k;
  while (static_cast<long>(lad.down.size()) < j) {
    const Rational& last = lad.down.empty() ? lad.center : lad.down.back();
    lad.down.push_back(rational_between(iv.lo, ExtReal(last)));
  }
  return lad.down[static_cast<size_t>(j - 1)];
}

// rung index k such that a_k <= x < a_{k+1} (works for rationals and for
// surds strictly inside the interval)
inline long rung_index(const QInterval& iv, const ExtReal& x) {
  long k = 0;
  if (compare(x, ExtReal(anchor(iv, 0))) != Ordering::Less) {
    while (compare(x, ExtReal(anchor(iv, k + 1))) != Ordering::Less) ++k;
    return k;
  }
  while (compare(ExtReal(anchor(iv, k)), x) == Ordering::Greater) --k;
  return k;
}

}  // namespace detail

inline ExtReal canon_iso_apply_ext(const CanonIsoMap& m, const ExtReal& x) {
  if (x == m.src.lo) return m.dst.lo;
  if (x == m.src.hi) return m.dst.hi;
  if (m.src.is_singleton()) return m.dst.lo;
  if (compare(x, m.src.lo) == Ordering::Less || compare(x, m.src.hi) == Ordering::Greater)
    throw std::invalid_argument("canonical isomorphism evaluated outside its source interval");
  long k = detail::rung_index(m.src, x);
  Rational a0 = detail::anchor(m.src, k), a1 = detail::anchor(m.src, k + 1);
  Rational b0 = detail::anchor(m.dst, k), b1 = detail::anchor(m.dst, k + 1);
  Rational slope = (b1 - b0) / (a1 - a0);
  return ext_affine(ext_add(x, -a0), slope, b0);
}

inline Rational canon_iso_apply(const CanonIsoMap& m, const Rational& q) {
  return canon_iso_apply_ext(m, ExtReal(q)).rational();
}

// canon_iso operation: deterministic order-isomorphism src -> dst, rejecting
// endpoint-shape mismatches. Equal intervals give the identity, singletons a
// constant.
inline PieceMap canon_iso(const QInterval& src, const QInterval& dst) {
  if (src.empty() || dst.empty()) throw EmptyIntervalError();
  if (src.has_min() != dst.has_min() || src.has_max() != dst.has_max())
    throw TypeMismatchError();
  if (src.is_singleton() != dst.is_singleton()) throw TypeMismatchError();
  if (src == dst) return IdentityMap{};
  if (src.is_singleton()) return ConstMap{dst.lo.rational()};
  return CanonIsoMap{src, dst};
}

// ---------------------------------------------------------------------------
// fragment evaluation and folding

inline ExtReal fragment_apply_ext(const Fragment& f, const ExtReal& x) {
  if (std::holds_alternative<AffineMap>(f)) {
    const auto& a = std::get<AffineMap>(f);
    return ext_affine(x, a.a, a.b);
  }
  return canon_iso_apply_ext(std::get<CanonIsoMap>(f), x);
}

inline Fragment fragment_inverse(const Fragment& f) {
  if (std::holds_alternative<AffineMap>(f)) {
    const auto& a = std::get<AffineMap>(f);
    return AffineMap{1 / a.a, -a.b / a.a};
  }
  const auto& c = std::get<CanonIsoMap>(f);
  return CanonIsoMap{c.dst, c.src};
}

inline ExtReal apply_map_ext(const PieceMap& m, const ExtReal& x) {
  if (std::holds_alternative<IdentityMap>(m)) return x;
  if (std::holds_alternative<ConstMap>(m)) return ExtReal(std::get<ConstMap>(m).value);
  if (std::holds_alternative<AffineMap>(m)) {
    const auto& a = std::get<AffineMap>(m);
    return ext_affine(x, a.a, a.b);
  }
  if (std::holds_alternative<CanonIsoMap>(m))
    return canon_iso_apply_ext(std::get<CanonIsoMap>(m), x);
  ExtReal cur = x;
  for (const auto& f : std::get<IsoChainMap>(m).links) cur = fragment_apply_ext(f, cur);
  return cur;
}

inline Rational apply_map(const PieceMap& m, const Rational& q) {
  return apply_map_ext(m, ExtReal(q)).rational();
}

inline bool map_is_injective(const PieceMap& m) { return !std::holds_alternative<ConstMap>(m); }

namespace detail {

inline void push_reduced(std::vector<Fragment>& out, const Fragment& f) {
  if (std::holds_alternative<AffineMap>(f)) {
    const auto& a = std::get<AffineMap>(f);
    if (a.a == 1 && a.b == 0) return;
    if (!out.empty() && std::holds_alternative<AffineMap>(out.back())) {
      auto prev = std::get<AffineMap>(out.back());
      out.pop_back();
      push_reduced(out, AffineMap{prev.a * a.a, prev.b * a.a + a.b});
      return;
    }
    out.push_back(f);
    return;
  }
  const auto& c = std::get<CanonIsoMap>(f);
  if (c.src == c.dst) return;
  if (!out.empty() && std::holds_alternative<CanonIsoMap>(out.back())) {
    auto prev = std::get<CanonIsoMap>(out.back());
    if (prev.dst == c.src) {
      out.pop_back();
      push_reduced(out, CanonIsoMap{prev.src, c.dst});
      return;
    }
  }
  out.push_back(f);
}

inline std::vector<Fragment> fragments_of(const PieceMap& m) {
  if (std::holds_alternative<AffineMap>(m)) return {std::get<AffineMap>(m)};
  if (std::holds_alternative<CanonIsoMap>(m)) return {std::get<CanonIsoMap>(m)};
  if (std::holds_alternative<IsoChainMap>(m)) return std::get<IsoChainMap>(m).links;
  return {};
}

inline PieceMap map_from_fragments(std::vector<Fragment> frags) {
  if (frags.empty()) return IdentityMap{};
  if (frags.size() == 1) {
    if (std::holds_alternative<AffineMap>(frags[0])) return std::get<AffineMap>(frags[0]);
    return std::get<CanonIsoMap>(frags[0]);
  }
  return IsoChainMap{std::move(frags)};
}

}  // namespace detail

// m1 then m2, reduced: affine pairs fold, matching iso interfaces cancel.
inline PieceMap fold_maps(const PieceMap& m1, const PieceMap& m2) {
  if (std::holds_alternative<ConstMap>(m2)) return m2;
  if (std::holds_alternative<ConstMap>(m1))
    return ConstMap{apply_map(m2, std::get<ConstMap>(m1).value)};
  if (std::holds_alternative<IdentityMap>(m1)) return m2;
  if (std::holds_alternative<IdentityMap>(m2)) return m1;
  std::vector<Fragment> out;
  for (const auto& f : detail::fragments_of(m1)) detail::push_reduced(out, f);
  for (const auto& f : detail::fragments_of(m2)) detail::push_reduced(out, f);
  return detail::map_from_fragments(std::move(out));
}

inline PieceMap invert_map(const PieceMap& m) {
  if (std::holds_alternative<IdentityMap>(m)) return m;
  if (std::holds_alternative<ConstMap>(m)) throw NotBijectiveError();
  if (std::holds_alternative<AffineMap>(m)) {
    const auto& a = std::get<AffineMap>(m);
    return AffineMap{1 / a.a, -a.b / a.a};
  }
  if (std::holds_alternative<CanonIsoMap>(m)) {
    const auto& c = std::get<CanonIsoMap>(m);
    return CanonIsoMap{c.dst, c.src};
  }
  const auto& ch = std::get<IsoChainMap>(m);
  std::vector<Fragment> out;
  for (auto it = ch.links.rbegin(); it != ch.links.rend(); ++it)
    detail::push_reduced(out, fragment_inverse(*it));
  return detail::map_from_fragments(std::move(out));
}

// image of the domain interval under an injective map, flags transported
inline QInterval map_interval(const PieceMap& m, const QInterval& dom) {
  if (std::holds_alternative<ConstMap>(m))
    return QInterval::point(std::get<ConstMap>(m).value);
  ExtReal lo = apply_map_ext(m, dom.lo);
  ExtReal hi = apply_map_ext(m, dom.hi);
  return QInterval(lo, dom.lo_closed, hi, dom.hi_closed);
}

// ---------------------------------------------------------------------------
// Endo: finitely many pieces whose domains partition Q, globally monotone

struct Piece {
  QInterval domain;
  PieceMap map;
  bool operator==(const Piece& o) const { return domain == o.domain && map == o.map; }
};

struct Tristate {
  enum Kind { True, False, Undecided } kind;
  int depth = 0;

  static Tristate yes() { return {True, 0}; }
  static Tristate no() { return {False, 0}; }
  static Tristate undecided(int d) { return {Undecided, d}; }
  bool is_true() const { return kind == True; }
  bool is_false() const { return kind == False; }
  bool is_undecided() const { return kind == Undecided; }
};

struct KernelClass {
  Rational value;
  QInterval cls;
  bool operator==(const KernelClass& o) const { return value == o.value && cls == o.cls; }
};
using KernelDescriptor = std::vector<KernelClass>;

class Endo {
 public:
  static Endo identity() { return from_pieces({{QInterval::all(), IdentityMap{}}}); }
  static Endo constant(const Rational& q) { return from_pieces({{QInterval::all(), ConstMap{q}}}); }
  static Endo affine(const Rational& a, const Rational& b) {
    if (a <= 0) throw InvalidEndoError("affine slope must be positive");
    return from_pieces({{QInterval::all(), AffineMap{a, b}}});
  }

  static Endo from_pieces(std::vector<Piece> raw) {
    std::vector<Piece> ps;
    for (auto& p : raw) {
      QInterval d(p.domain.lo, p.domain.lo_closed, p.domain.hi, p.domain.hi_closed);
      if (d.empty()) continue;
      ps.push_back({d, canonical_map(d, p.map)});
    }
    std::sort(ps.begin(), ps.end(), [](const Piece& x, const Piece& y) {
      Ordering c = compare(x.domain.lo, y.domain.lo);
      if (c != Ordering::Equal) return c == Ordering::Less;
      return x.domain.lo_closed && !y.domain.lo_closed;
    });
    if (ps.empty()) throw InvalidEndoError("no pieces");
    if (!ps.front().domain.lo.is_neg_inf()) throw InvalidEndoError("domain does not start at -inf");
    if (!ps.back().domain.hi.is_pos_inf()) throw InvalidEndoError("domain does not end at +inf");
    for (size_t i = 0; i + 1 < ps.size(); ++i) {
      const QInterval& a = ps[i].domain;
      const QInterval& b = ps[i + 1].domain;
      if (compare(a.hi, b.lo) != Ordering::Equal)
        throw InvalidEndoError("domains do not tile Q");
      if (a.hi.is_rational()) {
        if (a.hi_closed == b.lo_closed) throw InvalidEndoError("boundary rational covered twice or not at all");
      } else {
        if (a.hi_closed || b.lo_closed) throw InvalidEndoError("closed flag at irrational boundary");
      }
    }
    Endo e;
    e.pieces_ = std::move(ps);
    e.merge_pieces();
    e.check_monotone();
    return e;
  }

  const std::vector<Piece>& pieces() const { return pieces_; }

  const Piece& piece_containing(const Rational& q) const {
    ExtReal e(q);
    size_t lo = 0, hi = pieces_.size();
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      const QInterval& d = pieces_[mid].domain;
      Ordering c = compare(d.lo, e);
      bool starts_at_or_before = (c == Ordering::Less) || (c == Ordering::Equal && d.lo_closed);
      if (starts_at_or_before)
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo == 0) return pieces_.front();
    return pieces_[lo - 1];
  }

  Rational operator()(const Rational& q) const {
    return apply_map(piece_containing(q).map, q);
  }

  bool operator==(const Endo& o) const { return pieces_ == o.pieces_; }
  bool operator!=(const Endo& o) const { return !(*this == o); }

 private:
  static PieceMap canonical_map(const QInterval& dom, PieceMap m) {
    // reduce chains and degenerate forms
    if (std::holds_alternative<AffineMap>(m)) {
      const auto& a = std::get<AffineMap>(m);
      if (a.a <= 0) throw InvalidEndoError("affine slope must be positive");
      if (a.a == 1 && a.b == 0) m = IdentityMap{};
    } else if (std::holds_alternative<CanonIsoMap>(m)) {
      const auto& c = std::get<CanonIsoMap>(m);
      if (c.src == c.dst) m = IdentityMap{};
    } else if (std::holds_alternative<IsoChainMap>(m)) {
      std::vector<Fragment> out;
      for (const auto& f : std::get<IsoChainMap>(m).links) detail::push_reduced(out, f);
      m = detail::map_from_fragments(std::move(out));
    }
    if (dom.is_singleton() && !std::holds_alternative<ConstMap>(m))
      m = ConstMap{apply_map(m, dom.lo.rational())};
    return m;
  }

  void merge_pieces() {
    bool changed = true;
    while (changed) {
      changed = false;
      // absorb singleton constants that agree with a neighbour's extension
      for (size_t i = 0; i < pieces_.size(); ++i) {
        if (!pieces_[i].domain.is_singleton()) continue;
        if (!std::holds_alternative<ConstMap>(pieces_[i].map)) continue;
        const Rational q = pieces_[i].domain.lo.rational();
        const Rational v = std::get<ConstMap>(pieces_[i].map).value;
        auto absorbable = [&](const Piece& nb) {
          if (std::holds_alternative<ConstMap>(nb.map))
            return std::get<ConstMap>(nb.map).value == v;
          if (std::holds_alternative<IdentityMap>(nb.map)) return v == q;
          if (std::holds_alternative<AffineMap>(nb.map)) {
            const auto& a = std::get<AffineMap>(nb.map);
            return a.a * q + a.b == v;
          }
          return false;
        };
        if (i > 0 && absorbable(pieces_[i - 1])) {
          pieces_[i - 1].domain.hi = pieces_[i].domain.hi;
          pieces_[i - 1].domain.hi_closed = true;
          pieces_.erase(pieces_.begin() + static_cast<long>(i));
          changed = true;
          break;
        }
        if (i + 1 < pieces_.size() && absorbable(pieces_[i + 1])) {
          pieces_[i + 1].domain.lo = pieces_[i].domain.lo;
          pieces_[i + 1].domain.lo_closed = true;
          pieces_.erase(pieces_.begin() + static_cast<long>(i));
          changed = true;
          break;
        }
      }
      if (changed) continue;
      for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
        if (pieces_[i].map == pieces_[i + 1].map) {
          pieces_[i].domain.hi = pieces_[i + 1].domain.hi;
          pieces_[i].domain.hi_closed = pieces_[i + 1].domain.hi_closed;
          pieces_.erase(pieces_.begin() + static_cast<long>(i) + 1);
          changed = true;
          break;
        }
      }
    }
  }

  void check_monotone() const {
    for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
      QInterval a = map_interval(pieces_[i].map, pieces_[i].domain);
      QInterval b = map_interval(pieces_[i + 1].map, pieces_[i + 1].domain);
      if (compare(a.hi, b.lo) == Ordering::Greater)
        throw InvalidEndoError("pieces are not globally order-preserving");
    }
  }

  std::vector<Piece> pieces_;
};

inline Rational apply(const Endo& f, const Rational& q) { return f(q); }

// pointwise composition, f then g (maps written on the right: x(fg) = (xf)g)
inline Endo compose(const Endo& f, const Endo& g) {
  std::vector<Piece> out;
  for (const auto& p : f.pieces()) {
    if (std::holds_alternative<ConstMap>(p.map)) {
      out.push_back({p.domain, ConstMap{g(std::get<ConstMap>(p.map).value)}});
      continue;
    }
    QInterval e = map_interval(p.map, p.domain);
    PieceMap inv = invert_map(p.map);
    for (const auto& gp : g.pieces()) {
      auto part = intersect(e, gp.domain);
      if (!part) continue;
      ExtReal lo = apply_map_ext(inv, part->lo);
      ExtReal hi = apply_map_ext(inv, part->hi);
      QInterval sub(lo, part->lo_closed, hi, part->hi_closed);
      if (sub.empty()) continue;
      out.push_back({sub, fold_maps(p.map, gp.map)});
    }
  }
  return Endo::from_pieces(std::move(out));
}

inline QSet image(const Endo& f) {
  std::vector<QInterval> parts;
  for (const auto& p : f.pieces()) parts.push_back(map_interval(p.map, p.domain));
  return QSet::normalize(std::move(parts));
}

// preimage of a single value, exact; empty when v is not attained
inline std::optional<QInterval> preimage_of_value(const Endo& f, const Rational& v) {
  std::optional<QInterval> acc;
  auto add = [&](const QInterval& iv) {
    if (!acc) {
      acc = iv;
      return;
    }
    // contributions are adjacent by monotonicity; take the hull
    if (compare(iv.lo, acc->lo) == Ordering::Less ||
        (compare(iv.lo, acc->lo) == Ordering::Equal && iv.lo_closed)) {
      acc->lo = iv.lo;
      acc->lo_closed = iv.lo_closed;
    }
    if (compare(iv.hi, acc->hi) == Ordering::Greater ||
        (compare(iv.hi, acc->hi) == Ordering::Equal && iv.hi_closed)) {
      acc->hi = iv.hi;
      acc->hi_closed = iv.hi_closed;
    }
  };
  for (const auto& p : f.pieces()) {
    if (std::holds_alternative<ConstMap>(p.map)) {
      if (std::get<ConstMap>(p.map).value == v) add(p.domain);
      continue;
    }
    QInterval e = map_interval(p.map, p.domain);
    if (!e.contains(v)) continue;
    Rational x = apply_map_ext(invert_map(p.map), ExtReal(v)).rational();
    add(QInterval::point(x));
  }
  return acc;
}

// all kernel classes with more than one element
inline KernelDescriptor kernel_classes(const Endo& f) {
  KernelDescriptor out;
  for (const auto& p : f.pieces()) {
    if (!std::holds_alternative<ConstMap>(p.map)) continue;
    const Rational v = std::get<ConstMap>(p.map).value;
    if (!out.empty() && out.back().value == v) continue;  // same run, already captured
    auto cls = preimage_of_value(f, v);
    if (cls && !cls->is_singleton()) out.push_back({v, *cls});
  }
  return out;
}

// ker f = ker g as equivalence relations: the nontrivial convex classes
// coincide (the values they map to are no part of the kernel)
inline bool same_kernel(const Endo& f, const Endo& g) {
  KernelDescriptor kf = kernel_classes(f), kg = kernel_classes(g);
  if (kf.size() != kg.size()) return false;
  for (size_t i = 0; i < kf.size(); ++i)
    if (kf[i].cls != kg[i].cls) return false;
  return true;
}
inline bool same_image(const Endo& f, const Endo& g) { return image(f) == image(g); }

namespace detail {

// canonical probes inside an interval: pick plus ladder anchors to the given
// depth on both sides
inline std::vector<Rational> interval_probes(const QInterval& iv, int depth) {
  std::vector<Rational> out;
  if (iv.empty()) return out;
  if (iv.is_singleton()) {
    out.push_back(iv.lo.rational());
    return out;
  }
  if (iv.lo_closed) out.push_back(iv.lo.rational());
  if (iv.hi_closed) out.push_back(iv.hi.rational());
  for (long k = -depth; k <= depth; ++k) out.push_back(anchor(iv, k));
  return out;
}

}  // namespace detail

// True iff f fixes its image pointwise; exact except for genuinely
// iso-against-iso overlaps, which are probed and otherwise left Undecided.
inline Tristate is_idempotent(const Endo& f, int depth = 10) {
  QSet x = image(f);
  bool undecided = false;
  for (const auto& comp : x.components()) {
    for (const auto& p : f.pieces()) {
      auto overlap = intersect(p.domain, comp);
      if (!overlap) continue;
      const QInterval& region = *overlap;
      if (std::holds_alternative<IdentityMap>(p.map)) continue;
      if (std::holds_alternative<ConstMap>(p.map)) {
        const Rational& v = std::get<ConstMap>(p.map).value;
        if (region.is_singleton() && region.lo.rational() == v) continue;
        return Tristate::no();
      }
      if (std::holds_alternative<AffineMap>(p.map)) {
        const auto& a = std::get<AffineMap>(p.map);
        if (region.is_singleton()) {
          const Rational q = region.lo.rational();
          if (a.a * q + a.b == q) continue;
        }
        return Tristate::no();
      }
      // iso or chain on a region of the image: refute by probing
      bool mismatch = false;
      for (const Rational& q : detail::interval_probes(region, depth)) {
        if (apply_map(p.map, q) != q) {
          mismatch = true;
          break;
        }
      }
      if (mismatch) return Tristate::no();
      undecided = true;
    }
  }
  return undecided ? Tristate::undecided(depth) : Tristate::yes();
}

// a probe q with f(f(q)) != f(q), when is_idempotent refutes
inline std::optional<Rational> idempotency_witness(const Endo& f, int depth = 10) {
  QSet x = image(f);
  for (const auto& comp : x.components()) {
    for (const auto& p : f.pieces()) {
      auto overlap = intersect(p.domain, comp);
      if (!overlap) continue;
      for (const Rational& q : detail::interval_probes(*overlap, depth))
        if (f(q) != q) {
          // q is in the image; find a preimage whose double application differs
          auto pre = preimage_of_value(f, q);
          if (pre) {
            Rational w = pick_rational(*pre);
            if (f(f(w)) != f(w)) return w;
          }
          return q;
        }
    }
  }
  return std::nullopt;
}

inline Endo invert(const Endo& f) {
  std::vector<Piece> out;
  for (const auto& p : f.pieces()) {
    if (!map_is_injective(p.map)) throw NotBijectiveError();
    out.push_back({map_interval(p.map, p.domain), invert_map(p.map)});
  }
  try {
    return Endo::from_pieces(std::move(out));
  } catch (const InvalidEndoError&) {
    throw NotBijectiveError();
  }
}

namespace detail {

inline bool is_probe_free(const Endo& h) {
  for (const auto& p : h.pieces())
    if (std::holds_alternative<CanonIsoMap>(p.map) || std::holds_alternative<IsoChainMap>(p.map))
      return false;
  return true;
}

// as a function x -> a x + b; only valid for Identity/Const/Affine
inline std::pair<Rational, Rational> affine_coeffs(const PieceMap& m) {
  if (std::holds_alternative<IdentityMap>(m)) return {Rational(1), Rational(0)};
  if (std::holds_alternative<ConstMap>(m)) return {Rational(0), std::get<ConstMap>(m).value};
  const auto& a = std::get<AffineMap>(m);
  return {a.a, a.b};
}

}  // namespace detail

// three-valued extensional equality: structural, else exact on the
// piecewise-affine fragment, else probe refutation with an honest Undecided.
inline Tristate equal(const Endo& f, const Endo& g, int depth = 10) {
  if (f == g) return Tristate::yes();
  if (detail::is_probe_free(f) && detail::is_probe_free(g)) {
    for (const auto& pf : f.pieces()) {
      for (const auto& pg : g.pieces()) {
        auto cell = intersect(pf.domain, pg.domain);
        if (!cell) continue;
        if (cell->is_singleton()) {
          const Rational q = cell->lo.rational();
          if (f(q) != g(q)) return Tristate::no();
          continue;
        }
        if (detail::affine_coeffs(pf.map) != detail::affine_coeffs(pg.map)) return Tristate::no();
      }
    }
    return Tristate::yes();
  }
  std::vector<Rational> probes;
  auto add_domain_probes = [&](const Endo& h) {
    for (const auto& p : h.pieces())
      for (const Rational& q : detail::interval_probes(p.domain, depth)) probes.push_back(q);
  };
  add_domain_probes(f);
  add_domain_probes(g);
  for (const Rational& q : probes)
    if (f(q) != g(q)) return Tristate::no();
  return Tristate::undecided(depth);
}

}  // namespace endoq
