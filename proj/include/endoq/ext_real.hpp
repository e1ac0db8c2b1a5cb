#pragma once

#include <cmath>
#include <compare>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>

#include "endoq/rational.hpp"

namespace endoq {

enum class Ordering { Less, Equal, Greater };

inline Ordering ordering_of_sign(int s) {
  return s < 0 ? Ordering::Less : (s > 0 ? Ordering::Greater : Ordering::Equal);
}

struct EmptyGapError : std::runtime_error {
  EmptyGapError() : std::runtime_error("no rational strictly between the given bounds") {}
};

// A point of the extended real line R* = R u {-inf, +inf} restricted to the
// values the constructions actually use: rationals and quadratic surds
// a + b*sqrt(d). Surds are kept normalized (d squarefree, d > 1, b != 0), so
// the four alternatives denote pairwise distinct kinds of value and equality
// is structural.
class ExtReal {
 public:
  struct NegInf {};
  struct PosInf {};
  struct Surd {
    Rational a;
    Rational b;  // != 0
    Integer d;   // squarefree, > 1
  };

  ExtReal() : v_(Rational(0)) {}
  ExtReal(const Rational& q) : v_(q) {}
  ExtReal(Rational&& q) : v_(std::move(q)) {}
  ExtReal(long n) : v_(Rational(n)) {}

  static ExtReal neg_inf() { return ExtReal(NegInf{}); }
  static ExtReal pos_inf() { return ExtReal(PosInf{}); }

  // Canonicalizing factory: strips square factors out of d, collapses b == 0
  // or d == 1 to a plain rational.
  static ExtReal surd(const Rational& a, const Rational& b, const Integer& d) {
    if (d <= 0) throw std::invalid_argument("surd radicand must be positive");
    if (b == 0) return ExtReal(a);
    Integer core = 1, rest = d;
    Integer square_part = 1;
    for (Integer p = 2; p * p <= rest; ++p) {
      while (rest % (p * p) == 0) {
        rest /= p * p;
        square_part *= p;
      }
    }
    core = rest;
    if (core == 1) return ExtReal(a + b * Rational(square_part));
    Rational nb = b * Rational(square_part);
    ExtReal e;
    e.v_ = Surd{a, nb, core};
    return e;
  }

  bool is_neg_inf() const { return std::holds_alternative<NegInf>(v_); }
  bool is_pos_inf() const { return std::holds_alternative<PosInf>(v_); }
  bool is_infinite() const { return is_neg_inf() || is_pos_inf(); }
  bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  bool is_surd() const { return std::holds_alternative<Surd>(v_); }
  bool is_finite() const { return !is_infinite(); }

  const Rational& rational() const { return std::get<Rational>(v_); }
  const Surd& surd_parts() const { return std::get<Surd>(v_); }

  bool operator==(const ExtReal& o) const {
    if (v_.index() != o.v_.index()) return false;
    if (is_rational()) return rational() == o.rational();
    if (is_surd()) {
      const Surd& s = surd_parts();
      const Surd& t = o.surd_parts();
      return s.a == t.a && s.b == t.b && s.d == t.d;
    }
    return true;
  }
  bool operator!=(const ExtReal& o) const { return !(*this == o); }

 private:
  explicit ExtReal(NegInf n) : v_(n) {}
  explicit ExtReal(PosInf p) : v_(p) {}
  std::variant<NegInf, Rational, Surd, PosInf> v_;
};

namespace detail {

// sign of b1*sqrt(d1) - b2*sqrt(d2); one squaring.
inline int sign_of_root_diff(const Rational& b1, const Integer& d1, const Rational& b2,
                             const Integer& d2) {
  int s1 = sgn(b1), s2 = sgn(b2);
  if (s1 == 0 && s2 == 0) return 0;
  if (s1 >= 0 && s2 <= 0) return (s1 > 0 || s2 < 0) ? 1 : 0;
  if (s1 <= 0 && s2 >= 0) return (s1 < 0 || s2 > 0) ? -1 : 0;
  // same strict sign: compare b1^2 d1 with b2^2 d2, orientation by sign
  Rational lhs = b1 * b1 * Rational(d1);
  Rational rhs = b2 * b2 * Rational(d2);
  int c = cmp(lhs, rhs);
  if (c == 0) {
    // equal squares and equal signs: values are equal only if both parts agree
    return 0;
  }
  return s1 > 0 ? (c > 0 ? 1 : -1) : (c > 0 ? -1 : 1);
}

// sign of r + b*sqrt(d) with b != 0; one squaring.
inline int sign_of_rational_plus_root(const Rational& r, const Rational& b, const Integer& d) {
  int sb = sgn(b);
  int sr = sgn(r);
  if (sr == 0) return sb;
  if (sr > 0 && sb > 0) return 1;
  if (sr < 0 && sb < 0) return -1;
  // opposite signs: compare b^2 d with r^2; sign decided by the larger magnitude
  Rational lhs = b * b * Rational(d);
  Rational rhs = r * r;
  int c = cmp(lhs, rhs);
  if (c == 0) return 0;  // cannot happen for squarefree d > 1 and rational r != 0
  return c > 0 ? sb : sr;
}

}  // namespace detail

// Exact sign of a - b over R*. Symbolic equality first, then at most two
// squarings for the mixed-radicand case.
inline Ordering compare(const ExtReal& a, const ExtReal& b) {
  if (a == b) return Ordering::Equal;
  if (a.is_neg_inf()) return Ordering::Less;
  if (b.is_neg_inf()) return Ordering::Greater;
  if (a.is_pos_inf()) return Ordering::Greater;
  if (b.is_pos_inf()) return Ordering::Less;
  if (a.is_rational() && b.is_rational())
    return ordering_of_sign(cmp(a.rational(), b.rational()));
  if (a.is_surd() && b.is_rational()) {
    const auto& s = a.surd_parts();
    return ordering_of_sign(
        detail::sign_of_rational_plus_root(s.a - b.rational(), s.b, s.d));
  }
  if (a.is_rational() && b.is_surd()) {
    const auto& s = b.surd_parts();
    return ordering_of_sign(
        -detail::sign_of_rational_plus_root(s.a - a.rational(), s.b, s.d));
  }
  const auto& s = a.surd_parts();
  const auto& t = b.surd_parts();
  if (s.d == t.d) {
    // (a1 - a2) + (b1 - b2) sqrt(d), same field
    Rational da = s.a - t.a, db = s.b - t.b;
    if (db == 0) return ordering_of_sign(sgn(da));
    return ordering_of_sign(detail::sign_of_rational_plus_root(da, db, s.d));
  }
  // b1 sqrt(d1) - b2 sqrt(d2) compared against r = a2 - a1
  Rational r = t.a - s.a;
  int sl = detail::sign_of_root_diff(s.b, s.d, t.b, t.d);
  int sr = sgn(r);
  if (sr == 0) return ordering_of_sign(sl);
  if (sl <= 0 && sr > 0) return Ordering::Less;
  if (sl >= 0 && sr < 0) return Ordering::Greater;
  // both sides share a strict sign; square once more:
  // (b1 sqrt(d1) - b2 sqrt(d2))^2 = b1^2 d1 + b2^2 d2 - 2 b1 b2 sqrt(d1 d2)
  Rational m = r * r - s.b * s.b * Rational(s.d) - t.b * t.b * Rational(t.d);
  // sign(L^2 - r^2) = sign(-m - 2 b1 b2 sqrt(d1 d2))
  int inner = detail::sign_of_rational_plus_root(-m, -2 * s.b * t.b, s.d * t.d);
  int result = sl > 0 ? inner : -inner;
  return ordering_of_sign(result);
}

inline bool ext_less(const ExtReal& a, const ExtReal& b) { return compare(a, b) == Ordering::Less; }
inline bool ext_leq(const ExtReal& a, const ExtReal& b) { return compare(a, b) != Ordering::Greater; }

inline ExtReal ext_min(const ExtReal& a, const ExtReal& b) { return ext_leq(a, b) ? a : b; }
inline ExtReal ext_max(const ExtReal& a, const ExtReal& b) { return ext_leq(a, b) ? b : a; }

inline ExtReal negate(const ExtReal& x) {
  if (x.is_neg_inf()) return ExtReal::pos_inf();
  if (x.is_pos_inf()) return ExtReal::neg_inf();
  if (x.is_rational()) return ExtReal(-x.rational());
  const auto& s = x.surd_parts();
  return ExtReal::surd(-s.a, -s.b, s.d);
}

inline ExtReal ext_add(const ExtReal& x, const Rational& q) {
  if (x.is_infinite()) return x;
  if (x.is_rational()) return ExtReal(x.rational() + q);
  const auto& s = x.surd_parts();
  return ExtReal::surd(s.a + q, s.b, s.d);
}

// x * a + b for rational a > 0; enough for transporting endpoints through
// affine pieces.
inline ExtReal ext_affine(const ExtReal& x, const Rational& a, const Rational& b) {
  if (a <= 0) throw std::invalid_argument("affine slope must be positive");
  if (x.is_infinite()) return x;
  if (x.is_rational()) return ExtReal(x.rational() * a + b);
  const auto& s = x.surd_parts();
  return ExtReal::surd(s.a * a + b, s.b * a, s.d);
}

// floor of a finite value; guesses through a coarse double and repairs with
// exact comparisons.
inline Integer ext_floor(const ExtReal& x) {
  if (x.is_infinite()) throw std::invalid_argument("floor of an infinite value");
  if (x.is_rational()) return floor_of(x.rational());
  const auto& s = x.surd_parts();
  double approx = s.a.get_d() + s.b.get_d() * std::sqrt(s.d.get_d());
  Integer n(static_cast<long>(std::floor(approx)));
  while (compare(ExtReal(Rational(n)), x) == Ordering::Greater) --n;
  while (compare(ExtReal(Rational(n + 1)), x) != Ordering::Greater) ++n;
  return n;
}

// The canonical rational strictly inside (a, b): the first hit of the
// Stern-Brocot walk over all of Q. Integers are tried first (smallest
// absolute value, positive on ties); otherwise the interval lies inside one
// integer gap and the mediant search finds the unique fraction of least
// denominator.
inline Rational rational_between(const ExtReal& a, const ExtReal& b) {
  if (compare(a, b) != Ordering::Less) throw EmptyGapError();

  bool lo_unbounded = a.is_neg_inf();
  bool hi_unbounded = b.is_pos_inf();
  // integer candidates: smallest integer > a, largest integer < b
  std::optional<Integer> lo_int, hi_int;
  if (!lo_unbounded) {
    // floor(a) + 1 is the smallest integer strictly above a in every case
    lo_int = ext_floor(a) + 1;
  }
  if (!hi_unbounded) {
    Integer f = ext_floor(b);
    if (b.is_rational() && is_integer(b.rational()))
      hi_int = f - 1;
    else
      hi_int = f;
  }
  bool have_int;
  if (lo_unbounded && hi_unbounded) return Rational(0);
  if (lo_unbounded)
    have_int = true;  // integers below any finite bound exist
  else if (hi_unbounded)
    have_int = true;
  else
    have_int = *lo_int <= *hi_int;

  if (have_int) {
    if (lo_unbounded) {
      // range (-inf, hi_int]
      if (*hi_int >= 0) return Rational(0);
      return Rational(*hi_int);
    }
    if (hi_unbounded) {
      if (*lo_int <= 0) return Rational(0);
      return Rational(*lo_int);
    }
    if (*lo_int <= 0 && 0 <= *hi_int) return Rational(0);
    if (*lo_int > 0) return Rational(*lo_int);
    return Rational(*hi_int);
  }

  // no integer inside: (a, b) sits within [n, n+1]
  Integer n = ext_floor(a);
  ExtReal sa = ext_add(a, Rational(-n));
  ExtReal sb = ext_add(b, Rational(-n));
  // mediant walk between 0/1 and 1/1
  Integer pn(0), pd(1), qn(1), qd(1);
  for (;;) {
    Integer mn = pn + qn, md = pd + qd;
    Rational med = rat(mn, md);
    ExtReal m(med);
    if (compare(m, sa) != Ordering::Greater) {
      pn = mn;
      pd = md;
    } else if (compare(m, sb) != Ordering::Less) {
      qn = mn;
      qd = md;
    } else {
      return med + Rational(n);
    }
  }
}

// Canonical irrational strictly inside (a, b): the midpoint (a+b)/2 when that
// is representable as a surd, else the first r + sqrt(2)/2^k that fits, where
// r is the canonical rational of the gap.
inline ExtReal irrational_between(const ExtReal& a, const ExtReal& b) {
  if (compare(a, b) != Ordering::Less) throw EmptyGapError();
  auto representable_mid = [&]() -> std::optional<ExtReal> {
    if (a.is_infinite() || b.is_infinite()) return std::nullopt;
    if (a.is_surd() && b.is_surd()) {
      const auto& s = a.surd_parts();
      const auto& t = b.surd_parts();
      if (s.d != t.d) return std::nullopt;
      ExtReal m = ExtReal::surd((s.a + t.a) / 2, (s.b + t.b) / 2, s.d);
      if (!m.is_surd()) return std::nullopt;
      return m;
    }
    if (a.is_surd() && b.is_rational()) {
      const auto& s = a.surd_parts();
      return ExtReal::surd((s.a + b.rational()) / 2, s.b / 2, s.d);
    }
    if (a.is_rational() && b.is_surd()) {
      const auto& t = b.surd_parts();
      return ExtReal::surd((a.rational() + t.a) / 2, t.b / 2, t.d);
    }
    return std::nullopt;
  };
  if (auto m = representable_mid()) {
    if (m->is_surd()) return *m;
  }
  Rational r = rational_between(a, b);
  Rational step(1);
  for (;;) {
    ExtReal cand = ExtReal::surd(r, step, 2);
    if (compare(cand, a) == Ordering::Greater && compare(cand, b) == Ordering::Less) return cand;
    ExtReal cand2 = ExtReal::surd(r, -step, 2);
    if (compare(cand2, a) == Ordering::Greater && compare(cand2, b) == Ordering::Less) return cand2;
    step /= 2;
  }
}

}  // namespace endoq
