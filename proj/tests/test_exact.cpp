#include <catch2/catch_amalgamated.hpp>

#include "endoq/ext_real.hpp"
#include "endoq/io.hpp"
#include "generators.hpp"

using namespace endoq;

namespace {

int ord(Ordering o) { return o == Ordering::Less ? -1 : (o == Ordering::Greater ? 1 : 0); }

ExtReal sqrt2() { return ExtReal::surd(rat(0), rat(1), 2); }

ExtReal rand_ext_finite(testgen::Rng& rng) {
  if (rng.pick(0, 2) == 0) return ExtReal(testgen::rand_rational(rng));
  static const long ds[] = {2, 3, 5};
  Rational b = testgen::rand_rational(rng, 4, 3);
  if (b == 0) b = 1;
  return ExtReal::surd(testgen::rand_rational(rng, 6, 3), b, ds[rng.pick(0, 2)]);
}

ExtReal rand_ext_any(testgen::Rng& rng) {
  long k = rng.pick(0, 11);
  if (k == 0) return ExtReal::neg_inf();
  if (k == 1) return ExtReal::pos_inf();
  return rand_ext_finite(rng);
}

}  // namespace

TEST_CASE("compare handles infinities and rationals") {
  CHECK(compare(ExtReal::neg_inf(), ExtReal(rat(7, 10))) == Ordering::Less);
  CHECK(compare(ExtReal(rat(7, 10)), ExtReal::pos_inf()) == Ordering::Less);
  CHECK(compare(ExtReal(rat(1, 3)), ExtReal(rat(1, 3))) == Ordering::Equal);
  CHECK(compare(ExtReal::neg_inf(), ExtReal::neg_inf()) == Ordering::Equal);
  CHECK(compare(ExtReal::neg_inf(), ExtReal::pos_inf()) == Ordering::Less);
}

TEST_CASE("compare rational against surd by squaring") {
  // cross-squaring oracle: (7/10)^2 = 49/100 < 1/2 = (sqrt(2)/2)^2
  REQUIRE(rat(7, 10) * rat(7, 10) < rat(1, 2));
  CHECK(compare(ExtReal(rat(7, 10)), ExtReal::surd(rat(0), rat(1, 2), 2)) == Ordering::Less);
  // 2 < 9/4
  REQUIRE(rat(2) < rat(3, 2) * rat(3, 2));
  CHECK(compare(sqrt2(), ExtReal(rat(3, 2))) == Ordering::Less);
  CHECK(compare(ExtReal(rat(3, 2)), sqrt2()) == Ordering::Greater);
}

TEST_CASE("surd construction canonicalizes") {
  // b = 0 collapses to the rational part; 1 + 0*sqrt(2) equals the rational 1
  ExtReal e = ExtReal::surd(rat(1), rat(0), 2);
  CHECK(e.is_rational());
  CHECK(compare(e, ExtReal(rat(1))) == Ordering::Equal);
  // square factors move out of the radicand
  CHECK(ExtReal::surd(rat(0), rat(1), 8) == ExtReal::surd(rat(0), rat(2), 2));
  // perfect-square radicand collapses to a rational
  CHECK(ExtReal::surd(rat(1), rat(1), 4) == ExtReal(rat(3)));
  // a surd never compares Equal to a rational
  testgen::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Rational b = testgen::rand_rational(rng, 5, 4);
    if (b == 0) continue;
    ExtReal s = ExtReal::surd(testgen::rand_rational(rng), b, 2);
    CHECK(compare(s, ExtReal(testgen::rand_rational(rng))) != Ordering::Equal);
  }
}

TEST_CASE("mixed radicand comparison agrees with a floating cross-check") {
  testgen::Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    ExtReal a = rand_ext_finite(rng);
    ExtReal b = rand_ext_finite(rng);
    auto approx = [](const ExtReal& e) {
      if (e.is_rational()) return e.rational().get_d();
      const auto& s = e.surd_parts();
      return s.a.get_d() + s.b.get_d() * std::sqrt(s.d.get_d());
    };
    double da = approx(a), db = approx(b);
    if (std::abs(da - db) < 1e-9) continue;  // too close for the float check
    CHECK(ord(compare(a, b)) == (da < db ? -1 : 1));
  }
}

TEST_CASE("compare is a total order: trichotomy and transitivity") {
  testgen::Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    ExtReal a = rand_ext_any(rng), b = rand_ext_any(rng), c = rand_ext_any(rng);
    REQUIRE(ord(compare(a, b)) == -ord(compare(b, a)));
    if (compare(a, b) != Ordering::Greater && compare(b, c) != Ordering::Greater)
      REQUIRE(compare(a, c) != Ordering::Greater);
  }
}

TEST_CASE("rational_between canonical examples") {
  CHECK(rational_between(ExtReal(rat(0)), ExtReal(rat(1))) == rat(1, 2));
  // verify sqrt(2) < 10/7 < 3/2 by squaring before freezing the value
  REQUIRE(rat(2) < rat(10, 7) * rat(10, 7));
  REQUIRE(rat(10, 7) < rat(3, 2));
  CHECK(rational_between(sqrt2(), ExtReal(rat(3, 2))) == rat(10, 7));
  CHECK_THROWS_AS(rational_between(sqrt2(), sqrt2()), EmptyGapError);
  CHECK(rational_between(ExtReal::neg_inf(), ExtReal::pos_inf()) == rat(0));
  CHECK(rational_between(ExtReal::neg_inf(), ExtReal(rat(-7, 2))) == rat(-4));
  CHECK(rational_between(ExtReal(rat(7, 2)), ExtReal::pos_inf()) == rat(4));
}

TEST_CASE("rational_between lies strictly inside the gap") {
  testgen::Rng rng(17);
  for (int i = 0; i < 3000; ++i) {
    ExtReal a = rand_ext_any(rng), b = rand_ext_any(rng);
    if (compare(a, b) == Ordering::Greater) std::swap(a, b);
    if (compare(a, b) != Ordering::Less) continue;
    Rational r = rational_between(a, b);
    REQUIRE(compare(a, ExtReal(r)) == Ordering::Less);
    REQUIRE(compare(ExtReal(r), b) == Ordering::Less);
  }
}

TEST_CASE("rational_between minimizes the denominator, then the numerator size") {
  testgen::Rng rng(23);
  int checked = 0;
  for (int i = 0; i < 600 && checked < 200; ++i) {
    ExtReal a = rand_ext_finite(rng), b = rand_ext_finite(rng);
    if (compare(a, b) == Ordering::Greater) std::swap(a, b);
    if (compare(a, b) != Ordering::Less) continue;
    Rational r = rational_between(a, b);
    Integer rd = r.get_den();
    if (rd > 64) continue;  // keep the brute force cheap
    ++checked;
    auto in_gap = [&](const Rational& q) {
      return compare(a, ExtReal(q)) == Ordering::Less && compare(ExtReal(q), b) == Ordering::Less;
    };
    for (Integer d(1); d <= rd; ++d) {
      Integer lo = ext_floor(a) * d - 1;
      Integer hi = ext_floor(b) * d + d + 1;
      for (Integer p = lo; p <= hi; ++p) {
        Rational cand = rat(p, d);
        if (cand.get_den() != d) continue;  // not in lowest terms at this denominator
        if (!in_gap(cand)) continue;
        REQUIRE(d == rd);  // no smaller denominator may fit
        Integer pn = cand.get_num();
        Integer rn = r.get_num();
        REQUIRE(abs(rn) <= abs(pn));
        if (abs(rn) == abs(pn) && rn != pn) REQUIRE(rn > 0);  // positive tie-break
      }
    }
  }
  REQUIRE(checked >= 100);
}

TEST_CASE("irrational_between produces a surd strictly inside") {
  testgen::Rng rng(29);
  for (int i = 0; i < 500; ++i) {
    ExtReal a = rand_ext_any(rng), b = rand_ext_any(rng);
    if (compare(a, b) == Ordering::Greater) std::swap(a, b);
    if (compare(a, b) != Ordering::Less) continue;
    ExtReal m = irrational_between(a, b);
    REQUIRE(m.is_surd());
    REQUIRE(compare(a, m) == Ordering::Less);
    REQUIRE(compare(m, b) == Ordering::Less);
  }
}

TEST_CASE("ext real text round trip") {
  testgen::Rng rng(31);
  for (int i = 0; i < 500; ++i) {
    ExtReal e = rand_ext_any(rng);
    CHECK(parse_ext_real(to_string(e)) == e);
  }
  CHECK(to_string(ExtReal::surd(rat(0), rat(1, 2), 2)) == "0 + 1/2*sqrt(2)");
  CHECK(to_string(ExtReal::surd(rat(1), rat(-1), 3)) == "1 - 1*sqrt(3)");
  CHECK(parse_ext_real("-inf").is_neg_inf());
  CHECK(parse_ext_real("sqrt(2)") == ExtReal::surd(rat(0), rat(1), 2));
  CHECK(parse_ext_real("1+1*sqrt(2)") == ExtReal::surd(rat(1), rat(1), 2));
}
