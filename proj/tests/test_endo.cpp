#include <catch2/catch_amalgamated.hpp>

#include "endoq/constructions.hpp"
#include "endoq/io.hpp"
#include "generators.hpp"

using namespace endoq;

namespace {

Endo clamp01() { return retract_onto(parse_qset("[0,1]")); }

}  // namespace

TEST_CASE("apply evaluates pieces exactly") {
  CHECK(Endo::identity()(rat(5, 3)) == rat(5, 3));
  CHECK(clamp01()(rat(-7)) == rat(0));
  CHECK(clamp01()(rat(1, 2)) == rat(1, 2));
  CHECK(clamp01()(rat(7)) == rat(1));
  CHECK(Endo::affine(rat(2), rat(1))(rat(1, 2)) == rat(2));
}

TEST_CASE("compose applies the left factor first") {
  Endo c0 = Endo::constant(rat(0));
  Endo shift = Endo::affine(rat(1), rat(1));
  CHECK(compose(c0, shift) == Endo::constant(rat(1)));
  CHECK(compose(Endo::affine(rat(2), rat(0)), shift) == Endo::affine(rat(2), rat(1)));
  CHECK(compose(clamp01(), clamp01()) == clamp01());
}

TEST_CASE("compose agrees with pointwise evaluation and is associative") {
  testgen::Rng rng(101);
  auto probes = testgen::probe_pool(24);
  for (int i = 0; i < 120; ++i) {
    Endo f = testgen::rand_endo(rng);
    Endo g = testgen::rand_endo(rng);
    Endo h = testgen::rand_endo(rng);
    Endo fg = compose(f, g);
    Endo left = compose(fg, h);
    Endo right = compose(f, compose(g, h));
    for (const Rational& q : probes) {
      REQUIRE(fg(q) == g(f(q)));
      REQUIRE(left(q) == right(q));
    }
  }
}

TEST_CASE("generated endos are monotone") {
  testgen::Rng rng(103);
  auto probes = testgen::probe_pool(20);
  for (int i = 0; i < 500; ++i) {
    Endo f = testgen::rand_endo(rng);
    for (size_t a = 0; a < probes.size(); ++a)
      for (size_t b = a; b < probes.size(); ++b) {
        Rational lo = std::min(probes[a], probes[b]);
        Rational hi = std::max(probes[a], probes[b]);
        REQUIRE(f(lo) <= f(hi));
      }
  }
}

TEST_CASE("invalid piece lists are rejected") {
  // overlapping domains
  CHECK_THROWS_AS(Endo::from_pieces({{parse_interval("(-inf,1)"), IdentityMap{}},
                                     {parse_interval("(0,inf)"), IdentityMap{}}}),
                  InvalidEndoError);
  // gap in the domain
  CHECK_THROWS_AS(Endo::from_pieces({{parse_interval("(-inf,0)"), IdentityMap{}},
                                     {parse_interval("(1,inf)"), IdentityMap{}}}),
                  InvalidEndoError);
  // order violation between pieces
  CHECK_THROWS_AS(Endo::from_pieces({{parse_interval("(-inf,0)"), ConstMap{rat(5)}},
                                     {parse_interval("[0,inf)"), ConstMap{rat(0)}}}),
                  InvalidEndoError);
}

TEST_CASE("image transports endpoints through the pieces") {
  CHECK(image(Endo::identity()) == QSet::all());
  CHECK(image(clamp01()) == parse_qset("[0,1]"));
  Endo iso_to_unit = Endo::from_pieces(
      {{QInterval::all(), canon_iso(QInterval::all(), parse_interval("(0,1)"))}});
  CHECK(image(iso_to_unit) == parse_qset("(0,1)"));
}

TEST_CASE("image soundness and completeness on probes") {
  testgen::Rng rng(107);
  auto probes = testgen::probe_pool(30);
  for (int i = 0; i < 200; ++i) {
    Endo f = testgen::rand_endo(rng);
    QSet im = image(f);
    for (const Rational& q : probes) {
      REQUIRE(im.member(f(q)));
      if (im.member(q)) {
        auto pre = preimage_of_value(f, q);
        REQUIRE(pre.has_value());
        REQUIRE(f(pick_rational(*pre)) == q);
      }
    }
  }
}

TEST_CASE("kernel classes") {
  CHECK(kernel_classes(Endo::identity()).empty());
  auto ks = kernel_classes(clamp01());
  REQUIRE(ks.size() == 2);
  CHECK(ks[0].value == rat(0));
  CHECK(ks[0].cls == parse_interval("(-inf,0]"));
  CHECK(ks[1].value == rat(1));
  CHECK(ks[1].cls == parse_interval("[1,inf)"));
  auto kc = kernel_classes(Endo::constant(rat(5)));
  REQUIRE(kc.size() == 1);
  CHECK(kc[0].value == rat(5));
  CHECK(kc[0].cls == QInterval::all());
}

TEST_CASE("idempotency decisions") {
  CHECK(is_idempotent(clamp01()).is_true());
  Endo shift = Endo::affine(rat(1), rat(1));
  CHECK(is_idempotent(shift).is_false());
  auto w = idempotency_witness(shift);
  REQUIRE(w.has_value());
  CHECK(shift(shift(*w)) != shift(*w));
  // canonical self-isomorphism normalizes to the identity
  Endo selfiso = Endo::from_pieces({{parse_interval("(-inf,0)"), IdentityMap{}},
                                    {parse_interval("[0,inf)"),
                                     canon_iso(parse_interval("[0,inf)"), parse_interval("[0,inf)"))}});
  CHECK(selfiso == Endo::identity());
  CHECK(is_idempotent(selfiso).is_true());
}

TEST_CASE("idempotent implies double application is stable") {
  testgen::Rng rng(109);
  auto probes = testgen::probe_pool(40);
  int found = 0;
  for (int i = 0; i < 400; ++i) {
    Endo f = testgen::rand_endo(rng);
    Tristate t = is_idempotent(f);
    if (t.is_true()) {
      ++found;
      for (const Rational& q : probes) REQUIRE(f(f(q)) == f(q));
    } else if (t.is_false()) {
      auto w = idempotency_witness(f);
      REQUIRE(w.has_value());
      REQUIRE(f(f(*w)) != f(*w));
    }
  }
  REQUIRE(found > 10);
}

TEST_CASE("canonical interval isomorphisms") {
  QInterval i = parse_interval("(0,1)");
  CHECK(std::holds_alternative<IdentityMap>(canon_iso(i, i)));
  CHECK_THROWS_AS(canon_iso(parse_interval("[0,1)"), parse_interval("(0,1)")), TypeMismatchError);

  QInterval j(ExtReal(rat(0)), false, ExtReal::surd(rat(0), rat(1), 2), false);
  PieceMap m = canon_iso(i, j);
  const auto& iso = std::get<CanonIsoMap>(m);
  // successive anchors of the source map to successive anchors of the target
  for (long k = -6; k <= 6; ++k)
    CHECK(canon_iso_apply(iso, detail::anchor(i, k)) == detail::anchor(j, k));
  // monotone on probes
  Rational prev = canon_iso_apply(iso, detail::anchor(i, -50));
  testgen::Rng rng(113);
  std::vector<Rational> xs;
  for (int t = 0; t < 100; ++t) xs.push_back(rat(rng.pick(1, 999), 1000));
  std::sort(xs.begin(), xs.end());
  for (const auto& x : xs) {
    Rational y = canon_iso_apply(iso, x);
    REQUIRE(y > rat(0));
    REQUIRE(prev <= y);
    prev = y;
  }
}

TEST_CASE("canonical isomorphism round trip") {
  QInterval i = parse_interval("(-inf,2)");
  QInterval j(ExtReal::neg_inf(), false, ExtReal::surd(rat(0), rat(1, 2), 2), false);
  auto fwd = std::get<CanonIsoMap>(canon_iso(i, j));
  auto bwd = std::get<CanonIsoMap>(canon_iso(j, i));
  testgen::Rng rng(127);
  for (int t = 0; t < 1000; ++t) {
    Rational x = rat(rng.pick(-4000, 1999), 1000);
    REQUIRE(canon_iso_apply(bwd, canon_iso_apply(fwd, x)) == x);
  }
  // structurally, the two cancel inside a composition
  Endo ef = Endo::from_pieces({{i, fwd}, {parse_interval("[2,inf)"), AffineMap{rat(1), rat(0)}}});
  // round trip through an endo: iso then inverse collapses to the identity
  Endo eb = Endo::from_pieces({{j, bwd},
                               {QInterval(ExtReal::surd(rat(0), rat(1, 2), 2), false,
                                          ExtReal::pos_inf(), false),
                                AffineMap{rat(1), rat(0)}}});
  CHECK(std::holds_alternative<IdentityMap>(compose(ef, eb).pieces()[0].map));
}

TEST_CASE("invert") {
  CHECK(invert(Endo::affine(rat(1), rat(1))) == Endo::affine(rat(1), rat(-1)));
  CHECK(invert(Endo::identity()) == Endo::identity());
  CHECK_THROWS_AS(invert(clamp01()), NotBijectiveError);
  testgen::Rng rng(131);
  auto probes = testgen::probe_pool(20);
  for (int i = 0; i < 200; ++i) {
    Endo f = testgen::rand_paa_automorphism(rng);
    Endo g = invert(f);
    for (const Rational& q : probes) REQUIRE(g(f(q)) == q);
  }
}

TEST_CASE("extensional equality") {
  Endo f = clamp01();
  CHECK(equal(f, f).is_true());
  CHECK(equal(Endo::identity(), Endo::affine(rat(1), rat(1))).is_false());
  // same function, different construction route: exact piecewise-affine check
  Endo a = Endo::from_pieces({{parse_interval("(-inf,0)"), AffineMap{rat(1), rat(1)}},
                              {parse_interval("[0,inf)"), AffineMap{rat(1), rat(1)}}});
  CHECK(a == Endo::affine(rat(1), rat(1)));
  // iso round trips never come out False: iso with constant tails against its
  // inverse-on-image collapses to the retract onto [0,1]
  QInterval unit = parse_interval("(0,1)");
  QInterval shifted = parse_interval("(2,3)");
  Endo into = Endo::from_pieces({{parse_interval("(-inf,0]"), ConstMap{rat(2)}},
                                 {unit, canon_iso(unit, shifted)},
                                 {parse_interval("[1,inf)"), ConstMap{rat(3)}}});
  Endo back = Endo::from_pieces({{parse_interval("(-inf,2]"), ConstMap{rat(0)}},
                                 {shifted, canon_iso(shifted, unit)},
                                 {parse_interval("[3,inf)"), ConstMap{rat(1)}}});
  Tristate t = equal(compose(into, back), clamp01());
  CHECK_FALSE(t.is_false());
  CHECK(t.is_true());  // the iso interfaces cancel structurally
}

TEST_CASE("endo text round trip") {
  testgen::Rng rng(137);
  for (int i = 0; i < 200; ++i) {
    Endo f = testgen::rand_endo(rng);
    CHECK(parse_endo(to_string(f)) == f);
  }
  Endo crazy = Endo::from_pieces(
      {{parse_interval("(-inf,0)"), ConstMap{rat(0)}},
       {parse_interval("[0,1)"), AffineMap{rat(1, 2), rat(0)}},
       {parse_interval("[1,inf)"),
        canon_iso(parse_interval("[1,inf)"), parse_interval("[2,inf)"))}});
  CHECK(parse_endo(to_string(crazy)) == crazy);
}
