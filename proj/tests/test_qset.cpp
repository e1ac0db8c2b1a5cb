#include <catch2/catch_amalgamated.hpp>

#include "endoq/io.hpp"
#include "endoq/lazy_order.hpp"
#include "endoq/qset.hpp"
#include "generators.hpp"

using namespace endoq;

namespace {

ExtReal sqrt2() { return ExtReal::surd(rat(0), rat(1), 2); }
ExtReal sqrt3() { return ExtReal::surd(rat(0), rat(1), 3); }

bool raw_member(const std::vector<QInterval>& raw, const Rational& q) {
  for (const auto& iv : raw) {
    QInterval canon(iv.lo, iv.lo_closed, iv.hi, iv.hi_closed);
    if (canon.contains(q)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("normalize merges across irrational gaps and rational touch points") {
  // sqrt(2)/2 is irrational, so (0, sqrt(2)/2) and (sqrt(2)/2, 1) cover the
  // same rationals as (0, 1)
  ExtReal cut = ExtReal::surd(rat(0), rat(1, 2), 2);
  QSet a = QSet::normalize(
      {QInterval::open(ExtReal(rat(0)), cut), QInterval::open(cut, ExtReal(rat(1)))});
  CHECK(a == parse_qset("(0,1)"));
  // membership probes agree with the raw union
  std::vector<QInterval> raw = {QInterval::open(ExtReal(rat(0)), cut),
                                QInterval::open(cut, ExtReal(rat(1)))};
  for (const Rational& q : testgen::probe_pool(100)) CHECK(a.member(q) == raw_member(raw, q));

  CHECK(QSet::normalize({parse_interval("[0,1]"), parse_interval("(1,2)")}) == parse_qset("[0,2)"));
  CHECK(QSet::normalize({}) == QSet::empty());
  CHECK(QSet::normalize({parse_interval("(0,1)"), parse_interval("(1,2)")}) ==
        parse_qset("(0,1) u (1,2)"));
}

TEST_CASE("member follows the endpoint flags") {
  QSet s = parse_qset("(0,1)");
  CHECK(s.member(rat(1, 2)));
  CHECK_FALSE(s.member(rat(1)));
  CHECK(parse_qset("[0,2)").member(rat(0)));
}

TEST_CASE("complement examples") {
  CHECK(QSet::all().complement() == QSet::empty());
  CHECK(parse_qset("(0,1)").complement() == parse_qset("(-inf,0] u [1,inf)"));
  CHECK(parse_qset("[0,1]").complement() == parse_qset("(-inf,0) u (1,inf)"));
  // probe oracle
  testgen::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    QSet x = testgen::rand_qset(rng);
    QSet c = x.complement();
    for (const Rational& q : testgen::probe_pool(40)) REQUIRE(c.member(q) != x.member(q));
    REQUIRE(c.complement() == x);
  }
}

TEST_CASE("maximal intervals are the components") {
  CHECK(maximal_intervals(QSet::empty()).empty());
  QSet single = parse_qset("(0,1]");
  REQUIRE(maximal_intervals(single).size() == 1);
  CHECK(maximal_intervals(single)[0] == parse_interval("(0,1]"));
  QSet three = parse_qset("(-inf,0) u {1/2} u (1,2)");
  REQUIRE(maximal_intervals(three).size() == 3);
  // convexity: between two members of one component every probe is a member
  testgen::Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    QSet x = testgen::rand_qset(rng);
    for (const auto& comp : maximal_intervals(x)) {
      if (comp.is_singleton()) continue;
      Rational a = rational_between(comp.lo, comp.hi);
      Rational b = rational_between(ExtReal(a), comp.hi);
      Rational mid = rational_between(ExtReal(a), ExtReal(b));
      REQUIRE(x.member(mid));
    }
  }
}

TEST_CASE("closedness in Q") {
  CHECK(is_closed_in_Q(parse_interval("[0,1]")));
  CHECK(is_closed_in_Q(QInterval::open(sqrt2(), sqrt3())));
  CHECK_FALSE(is_closed_in_Q(parse_interval("[0,1)")));
  CHECK(is_closed_in_Q(parse_interval("(-inf,0]")));
  CHECK_FALSE(is_closed_in_Q(parse_interval("(-inf,0)")));
  CHECK(is_closed_in_Q(parse_interval("(-inf,inf)")));
  CHECK_THROWS_AS(is_closed_in_Q(QInterval::open(ExtReal(rat(1)), ExtReal(rat(0)))),
                  EmptyIntervalError);
}

TEST_CASE("order type signatures") {
  CHECK(order_type_signature(QSet::all()).word == "D");
  CHECK(order_type_signature(parse_qset("[0,1]")).word == "PDP");
  CHECK(order_type_signature(parse_qset("(0,1) u (2,3)")).word == "D");
  CHECK(order_type_signature(parse_qset("{0} u {1}")).word == "PP");
  CHECK(order_type_signature(QSet::empty()).word.empty());
  CHECK(order_type_signature(parse_qset("[0,1) u {2}")).word == "PDP");
}

TEST_CASE("signature rewriting is confluent under random orders") {
  testgen::Rng rng(13);
  auto random_reduce = [&](std::string w) {
    for (;;) {
      std::vector<std::pair<size_t, int>> redexes;  // position, kind (2 = DD, 3 = DPD)
      for (size_t i = 0; i + 1 < w.size(); ++i) {
        if (w[i] == 'D' && w[i + 1] == 'D') redexes.push_back({i, 2});
        if (i + 2 < w.size() && w[i] == 'D' && w[i + 1] == 'P' && w[i + 2] == 'D')
          redexes.push_back({i, 3});
      }
      if (redexes.empty()) return w;
      auto [pos, kind] = redexes[static_cast<size_t>(rng.pick(0, static_cast<long>(redexes.size()) - 1))];
      w.erase(pos, static_cast<size_t>(kind) - 1);
    }
  };
  for (int i = 0; i < 400; ++i) {
    std::string w;
    for (int j = 0; j < rng.pick(0, 12); ++j) w += rng.coin() ? 'D' : 'P';
    std::string canon = reduce_signature_word(w);
    REQUIRE(random_reduce(w) == canon);
  }
}

TEST_CASE("normalize is idempotent and preserves membership") {
  testgen::Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    std::vector<QInterval> raw;
    int k = static_cast<int>(rng.pick(0, 5));
    for (int j = 0; j < k; ++j) {
      ExtReal a = testgen::rand_pool_endpoint(rng), b = testgen::rand_pool_endpoint(rng);
      if (compare(b, a) == Ordering::Less) std::swap(a, b);
      raw.emplace_back(a, rng.coin(), b, rng.coin());
    }
    QSet s = QSet::normalize(raw);
    REQUIRE(QSet::normalize(s.components()) == s);
    for (const Rational& q : testgen::probe_pool(36)) REQUIRE(s.member(q) == raw_member(raw, q));
    // canonical invariants: components orderly and pairwise non-mergeable
    for (size_t c = 0; c + 1 < s.components().size(); ++c) {
      const auto& x = s.components()[c];
      const auto& y = s.components()[c + 1];
      REQUIRE(x.entirely_below(y));
      // at least one rational separates them
      QInterval gap(x.hi, x.hi.is_rational() && !x.hi_closed, y.lo,
                    y.lo.is_rational() && !y.lo_closed);
      REQUIRE_FALSE(gap.empty());
    }
  }
}

TEST_CASE("signature equality matches the back-and-forth oracle") {
  testgen::Rng rng(43);
  int agree = 0;
  for (int i = 0; i < 120; ++i) {
    QSet x = testgen::rand_qset(rng);
    QSet y = testgen::rand_qset(rng);
    if (x.is_empty() || y.is_empty()) continue;
    bool sig_eq = order_type_signature(x) == order_type_signature(y);
    auto res = back_and_forth(LazyOrder::subset(x), LazyOrder::subset(y), 10);
    bool survived = std::holds_alternative<PartialIso>(res);
    INFO("x = " << to_string(x) << "  y = " << to_string(y));
    REQUIRE(sig_eq == survived);
    ++agree;
  }
  REQUIRE(agree > 60);
}

TEST_CASE("qset text round trip") {
  testgen::Rng rng(51);
  for (int i = 0; i < 300; ++i) {
    QSet s = testgen::rand_qset(rng);
    CHECK(parse_qset(to_string(s)) == s);
  }
  CHECK(to_string(QSet::empty()) == "{}");
  CHECK(parse_qset("{}").is_empty());
  CHECK(parse_qset("(-inf,0] u {1/2} u (1, 1+1*sqrt(2))").size() == 3);
}
