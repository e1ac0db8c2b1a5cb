#pragma once

// Deterministic random generators shared by the property tests and the
// acceptance suite. Endpoints are drawn from the small pool of integers,
// halves and the surds sqrt(2), sqrt(3), sqrt(2)/2 shifted by rationals.

#include <random>
#include <vector>

#include "endoq/endo.hpp"
#include "endoq/qset.hpp"

namespace endoq::testgen {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(uint64_t seed) : eng(seed) {}

  long pick(long lo, long hi) {  // inclusive
    return std::uniform_int_distribution<long>(lo, hi)(eng);
  }
  bool coin() { return pick(0, 1) == 1; }
};

inline Rational rand_rational(Rng& r, long max_num = 12, long max_den = 6) {
  long num = r.pick(-max_num, max_num);
  long den = r.pick(1, max_den);
  return rat(num, den);
}

// endpoint pool: integers, halves, sqrt(2), sqrt(3), sqrt(2)/2 +- rationals
inline ExtReal rand_pool_endpoint(Rng& r) {
  switch (r.pick(0, 5)) {
    case 0:
      return ExtReal(Rational(r.pick(-3, 3)));
    case 1:
      return ExtReal(rat(2 * r.pick(-3, 3) + 1, 2));
    case 2:
      return ExtReal::surd(Rational(r.pick(-2, 2)), rat(1), 2);
    case 3:
      return ExtReal::surd(Rational(r.pick(-2, 2)), rat(1), 3);
    default:
      return ExtReal::surd(rat(r.pick(-4, 4), 2), rat(1, 2), 2);
  }
}

inline QSet rand_qset(Rng& r, int max_components = 4) {
  int k = static_cast<int>(r.pick(0, max_components));
  std::vector<QInterval> ivs;
  for (int i = 0; i < k; ++i) {
    if (r.pick(0, 4) == 0) {
      ivs.push_back(QInterval::point(rand_rational(r, 6, 3)));
      continue;
    }
    ExtReal a = rand_pool_endpoint(r);
    ExtReal b = rand_pool_endpoint(r);
    if (r.pick(0, 7) == 0) a = ExtReal::neg_inf();
    if (r.pick(0, 7) == 0) b = ExtReal::pos_inf();
    if (compare(b, a) == Ordering::Less) std::swap(a, b);
    QInterval iv(a, r.coin(), b, r.coin());
    if (!iv.empty()) ivs.push_back(iv);
  }
  return QSet::normalize(std::move(ivs));
}

// piecewise-affine automorphism through random increasing corner points
inline Endo rand_paa_automorphism(Rng& r, int max_pieces = 6) {
  int corners = static_cast<int>(r.pick(0, max_pieces - 1));
  std::vector<std::pair<Rational, Rational>> pts;
  Rational x = rand_rational(r, 4, 2), y = rand_rational(r, 4, 2);
  for (int i = 0; i < corners; ++i) {
    pts.emplace_back(x, y);
    x += rat(r.pick(1, 6), r.pick(1, 3));
    y += rat(r.pick(1, 6), r.pick(1, 3));
  }
  static const long slopes_num[] = {1, 1, 2, 3, 1, 5};
  static const long slopes_den[] = {3, 2, 1, 1, 1, 2};
  auto slope = [&]() {
    long i = r.pick(0, 5);
    return rat(slopes_num[i], slopes_den[i]);
  };
  if (pts.empty()) {
    Rational a = slope();
    return Endo::affine(a, rand_rational(r, 4, 2));
  }
  std::vector<Piece> ps;
  Rational a0 = slope();
  ps.push_back({QInterval(ExtReal::neg_inf(), false, ExtReal(pts[0].first), true),
                AffineMap{a0, pts[0].second - a0 * pts[0].first}});
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    Rational a = (pts[i + 1].second - pts[i].second) / (pts[i + 1].first - pts[i].first);
    ps.push_back({QInterval(ExtReal(pts[i].first), false, ExtReal(pts[i + 1].first), true),
                  AffineMap{a, pts[i].second - a * pts[i].first}});
  }
  Rational an = slope();
  ps.push_back({QInterval(ExtReal(pts.back().first), false, ExtReal::pos_inf(), false),
                AffineMap{an, pts.back().second - an * pts.back().first}});
  return Endo::from_pieces(std::move(ps));
}

// random order-preserving map built from constant and affine cells
inline Endo rand_endo(Rng& r, int max_pieces = 5) {
  int cuts = static_cast<int>(r.pick(0, max_pieces - 1));
  std::vector<Rational> bps;
  Rational x = rand_rational(r, 4, 2);
  for (int i = 0; i < cuts; ++i) {
    bps.push_back(x);
    x += rat(r.pick(1, 5), r.pick(1, 2));
  }
  std::vector<Piece> ps;
  Rational level = rand_rational(r, 4, 2);
  for (int i = 0; i <= cuts; ++i) {
    ExtReal lo = i == 0 ? ExtReal::neg_inf() : ExtReal(bps[static_cast<size_t>(i - 1)]);
    ExtReal hi = i == cuts ? ExtReal::pos_inf() : ExtReal(bps[static_cast<size_t>(i)]);
    QInterval dom(lo, i != 0, hi, false);
    switch (r.pick(0, 2)) {
      case 0:
        ps.push_back({dom, ConstMap{level}});
        break;
      default: {
        Rational a = rat(r.pick(1, 3), r.pick(1, 2));
        // anchor the left end of the cell at or above the running level
        Rational xl = lo.is_neg_inf() ? (hi.rational() - 1) : lo.rational();
        Rational b = level - a * xl;
        ps.push_back({dom, AffineMap{a, b}});
        if (!hi.is_pos_inf()) level = a * hi.rational() + b;
        break;
      }
    }
    if (!hi.is_pos_inf() && r.pick(0, 2) == 0) level += rat(r.pick(0, 3), 2);
  }
  return Endo::from_pieces(std::move(ps));
}

// canonical probe pool: the first n values of the library enumeration plus
// shifted copies, deduplicated
inline std::vector<Rational> probe_pool(size_t n);

}  // namespace endoq::testgen

#include "endoq/enumeration.hpp"

namespace endoq::testgen {

inline std::vector<Rational> probe_pool(size_t n) {
  std::vector<Rational> out;
  for (size_t i = 0; i < n; ++i) out.push_back(Enumeration::base_forward(Integer(static_cast<unsigned long>(i))));
  return out;
}

}  // namespace endoq::testgen
