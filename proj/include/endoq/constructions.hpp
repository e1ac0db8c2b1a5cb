#pragma once

#include <optional>
#include <vector>

#include "endoq/endo.hpp"

namespace endoq {

struct ClosedGapError : std::runtime_error {
  QInterval gap;
  explicit ClosedGapError(QInterval g)
      : std::runtime_error("complement has a closed maximal interval"), gap(std::move(g)) {}
};
struct EmptySetError : std::runtime_error {
  EmptySetError() : std::runtime_error("construction requires a nonempty set") {}
};
struct NotIdempotentError : std::runtime_error {
  NotIdempotentError() : std::runtime_error("endomorphism is not decided idempotent") {}
};
struct NotInImageError : std::runtime_error {
  NotInImageError() : std::runtime_error("value is not in the image") {}
};
struct MaxElementError : std::runtime_error {
  MaxElementError() : std::runtime_error("value is the maximum of the image") {}
};
struct BadGammaError : std::runtime_error {
  explicit BadGammaError(const std::string& why) : std::runtime_error("bad gamma: " + why) {}
};
struct FiniteImageError : std::runtime_error {
  FiniteImageError() : std::runtime_error("construction requires an infinite image") {}
};
struct BadParamsError : std::runtime_error {
  explicit BadParamsError(const std::string& why) : std::runtime_error("bad parameters: " + why) {}
};
struct BadSplitError : std::runtime_error {
  explicit BadSplitError(const std::string& why) : std::runtime_error("bad split: " + why) {}
};

// ---------------------------------------------------------------------------
// retracts

// A subset of Q is the image of an idempotent exactly when no maximal
// interval of its complement is closed in Q. Returns the first closed gap,
// or nothing when the criterion holds.
inline std::optional<QInterval> retract_image_criterion(const QSet& x) {
  QSet gaps = x.complement();
  for (const auto& gap : gaps.components())
    if (is_closed_in_Q(gap)) return gap;
  return std::nullopt;
}

// The canonical idempotent with image exactly x: identity on x, and each gap
// collapsed to its rational endpoint ([q,r) -> r, (q,r] -> q, (q,r) -> the
// rational end).
inline Endo retract_onto(const QSet& x) {
  if (x.is_empty()) throw EmptySetError();
  if (auto gap = retract_image_criterion(x)) throw ClosedGapError(*gap);
  std::vector<Piece> ps;
  for (const auto& comp : x.components()) ps.push_back({comp, IdentityMap{}});
  QSet gaps = x.complement();
  for (const auto& gap : gaps.components()) {
    Rational target;
    if (gap.lo_closed)
      target = gap.hi.rational();  // [q,r): r is rational and in x
    else if (gap.hi_closed)
      target = gap.lo.rational();  // (q,r]
    else if (gap.lo.is_rational())
      target = gap.lo.rational();  // (q,r) with q rational
    else
      target = gap.hi.rational();  // (q,r) with q irrational, r rational
    ps.push_back({gap, ConstMap{target}});
  }
  return Endo::from_pieces(std::move(ps));
}

// A (generally non-idempotent) endomorphism with image exactly x, used where
// the paper reaches for an arbitrary endomorphism with prescribed image.
// Each component gets a cell of the domain; the cell collapses onto included
// endpoints and maps canonically onto the dense interior.
inline Endo onto_endo(const QSet& x) {
  if (x.is_empty()) throw EmptySetError();
  const auto& comps = x.components();
  const size_t m = comps.size();
  // cell boundaries: cut i sits between component i and i+1
  std::vector<ExtReal> cuts;
  std::vector<bool> cut_to_left;  // cut belongs to the left cell
  for (size_t i = 0; i + 1 < m; ++i) {
    bool left_closed = comps[i].hi_closed;
    bool right_closed = comps[i + 1].lo_closed;
    if (left_closed || right_closed) {
      cuts.push_back(ExtReal(Rational(static_cast<long>(i) + 1)));
      cut_to_left.push_back(left_closed);
    } else {
      cuts.push_back(ExtReal::surd(Rational(static_cast<long>(i) + 1), rat(1, 2), 2));
      cut_to_left.push_back(false);
    }
  }
  std::vector<Piece> ps;
  for (size_t i = 0; i < m; ++i) {
    ExtReal lo = i == 0 ? ExtReal::neg_inf() : cuts[i - 1];
    bool lo_closed = i > 0 && cuts[i - 1].is_rational() && !cut_to_left[i - 1];
    ExtReal hi = i + 1 == m ? ExtReal::pos_inf() : cuts[i];
    bool hi_closed = i + 1 < m && cuts[i].is_rational() && cut_to_left[i];
    QInterval cell(lo, lo_closed, hi, hi_closed);
    const QInterval& target = comps[i];
    if (target.is_singleton()) {
      ps.push_back({cell, ConstMap{target.lo.rational()}});
      continue;
    }
    QInterval interior = QInterval::open(target.lo, target.hi);
    if (target.lo_closed && target.hi_closed) {
      Rational u = rational_between(cell.lo, cell.hi);
      Rational v = rational_between(ExtReal(u), cell.hi);
      ps.push_back({QInterval(cell.lo, cell.lo_closed, ExtReal(u), true),
                    ConstMap{target.lo.rational()}});
      ps.push_back({QInterval::open(ExtReal(u), ExtReal(v)),
                    canon_iso(QInterval::open(ExtReal(u), ExtReal(v)), interior)});
      ps.push_back({QInterval(ExtReal(v), true, cell.hi, cell.hi_closed),
                    ConstMap{target.hi.rational()}});
    } else if (target.lo_closed) {
      Rational u = rational_between(cell.lo, cell.hi);
      ps.push_back({QInterval(cell.lo, cell.lo_closed, ExtReal(u), true),
                    ConstMap{target.lo.rational()}});
      QInterval mid = QInterval::open(ExtReal(u), cell.hi);
      ps.push_back({mid, canon_iso(mid, interior)});
    } else if (target.hi_closed) {
      Rational v = rational_between(cell.lo, cell.hi);
      QInterval mid = QInterval::open(cell.lo, ExtReal(v));
      ps.push_back({mid, canon_iso(mid, interior)});
      ps.push_back({QInterval(ExtReal(v), true, cell.hi, cell.hi_closed),
                    ConstMap{target.hi.rational()}});
    } else {
      ps.push_back({cell, canon_iso(cell, interior)});
    }
  }
  return Endo::from_pieces(std::move(ps));
}

// ---------------------------------------------------------------------------
// idempotent image analysis (the L_x / U_x attribution)

enum class GapCase { I, II, III, IV, Empty };

struct GapAttribution {
  Rational x;
  std::optional<QInterval> lower;  // L_x
  GapCase lower_case = GapCase::Empty;
  std::optional<QInterval> upper;  // U_x
  GapCase upper_case = GapCase::Empty;
  std::optional<Rational> m_x, n_x;
};

inline std::vector<GapAttribution> analyze_idempotent(const Endo& f, int depth = 10) {
  if (!is_idempotent(f, depth).is_true()) throw NotIdempotentError();
  QSet x = image(f);
  std::vector<GapAttribution> out;
  for (const auto& kc : kernel_classes(f)) {
    GapAttribution g;
    g.x = kc.value;
    const ExtReal val(kc.value);
    // lower side
    if (kc.cls.lo != val) {
      const ExtReal& alpha = kc.cls.lo;
      if (alpha.is_neg_inf()) {
        g.lower = QInterval::open(alpha, val);
        g.lower_case = GapCase::I;
      } else if (alpha.is_rational() && x.member(alpha.rational())) {
        g.m_x = alpha.rational();
        g.lower = QInterval::open(alpha, val);
        g.lower_case = GapCase::II;
      } else {
        QSet below = x.intersect_with(QInterval::open(ExtReal::neg_inf(), val));
        if (auto mx = below.max_element()) {
          g.m_x = *mx;
          g.lower = QInterval::open(ExtReal(*mx), val);
          g.lower_case = GapCase::III;
        } else {
          g.lower = QInterval(alpha, alpha.is_rational(), val, false);
          g.lower_case = GapCase::IV;
        }
      }
    }
    // upper side
    if (kc.cls.hi != val) {
      const ExtReal& beta = kc.cls.hi;
      if (beta.is_pos_inf()) {
        g.upper = QInterval::open(val, beta);
        g.upper_case = GapCase::I;
      } else if (beta.is_rational() && x.member(beta.rational())) {
        g.n_x = beta.rational();
        g.upper = QInterval::open(val, beta);
        g.upper_case = GapCase::II;
      } else {
        QSet above = x.intersect_with(QInterval::open(val, ExtReal::pos_inf()));
        if (auto nx = above.min_element()) {
          g.n_x = *nx;
          g.upper = QInterval::open(val, ExtReal(*nx));
          g.upper_case = GapCase::III;
        } else {
          g.upper = QInterval(val, false, beta, beta.is_rational());
          g.upper_case = GapCase::IV;
        }
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

// ---------------------------------------------------------------------------
// the xi/eta machinery of the variant constructions

enum class VariantCase { One, Two, Three };

struct VariantMaps {
  VariantCase c;
  Endo xi, eta;
  ExtReal alpha, beta, gamma;
  std::optional<ExtReal> delta;
};

namespace detail {

// Builds xi and eta from the kernel interval I = q f^{-1} and the parameter
// gamma >= sup I, following the three cases of the idempotent-variant proof.
inline VariantMaps build_variant_maps(const QInterval& i, const ExtReal& gamma) {
  const ExtReal alpha = i.lo;
  const ExtReal beta = i.hi;
  if (gamma.is_infinite()) throw BadGammaError("gamma must be finite");
  if (compare(gamma, beta) == Ordering::Less) throw BadGammaError("gamma below sup of the class");

  VariantMaps vm;
  vm.alpha = alpha;
  vm.beta = beta;
  vm.gamma = gamma;

  if (beta.is_surd()) {
    // Case 1: sup irrational; gamma must be irrational too. xi folds
    // (delta,gamma) down onto (delta,beta) so that the kernel interval of the
    // product stretches to gamma; eta is its inverse automorphism.
    if (!gamma.is_surd()) throw BadGammaError("case 1 requires an irrational gamma");
    vm.c = VariantCase::One;
    ExtReal delta = irrational_between(alpha, beta);
    vm.delta = delta;
    QInterval db = QInterval::open(delta, beta);
    QInterval dg = QInterval::open(delta, gamma);
    QInterval binf = QInterval::open(beta, ExtReal::pos_inf());
    QInterval ginf = QInterval::open(gamma, ExtReal::pos_inf());
    vm.xi = Endo::from_pieces({{QInterval::open(ExtReal::neg_inf(), delta), IdentityMap{}},
                               {dg, canon_iso(dg, db)},
                               {ginf, canon_iso(ginf, binf)}});
    vm.eta = invert(vm.xi);
    return vm;
  }

  const Rational b = beta.rational();
  if (i.hi_closed) {
    // Case 2: sup rational and attained
    vm.c = VariantCase::Two;
    QInterval ginf = QInterval::open(gamma, ExtReal::pos_inf());
    QInterval binf = QInterval::open(beta, ExtReal::pos_inf());
    vm.xi = Endo::from_pieces({{QInterval(ExtReal::neg_inf(), false, beta, true), IdentityMap{}},
                               {QInterval(beta, false, gamma, true), ConstMap{b}},
                               {ginf, canon_iso(ginf, binf)}});
    vm.eta = Endo::from_pieces({{QInterval(ExtReal::neg_inf(), false, beta, true), IdentityMap{}},
                                {binf, canon_iso(binf, ginf)}});
    return vm;
  }

  // Case 3: sup rational, not attained
  vm.c = VariantCase::Three;
  Rational delta = rational_between(gamma, ext_add(gamma, Rational(1)));
  vm.delta = ExtReal(delta);
  QInterval ag = QInterval::open(alpha, gamma);
  QInterval ab = QInterval::open(alpha, beta);
  QInterval dinf = QInterval::open(ExtReal(delta), ExtReal::pos_inf());
  QInterval binf = QInterval::open(beta, ExtReal::pos_inf());
  vm.xi = Endo::from_pieces({{QInterval(ExtReal::neg_inf(), false, alpha, true), IdentityMap{}},
                             {ag, canon_iso(ag, ab)},
                             {QInterval(gamma, true, ExtReal(delta), true), ConstMap{b}},
                             {dinf, canon_iso(dinf, binf)}});
  vm.eta = Endo::from_pieces({{QInterval(ExtReal::neg_inf(), false, alpha, true), IdentityMap{}},
                              {ab, canon_iso(ab, ag)},
                              {QInterval(beta, true, beta, true), ConstMap{delta}},
                              {binf, canon_iso(binf, dinf)}});
  return vm;
}

inline QInterval kernel_interval_of(const Endo& f, const Rational& q) {
  QSet x = image(f);
  if (!x.member(q)) throw NotInImageError();
  if (auto mx = x.max_element())
    if (*mx == q) throw MaxElementError();
  auto pre = preimage_of_value(f, q);
  if (!pre) throw NotInImageError();
  return *pre;
}

}  // namespace detail

struct IdempotentVariant {
  VariantMaps maps;
  Endo g;  // xi f eta
};

// g_gamma = xi f eta: an idempotent with image order-isomorphic to im f whose
// kernel class at q has been stretched to an interval J between (alpha,gamma)
// and [alpha,gamma].
inline IdempotentVariant idempotent_variant(const Endo& f, const Rational& q, const ExtReal& gamma,
                                            int depth = 10) {
  if (!is_idempotent(f, depth).is_true()) throw NotIdempotentError();
  QInterval i = detail::kernel_interval_of(f, q);
  VariantMaps vm = detail::build_variant_maps(i, gamma);
  Endo g = compose(compose(vm.xi, f), vm.eta);
  return {std::move(vm), std::move(g)};
}

struct RClassVariant {
  VariantMaps maps;
  Endo h;  // xi f, L-related to f via eta (xi f) = f
};

// h = xi f: same image as f, kernel class at q stretched; distinct gammas
// give distinct kernels (the R-class variety inside the L-class of f).
inline RClassVariant r_class_variant(const Endo& f, const Rational& q, const ExtReal& gamma) {
  QInterval i = detail::kernel_interval_of(f, q);
  VariantMaps vm = detail::build_variant_maps(i, gamma);
  Endo h = compose(vm.xi, f);
  return {std::move(vm), std::move(h)};
}

// ---------------------------------------------------------------------------
// L-class variants

struct LClassVariant {
  Endo h;
  Endo xi;
  std::optional<Endo> eta;  // present in case (b); case (a)'s xi is an automorphism
  char case_tag;            // 'a' or 'b'
};

namespace detail {

// strips the attained maxima x_1 > x_2 > ... greedily; returns them together
// with the remainder
inline std::pair<std::vector<Rational>, QSet> strip_maxima(const QSet& x) {
  std::vector<Rational> maxima;
  QSet rest = x;
  while (auto m = rest.max_element()) {
    maxima.push_back(*m);
    rest = rest.intersect_with(QInterval::open(ExtReal::neg_inf(), ExtReal(*m)));
  }
  return {std::move(maxima), std::move(rest)};
}

}  // namespace detail

// case (a): move the top k attained isolated maxima of im f to the given
// strictly descending rationals via an automorphism xi; h = f xi.
inline LClassVariant l_class_variant_moving_maxima(const Endo& f, const std::vector<Rational>& qs) {
  QSet x = image(f);
  if (!x.is_infinite()) throw FiniteImageError();
  if (qs.empty()) throw BadParamsError("need at least one target value");
  for (size_t i = 0; i + 1 < qs.size(); ++i)
    if (!(qs[i] > qs[i + 1])) throw BadParamsError("targets must be strictly descending");
  auto [maxima, rest0] = detail::strip_maxima(x);
  const size_t k = qs.size();
  if (maxima.size() < k) throw BadParamsError("image has fewer attained maxima than targets");
  // remainder after removing exactly the top k
  QSet rest = x.intersect_with(QInterval::open(ExtReal::neg_inf(), ExtReal(maxima[k - 1])));
  ExtReal alpha = rest.is_empty() ? ExtReal::neg_inf() : rest.components().back().hi;
  if (compare(alpha, ExtReal(maxima[k - 1])) != Ordering::Less)
    throw BadParamsError("smallest moved maximum is not isolated above the rest");
  if (compare(alpha, ExtReal(qs[k - 1])) != Ordering::Less)
    throw BadParamsError("targets must stay above the supremum of the remainder");
  if (x.member(qs.front())) throw BadParamsError("largest target must avoid the image");

  // xi: identity up to alpha, staircase (alpha, x_k) -> (alpha, q_k), then
  // affine interpolation through the corners (x_i, q_i), translation at the top
  std::vector<Piece> ps;
  QInterval below(ExtReal::neg_inf(), false, alpha, alpha.is_rational());
  if (!below.empty()) ps.push_back({below, IdentityMap{}});
  QInterval sa = QInterval::open(alpha, ExtReal(maxima[k - 1]));
  QInterval sb = QInterval::open(alpha, ExtReal(qs[k - 1]));
  ps.push_back({sa, canon_iso(sa, sb)});
  for (size_t j = k; j >= 1; --j) {
    // segment [x_j, x_{j-1}) -> [q_j, q_{j-1}) in descending index order
    Rational x1 = maxima[j - 1];
    Rational y1 = qs[j - 1];
    if (j == 1) {
      ps.push_back({QInterval(ExtReal(x1), true, ExtReal::pos_inf(), false),
                    AffineMap{Rational(1), y1 - x1}});
    } else {
      Rational x0 = maxima[j - 1], y0 = qs[j - 1];
      Rational xm = maxima[j - 2], ym = qs[j - 2];
      Rational a = (ym - y0) / (xm - x0);
      ps.push_back({QInterval(ExtReal(x0), true, ExtReal(xm), false), AffineMap{a, y0 - a * x0}});
    }
  }
  Endo xi = Endo::from_pieces(std::move(ps));
  return {compose(f, xi), std::move(xi), std::nullopt, 'a'};
}

// case (b): squash everything below alpha = sup of the maximum-free part
// down below beta; h = f xi, with eta witnessing f xi eta = f.
inline LClassVariant l_class_variant_squash(const Endo& f, const ExtReal& beta,
                                            const Rational& gamma) {
  QSet x = image(f);
  if (!x.is_infinite()) throw FiniteImageError();
  auto [maxima, rest] = detail::strip_maxima(x);
  if (rest.is_empty()) throw BadParamsError("image has no maximum-free part");
  ExtReal alpha = rest.components().back().hi;
  if (beta.is_infinite() || compare(beta, alpha) != Ordering::Less)
    throw BadParamsError("beta must be a finite value below the supremum of the maximum-free part");
  ExtReal g(gamma);
  if (compare(g, alpha) == Ordering::Less) throw BadParamsError("gamma must be at least alpha");
  if (!maxima.empty() && gamma > maxima.back()) throw BadParamsError("gamma above the smallest maximum");

  QInterval below_alpha = QInterval::open(ExtReal::neg_inf(), alpha);
  QInterval below_beta = QInterval::open(ExtReal::neg_inf(), beta);
  Endo xi = Endo::from_pieces({{below_alpha, canon_iso(below_alpha, below_beta)},
                               {QInterval(alpha, alpha.is_rational(), ExtReal::pos_inf(), false),
                                IdentityMap{}}});
  Endo eta = Endo::from_pieces({{below_beta, canon_iso(below_beta, below_alpha)},
                                {QInterval(beta, beta.is_rational(), g, true), ConstMap{gamma}},
                                {QInterval(g, false, ExtReal::pos_inf(), false), IdentityMap{}}});
  return {compose(f, xi), std::move(xi), std::move(eta), 'b'};
}

// ---------------------------------------------------------------------------
// the non-regular endomorphism

struct NonRegularEndo {
  Endo f;    // g xi, the non-regular endomorphism
  Endo g;    // endomorphism with image exactly x
  Endo xi;   // embedding collapsing (-inf, alpha) to (-inf, delta)
  ExtReal alpha;
  Rational delta;
  QSet x;
};

// Requires an irrational alpha interior to a component of x, so that
// X_- < alpha < X_+ with sup X_- = inf X_+ = alpha and neither bound is
// attained. The image of f then approaches delta from below but alpha from
// above, and no h can satisfy f h f = f.
inline NonRegularEndo nonregular_endo(const QSet& x, const ExtReal& alpha) {
  if (!alpha.is_surd()) throw BadSplitError("split point must be irrational");
  bool interior = false;
  for (const auto& c : x.components())
    if (compare(c.lo, alpha) == Ordering::Less && compare(alpha, c.hi) == Ordering::Less) {
      interior = true;
      break;
    }
  if (!interior) throw BadSplitError("split point must lie inside a component");

  Endo g = onto_endo(x);
  Rational center = rational_between(ExtReal::neg_inf(), alpha);
  Rational delta = rational_between(ExtReal(center), alpha);
  QInterval below_alpha = QInterval::open(ExtReal::neg_inf(), alpha);
  QInterval below_delta = QInterval::open(ExtReal::neg_inf(), ExtReal(delta));
  Endo xi = Endo::from_pieces({{below_alpha, canon_iso(below_alpha, below_delta)},
                               {QInterval::open(alpha, ExtReal::pos_inf()), IdentityMap{}}});
  Endo f = compose(g, xi);
  return {std::move(f), std::move(g), std::move(xi), alpha, std::move(delta), x};
}

// Checks the structural certificate of non-regularity: the image splits at
// the irrational alpha, its lower part now has rational supremum delta with
// nothing of the image in [delta, alpha], and a rational sits in between.
inline bool validate_nonregular_certificate(const NonRegularEndo& nr) {
  if (!nr.alpha.is_surd()) return false;
  QSet im = image(nr.f);
  QSet lower = im.intersect_with(QInterval::open(ExtReal::neg_inf(), nr.alpha));
  QSet upper = im.intersect_with(QInterval::open(nr.alpha, ExtReal::pos_inf()));
  if (lower.is_empty() || upper.is_empty()) return false;
  // lower part accumulates at delta from below, never attaining it
  const QInterval& last = lower.components().back();
  if (last.hi != ExtReal(nr.delta) || last.hi_closed) return false;
  if (im.member(nr.delta)) return false;
  // upper part accumulates at alpha
  if (upper.components().front().lo != nr.alpha) return false;
  // the straddle gap (delta, alpha) misses the image and contains a rational
  QSet gap = im.intersect_with(QInterval::open(ExtReal(nr.delta), nr.alpha));
  if (!gap.is_empty()) return false;
  if (compare(ExtReal(nr.delta), nr.alpha) != Ordering::Less) return false;
  // image order type is preserved
  return order_type_signature(im) == order_type_signature(nr.x);
}

}  // namespace endoq
