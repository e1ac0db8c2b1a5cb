#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "endoq/ext_real.hpp"

namespace endoq {

struct EmptyIntervalError : std::runtime_error {
  EmptyIntervalError() : std::runtime_error("operation requires a nonempty interval") {}
};

// An interval of Q with endpoints in R*. Denotes a set of rationals only;
// closed flags are meaningful (and permitted) only at finite rational
// endpoints.
struct QInterval {
  ExtReal lo;
  bool lo_closed = false;
  ExtReal hi;
  bool hi_closed = false;

  QInterval() : lo(ExtReal::neg_inf()), hi(ExtReal::pos_inf()) {}
  QInterval(ExtReal l, bool lc, ExtReal h, bool hc)
      : lo(std::move(l)), lo_closed(lc), hi(std::move(h)), hi_closed(hc) {
    if (!lo.is_rational()) lo_closed = false;
    if (!hi.is_rational()) hi_closed = false;
  }

  static QInterval all() { return QInterval(); }
  static QInterval point(const Rational& q) { return QInterval(ExtReal(q), true, ExtReal(q), true); }
  static QInterval open(const ExtReal& l, const ExtReal& h) { return QInterval(l, false, h, false); }
  static QInterval closed(const ExtReal& l, const ExtReal& h) { return QInterval(l, true, h, true); }

  bool empty() const {
    Ordering c = compare(lo, hi);
    if (c == Ordering::Greater) return true;
    if (c == Ordering::Equal) return !(lo_closed && hi_closed && lo.is_rational());
    return false;
  }

  bool is_singleton() const {
    return compare(lo, hi) == Ordering::Equal && lo_closed && hi_closed && lo.is_rational();
  }

  bool has_min() const { return lo_closed; }
  bool has_max() const { return hi_closed; }

  bool contains(const Rational& q) const {
    ExtReal e(q);
    Ordering cl = compare(lo, e);
    if (cl == Ordering::Greater) return false;
    if (cl == Ordering::Equal && !lo_closed) return false;
    Ordering ch = compare(e, hi);
    if (ch == Ordering::Greater) return false;
    if (ch == Ordering::Equal && !hi_closed) return false;
    return true;
  }

  // whole-interval comparison: every point of *this below every point of o
  bool entirely_below(const QInterval& o) const {
    Ordering c = compare(hi, o.lo);
    if (c == Ordering::Less) return true;
    if (c == Ordering::Greater) return false;
    return !(hi_closed && o.lo_closed);
  }

  bool operator==(const QInterval& o) const {
    return lo == o.lo && hi == o.hi && lo_closed == o.lo_closed && hi_closed == o.hi_closed;
  }
  bool operator!=(const QInterval& o) const { return !(*this == o); }
};

// Canonical rational member used wherever a deterministic representative of
// an interval is needed: an included endpoint if present, else the canonical
// interior rational.
inline Rational pick_rational(const QInterval& iv) {
  if (iv.empty()) throw EmptyIntervalError();
  if (iv.lo_closed) return iv.lo.rational();
  if (iv.hi_closed) return iv.hi.rational();
  return rational_between(iv.lo, iv.hi);
}

inline std::optional<QInterval> intersect(const QInterval& a, const QInterval& b) {
  ExtReal lo = a.lo;
  bool lc = a.lo_closed;
  Ordering c = compare(b.lo, lo);
  if (c == Ordering::Greater) {
    lo = b.lo;
    lc = b.lo_closed;
  } else if (c == Ordering::Equal) {
    lc = lc && b.lo_closed;
  }
  ExtReal hi = a.hi;
  bool hc = a.hi_closed;
  c = compare(b.hi, hi);
  if (c == Ordering::Less) {
    hi = b.hi;
    hc = b.hi_closed;
  } else if (c == Ordering::Equal) {
    hc = hc && b.hi_closed;
  }
  QInterval r(lo, lc, hi, hc);
  if (r.empty()) return std::nullopt;
  return r;
}

// a subset of b, as sets of rationals
inline bool interval_subset(const QInterval& a, const QInterval& b) {
  if (a.empty()) return true;
  auto i = intersect(a, b);
  return i && *i == a;
}

// Closed in the topology Q inherits from R: expressible as [p, q] with
// p, q in R*. Equivalently, no finite rational endpoint is excluded.
inline bool is_closed_in_Q(const QInterval& iv) {
  if (iv.empty()) throw EmptyIntervalError();
  bool lo_ok = iv.lo_closed || !iv.lo.is_rational();
  bool hi_ok = iv.hi_closed || !iv.hi.is_rational();
  return lo_ok && hi_ok;
}

// Finitely presented subset of Q: disjoint, non-mergeable intervals in
// increasing order. Canonical, so structural equality is set equality.
class QSet {
 public:
  QSet() = default;

  static QSet empty() { return QSet(); }
  static QSet all() { return QSet::normalize({QInterval::all()}); }
  static QSet of(const QInterval& iv) { return normalize({iv}); }

  static QSet normalize(std::vector<QInterval> raw) {
    std::vector<QInterval> kept;
    for (auto& iv : raw) {
      QInterval c(iv.lo, iv.lo_closed, iv.hi, iv.hi_closed);  // demotes bad flags
      if (!c.empty()) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end(), [](const QInterval& x, const QInterval& y) {
      Ordering c = compare(x.lo, y.lo);
      if (c == Ordering::Less) return true;
      if (c == Ordering::Greater) return false;
      if (x.lo_closed != y.lo_closed) return x.lo_closed;
      return compare(x.hi, y.hi) == Ordering::Less;
    });
    QSet out;
    for (const auto& iv : kept) {
      if (out.comps_.empty()) {
        out.comps_.push_back(iv);
        continue;
      }
      QInterval& cur = out.comps_.back();
      Ordering c = compare(iv.lo, cur.hi);
      bool merge;
      if (c == Ordering::Less)
        merge = true;
      else if (c == Ordering::Greater)
        merge = false;
      else if (!cur.hi.is_rational())
        merge = true;  // nothing of Q separates the two pieces
      else
        merge = cur.hi_closed || iv.lo_closed;
      if (merge) {
        Ordering ch = compare(iv.hi, cur.hi);
        if (ch == Ordering::Greater) {
          cur.hi = iv.hi;
          cur.hi_closed = iv.hi_closed;
        } else if (ch == Ordering::Equal) {
          cur.hi_closed = cur.hi_closed || iv.hi_closed;
        }
      } else {
        out.comps_.push_back(iv);
      }
    }
    return out;
  }

  const std::vector<QInterval>& components() const { return comps_; }
  bool is_empty() const { return comps_.empty(); }
  size_t size() const { return comps_.size(); }

  bool member(const Rational& q) const {
    // binary search on component lower bounds
    ExtReal e(q);
    size_t lo = 0, hi = comps_.size();
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (compare(comps_[mid].lo, e) != Ordering::Greater)
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo == 0) return false;
    return comps_[lo - 1].contains(q);
  }

  QSet complement() const {
    std::vector<QInterval> gaps;
    ExtReal prev = ExtReal::neg_inf();
    bool prev_closed = false;  // whether prev itself is excluded from the gap
    for (const auto& c : comps_) {
      gaps.emplace_back(prev, prev.is_rational() && !prev_closed, c.lo,
                        c.lo.is_rational() && !c.lo_closed);
      prev = c.hi;
      prev_closed = c.hi_closed;
    }
    gaps.emplace_back(prev, prev.is_rational() && !prev_closed, ExtReal::pos_inf(), false);
    return normalize(std::move(gaps));
  }

  QSet unite(const QSet& o) const {
    std::vector<QInterval> all = comps_;
    all.insert(all.end(), o.comps_.begin(), o.comps_.end());
    return normalize(std::move(all));
  }

  QSet intersect_with(const QInterval& iv) const {
    std::vector<QInterval> out;
    for (const auto& c : comps_)
      if (auto i = intersect(c, iv)) out.push_back(*i);
    return normalize(std::move(out));
  }

  QSet intersect_with(const QSet& o) const {
    std::vector<QInterval> out;
    for (const auto& c : o.comps_) {
      QSet part = intersect_with(c);
      out.insert(out.end(), part.comps_.begin(), part.comps_.end());
    }
    return normalize(std::move(out));
  }

  // true when some component is a non-degenerate interval
  bool is_infinite() const {
    for (const auto& c : comps_)
      if (!c.is_singleton()) return true;
    return false;
  }

  std::optional<Rational> max_element() const {
    if (comps_.empty()) return std::nullopt;
    const QInterval& last = comps_.back();
    if (last.hi_closed) return last.hi.rational();
    return std::nullopt;
  }

  std::optional<Rational> min_element() const {
    if (comps_.empty()) return std::nullopt;
    const QInterval& first = comps_.front();
    if (first.lo_closed) return first.lo.rational();
    return std::nullopt;
  }

  bool operator==(const QSet& o) const { return comps_ == o.comps_; }
  bool operator!=(const QSet& o) const { return !(*this == o); }

 private:
  std::vector<QInterval> comps_;
};

// The components are exactly the classes of the convexity relation ~.
inline const std::vector<QInterval>& maximal_intervals(const QSet& s) { return s.components(); }

// Order-type word over P (isolated included endpoint) and D (dense open
// block), reduced by DD -> D and DPD -> D. Two finitely presented subsets of
// Q are order-isomorphic exactly when their reduced words agree.
struct Signature {
  std::string word;
  bool operator==(const Signature& o) const { return word == o.word; }
  bool operator!=(const Signature& o) const { return word != o.word; }
};

inline std::string reduce_signature_word(std::string w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] == 'D' && w[i + 1] == 'D') {
        w.erase(i, 1);
        changed = true;
        break;
      }
      if (i + 2 < w.size() && w[i] == 'D' && w[i + 1] == 'P' && w[i + 2] == 'D') {
        w.erase(i, 2);
        changed = true;
        break;
      }
    }
  }
  return w;
}

inline Signature order_type_signature(const QSet& s) {
  std::string w;
  for (const auto& c : s.components()) {
    if (c.is_singleton()) {
      w += 'P';
      continue;
    }
    if (c.lo_closed) w += 'P';
    w += 'D';
    if (c.hi_closed) w += 'P';
  }
  return Signature{reduce_signature_word(std::move(w))};
}

// Canonical member of a nonempty set: the pick of its first component.
inline Rational pick_rational(const QSet& s) {
  if (s.is_empty()) throw EmptyIntervalError();
  return pick_rational(s.components().front());
}

}  // namespace endoq
