#pragma once

#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "endoq/enumeration.hpp"
#include "endoq/io.hpp"
#include "endoq/qset.hpp"

namespace endoq {

struct InvalidCodeError : std::runtime_error {
  InvalidCodeError() : std::runtime_error("element code is not valid for this order") {}
};
struct NotOrderedError : std::runtime_error {
  NotOrderedError() : std::runtime_error("expected a strictly increasing pair of elements") {}
};
struct SearchBudgetError : std::runtime_error {
  SearchBudgetError() : std::runtime_error("back-and-forth search budget exceeded") {}
};

// element code of a lazy order; sums nest
class Code {
 public:
  struct Cx {
    Integer n, i;
  };
  struct SumSide {
    int side;  // 0 = left, 1 = right
    std::shared_ptr<const Code> inner;
  };

  static Code of(const Rational& q) { return Code(q); }
  static Code cx(Integer n, Integer i) { return Code(Cx{std::move(n), std::move(i)}); }
  static Code nat(long k) { return Code(k); }
  static Code left(Code c) { return Code(SumSide{0, std::make_shared<Code>(std::move(c))}); }
  static Code right(Code c) { return Code(SumSide{1, std::make_shared<Code>(std::move(c))}); }

  bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  bool is_cx() const { return std::holds_alternative<Cx>(v_); }
  bool is_nat() const { return std::holds_alternative<long>(v_); }
  bool is_sum() const { return std::holds_alternative<SumSide>(v_); }

  const Rational& rational() const { return std::get<Rational>(v_); }
  const Cx& cx_parts() const { return std::get<Cx>(v_); }
  long nat() const { return std::get<long>(v_); }
  const SumSide& sum_parts() const { return std::get<SumSide>(v_); }

  std::string str() const {
    if (is_rational()) return rational().get_str();
    if (is_cx()) return "(" + cx_parts().n.get_str() + "," + cx_parts().i.get_str() + ")";
    if (is_nat()) return std::to_string(nat());
    const auto& s = sum_parts();
    return (s.side == 0 ? "L:" : "R:") + s.inner->str();
  }

 private:
  explicit Code(Rational q) : v_(std::move(q)) {}
  explicit Code(Cx c) : v_(std::move(c)) {}
  explicit Code(long k) : v_(k) {}
  explicit Code(SumSide s) : v_(std::move(s)) {}
  std::variant<Rational, Cx, long, SumSide> v_;
};

class LazyOrder;
using OrderRef = std::shared_ptr<const LazyOrder>;

// Queryable countable linear order: Q itself, a finitely presented subset,
// the rigid order C_x attached to an enumeration, an ordered sum, or a
// finite chain. All queries are exact.
class LazyOrder : public std::enable_shared_from_this<LazyOrder> {
 public:
  enum class Kind { Q, Subset, Cx, Sum, Chain };

  static OrderRef q_order() { return std::shared_ptr<LazyOrder>(new LazyOrder(Kind::Q)); }
  static OrderRef subset(QSet x) {
    auto o = std::shared_ptr<LazyOrder>(new LazyOrder(Kind::Subset));
    o->set_ = std::move(x);
    return o;
  }
  static OrderRef cx(Enumeration e) {
    auto o = std::shared_ptr<LazyOrder>(new LazyOrder(Kind::Cx));
    o->enum_ = std::move(e);
    return o;
  }
  static OrderRef sum(OrderRef a, OrderRef b) {
    auto o = std::shared_ptr<LazyOrder>(new LazyOrder(Kind::Sum));
    o->left_ = std::move(a);
    o->right_ = std::move(b);
    return o;
  }
  static OrderRef chain(long n) {
    auto o = std::shared_ptr<LazyOrder>(new LazyOrder(Kind::Chain));
    o->n_ = n;
    return o;
  }

  Kind kind() const { return kind_; }
  const QSet& set() const { return set_; }
  const Enumeration& enumeration() const { return enum_; }
  const OrderRef& left() const { return left_; }
  const OrderRef& right() const { return right_; }
  long chain_size() const { return n_; }

  bool validate(const Code& c) const {
    switch (kind_) {
      case Kind::Q:
        return c.is_rational();
      case Kind::Subset:
        return c.is_rational() && set_.member(c.rational());
      case Kind::Cx:
        return c.is_cx() && c.cx_parts().n >= 0 && c.cx_parts().i >= 0 &&
               c.cx_parts().i <= c.cx_parts().n;
      case Kind::Sum:
        if (!c.is_sum()) return false;
        return (c.sum_parts().side == 0 ? left_ : right_)->validate(*c.sum_parts().inner);
      case Kind::Chain:
        return c.is_nat() && c.nat() >= 0 && c.nat() < n_;
    }
    return false;
  }

  Ordering compare_elems(const Code& a, const Code& b) const {
    if (!validate(a) || !validate(b)) throw InvalidCodeError();
    return cmp_unchecked(a, b);
  }

  bool nonempty() const {
    switch (kind_) {
      case Kind::Q:
      case Kind::Cx:
        return true;
      case Kind::Subset:
        return !set_.is_empty();
      case Kind::Sum:
        return left_->nonempty() || right_->nonempty();
      case Kind::Chain:
        return n_ > 0;
    }
    return false;
  }

  bool exists_between(const Code& a, const Code& b) const {
    if (compare_elems(a, b) != Ordering::Less) throw NotOrderedError();
    return element_between(a, b).has_value();
  }

  bool exists_above(const Code& a) const { return element_above(a).has_value(); }
  bool exists_below(const Code& a) const { return element_below(a).has_value(); }

  std::optional<Code> element_between(const Code& a, const Code& b) const {
    switch (kind_) {
      case Kind::Q:
        return Code::of(rational_between(ExtReal(a.rational()), ExtReal(b.rational())));
      case Kind::Subset: {
        QSet z = set_.intersect_with(
            QInterval(ExtReal(a.rational()), false, ExtReal(b.rational()), false));
        if (z.is_empty()) return std::nullopt;
        return Code::of(pick_rational(z));
      }
      case Kind::Cx: {
        const auto& x = a.cx_parts();
        const auto& y = b.cx_parts();
        if (x.n == y.n) {
          if (y.i > x.i + 1) return Code::cx(x.n, x.i + 1);
          return std::nullopt;
        }
        Rational q = rational_between(ExtReal(enum_.forward(x.n)), ExtReal(enum_.forward(y.n)));
        return Code::cx(enum_.rank(q), Integer(0));
      }
      case Kind::Sum: {
        const auto& sa = a.sum_parts();
        const auto& sb = b.sum_parts();
        if (sa.side == sb.side) {
          const OrderRef& part = sa.side == 0 ? left_ : right_;
          auto r = part->element_between(*sa.inner, *sb.inner);
          if (!r) return std::nullopt;
          return sa.side == 0 ? Code::left(*r) : Code::right(*r);
        }
        // a in the left part, b in the right
        if (auto r = left_->element_above(*sa.inner)) return Code::left(*r);
        if (auto r = right_->element_below(*sb.inner)) return Code::right(*r);
        return std::nullopt;
      }
      case Kind::Chain:
        if (b.nat() > a.nat() + 1) return Code::nat(a.nat() + 1);
        return std::nullopt;
    }
    return std::nullopt;
  }

  std::optional<Code> element_above(const Code& a) const {
    switch (kind_) {
      case Kind::Q:
        return Code::of(rational_between(ExtReal(a.rational()), ExtReal::pos_inf()));
      case Kind::Subset: {
        QSet z = set_.intersect_with(
            QInterval(ExtReal(a.rational()), false, ExtReal::pos_inf(), false));
        if (z.is_empty()) return std::nullopt;
        return Code::of(pick_rational(z));
      }
      case Kind::Cx: {
        const auto& x = a.cx_parts();
        if (x.i < x.n) return Code::cx(x.n, x.i + 1);
        Rational q = rational_between(ExtReal(enum_.forward(x.n)), ExtReal::pos_inf());
        return Code::cx(enum_.rank(q), Integer(0));
      }
      case Kind::Sum: {
        const auto& s = a.sum_parts();
        if (s.side == 1) {
          auto r = right_->element_above(*s.inner);
          if (!r) return std::nullopt;
          return Code::right(*r);
        }
        if (auto r = left_->element_above(*s.inner)) return Code::left(*r);
        if (auto r = right_->enum_elem(0)) return Code::right(*r);
        return std::nullopt;
      }
      case Kind::Chain:
        if (a.nat() + 1 < n_) return Code::nat(a.nat() + 1);
        return std::nullopt;
    }
    return std::nullopt;
  }

  std::optional<Code> element_below(const Code& a) const {
    switch (kind_) {
      case Kind::Q:
        return Code::of(rational_between(ExtReal::neg_inf(), ExtReal(a.rational())));
      case Kind::Subset: {
        QSet z = set_.intersect_with(
            QInterval(ExtReal::neg_inf(), false, ExtReal(a.rational()), false));
        if (z.is_empty()) return std::nullopt;
        return Code::of(pick_rational(z));
      }
      case Kind::Cx: {
        const auto& x = a.cx_parts();
        if (x.i > 0) return Code::cx(x.n, x.i - 1);
        Rational q = rational_between(ExtReal::neg_inf(), ExtReal(enum_.forward(x.n)));
        return Code::cx(enum_.rank(q), Integer(0));
      }
      case Kind::Sum: {
        const auto& s = a.sum_parts();
        if (s.side == 0) {
          auto r = left_->element_below(*s.inner);
          if (!r) return std::nullopt;
          return Code::left(*r);
        }
        if (auto r = right_->element_below(*s.inner)) return Code::right(*r);
        if (auto r = left_->enum_elem(0)) return Code::left(*r);
        return std::nullopt;
      }
      case Kind::Chain:
        if (a.nat() > 0) return Code::nat(a.nat() - 1);
        return std::nullopt;
    }
    return std::nullopt;
  }

  // t-th element of the order's canonical enumeration (deterministic; for
  // subsets it walks each component's included endpoints, centre, then the
  // anchor ladder, round-robin across components)
  std::optional<Code> enum_elem(size_t t) const {
    switch (kind_) {
      case Kind::Q:
        return Code::of(Enumeration::base_forward(Integer(static_cast<unsigned long>(t))));
      case Kind::Subset: {
        size_t pos = 0;
        for (size_t round = 0;; ++round) {
          bool any = false;
          for (const auto& comp : set_.components()) {
            auto v = component_stream(comp, round);
            if (!v) continue;
            any = true;
            if (pos == t) return Code::of(*v);
            ++pos;
          }
          if (!any) return std::nullopt;
        }
      }
      case Kind::Cx: {
        // triangular walk over blocks
        Integer n(0), acc(0);
        Integer tt(static_cast<unsigned long>(t));
        while (acc + n + 1 <= tt) {
          acc += n + 1;
          n += 1;
        }
        return Code::cx(n, tt - acc);
      }
      case Kind::Sum: {
        // interleave, skipping the exhausted side
        size_t li = 0, ri = 0;
        for (size_t pos = 0;; ) {
          bool progressed = false;
          if (auto l = left_->enum_elem(li)) {
            if (pos == t) return Code::left(*l);
            ++pos;
            ++li;
            progressed = true;
          }
          if (auto r = right_->enum_elem(ri)) {
            if (pos == t) return Code::right(*r);
            ++pos;
            ++ri;
            progressed = true;
          }
          if (!progressed) return std::nullopt;
        }
      }
      case Kind::Chain:
        if (static_cast<long>(t) < n_) return Code::nat(static_cast<long>(t));
        return std::nullopt;
    }
    return std::nullopt;
  }

  // minimum element strictly between the optional bounds, when one exists
  std::optional<Code> zone_min(const std::optional<Code>& lo, const std::optional<Code>& hi) const {
    switch (kind_) {
      case Kind::Q:
        return std::nullopt;
      case Kind::Subset: {
        QSet z = zone_set(lo, hi);
        auto m = z.min_element();
        if (!m) return std::nullopt;
        return Code::of(*m);
      }
      case Kind::Cx: {
        if (!lo) return std::nullopt;
        const auto& x = lo->cx_parts();
        if (x.i < x.n) {
          Code c = Code::cx(x.n, x.i + 1);
          if (!hi || cmp_unchecked(c, *hi) == Ordering::Less) return c;
        }
        return std::nullopt;
      }
      case Kind::Sum: {
        auto [llo, lhi, rlo, rhi, has_left, has_right] = split_zone(lo, hi);
        if (has_left) {
          if (left_->zone_nonempty(llo, lhi)) return wrap_min_left(llo, lhi);
          if (has_right) return wrap_min_right(rlo, rhi);
          return std::nullopt;
        }
        if (has_right) return wrap_min_right(rlo, rhi);
        return std::nullopt;
      }
      case Kind::Chain: {
        long lo_v = lo ? lo->nat() + 1 : 0;
        long hi_v = hi ? hi->nat() : n_;
        if (lo_v < hi_v) return Code::nat(lo_v);
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::optional<Code> zone_max(const std::optional<Code>& lo, const std::optional<Code>& hi) const {
    switch (kind_) {
      case Kind::Q:
        return std::nullopt;
      case Kind::Subset: {
        QSet z = zone_set(lo, hi);
        auto m = z.max_element();
        if (!m) return std::nullopt;
        return Code::of(*m);
      }
      case Kind::Cx: {
        if (!hi) return std::nullopt;
        const auto& x = hi->cx_parts();
        if (x.i > 0) {
          Code c = Code::cx(x.n, x.i - 1);
          if (!lo || cmp_unchecked(*lo, c) == Ordering::Less) return c;
        }
        return std::nullopt;
      }
      case Kind::Sum: {
        auto [llo, lhi, rlo, rhi, has_left, has_right] = split_zone(lo, hi);
        if (has_right) {
          if (right_->zone_nonempty(rlo, rhi)) return wrap_max_right(rlo, rhi);
          if (has_left) return wrap_max_left(llo, lhi);
          return std::nullopt;
        }
        if (has_left) return wrap_max_left(llo, lhi);
        return std::nullopt;
      }
      case Kind::Chain: {
        long lo_v = lo ? lo->nat() + 1 : 0;
        long hi_v = hi ? hi->nat() : n_;
        if (lo_v < hi_v) return Code::nat(hi_v - 1);
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  bool zone_nonempty(const std::optional<Code>& lo, const std::optional<Code>& hi) const {
    if (lo && hi) return element_between(*lo, *hi).has_value();
    if (lo) return exists_above(*lo);
    if (hi) return exists_below(*hi);
    return nonempty();
  }

  // canonical candidate representatives inside a zone, one per element role
  std::vector<Code> zone_reps(const std::optional<Code>& lo, const std::optional<Code>& hi) const {
    std::vector<Code> out;
    auto push = [&](const Code& c) {
      for (const auto& e : out)
        if (cmp_unchecked(e, c) == Ordering::Equal) return;
      out.push_back(c);
    };
    switch (kind_) {
      case Kind::Q: {
        if (zone_nonempty(lo, hi)) push(*zone_pick(lo, hi));
        break;
      }
      case Kind::Subset: {
        QSet z = zone_set(lo, hi);
        for (const auto& comp : z.components()) {
          if (comp.lo_closed) push(Code::of(comp.lo.rational()));
          if (comp.hi_closed) push(Code::of(comp.hi.rational()));
          if (!comp.is_singleton()) push(Code::of(rational_between(comp.lo, comp.hi)));
        }
        break;
      }
      case Kind::Cx: {
        if (auto m = zone_min(lo, hi)) {
          push(*m);
          // a couple of successors inside the covering block
          Code cur = *m;
          for (int step = 0; step < 2; ++step) {
            const auto& x = cur.cx_parts();
            if (x.i >= x.n) break;
            Code nxt = Code::cx(x.n, x.i + 1);
            if (hi && cmp_unchecked(nxt, *hi) != Ordering::Less) break;
            push(nxt);
            cur = nxt;
          }
        }
        if (auto m = zone_max(lo, hi)) {
          push(*m);
          Code cur = *m;
          for (int step = 0; step < 2; ++step) {
            const auto& x = cur.cx_parts();
            if (x.i <= 0) break;
            Code nxt = Code::cx(x.n, x.i - 1);
            if (lo && cmp_unchecked(*lo, nxt) != Ordering::Less) break;
            push(nxt);
            cur = nxt;
          }
        }
        // fresh blocks strictly inside
        ExtReal xlo = lo ? ExtReal(enum_.forward(lo->cx_parts().n)) : ExtReal::neg_inf();
        ExtReal xhi = hi ? ExtReal(enum_.forward(hi->cx_parts().n)) : ExtReal::pos_inf();
        if (compare(xlo, xhi) == Ordering::Less) {
          Rational q = rational_between(xlo, xhi);
          Integer r = enum_.rank(q);
          push(Code::cx(r, Integer(0)));
          push(Code::cx(r, r));
        }
        break;
      }
      case Kind::Sum: {
        auto [llo, lhi, rlo, rhi, has_left, has_right] = split_zone(lo, hi);
        if (has_left)
          for (const auto& c : left_->zone_reps(llo, lhi)) push(Code::left(c));
        if (has_right)
          for (const auto& c : right_->zone_reps(rlo, rhi)) push(Code::right(c));
        break;
      }
      case Kind::Chain: {
        long lo_v = lo ? lo->nat() + 1 : 0;
        long hi_v = hi ? hi->nat() : n_;
        for (long v = lo_v; v < hi_v && v < lo_v + 64; ++v) push(Code::nat(v));
        break;
      }
    }
    return out;
  }

  Ordering cmp_unchecked(const Code& a, const Code& b) const {
    switch (kind_) {
      case Kind::Q:
      case Kind::Subset:
        return ordering_of_sign(cmp(a.rational(), b.rational()));
      case Kind::Cx: {
        const auto& x = a.cx_parts();
        const auto& y = b.cx_parts();
        if (x.n == y.n) return ordering_of_sign(cmp(x.i, y.i));
        Rational xv = enum_.forward(x.n), yv = enum_.forward(y.n);
        return ordering_of_sign(cmp(xv, yv));
      }
      case Kind::Sum: {
        const auto& s = a.sum_parts();
        const auto& t = b.sum_parts();
        if (s.side != t.side) return s.side < t.side ? Ordering::Less : Ordering::Greater;
        return (s.side == 0 ? left_ : right_)->cmp_unchecked(*s.inner, *t.inner);
      }
      case Kind::Chain:
        return ordering_of_sign(a.nat() < b.nat() ? -1 : (a.nat() > b.nat() ? 1 : 0));
    }
    return Ordering::Equal;
  }

 private:
  explicit LazyOrder(Kind k) : kind_(k) {}

  std::optional<Rational> component_stream(const QInterval& comp, size_t j) const {
    size_t idx = 0;
    if (comp.is_singleton()) return j == 0 ? std::optional<Rational>(comp.lo.rational()) : std::nullopt;
    if (comp.lo_closed) {
      if (j == idx) return comp.lo.rational();
      ++idx;
    }
    if (comp.hi_closed) {
      if (j == idx) return comp.hi.rational();
      ++idx;
    }
    long k = static_cast<long>(j - idx);
    // 0, +1, -1, +2, -2, ...
    long rung = (k % 2 == 1) ? (k + 1) / 2 : -(k / 2);
    return detail::anchor(comp, rung);
  }

  QSet zone_set(const std::optional<Code>& lo, const std::optional<Code>& hi) const {
    ExtReal l = lo ? ExtReal(lo->rational()) : ExtReal::neg_inf();
    ExtReal h = hi ? ExtReal(hi->rational()) : ExtReal::pos_inf();
    if (compare(l, h) != Ordering::Less) return QSet::empty();
    return set_.intersect_with(QInterval(l, false, h, false));
  }

  std::optional<Code> zone_pick(const std::optional<Code>& lo, const std::optional<Code>& hi) const {
    // only used for Kind::Q
    ExtReal l = lo ? ExtReal(lo->rational()) : ExtReal::neg_inf();
    ExtReal h = hi ? ExtReal(hi->rational()) : ExtReal::pos_inf();
    if (compare(l, h) != Ordering::Less) return std::nullopt;
    return Code::of(rational_between(l, h));
  }

  struct ZoneSplit {
    std::optional<Code> llo, lhi, rlo, rhi;
    bool has_left, has_right;
  };

  ZoneSplit split_zone(const std::optional<Code>& lo, const std::optional<Code>& hi) const {
    ZoneSplit z;
    z.has_left = true;
    z.has_right = true;
    if (lo) {
      if (lo->sum_parts().side == 0)
        z.llo = *lo->sum_parts().inner;
      else {
        z.has_left = false;
        z.rlo = *lo->sum_parts().inner;
      }
    }
    if (hi) {
      if (hi->sum_parts().side == 1)
        z.rhi = *hi->sum_parts().inner;
      else {
        z.has_right = false;
        z.lhi = *hi->sum_parts().inner;
      }
    }
    return z;
  }

  std::optional<Code> wrap_min_left(const std::optional<Code>& lo, const std::optional<Code>& hi) const {
    auto m = left_->zone_min(lo, hi);
    if (!m) return std::nullopt;
    return Code::left(*m);
  }
  std::optional<Code> wrap_min_right(const std::optional<Code>& lo, const std::optional<Code>& hi) const {
    auto m = right_->zone_min(lo, hi);
    if (!m) return std::nullopt;
    return Code::right(*m);
  }
  std::optional<Code> wrap_max_left(const std::optional<Code>& lo, const std::optional<Code>& hi) const {
    auto m = left_->zone_max(lo, hi);
    if (!m) return std::nullopt;
    return Code::left(*m);
  }
  std::optional<Code> wrap_max_right(const std::optional<Code>& lo, const std::optional<Code>& hi) const {
    auto m = right_->zone_max(lo, hi);
    if (!m) return std::nullopt;
    return Code::right(*m);
  }

  Kind kind_;
  QSet set_;
  Enumeration enum_;
  OrderRef left_, right_;
  long n_ = 0;
};

inline OrderRef ordered_sum(OrderRef a, OrderRef b) { return LazyOrder::sum(std::move(a), std::move(b)); }

// ---------------------------------------------------------------------------
// back-and-forth

struct PartialIso {
  std::vector<std::pair<Code, Code>> pairs;  // increasing in both coordinates
};

struct Obstruction {
  size_t step;
  int side;  // 0: A-element had no partner in B, 1: vice versa
  std::string element;
  std::string detail;
};

using BnfResult = std::variant<PartialIso, Obstruction>;

// Extends a partial isomorphism over the first `depth` enumerated elements
// of each order, backtracking over canonical candidate representatives. A
// surviving matching is evidence; exhaustion is a proof of non-isomorphism,
// since any isomorphism would supply a surviving branch through the
// representatives of its targets' roles.
inline BnfResult back_and_forth(const OrderRef& a, const OrderRef& b, size_t depth,
                                size_t budget = 400000) {
  struct Task {
    int side;
    Code elem;
  };
  std::vector<Task> tasks;
  for (size_t t = 0; t < depth; ++t) {
    if (auto e = a->enum_elem(t)) tasks.push_back({0, *e});
    if (auto e = b->enum_elem(t)) tasks.push_back({1, *e});
  }

  using Matching = std::vector<std::pair<Code, Code>>;
  std::set<std::string> failed;
  size_t nodes = 0;
  std::optional<Obstruction> deepest;

  auto key_of = [](size_t idx, const Matching& m) {
    std::string k = std::to_string(idx) + "|";
    for (const auto& pr : m) k += pr.first.str() + ">" + pr.second.str() + ";";
    return k;
  };

  std::function<bool(size_t, Matching&)> go = [&](size_t idx, Matching& m) -> bool {
    if (idx == tasks.size()) return true;
    if (++nodes > budget) throw SearchBudgetError();
    const Task& task = tasks[idx];
    const OrderRef& mine = task.side == 0 ? a : b;
    const OrderRef& other = task.side == 0 ? b : a;

    // locate the zone of the incoming element among matched pairs
    std::optional<Code> lo_mine, hi_mine, lo_other, hi_other;
    bool already = false;
    for (const auto& pr : m) {
      const Code& mc = task.side == 0 ? pr.first : pr.second;
      const Code& oc = task.side == 0 ? pr.second : pr.first;
      Ordering c = mine->cmp_unchecked(mc, task.elem);
      if (c == Ordering::Equal) {
        already = true;
        break;
      }
      if (c == Ordering::Less) {
        if (!lo_mine || mine->cmp_unchecked(*lo_mine, mc) == Ordering::Less) {
          lo_mine = mc;
          lo_other = oc;
        }
      } else {
        if (!hi_mine || mine->cmp_unchecked(mc, *hi_mine) == Ordering::Less) {
          hi_mine = mc;
          hi_other = oc;
        }
      }
    }
    if (already) return go(idx + 1, m);

    std::string k = key_of(idx, m);
    if (failed.count(k)) return false;

    std::vector<Code> cands = other->zone_reps(lo_other, hi_other);
    // try role-matching candidates first: min stays min, max stays max
    auto role = [&](const OrderRef& o, const std::optional<Code>& lo,
                    const std::optional<Code>& hi, const Code& e) {
      auto zmin = o->zone_min(lo, hi);
      auto zmax = o->zone_max(lo, hi);
      int r = 0;
      if (zmin && o->cmp_unchecked(*zmin, e) == Ordering::Equal) r |= 1;
      if (zmax && o->cmp_unchecked(*zmax, e) == Ordering::Equal) r |= 2;
      return r;
    };
    int want = role(mine, lo_mine, hi_mine, task.elem);
    std::stable_sort(cands.begin(), cands.end(), [&](const Code& x, const Code& y) {
      return (role(other, lo_other, hi_other, x) == want) >
             (role(other, lo_other, hi_other, y) == want);
    });

    for (const Code& c : cands) {
      std::pair<Code, Code> pr = task.side == 0 ? std::make_pair(task.elem, c)
                                                : std::make_pair(c, task.elem);
      m.push_back(pr);
      if (go(idx + 1, m)) return true;
      m.pop_back();
    }
    failed.insert(std::move(k));
    if (!deepest || idx >= deepest->step) {
      deepest = Obstruction{idx, task.side, task.elem.str(),
                            cands.empty() ? "no candidate in the matching zone"
                                          : "no candidate extends to a full matching"};
    }
    return false;
  };

  Matching m;
  if (go(0, m)) {
    // report pairs sorted by the A-side order
    std::sort(m.begin(), m.end(), [&](const auto& x, const auto& y) {
      return a->cmp_unchecked(x.first, y.first) == Ordering::Less;
    });
    return PartialIso{std::move(m)};
  }
  if (deepest) return *deepest;
  return Obstruction{0, 0, "", "one side is empty and the other is not"};
}

// ---------------------------------------------------------------------------
// C_x machinery

inline Enumeration mask_enumeration(const Enumeration& e, const std::set<unsigned long>& a) {
  return e.masked(a);
}

struct RigidityResult {
  bool contradiction;
  Integer m, n;  // indices with x_m < x_n but y_m > y_n (when contradiction)
};

// Builds the forced correspondence x_k -> y_k for k < N and looks for an
// order violation. Consecutive indices are scanned first, then all pairs;
// a contradiction certifies C_x and C_y non-isomorphic, ForcedMapOk is only
// evidence.
inline RigidityResult cx_rigidity_probe(const Enumeration& ex, const Enumeration& ey, size_t n) {
  std::vector<Rational> xs(n), ys(n);
  for (size_t i = 0; i < n; ++i) {
    xs[i] = ex.forward(Integer(static_cast<unsigned long>(i)));
    ys[i] = ey.forward(Integer(static_cast<unsigned long>(i)));
  }
  for (size_t i = 0; i + 1 < n; ++i)
    if (xs[i] < xs[i + 1] && ys[i] > ys[i + 1])
      return {true, Integer(static_cast<unsigned long>(i)), Integer(static_cast<unsigned long>(i + 1))};
  for (size_t j = 1; j < n; ++j)
    for (size_t i = 0; i < j; ++i) {
      if (xs[i] < xs[j] && ys[i] > ys[j])
        return {true, Integer(static_cast<unsigned long>(i)), Integer(static_cast<unsigned long>(j))};
      if (xs[i] > xs[j] && ys[i] < ys[j])
        return {true, Integer(static_cast<unsigned long>(j)), Integer(static_cast<unsigned long>(i))};
    }
  return {false, Integer(0), Integer(0)};
}

}  // namespace endoq
