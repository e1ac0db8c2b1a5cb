#pragma once

#include <cctype>
#include <sstream>
#include <string>

#include "endoq/endo.hpp"

namespace endoq {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& why) : std::runtime_error("parse error: " + why) {}
};

// ---------------------------------------------------------------------------
// canonical printing

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline std::string to_string(const ExtReal& e) {
  if (e.is_neg_inf()) return "-inf";
  if (e.is_pos_inf()) return "inf";
  if (e.is_rational()) return e.rational().get_str();
  const auto& s = e.surd_parts();
  std::string out = s.a.get_str();
  if (s.b < 0)
    out += " - " + Rational(-s.b).get_str();
  else
    out += " + " + s.b.get_str();
  out += "*sqrt(" + s.d.get_str() + ")";
  return out;
}

inline std::string to_string(const QInterval& iv) {
  if (iv.is_singleton()) return "{" + iv.lo.rational().get_str() + "}";
  std::string out = iv.lo_closed ? "[" : "(";
  out += to_string(iv.lo);
  out += ",";
  out += to_string(iv.hi);
  out += iv.hi_closed ? "]" : ")";
  return out;
}

inline std::string to_string(const QSet& s) {
  if (s.is_empty()) return "{}";
  std::string out;
  for (size_t i = 0; i < s.components().size(); ++i) {
    if (i) out += " u ";
    out += to_string(s.components()[i]);
  }
  return out;
}

inline std::string to_string(const PieceMap& m) {
  if (std::holds_alternative<IdentityMap>(m)) return "id";
  if (std::holds_alternative<ConstMap>(m))
    return "const " + std::get<ConstMap>(m).value.get_str();
  if (std::holds_alternative<AffineMap>(m)) {
    const auto& a = std::get<AffineMap>(m);
    return "affine " + a.a.get_str() + " " + a.b.get_str();
  }
  if (std::holds_alternative<CanonIsoMap>(m)) {
    const auto& c = std::get<CanonIsoMap>(m);
    return "iso " + to_string(c.src) + " -> " + to_string(c.dst);
  }
  const auto& ch = std::get<IsoChainMap>(m);
  std::string out = "chain [";
  for (size_t i = 0; i < ch.links.size(); ++i) {
    if (i) out += ", ";
    const auto& f = ch.links[i];
    if (std::holds_alternative<AffineMap>(f)) {
      const auto& a = std::get<AffineMap>(f);
      out += "affine " + a.a.get_str() + " " + a.b.get_str();
    } else {
      const auto& c = std::get<CanonIsoMap>(f);
      out += "iso " + to_string(c.src) + " -> " + to_string(c.dst);
    }
  }
  out += "]";
  return out;
}

inline std::string to_string(const Endo& f) {
  std::string out;
  for (size_t i = 0; i < f.pieces().size(); ++i) {
    if (i) out += "; ";
    out += "piece on " + to_string(f.pieces()[i].domain) + ": " + to_string(f.pieces()[i].map);
  }
  return out;
}

inline std::string to_string(const Tristate& t) {
  if (t.is_true()) return "true";
  if (t.is_false()) return "false";
  return "undecided(" + std::to_string(t.depth) + ")";
}

inline std::string to_string(const KernelDescriptor& k) {
  if (k.empty()) return "(none)";
  std::string out;
  for (size_t i = 0; i < k.size(); ++i) {
    if (i) out += ", ";
    out += k[i].value.get_str() + " <- " + to_string(k[i].cls);
  }
  return out;
}

// ---------------------------------------------------------------------------
// parsing

namespace detail {

class Cursor {
 public:
  explicit Cursor(const std::string& s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eof() {
    skip_ws();
    return pos_ >= s_.size();
  }

  char peek() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input");
    return s_[pos_];
  }

  bool try_consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!try_consume(c)) throw ParseError(std::string("expected '") + c + "' near: " + rest());
  }

  bool try_keyword(const std::string& kw) {
    skip_ws();
    if (s_.compare(pos_, kw.size(), kw) != 0) return false;
    size_t end = pos_ + kw.size();
    if (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
      return false;
    pos_ = end;
    return true;
  }

  void expect_keyword(const std::string& kw) {
    if (!try_keyword(kw)) throw ParseError("expected '" + kw + "' near: " + rest());
  }

  Integer integer() {
    skip_ws();
    size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    size_t digs = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digs) throw ParseError("expected integer near: " + rest());
    return Integer(s_.substr(start, pos_ - start));
  }

  Rational rational() {
    Integer num = integer();
    if (try_consume('/')) {
      Integer den = integer();
      return rat(num, den);
    }
    return Rational(num);
  }

  std::string rest() {
    skip_ws();
    return s_.substr(pos_, 24);
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;
};

inline ExtReal parse_ext(Cursor& c);

// rational or b*sqrt(d) or sqrt(d)
inline ExtReal parse_ext_term(Cursor& c, bool negated) {
  if (c.try_keyword("sqrt")) {
    c.expect('(');
    Integer d = c.integer();
    c.expect(')');
    return ExtReal::surd(Rational(0), Rational(negated ? -1 : 1), d);
  }
  Rational r = c.rational();
  if (negated) r = -r;
  if (c.try_consume('*')) {
    c.expect_keyword("sqrt");
    c.expect('(');
    Integer d = c.integer();
    c.expect(')');
    return ExtReal::surd(Rational(0), r, d);
  }
  return ExtReal(r);
}

inline ExtReal parse_ext(Cursor& c) {
  if (c.try_keyword("-inf")) return ExtReal::neg_inf();
  if (c.try_keyword("inf")) return ExtReal::pos_inf();
  bool neg = false;
  if (c.peek() == '-') {
    // distinguish "-sqrt(2)" from a negative number: rational() handles signs
    // itself, so only strip the '-' when a sqrt follows
    Cursor probe = c;
    probe.try_consume('-');
    if (probe.try_keyword("sqrt")) {
      c.try_consume('-');
      neg = true;
    }
  }
  ExtReal first = parse_ext_term(c, neg);
  for (;;) {
    bool plus;
    if (c.try_consume('+'))
      plus = true;
    else if (!c.eof() && c.peek() == '-') {
      // a following '-...' only continues the expression inside ext context
      c.try_consume('-');
      plus = false;
    } else
      break;
    ExtReal term = parse_ext_term(c, !plus);
    // combine: one side rational, other surd (or both rational)
    if (first.is_rational() && term.is_rational()) {
      first = ExtReal(first.rational() + term.rational());
    } else if (first.is_rational() && term.is_surd()) {
      const auto& s = term.surd_parts();
      first = ExtReal::surd(s.a + first.rational(), s.b, s.d);
    } else if (first.is_surd() && term.is_rational()) {
      const auto& s = first.surd_parts();
      first = ExtReal::surd(s.a + term.rational(), s.b, s.d);
    } else {
      const auto& s = first.surd_parts();
      const auto& t = term.surd_parts();
      if (s.d != t.d) throw ParseError("cannot combine different radicands");
      first = ExtReal::surd(s.a + t.a, s.b + t.b, s.d);
    }
  }
  return first;
}

inline QInterval parse_interval(Cursor& c) {
  if (c.try_consume('{')) {
    Rational q = c.rational();
    c.expect('}');
    return QInterval::point(q);
  }
  bool lo_closed;
  if (c.try_consume('['))
    lo_closed = true;
  else if (c.try_consume('('))
    lo_closed = false;
  else
    throw ParseError("expected interval near: " + c.rest());
  ExtReal lo = parse_ext(c);
  c.expect(',');
  ExtReal hi = parse_ext(c);
  bool hi_closed;
  if (c.try_consume(']'))
    hi_closed = true;
  else if (c.try_consume(')'))
    hi_closed = false;
  else
    throw ParseError("unterminated interval near: " + c.rest());
  return QInterval(lo, lo_closed, hi, hi_closed);
}

inline QSet parse_qset(Cursor& c) {
  // '{}' denotes the empty set
  {
    Cursor probe = c;
    if (probe.try_consume('{') && probe.try_consume('}')) {
      c.try_consume('{');
      c.try_consume('}');
      return QSet::empty();
    }
  }
  std::vector<QInterval> ivs;
  ivs.push_back(parse_interval(c));
  while (c.try_keyword("u")) ivs.push_back(parse_interval(c));
  return QSet::normalize(std::move(ivs));
}

inline Fragment parse_fragment(Cursor& c) {
  if (c.try_keyword("affine")) {
    Rational a = c.rational();
    Rational b = c.rational();
    return AffineMap{a, b};
  }
  if (c.try_keyword("iso")) {
    QInterval src = parse_interval(c);
    c.expect('-');
    c.expect('>');
    QInterval dst = parse_interval(c);
    return CanonIsoMap{src, dst};
  }
  throw ParseError("expected chain fragment near: " + c.rest());
}

inline PieceMap parse_map(Cursor& c) {
  if (c.try_keyword("id")) return IdentityMap{};
  if (c.try_keyword("const")) return ConstMap{c.rational()};
  if (c.try_keyword("chain")) {
    c.expect('[');
    IsoChainMap ch;
    if (!c.try_consume(']')) {
      ch.links.push_back(parse_fragment(c));
      while (c.try_consume(',')) ch.links.push_back(parse_fragment(c));
      c.expect(']');
    }
    return ch;
  }
  Fragment f = parse_fragment(c);
  if (std::holds_alternative<AffineMap>(f)) return std::get<AffineMap>(f);
  return std::get<CanonIsoMap>(f);
}

inline Endo parse_endo(Cursor& c) {
  std::vector<Piece> ps;
  for (;;) {
    c.expect_keyword("piece");
    c.expect_keyword("on");
    QInterval dom = parse_interval(c);
    c.expect(':');
    PieceMap m = parse_map(c);
    ps.push_back({dom, m});
    if (!c.try_consume(';')) break;
  }
  return Endo::from_pieces(std::move(ps));
}

}  // namespace detail

inline Rational parse_rational(const std::string& s) {
  detail::Cursor c(s);
  Rational q = c.rational();
  if (!c.eof()) throw ParseError("trailing input after rational: " + c.rest());
  return q;
}

inline ExtReal parse_ext_real(const std::string& s) {
  detail::Cursor c(s);
  ExtReal e = detail::parse_ext(c);
  if (!c.eof()) throw ParseError("trailing input after value: " + c.rest());
  return e;
}

inline QInterval parse_interval(const std::string& s) {
  detail::Cursor c(s);
  QInterval iv = detail::parse_interval(c);
  if (!c.eof()) throw ParseError("trailing input after interval: " + c.rest());
  return iv;
}

inline QSet parse_qset(const std::string& s) {
  detail::Cursor c(s);
  QSet q = detail::parse_qset(c);
  if (!c.eof()) throw ParseError("trailing input after set: " + c.rest());
  return q;
}

inline Endo parse_endo(const std::string& s) {
  detail::Cursor c(s);
  Endo e = detail::parse_endo(c);
  if (!c.eof()) throw ParseError("trailing input after endomorphism: " + c.rest());
  return e;
}

}  // namespace endoq
