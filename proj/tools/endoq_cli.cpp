// Command-line surface for the endoq library: retract checking and building,
// idempotent analysis, the variant constructions, Green's relations on finite
// chains, orbitals, C_x probes, order signatures and back-and-forth runs.
//
// Exit codes: 0 success, 1 domain error (with a diagnostic on stdout),
// 2 usage or parse error.

#include <iostream>
#include <string>
#include <vector>

#include "endoq/constructions.hpp"
#include "endoq/green.hpp"
#include "endoq/io.hpp"
#include "endoq/lazy_order.hpp"
#include "endoq/orbitals.hpp"

namespace {

using namespace endoq;

struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& why) : std::runtime_error(why) {}
};

const char* kUsage =
    "usage: endoq <command> [args] [--depth k] [--seed s]\n"
    "commands:\n"
    "  check-retract <qset>                 retract-image criterion\n"
    "  build-retract <qset>                 canonical idempotent onto the set\n"
    "  analyze <endo>                       L_x/U_x gap attribution of an idempotent\n"
    "  variant <endo> <q> <gamma>           idempotent variant g = xi f eta\n"
    "  rvariant <endo> <q> <gamma>          kernel-stretching variant h = xi f\n"
    "  lvariant <endo> a <q1,q2,...>        image variant moving attained maxima\n"
    "  lvariant <endo> b <beta> <gamma>     image variant squashing below beta\n"
    "  nonregular <qset> <alpha>            non-regular endomorphism with image cut at alpha\n"
    "  green --chain <n> [--rows]           Green classification of O_n\n"
    "  orbitals <endo>                      orbital decomposition of an automorphism\n"
    "  cx compare <(n,i)> <(m,j)> [--mask A]\n"
    "  cx between <(n,i)> <(m,j)> [--mask A]\n"
    "  cx rigidity <maskA|-> <maskB|-> <N>\n"
    "  sig <qset>                           order-type signature word\n"
    "  bnf <order> <order>                  back-and-forth probe (orders: Q, chain:<n>,\n"
    "                                       qset:<literal>, cx[:mask], sum(<order>,<order>))\n";

std::set<unsigned long> parse_mask(const std::string& s) {
  std::set<unsigned long> out;
  if (s == "-" || s.empty()) return out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      out.insert(std::stoul(tok));
    } catch (const std::exception&) {
      throw UsageError("bad mask entry: " + tok);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

Code parse_cx_code(const std::string& s) {
  detail::Cursor c(s);
  c.expect('(');
  Integer n = c.integer();
  c.expect(',');
  Integer i = c.integer();
  c.expect(')');
  if (!c.eof()) throw ParseError("trailing input after element code");
  return Code::cx(n, i);
}

OrderRef parse_order(const std::string& s);

OrderRef parse_order_at(const std::string& s, size_t& pos) {
  auto starts = [&](const std::string& kw) {
    return s.compare(pos, kw.size(), kw) == 0;
  };
  if (starts("sum(")) {
    pos += 4;
    size_t depth = 1, cut = pos;
    while (cut < s.size() && (depth > 1 || s[cut] != ',')) {
      if (s[cut] == '(') ++depth;
      if (s[cut] == ')') --depth;
      ++cut;
    }
    if (cut >= s.size()) throw UsageError("unterminated sum(...)");
    OrderRef a = parse_order(s.substr(pos, cut - pos));
    size_t rest = cut + 1, end = rest;
    depth = 1;
    while (end < s.size() && depth > 0) {
      if (s[end] == '(') ++depth;
      if (s[end] == ')') --depth;
      ++end;
    }
    if (depth != 0) throw UsageError("unterminated sum(...)");
    OrderRef b = parse_order(s.substr(rest, end - rest - 1));
    pos = end;
    return ordered_sum(a, b);
  }
  if (starts("chain:")) {
    pos += 6;
    size_t end = pos;
    while (end < s.size() && isdigit(static_cast<unsigned char>(s[end]))) ++end;
    long n = std::stol(s.substr(pos, end - pos));
    pos = end;
    return LazyOrder::chain(n);
  }
  if (starts("qset:")) {
    pos += 5;
    QSet x = parse_qset(s.substr(pos));
    pos = s.size();
    return LazyOrder::subset(x);
  }
  if (starts("cx:")) {
    pos += 3;
    size_t end = s.find_first_not_of("0123456789,", pos);
    if (end == std::string::npos) end = s.size();
    auto mask = parse_mask(s.substr(pos, end - pos));
    pos = end;
    return LazyOrder::cx(Enumeration(mask));
  }
  if (starts("cx")) {
    pos += 2;
    return LazyOrder::cx(Enumeration());
  }
  if (starts("Q")) {
    pos += 1;
    return LazyOrder::q_order();
  }
  throw UsageError("unknown order literal: " + s.substr(pos));
}

OrderRef parse_order(const std::string& s) {
  size_t pos = 0;
  OrderRef o = parse_order_at(s, pos);
  if (pos != s.size()) throw UsageError("trailing input in order literal: " + s.substr(pos));
  return o;
}

const char* case_name(GapCase c) {
  switch (c) {
    case GapCase::I: return "i";
    case GapCase::II: return "ii";
    case GapCase::III: return "iii";
    case GapCase::IV: return "iv";
    case GapCase::Empty: return "empty";
  }
  return "?";
}

int variant_case_number(VariantCase c) {
  return c == VariantCase::One ? 1 : (c == VariantCase::Two ? 2 : 3);
}

void print_green(const GreenTable& t, bool rows) {
  std::cout << "elements: " << t.elements.size() << "\n";
  std::cout << "D-classes: " << t.d_count << "\n";
  std::cout << "L-classes: " << t.l_count << "\n";
  std::cout << "R-classes: " << t.r_count << "\n";
  std::cout << "H-classes: " << t.h_count << "\n";
  size_t idem = 0;
  bool all_regular = true;
  for (size_t i = 0; i < t.elements.size(); ++i) {
    if (t.idempotent[i]) ++idem;
    if (!t.regular[i]) all_regular = false;
  }
  std::cout << "idempotents: " << idem << "\n";
  std::cout << "all regular: " << (all_regular ? "yes" : "no") << "\n";
  // per D-class summary, keyed by image size
  std::map<int, std::tuple<int, std::set<int>, std::set<int>>> by_class;  // rep -> (size, Ls, Rs)
  for (size_t i = 0; i < t.elements.size(); ++i) {
    auto& entry = by_class[t.d_class[i]];
    std::get<0>(entry)++;
    std::get<1>(entry).insert(t.l_class[i]);
    std::get<2>(entry).insert(t.r_class[i]);
  }
  for (const auto& [rep, entry] : by_class) {
    std::set<uint8_t> img(t.elements[static_cast<size_t>(rep)].values.begin(),
                          t.elements[static_cast<size_t>(rep)].values.end());
    std::cout << "D-class rank " << img.size() << ": size=" << std::get<0>(entry)
              << " L=" << std::get<1>(entry).size() << " R=" << std::get<2>(entry).size() << "\n";
  }
  if (rows) {
    for (size_t i = 0; i < t.elements.size(); ++i) {
      std::cout << i << ":";
      for (uint8_t v : t.elements[i].values) std::cout << " " << int(v);
      std::cout << " | L=" << t.l_class[i] << " R=" << t.r_class[i] << " H=" << t.h_class[i]
                << " D=" << t.d_class[i] << " idem=" << (t.idempotent[i] ? "y" : "n")
                << " reg=" << (t.regular[i] ? "y" : "n") << "\n";
    }
  }
}

int run(std::vector<std::string> args) {
  int depth = 10;
  long seed = 0;
  bool rows = false;
  int chain_n = -1;
  std::set<unsigned long> mask;
  std::vector<std::string> pos;
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    auto next = [&]() -> std::string {
      if (i + 1 >= args.size()) throw UsageError("missing value after " + a);
      return args[++i];
    };
    if (a == "--depth")
      depth = std::stoi(next());
    else if (a == "--seed")
      seed = std::stol(next());
    else if (a == "--rows")
      rows = true;
    else if (a == "--chain")
      chain_n = std::stoi(next());
    else if (a == "--mask")
      mask = parse_mask(next());
    else
      pos.push_back(a);
  }
  (void)seed;
  if (pos.empty()) throw UsageError("no command");
  const std::string cmd = pos[0];
  auto arg = [&](size_t k) -> const std::string& {
    if (k >= pos.size()) throw UsageError("missing argument for " + cmd);
    return pos[k];
  };

  if (cmd == "check-retract") {
    QSet x = parse_qset(arg(1));
    if (auto gap = retract_image_criterion(x)) {
      std::cout << "CLOSED GAP " << to_string(*gap) << "\n";
      return 1;
    }
    std::cout << "OK\n";
    return 0;
  }
  if (cmd == "build-retract") {
    Endo f = retract_onto(parse_qset(arg(1)));
    std::cout << to_string(f) << "\n";
    return 0;
  }
  if (cmd == "analyze") {
    Endo f = parse_endo(arg(1));
    for (const auto& g : analyze_idempotent(f, depth)) {
      std::cout << "x=" << g.x.get_str();
      std::cout << " L=" << (g.lower ? to_string(*g.lower) : "-") << " case=" << case_name(g.lower_case);
      std::cout << " U=" << (g.upper ? to_string(*g.upper) : "-") << " case=" << case_name(g.upper_case);
      std::cout << " m=" << (g.m_x ? g.m_x->get_str() : "-");
      std::cout << " n=" << (g.n_x ? g.n_x->get_str() : "-") << "\n";
    }
    return 0;
  }
  if (cmd == "variant" || cmd == "rvariant") {
    Endo f = parse_endo(arg(1));
    Rational q = parse_rational(arg(2));
    ExtReal gamma = parse_ext_real(arg(3));
    if (cmd == "variant") {
      auto v = idempotent_variant(f, q, gamma, depth);
      std::cout << "case: " << variant_case_number(v.maps.c) << "\n";
      std::cout << "xi: " << to_string(v.maps.xi) << "\n";
      std::cout << "eta: " << to_string(v.maps.eta) << "\n";
      std::cout << "g: " << to_string(v.g) << "\n";
      auto ker = preimage_of_value(v.g, q);
      std::cout << "kernel(" << q.get_str() << "): " << (ker ? to_string(*ker) : "-") << "\n";
      std::cout << "idempotent: " << to_string(is_idempotent(v.g, depth)) << "\n";
      std::cout << "eta_xi_identity: "
                << to_string(equal(compose(v.maps.eta, v.maps.xi), Endo::identity(), depth)) << "\n";
    } else {
      auto v = r_class_variant(f, q, gamma);
      std::cout << "case: " << variant_case_number(v.maps.c) << "\n";
      std::cout << "h: " << to_string(v.h) << "\n";
      std::cout << "xi: " << to_string(v.maps.xi) << "\n";
      std::cout << "eta: " << to_string(v.maps.eta) << "\n";
      auto ker = preimage_of_value(v.h, q);
      std::cout << "kernel(" << q.get_str() << "): " << (ker ? to_string(*ker) : "-") << "\n";
      std::cout << "same_image: " << (same_image(v.h, f) ? "true" : "false") << "\n";
      std::cout << "eta_h_is_f: " << to_string(equal(compose(v.maps.eta, v.h), f, depth)) << "\n";
    }
    return 0;
  }
  if (cmd == "lvariant") {
    Endo f = parse_endo(arg(1));
    const std::string& which = arg(2);
    LClassVariant v = [&]() {
      if (which == "a") {
        std::vector<Rational> qs;
        detail::Cursor c(arg(3));
        qs.push_back(c.rational());
        while (c.try_consume(',')) qs.push_back(c.rational());
        return l_class_variant_moving_maxima(f, qs);
      }
      if (which == "b")
        return l_class_variant_squash(f, parse_ext_real(arg(3)), parse_rational(arg(4)));
      throw UsageError("lvariant case must be 'a' or 'b'");
    }();
    std::cout << "case: " << v.case_tag << "\n";
    std::cout << "h: " << to_string(v.h) << "\n";
    std::cout << "xi: " << to_string(v.xi) << "\n";
    if (v.eta) std::cout << "eta: " << to_string(*v.eta) << "\n";
    std::cout << "image: " << to_string(image(v.h)) << "\n";
    std::cout << "same_kernel: " << (same_kernel(v.h, f) ? "true" : "false") << "\n";
    if (v.eta)
      std::cout << "f_xi_eta_is_f: " << to_string(equal(compose(v.h, *v.eta), f, depth)) << "\n";
    else
      std::cout << "f_xi_xiinv_is_f: " << to_string(equal(compose(v.h, invert(v.xi)), f, depth))
                << "\n";
    return 0;
  }
  if (cmd == "nonregular") {
    QSet x = parse_qset(arg(1));
    ExtReal alpha = parse_ext_real(arg(2));
    auto nr = nonregular_endo(x, alpha);
    std::cout << "f: " << to_string(nr.f) << "\n";
    std::cout << "image: " << to_string(image(nr.f)) << "\n";
    std::cout << "alpha: " << to_string(nr.alpha) << "\n";
    std::cout << "delta: " << nr.delta.get_str() << "\n";
    std::cout << "signature: " << order_type_signature(image(nr.f)).word << "\n";
    std::cout << "certificate: " << (validate_nonregular_certificate(nr) ? "valid" : "INVALID")
              << "\n";
    return 0;
  }
  if (cmd == "green") {
    if (chain_n < 0) throw UsageError("green requires --chain n");
    print_green(green_classify(chain_n), rows);
    return 0;
  }
  if (cmd == "orbitals") {
    Endo f = parse_endo(arg(1));
    auto part = orbital_partition(f);
    for (const auto& orb : part.infinite_orbitals)
      std::cout << to_string(orb.support) << " "
                << (orb.sign == Orbital::Sign::Up ? "↑" : "↓") << "\n";
    std::cout << "fixed: " << to_string(part.fixed) << "\n";
    return 0;
  }
  if (cmd == "cx") {
    const std::string& sub = arg(1);
    Enumeration e(mask);
    auto order = LazyOrder::cx(e);
    if (sub == "compare") {
      Ordering c = order->compare_elems(parse_cx_code(arg(2)), parse_cx_code(arg(3)));
      std::cout << (c == Ordering::Less ? "less" : c == Ordering::Greater ? "greater" : "equal")
                << "\n";
      return 0;
    }
    if (sub == "between") {
      Code a = parse_cx_code(arg(2)), b = parse_cx_code(arg(3));
      bool res = order->exists_between(a, b);
      std::cout << (res ? "true" : "false") << "\n";
      return 0;
    }
    if (sub == "rigidity") {
      Enumeration e1 = Enumeration().masked(parse_mask(arg(2)));
      Enumeration e2 = Enumeration().masked(parse_mask(arg(3)));
      size_t n = std::stoul(arg(4));
      auto r = cx_rigidity_probe(e1, e2, n);
      if (r.contradiction)
        std::cout << "CONTRADICTION (" << r.m.get_str() << "," << r.n.get_str() << ")\n";
      else
        std::cout << "FORCED MAP OK\n";
      return 0;
    }
    throw UsageError("cx subcommand must be compare, between or rigidity");
  }
  if (cmd == "sig") {
    std::cout << order_type_signature(parse_qset(arg(1))).word << "\n";
    return 0;
  }
  if (cmd == "bnf") {
    auto a = parse_order(arg(1));
    auto b = parse_order(arg(2));
    auto res = back_and_forth(a, b, static_cast<size_t>(depth));
    if (std::holds_alternative<PartialIso>(res)) {
      const auto& iso = std::get<PartialIso>(res);
      std::cout << "ISO size=" << iso.pairs.size() << "\n";
      for (const auto& pr : iso.pairs)
        std::cout << pr.first.str() << " -> " << pr.second.str() << "\n";
    } else {
      const auto& ob = std::get<Obstruction>(res);
      std::cout << "OBSTRUCTION step=" << ob.step << " side=" << (ob.side == 0 ? "A" : "B")
                << " element=" << ob.element << " (" << ob.detail << ")\n";
    }
    return 0;
  }
  throw UsageError("unknown command: " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(std::move(args));
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << kUsage;
    return 2;
  } catch (const endoq::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const endoq::ClosedGapError& e) {
    std::cout << "CLOSED GAP " << endoq::to_string(e.gap) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return 1;
  }
}
