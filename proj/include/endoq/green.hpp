#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "endoq/endo.hpp"

namespace endoq {

struct TooLargeError : std::runtime_error {
  TooLargeError() : std::runtime_error("chain size beyond the oracle cut-off") {}
};
struct InfiniteImageError : std::runtime_error {
  InfiniteImageError() : std::runtime_error("operation requires a finite image") {}
};

// order-preserving self-map of the chain {1, ..., n}
struct FinChainMap {
  int n;
  std::vector<uint8_t> values;  // values[i] = image of i+1, monotone

  bool operator==(const FinChainMap& o) const { return n == o.n && values == o.values; }
  bool operator<(const FinChainMap& o) const { return values < o.values; }
};

// f then g
inline FinChainMap chain_compose(const FinChainMap& f, const FinChainMap& g) {
  FinChainMap h{f.n, std::vector<uint8_t>(f.values.size())};
  for (size_t i = 0; i < f.values.size(); ++i) h.values[i] = g.values[f.values[i] - 1];
  return h;
}

inline std::vector<FinChainMap> enumerate_chain_endos(int n) {
  if (n < 1 || n > 8) throw TooLargeError();
  std::vector<FinChainMap> out;
  std::vector<uint8_t> cur(static_cast<size_t>(n), 1);
  for (;;) {
    out.push_back({n, cur});
    int i = n - 1;
    while (i >= 0 && cur[static_cast<size_t>(i)] == n) --i;
    if (i < 0) break;
    uint8_t v = ++cur[static_cast<size_t>(i)];
    for (size_t j = static_cast<size_t>(i) + 1; j < cur.size(); ++j) cur[j] = v;
  }
  return out;
}

// Full Green classification of O_n by definitional witness search: f L g iff
// f = ug and g = vf for some u, v; dually for R. D is the join of L and R.
struct GreenTable {
  int n = 0;
  std::vector<FinChainMap> elements;
  std::vector<int> l_class, r_class, h_class, d_class;  // class ids, minimal-index reps
  std::vector<bool> idempotent, regular;
  int l_count = 0, r_count = 0, h_count = 0, d_count = 0;

  // multiplier witnesses to the class representative: f = l_witness * rep
  // (left), f = rep * r_witness (right); -1 where f is its own representative
  std::vector<int> l_witness, r_witness;
};

inline GreenTable green_classify(int n) {
  if (n < 1 || n > 6) throw TooLargeError();
  GreenTable t;
  t.n = n;
  t.elements = enumerate_chain_endos(n);
  const size_t m = t.elements.size();
  std::map<std::vector<uint8_t>, int> index;
  for (size_t i = 0; i < m; ++i) index[t.elements[i].values] = static_cast<int>(i);

  // left_multiples[g] = { u*g : u }, right_multiples[g] = { g*v : v }
  std::vector<std::vector<bool>> left_mult(m, std::vector<bool>(m, false));
  std::vector<std::vector<bool>> right_mult(m, std::vector<bool>(m, false));
  std::vector<std::vector<int>> left_by(m, std::vector<int>(m, -1));
  std::vector<std::vector<int>> right_by(m, std::vector<int>(m, -1));
  for (size_t g = 0; g < m; ++g)
    for (size_t u = 0; u < m; ++u) {
      int ug = index[chain_compose(t.elements[u], t.elements[g]).values];
      if (!left_mult[g][static_cast<size_t>(ug)]) {
        left_mult[g][static_cast<size_t>(ug)] = true;
        left_by[g][static_cast<size_t>(ug)] = static_cast<int>(u);
      }
      int gv = index[chain_compose(t.elements[g], t.elements[u]).values];
      if (!right_mult[g][static_cast<size_t>(gv)]) {
        right_mult[g][static_cast<size_t>(gv)] = true;
        right_by[g][static_cast<size_t>(gv)] = static_cast<int>(u);
      }
    }

  auto l_related = [&](size_t f, size_t g) { return left_mult[g][f] && left_mult[f][g]; };
  auto r_related = [&](size_t f, size_t g) { return right_mult[g][f] && right_mult[f][g]; };

  t.l_class.assign(m, -1);
  t.r_class.assign(m, -1);
  t.h_class.assign(m, -1);
  t.d_class.assign(m, -1);
  t.l_witness.assign(m, -1);
  t.r_witness.assign(m, -1);
  for (size_t f = 0; f < m; ++f) {
    if (t.l_class[f] < 0) {
      for (size_t g = f; g < m; ++g)
        if (t.l_class[g] < 0 && l_related(f, g)) {
          t.l_class[g] = static_cast<int>(f);
          if (g != f) t.l_witness[g] = left_by[f][g];
        }
      ++t.l_count;
    }
    if (t.r_class[f] < 0) {
      for (size_t g = f; g < m; ++g)
        if (t.r_class[g] < 0 && r_related(f, g)) {
          t.r_class[g] = static_cast<int>(f);
          if (g != f) t.r_witness[g] = right_by[f][g];
        }
      ++t.r_count;
    }
  }
  // H = L meet R
  std::map<std::pair<int, int>, int> h_reps;
  for (size_t f = 0; f < m; ++f) {
    auto key = std::make_pair(t.l_class[f], t.r_class[f]);
    auto it = h_reps.find(key);
    if (it == h_reps.end()) {
      h_reps[key] = static_cast<int>(f);
      t.h_class[f] = static_cast<int>(f);
      ++t.h_count;
    } else {
      t.h_class[f] = it->second;
    }
  }
  // D = join of L and R via union-find
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  };
  auto unite = [&](int x, int y) {
    x = find(x);
    y = find(y);
    if (x != y) parent[static_cast<size_t>(std::max(x, y))] = std::min(x, y);
  };
  for (size_t f = 0; f < m; ++f) {
    unite(static_cast<int>(f), t.l_class[f]);
    unite(static_cast<int>(f), t.r_class[f]);
  }
  std::map<int, int> d_reps;
  for (size_t f = 0; f < m; ++f) {
    int root = find(static_cast<int>(f));
    auto it = d_reps.find(root);
    if (it == d_reps.end()) {
      d_reps[root] = static_cast<int>(f);
      ++t.d_count;
    }
    t.d_class[f] = d_reps[root];
  }

  t.idempotent.assign(m, false);
  t.regular.assign(m, false);
  for (size_t f = 0; f < m; ++f) {
    t.idempotent[f] = chain_compose(t.elements[f], t.elements[f]) == t.elements[f];
    for (size_t g = 0; g < m && !t.regular[f]; ++g) {
      FinChainMap fgf = chain_compose(chain_compose(t.elements[f], t.elements[g]), t.elements[f]);
      if (fgf == t.elements[f]) t.regular[f] = true;
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// criteria on Endo

// Regularity witness for a finite-image endomorphism: the piecewise-affine
// automorphism interpolating x_i -> q_i with canonical picks q_i from each
// preimage (included endpoint first, else the canonical interior rational).
inline Endo is_regular_finite_image(const Endo& f) {
  QSet x = image(f);
  for (const auto& c : x.components())
    if (!c.is_singleton()) throw InfiniteImageError();
  std::vector<std::pair<Rational, Rational>> corners;  // (x_i, q_i)
  for (const auto& c : x.components()) {
    Rational xi = c.lo.rational();
    auto pre = preimage_of_value(f, xi);
    if (!pre) throw InvalidEndoError("image value without preimage");
    corners.emplace_back(xi, pick_rational(*pre));
  }
  std::vector<Piece> ps;
  if (corners.size() == 1) {
    ps.push_back({QInterval::all(), AffineMap{Rational(1), corners[0].second - corners[0].first}});
  } else {
    ps.push_back({QInterval(ExtReal::neg_inf(), false, ExtReal(corners[0].first), true),
                  AffineMap{Rational(1), corners[0].second - corners[0].first}});
    for (size_t i = 0; i + 1 < corners.size(); ++i) {
      Rational a = (corners[i + 1].second - corners[i].second) /
                   (corners[i + 1].first - corners[i].first);
      Rational b = corners[i].second - a * corners[i].first;
      ps.push_back({QInterval(ExtReal(corners[i].first), false, ExtReal(corners[i + 1].first), true),
                    AffineMap{a, b}});
    }
    ps.push_back({QInterval(ExtReal(corners.back().first), false, ExtReal::pos_inf(), false),
                  AffineMap{Rational(1), corners.back().second - corners.back().first}});
  }
  Endo g = Endo::from_pieces(std::move(ps));
  return g;
}

// D-relatedness via order types of images: exact both ways for pairs known
// regular, refutation-only otherwise (equal signatures then stay Undecided).
inline Tristate d_related(const Endo& f, const Endo& g, int depth = 10) {
  Signature sf = order_type_signature(image(f));
  Signature sg = order_type_signature(image(g));
  if (sf != sg) return Tristate::no();
  auto known_regular = [&](const Endo& h) {
    if (is_idempotent(h, depth).is_true()) return true;
    QSet x = image(h);
    for (const auto& c : x.components())
      if (!c.is_singleton()) return false;
    return true;  // finite image implies regular
  };
  if (known_regular(f) && known_regular(g)) return Tristate::yes();
  return Tristate::undecided(depth);
}

}  // namespace endoq
