#pragma once

#include <set>
#include <vector>

#include "endoq/rational.hpp"

namespace endoq {

// The library's canonical enumeration of Q. Position 0 holds 0; block k
// (positions 2^k - 1 .. 2^{k+1} - 2) holds k, -k, then each non-integer
// entry of Stern-Brocot level k followed by its negative, left to right.
// Both directions are exact; ranks are bignums because block sizes double.
//
// A finite mask A composes the enumeration with the involution swapping
// positions 2i and 2i+1 for every i in A.
class Enumeration {
 public:
  Enumeration() = default;
  explicit Enumeration(std::set<unsigned long> mask) : mask_(std::move(mask)) {}

  const std::set<unsigned long>& mask() const { return mask_; }

  Rational forward(const Integer& n) const { return base_forward(permute(n)); }

  Integer rank(const Rational& q) const { return permute(base_rank(q)); }

  Enumeration masked(const std::set<unsigned long>& extra) const {
    // symmetric difference: masking twice with the same index cancels
    std::set<unsigned long> m = mask_;
    for (unsigned long i : extra) {
      auto it = m.find(i);
      if (it != m.end())
        m.erase(it);
      else
        m.insert(i);
    }
    return Enumeration(std::move(m));
  }

  bool operator==(const Enumeration& o) const { return mask_ == o.mask_; }

  static Rational base_forward(const Integer& n) {
    if (n < 0) throw std::invalid_argument("enumeration index must be nonnegative");
    if (n == 0) return Rational(0);
    Integer m = n + 1;
    size_t k = mpz_sizeinbase(m.get_mpz_t(), 2) - 1;  // 2^k <= n+1 < 2^{k+1}
    Integer block_start = (Integer(1) << k) - 1;
    Integer off = n - block_start;
    if (off == 0) return Rational(Integer(k));
    if (off == 1) return -Rational(Integer(k));
    Integer idx2 = off - 2;
    bool neg = mpz_odd_p(idx2.get_mpz_t());
    Integer j = idx2 / 2;
    Rational v = stern_brocot_entry(k, j);
    return neg ? -v : v;
  }

  static Integer base_rank(const Rational& q) {
    if (q == 0) return Integer(0);
    bool neg = q < 0;
    Rational v = neg ? Rational(-q) : q;
    if (is_integer(v)) {
      Integer p = v.get_num();
      Integer pos = (Integer(1) << mpz_get_ui(p.get_mpz_t())) - 1;
      // care: p may exceed ulong in theory; enumeration users stay small
      return pos + (neg ? 1 : 0);
    }
    auto [level, index] = stern_brocot_position(v);
    Integer pos = (Integer(1) << level) - 1 + 2 + 2 * index + (neg ? 1 : 0);
    return pos;
  }

  // entry j (0-based, increasing) of Stern-Brocot level k, k >= 1
  static Rational stern_brocot_entry(size_t k, const Integer& j) {
    Integer pn(0), pd(1), qn(1), qd(0);  // brackets 0/1 and 1/0
    Integer cn(1), cd(1);
    for (size_t bit = 0; bit + 1 < k; ++bit) {
      size_t shift = k - 2 - bit;
      bool right = mpz_tstbit(j.get_mpz_t(), shift);
      if (right) {
        pn = cn;
        pd = cd;
      } else {
        qn = cn;
        qd = cd;
      }
      cn = pn + qn;
      cd = pd + qd;
    }
    return rat(cn, cd);
  }

  // (level, within-level index) of a positive non-integer rational
  static std::pair<size_t, Integer> stern_brocot_position(const Rational& v) {
    // continued fraction [a0; a1, ..., am], am >= 2 since v is not an integer
    std::vector<Integer> cf;
    Integer p = v.get_num(), q = v.get_den();
    while (q != 0) {
      Integer a, r;
      mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
      cf.push_back(a);
      p = q;
      q = r;
    }
    // path: a0 R's, a1 L's, a2 R's, ..., last run shortened by one
    cf.back() -= 1;
    Integer idx(0);
    size_t len = 0;
    bool right = true;
    for (const Integer& run : cf) {
      unsigned long r = mpz_get_ui(run.get_mpz_t());
      for (unsigned long i = 0; i < r; ++i) {
        idx <<= 1;
        if (right) idx |= 1;
        ++len;
      }
      right = !right;
    }
    return {len + 1, idx};
  }

 private:
  Integer permute(const Integer& n) const {
    if (mask_.empty()) return n;
    if (!n.fits_ulong_p()) {
      // even positions 2i with huge i are never masked (masks are small)
      return n;
    }
    unsigned long u = mpz_get_ui(n.get_mpz_t());
    unsigned long i = u / 2;
    if (mask_.count(i)) return Integer(u % 2 == 0 ? u + 1 : u - 1);
    return n;
  }

  std::set<unsigned long> mask_;
};

}  // namespace endoq
