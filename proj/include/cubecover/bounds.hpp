#pragma once

// Lower and upper bound calculators for f(n, k), the minimum size of an almost k-cover.
//
// Every plane has weight <= 1 and the nonzero vertices weigh H_n in total, so
// f(n,k) >= ceil(k H_n). A cover of size m satisfies
//   m - k H_n = sum_S (cov(S) - k) w(S) + sum_h (1 - w(h)) x_h,
// where every positive term is at least 1 / (n C(n-1, floor(n/2))). A deficit
// ceil(k H_n) - k H_n strictly between 0 and that threshold therefore forces one more plane.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "cubecover/core.hpp"

namespace cubecover {

struct HarmonicFraction {
  int n = 0;
  Rational value;
  Integer numerator;    ///< c_n
  Integer denominator;  ///< d_n
};

inline HarmonicFraction harmonic(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "harmonic number needs n >= 1");
  Rational h = 0;
  for (int s = 1; s <= n; ++s) h += Rational(1, s);
  return {n, h, h.get_num(), h.get_den()};
}

inline Integer lp_lower_bound(int n, const Integer& k) { return ceil(harmonic(n).value * k); }
inline Integer lp_lower_bound(int n, long k) { return lp_lower_bound(n, Integer(k)); }

/// ceil(k H_n) - k H_n.
inline Rational lp_deficit(int n, const Integer& k) {
  Rational kh = harmonic(n).value * k;
  return Rational(ceil(kh)) - kh;
}

/// Smallest positive slack term: min(min_S w(S), 1/n) = 1 / (n C(n-1, floor(n/2))).
inline Rational improvement_threshold(int n) {
  Rational t(Integer(1), binomial(static_cast<unsigned long>(n - 1), static_cast<unsigned long>(n / 2)) * n);
  t.canonicalize();
  return t;
}

struct BoundReport {
  int n = 0;
  Integer k;
  Integer lp_bound;
  Rational deficit;
  bool improved = false;
  Integer final_lower;
  bool weight1_forced = false;
  Rational threshold;
};

/// The +1 test only applies for k >= 2; smaller k report improved = false.
inline BoundReport improved_lower_bound(int n, const Integer& k) {
  if (n < 1 || k < 1) throw Error(ErrorKind::InvalidInput, "bounds need n, k >= 1");
  BoundReport r;
  r.n = n;
  r.k = k;
  r.lp_bound = lp_lower_bound(n, k);
  r.deficit = lp_deficit(n, k);
  r.threshold = improvement_threshold(n);
  r.improved = k >= 2 && r.deficit > 0 && r.deficit < r.threshold;
  r.final_lower = r.lp_bound + (r.improved ? 1 : 0);
  r.weight1_forced = r.deficit < Rational(1, n);
  return r;
}
inline BoundReport improved_lower_bound(int n, long k) { return improved_lower_bound(n, Integer(k)); }

/// A cover of size exactly ceil(k H_n) has slack < 1/n (zero slack included), so every
/// plane in it has weight 1.
inline bool weight1_forced(int n, const Integer& k) {
  if (n < 1 || k < 1) throw Error(ErrorKind::InvalidInput, "bounds need n, k >= 1");
  return lp_deficit(n, k) < Rational(1, n);
}
inline bool weight1_forced(int n, long k) { return weight1_forced(n, Integer(k)); }

/// Residues k0 mod d_n with c_n k0 = -r (mod d_n) for an integer 1 <= r < d_n / (n C(n-1, floor(n/2))),
/// in increasing order. For every k >= 2 in such a class the +1 improvement fires.
inline std::vector<Integer> plusone_residues(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "plusone_residues needs n >= 2");
  HarmonicFraction h = harmonic(n);
  Rational r_limit = Rational(h.denominator) * improvement_threshold(n);
  Integer inverse;
  mpz_invert(inverse.get_mpz_t(), h.numerator.get_mpz_t(), h.denominator.get_mpz_t());
  std::vector<Integer> out;
  for (Integer r = 1; Rational(r) < r_limit; ++r) {
    Integer k0 = -r * inverse;
    mpz_fdiv_r(k0.get_mpz_t(), k0.get_mpz_t(), h.denominator.get_mpz_t());
    out.push_back(k0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Exact-sum composition of known covers: the least sum m_j u_j over nonnegative integers
/// m_j with sum m_j k_j = target. nullopt when the target cannot be composed.
inline std::optional<std::int64_t> combine_upper(const std::map<long, std::int64_t>& known, long target) {
  if (known.empty() || target < 0) return std::nullopt;
  constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> best(static_cast<std::size_t>(target) + 1, kNone);
  best[0] = 0;
  for (long t = 1; t <= target; ++t) {
    for (const auto& [k, u] : known) {
      if (k <= 0 || k > t) continue;
      std::int64_t prev = best[static_cast<std::size_t>(t - k)];
      if (prev != kNone) best[static_cast<std::size_t>(t)] = std::min(best[static_cast<std::size_t>(t)], prev + u);
    }
  }
  if (target == 0 || best[static_cast<std::size_t>(target)] == kNone) return std::nullopt;
  return best[static_cast<std::size_t>(target)];
}

}  // namespace cubecover
