#pragma once

// Exact hyperplanes, cube vertices and the harmonic vertex weighting.
//
// A vertex x of {0,1}^n \ {0} is identified with its support S = {i : x_i = 1} and
// stored as a bitmask (bit i-1 set <=> i in S). A hyperplane is always written as
// sum c_i x_i = 1, so the origin is never on it.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubecover/error.hpp"
#include "cubecover/rational.hpp"

namespace cubecover {

/// Largest dimension for which subsets are enumerated.
inline constexpr int kMaxSubsetDimension = 20;

using SubsetMask = std::uint32_t;

inline int popcount(SubsetMask m) { return std::popcount(m); }

/// Canonical subset order: by cardinality, then lexicographic on the sorted support.
inline bool canonical_less(SubsetMask a, SubsetMask b) {
  int ca = popcount(a), cb = popcount(b);
  if (ca != cb) return ca < cb;
  if (a == b) return false;
  SubsetMask diff = a ^ b;
  SubsetMask lowest = diff & (~diff + 1);
  return (a & lowest) != 0;
}

inline void check_dimension(int n) {
  if (n < 1 || n > kMaxSubsetDimension) {
    throw Error(ErrorKind::CapExceeded,
                "dimension " + std::to_string(n) + " outside 1.." + std::to_string(kMaxSubsetDimension));
  }
}

/// All nonempty subsets of [n] in canonical order.
inline std::vector<SubsetMask> canonical_subsets(int n) {
  check_dimension(n);
  std::vector<SubsetMask> out;
  out.reserve((std::size_t{1} << n) - 1);
  for (SubsetMask m = 1; m < (SubsetMask{1} << n); ++m) out.push_back(m);
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

class CubePoint {
 public:
  CubePoint(int dimension, SubsetMask support) : n_(dimension), mask_(support) {
    check_dimension(n_);
    if (mask_ == 0) throw Error(ErrorKind::InvalidPoint, "empty support (the origin has no weight)");
    if (mask_ >> n_) throw Error(ErrorKind::InvalidPoint, "support exceeds dimension");
  }

  /// From a 1-based element list.
  static CubePoint from_support(int dimension, const std::vector<int>& elements) {
    SubsetMask m = 0;
    for (int e : elements) {
      if (e < 1 || e > dimension) {
        throw Error(ErrorKind::InvalidPoint, "element " + std::to_string(e) + " outside [n]");
      }
      m |= SubsetMask{1} << (e - 1);
    }
    return CubePoint(dimension, m);
  }

  int dimension() const noexcept { return n_; }
  SubsetMask mask() const noexcept { return mask_; }
  int cardinality() const noexcept { return popcount(mask_); }

  std::vector<int> support() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
      if (mask_ >> i & 1u) out.push_back(i + 1);
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int e : support()) {
      if (!first) s += ",";
      s += std::to_string(e);
      first = false;
    }
    return s + "}";
  }

  friend bool operator==(const CubePoint&, const CubePoint&) = default;
  friend bool operator<(const CubePoint& a, const CubePoint& b) { return canonical_less(a.mask_, b.mask_); }

 private:
  int n_;
  SubsetMask mask_;
};

/// The plane { x : sum_i coeffs[i] x_i = 1 }.
class Hyperplane {
 public:
  explicit Hyperplane(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw Error(ErrorKind::InvalidInput, "hyperplane needs n >= 1 coefficients");
  }

  static Hyperplane from_ints(const std::vector<long>& values) {
    std::vector<Rational> c;
    c.reserve(values.size());
    for (long v : values) c.emplace_back(v);
    return Hyperplane(std::move(c));
  }

  static Hyperplane parse(std::string_view text, std::size_t line = 0) {
    return Hyperplane(parse_rational_list(text, line));
  }

  int dimension() const noexcept { return static_cast<int>(coeffs_.size()); }
  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
  const Rational& operator[](std::size_t i) const { return coeffs_[i]; }

  Rational subset_sum(SubsetMask m) const {
    Rational s = 0;
    for (int i = 0; i < dimension(); ++i)
      if (m >> i & 1u) s += coeffs_[static_cast<std::size_t>(i)];
    return s;
  }

  bool contains(const CubePoint& p) const {
    if (p.dimension() != dimension()) throw Error(ErrorKind::DimensionMismatch, "point and plane dimensions differ");
    return subset_sum(p.mask()) == 1;
  }

  std::string to_string(const char* sep = " ") const {
    std::string s;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (i) s += sep;
      s += format_rational(coeffs_[i]);
    }
    return s;
  }

  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
  /// Lexicographic on the coefficient vector.
  friend bool operator<(const Hyperplane& a, const Hyperplane& b) {
    return std::lexicographical_compare(a.coeffs_.begin(), a.coeffs_.end(), b.coeffs_.begin(), b.coeffs_.end());
  }

 private:
  std::vector<Rational> coeffs_;
};

/// Coefficients scaled to a common denominator: c_i = numerators[i] / denominator.
/// Only produced when every subset sum of numerators and the denominator fit comfortably in int64.
struct ScaledPlane {
  std::vector<std::int64_t> numerators;
  std::int64_t denominator = 1;
};

inline std::optional<ScaledPlane> scale_to_int64(const Hyperplane& h) {
  Integer den = 1;
  for (const auto& c : h.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  const Integer limit = Integer(1) << 60;
  Integer total = den;
  ScaledPlane out;
  out.numerators.reserve(h.coeffs().size());
  for (const auto& c : h.coeffs()) {
    Integer a = c.get_num() * (den / c.get_den());
    total += abs(a);
    if (total >= limit) return std::nullopt;
    out.numerators.push_back(a.get_si());
  }
  out.denominator = den.get_si();
  return out;
}

// ---------------------------------------------------------------------------
// Weights

/// w(S) = 1 / (|S| * C(n, |S|)).
inline Rational point_weight(int n, int t) {
  if (t < 1 || t > n) throw Error(ErrorKind::InvalidPoint, "cardinality must lie in 1..n");
  Rational w(Integer(1), binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(t)) * t);
  w.canonicalize();
  return w;
}

inline Rational point_weight(const CubePoint& p) { return point_weight(p.dimension(), p.cardinality()); }

/// All nonempty S with sum_{i in S} c_i = 1, in canonical order.
inline std::vector<CubePoint> covered_points(const Hyperplane& h) {
  const int n = h.dimension();
  check_dimension(n);
  const SubsetMask full = (SubsetMask{1} << n);
  std::vector<SubsetMask> hits;
  if (auto scaled = scale_to_int64(h)) {
    std::vector<std::int64_t> sums(full, 0);
    for (SubsetMask m = 1; m < full; ++m) {
      int low = std::countr_zero(m);
      sums[m] = sums[m & (m - 1)] + scaled->numerators[static_cast<std::size_t>(low)];
      if (sums[m] == scaled->denominator) hits.push_back(m);
    }
  } else {
    std::vector<Rational> sums(full);
    for (SubsetMask m = 1; m < full; ++m) {
      int low = std::countr_zero(m);
      sums[m] = sums[m & (m - 1)] + h[static_cast<std::size_t>(low)];
      if (sums[m] == 1) hits.push_back(m);
    }
  }
  std::sort(hits.begin(), hits.end(), canonical_less);
  std::vector<CubePoint> out;
  out.reserve(hits.size());
  for (SubsetMask m : hits) out.emplace_back(n, m);
  return out;
}

inline Rational plane_weight(const Hyperplane& h) {
  const int n = h.dimension();
  std::vector<Rational> by_size(static_cast<std::size_t>(n) + 1);
  for (int t = 1; t <= n; ++t) by_size[static_cast<std::size_t>(t)] = point_weight(n, t);
  Rational total = 0;
  for (const auto& p : covered_points(h)) total += by_size[static_cast<std::size_t>(p.cardinality())];
  return total;
}

inline Rational stability_gap(const Hyperplane& h) { return Rational(1) - plane_weight(h); }

/// Sum of w(S) over every nonzero vertex; equals H_n.
inline Rational total_vertex_weight(int n) {
  Rational total = 0;
  for (SubsetMask m : canonical_subsets(n)) total += point_weight(n, popcount(m));
  return total;
}

// ---------------------------------------------------------------------------
// Weight-1 classification

enum class Weight1Condition { CoeffAboveOne, SumBelowOne, NonIntegerCoeff };

inline const char* to_string(Weight1Condition c) {
  switch (c) {
    case Weight1Condition::CoeffAboveOne: return "CoeffAboveOne";
    case Weight1Condition::SumBelowOne: return "SumBelowOne";
    case Weight1Condition::NonIntegerCoeff: return "NonIntegerCoeff";
  }
  return "?";
}

struct Weight1Verdict {
  bool is_weight1 = false;
  std::vector<Weight1Condition> failed_conditions;

  bool failed(Weight1Condition c) const {
    return std::find(failed_conditions.begin(), failed_conditions.end(), c) != failed_conditions.end();
  }
};

/// Weight is exactly 1 iff all c_i <= 1, sum c_i >= 1 and all c_i are integers.
/// Every other plane has weight at most 1 - 1/n.
inline Weight1Verdict classify_weight1(const Hyperplane& h) {
  Weight1Verdict v;
  const auto& c = h.coeffs();
  if (std::any_of(c.begin(), c.end(), [](const Rational& x) { return x > 1; }))
    v.failed_conditions.push_back(Weight1Condition::CoeffAboveOne);
  if (std::accumulate(c.begin(), c.end(), Rational(0)) < 1)
    v.failed_conditions.push_back(Weight1Condition::SumBelowOne);
  if (!std::all_of(c.begin(), c.end(), [](const Rational& x) { return is_integer(x); }))
    v.failed_conditions.push_back(Weight1Condition::NonIntegerCoeff);
  v.is_weight1 = v.failed_conditions.empty();
  return v;
}

}  // namespace cubecover
