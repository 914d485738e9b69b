#pragma once

// Good / bad / redundant partition of S_n relative to a hyperplane.
//
// A permutation pi yields S when S is its initial segment, every proper prefix sum of
// coefficients is < 1 and the sum over S is exactly 1. Every cyclic arrangement of a
// covered S has at least one start that yields S; among those the largest start is the
// canonical one. pi is good when it yields S starting at that canonical start, redundant
// when it yields S from another start, bad when it yields nothing. Counting good
// permutations gives an independent route to the plane weight: w(h) = |G| / n!.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "cubecover/core.hpp"

namespace cubecover {

/// Largest n for which S_n is enumerated.
inline constexpr int kMaxOracleDimension = 10;
/// From this size on, canonical starts are memoised per cyclic arrangement.
inline constexpr int kOracleCacheFrom = 8;

class Permutation {
 public:
  /// `image` is 1-based: image[i] = pi(i + 1).
  explicit Permutation(std::vector<int> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size() + 1, false);
    for (int v : image_) {
      if (v < 1 || v > static_cast<int>(image_.size()) || seen[static_cast<std::size_t>(v)])
        throw Error(ErrorKind::InvalidInput, "not a permutation of 1..n");
      seen[static_cast<std::size_t>(v)] = true;
    }
  }

  int dimension() const noexcept { return static_cast<int>(image_.size()); }
  const std::vector<int>& image() const noexcept { return image_; }
  int operator()(int i) const { return image_[static_cast<std::size_t>(i - 1)]; }

 private:
  std::vector<int> image_;
};

/// Cyclic order on a subset of [n], stored as the rotation that starts at its minimum.
class CyclicArrangement {
 public:
  explicit CyclicArrangement(std::vector<int> sequence) : seq_(std::move(sequence)) {
    if (seq_.empty()) throw Error(ErrorKind::InvalidInput, "cyclic arrangement of the empty set");
    std::vector<int> sorted = seq_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 1)
      throw Error(ErrorKind::InvalidInput, "cyclic arrangement must list distinct positive elements");
    std::rotate(seq_.begin(), std::min_element(seq_.begin(), seq_.end()), seq_.end());
  }

  const std::vector<int>& elements() const noexcept { return seq_; }
  std::size_t size() const noexcept { return seq_.size(); }

  SubsetMask mask() const {
    SubsetMask m = 0;
    for (int e : seq_) m |= SubsetMask{1} << (e - 1);
    return m;
  }

  /// Linear order obtained by reading the cycle from `start`.
  std::vector<int> unfold_from(int start) const {
    auto it = std::find(seq_.begin(), seq_.end(), start);
    if (it == seq_.end()) throw Error(ErrorKind::InvalidInput, "start is not in the arrangement");
    std::vector<int> out(it, seq_.end());
    out.insert(out.end(), seq_.begin(), it);
    return out;
  }

  friend bool operator==(const CyclicArrangement&, const CyclicArrangement&) = default;

 private:
  std::vector<int> seq_;
};

enum class YieldTag { Good, Redundant, Bad };

inline const char* to_string(YieldTag t) {
  switch (t) {
    case YieldTag::Good: return "Good";
    case YieldTag::Redundant: return "Redundant";
    case YieldTag::Bad: return "Bad";
  }
  return "?";
}

struct YieldOutcome {
  YieldTag tag = YieldTag::Bad;
  std::optional<CubePoint> yielded_set;
};

struct GbrCounts {
  std::uint64_t good = 0;
  std::uint64_t bad = 0;
  std::uint64_t redundant = 0;

  std::uint64_t total() const noexcept { return good + bad + redundant; }
  friend bool operator==(const GbrCounts&, const GbrCounts&) = default;
};

namespace detail {

/// Prefix-sum engine over either scaled int64 coefficients or exact rationals.
/// Elements handed to it are 0-based coordinate indices.
template <class Scalar>
class OracleEngine {
 public:
  OracleEngine(std::vector<Scalar> coeffs, Scalar one) : c_(std::move(coeffs)), one_(std::move(one)) {}

  int dimension() const { return static_cast<int>(c_.size()); }

  /// Length of the yielded initial segment of `order`, or 0 when it yields nothing.
  int yield_length(const int* order, int len) const {
    Scalar s = Scalar(0);
    for (int l = 0; l < len; ++l) {
      s += c_[static_cast<std::size_t>(order[l])];
      if (s == one_) return l + 1;
      if (s > one_) return 0;
    }
    return 0;
  }

  /// True when reading `cycle` from position `start` yields exactly the whole cycle.
  bool unfolding_yields(const int* cycle, int len, int start) const {
    Scalar s = Scalar(0);
    for (int l = 0; l < len; ++l) {
      s += c_[static_cast<std::size_t>(cycle[(start + l) % len])];
      if (l + 1 < len && !(s < one_)) return false;
    }
    return s == one_;
  }

  /// Largest valid start (0-based element) of the cycle; -1 if none.
  int canonical_start(const int* cycle, int len) const {
    int best = -1;
    for (int r = 0; r < len; ++r)
      if (cycle[r] > best && unfolding_yields(cycle, len, r)) best = cycle[r];
    return best;
  }

  GbrCounts count_with_first(int first, bool use_cache) const {
    const int n = dimension();
    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
      if (i != first) rest.push_back(i);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::unordered_map<std::uint64_t, int> cache;
    std::vector<int> cyc;
    GbrCounts counts;
    do {
      perm[0] = first;
      std::copy(rest.begin(), rest.end(), perm.begin() + 1);
      int len = yield_length(perm.data(), n);
      if (len == 0) {
        ++counts.bad;
        continue;
      }
      int canonical;
      if (use_cache) {
        cyc.assign(perm.begin(), perm.begin() + len);
        std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
        std::uint64_t key = 0;
        for (int e : cyc) key = key << 4 | static_cast<std::uint64_t>(e + 1);
        auto [it, inserted] = cache.try_emplace(key, 0);
        if (inserted) it->second = canonical_start(cyc.data(), len);
        canonical = it->second;
      } else {
        canonical = canonical_start(perm.data(), len);
      }
      if (canonical == first)
        ++counts.good;
      else
        ++counts.redundant;
    } while (std::next_permutation(rest.begin(), rest.end()));
    return counts;
  }

 private:
  std::vector<Scalar> c_;
  Scalar one_;
};

template <class Fn>
decltype(auto) with_engine(const Hyperplane& h, Fn&& fn) {
  if (auto scaled = scale_to_int64(h)) {
    OracleEngine<std::int64_t> engine(scaled->numerators, scaled->denominator);
    return fn(engine);
  }
  OracleEngine<Rational> engine(h.coeffs(), Rational(1));
  return fn(engine);
}

inline std::vector<int> to_zero_based(const std::vector<int>& v) {
  std::vector<int> out(v);
  for (int& e : out) --e;
  return out;
}

inline void check_oracle_dimension(int n) {
  if (n > kMaxOracleDimension)
    throw Error(ErrorKind::CapExceeded,
                "permutation oracle is capped at n <= " + std::to_string(kMaxOracleDimension));
}

}  // namespace detail

/// The set S yielded by pi, if any.
inline std::optional<CubePoint> yields(const Hyperplane& h, const Permutation& pi) {
  if (h.dimension() != pi.dimension()) throw Error(ErrorKind::InvalidInput, "dimension mismatch");
  auto order = detail::to_zero_based(pi.image());
  int len = detail::with_engine(h, [&](const auto& e) { return e.yield_length(order.data(), h.dimension()); });
  if (len == 0) return std::nullopt;
  SubsetMask m = 0;
  for (int l = 0; l < len; ++l) m |= SubsetMask{1} << order[static_cast<std::size_t>(l)];
  return CubePoint(h.dimension(), m);
}

/// Elements of sigma from which the unfolding yields the whole set, in the stored cyclic order.
inline std::vector<int> valid_starts(const Hyperplane& h, const CyclicArrangement& sigma) {
  for (int e : sigma.elements())
    if (e > h.dimension()) throw Error(ErrorKind::InvalidInput, "arrangement element outside [n]");
  if (h.subset_sum(sigma.mask()) != 1) throw Error(ErrorKind::NotOnPlane, "arrangement's set is not covered");
  auto cyc = detail::to_zero_based(sigma.elements());
  const int len = static_cast<int>(cyc.size());
  std::vector<int> out;
  detail::with_engine(h, [&](const auto& e) {
    for (int r = 0; r < len; ++r)
      if (e.unfolding_yields(cyc.data(), len, r)) out.push_back(cyc[static_cast<std::size_t>(r)] + 1);
    return 0;
  });
  if (out.empty()) throw std::logic_error("covered set with no valid unfolding start");
  return out;
}

inline int canonical_start(const Hyperplane& h, const CyclicArrangement& sigma) {
  auto starts = valid_starts(h, sigma);
  return *std::max_element(starts.begin(), starts.end());
}

inline bool is_switchable(const Hyperplane& h, const CyclicArrangement& sigma) {
  return valid_starts(h, sigma).size() >= 2;
}

inline YieldOutcome classify(const Hyperplane& h, const Permutation& pi) {
  auto s = yields(h, pi);
  if (!s) return {YieldTag::Bad, std::nullopt};
  const auto& img = pi.image();
  CyclicArrangement sigma(std::vector<int>(img.begin(), img.begin() + s->cardinality()));
  YieldTag tag = canonical_start(h, sigma) == pi(1) ? YieldTag::Good : YieldTag::Redundant;
  return {tag, s};
}

/// Classifies all n! permutations. Work is split by pi(1) across `jobs` threads; the
/// counts do not depend on the split.
inline GbrCounts gbr_counts(const Hyperplane& h, unsigned jobs = 1) {
  const int n = h.dimension();
  detail::check_oracle_dimension(n);
  const bool use_cache = n >= kOracleCacheFrom;
  std::vector<GbrCounts> per_first(static_cast<std::size_t>(n));
  detail::with_engine(h, [&](const auto& engine) {
    auto work = [&](unsigned worker, unsigned workers) {
      for (int first = static_cast<int>(worker); first < n; first += static_cast<int>(workers))
        per_first[static_cast<std::size_t>(first)] = engine.count_with_first(first, use_cache);
    };
    jobs = std::max(1u, std::min(jobs, static_cast<unsigned>(n)));
    if (jobs == 1) {
      work(0, 1);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w, jobs);
      for (auto& t : pool) t.join();
    }
    return 0;
  });
  GbrCounts total;
  for (const auto& c : per_first) {
    total.good += c.good;
    total.bad += c.bad;
    total.redundant += c.redundant;
  }
  return total;
}

/// w(h) = |G| / n!.
inline Rational weight_via_permutations(const Hyperplane& h, unsigned jobs = 1) {
  GbrCounts c = gbr_counts(h, jobs);
  Rational w(Integer(static_cast<unsigned long>(c.good)), factorial(static_cast<unsigned long>(h.dimension())));
  w.canonicalize();
  return w;
}

}  // namespace cubecover
