#pragma once

// Plane catalogs used as ILP search spaces.
//
// Weight-1 planes are in bijection with +-1 sequences of length 2n-1 holding exactly n
// entries +1: cutting the sequence after each +1 and summing each block gives the
// coefficient vector (trailing -1s are dropped). The inverse writes each coefficient c as
// (1 - c) copies of -1 followed by +1 and pads with -1.
//
// Maximal planes are found by solving c . p = 1 for every n-subset of nonzero vertices
// whose 0/1 matrix is nonsingular.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "cubecover/core.hpp"

namespace cubecover {

inline constexpr int kMaxWeight1Dimension = 12;
inline constexpr int kMaxMaximalDimension = 5;
inline constexpr int kMaxMaximalDimensionOverride = 6;
/// Weight-1 catalogs above this dimension are built without per-plane coverage lists.
inline constexpr int kEagerCoverageDimension = 8;

class BallotSequence {
 public:
  explicit BallotSequence(std::vector<int> entries) : b_(std::move(entries)) {
    if (b_.empty() || b_.size() % 2 == 0)
      throw Error(ErrorKind::InvalidSequence, "length must be 2n-1 for some n >= 1");
    int positives = 0;
    for (int v : b_) {
      if (v != 1 && v != -1) throw Error(ErrorKind::InvalidSequence, "entries must be +1 or -1");
      positives += v == 1;
    }
    if (positives != dimension())
      throw Error(ErrorKind::InvalidSequence, "expected exactly " + std::to_string(dimension()) + " entries +1");
  }

  int dimension() const noexcept { return static_cast<int>(b_.size() + 1) / 2; }
  const std::vector<int>& entries() const noexcept { return b_; }

  friend bool operator==(const BallotSequence&, const BallotSequence&) = default;

 private:
  std::vector<int> b_;
};

inline std::vector<long> phi_coefficients(const std::vector<int>& b) {
  std::vector<long> c;
  long block = 0;
  for (int v : b) {
    block += v;
    if (v == 1) {
      c.push_back(block);
      block = 0;
    }
  }
  return c;
}

inline Hyperplane phi(const BallotSequence& b) { return Hyperplane::from_ints(phi_coefficients(b.entries())); }

inline BallotSequence phi_inverse(const Hyperplane& h) {
  if (!classify_weight1(h).is_weight1)
    throw Error(ErrorKind::NotWeight1Integer, "coefficients " + h.to_string(",") + " are not a weight-1 plane");
  const int n = h.dimension();
  std::vector<int> b;
  b.reserve(static_cast<std::size_t>(2 * n - 1));
  for (const auto& c : h.coeffs()) {
    long negatives = 1 - c.get_num().get_si();
    if (b.size() + static_cast<std::size_t>(negatives) + 1 > static_cast<std::size_t>(2 * n - 1))
      throw Error(ErrorKind::NotWeight1Integer, "coefficients do not fit a sequence of length 2n-1");
    b.insert(b.end(), static_cast<std::size_t>(negatives), -1);
    b.push_back(1);
  }
  b.resize(static_cast<std::size_t>(2 * n - 1), -1);
  return BallotSequence(std::move(b));
}

/// Streams the integer coefficient vector of every weight-1 plane, in ballot-sequence
/// (positions of +1 in lexicographic order) order.
inline void for_each_weight1(int n, const std::function<void(const std::vector<long>&)>& fn) {
  if (n < 1 || n > kMaxWeight1Dimension)
    throw Error(ErrorKind::CapExceeded, "weight-1 enumeration is capped at 1 <= n <= " +
                                            std::to_string(kMaxWeight1Dimension));
  const int len = 2 * n - 1;
  std::vector<int> pos(static_cast<std::size_t>(n));
  std::iota(pos.begin(), pos.end(), 0);
  std::vector<int> b(static_cast<std::size_t>(len));
  while (true) {
    std::fill(b.begin(), b.end(), -1);
    for (int p : pos) b[static_cast<std::size_t>(p)] = 1;
    fn(phi_coefficients(b));
    int i = n - 1;
    while (i >= 0 && pos[static_cast<std::size_t>(i)] == len - n + i) --i;
    if (i < 0) break;
    ++pos[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) pos[static_cast<std::size_t>(j)] = pos[static_cast<std::size_t>(j - 1)] + 1;
  }
}

enum class CatalogKind { Weight1, Maximal };

inline const char* to_string(CatalogKind k) { return k == CatalogKind::Weight1 ? "weight1" : "maximal"; }

inline CatalogKind parse_catalog_kind(std::string_view s) {
  if (s == "weight1") return CatalogKind::Weight1;
  if (s == "maximal") return CatalogKind::Maximal;
  throw Error(ErrorKind::InvalidInput, "unknown catalog kind '" + std::string(s) + "'");
}

/// Points covered by h as a 64-bit set indexed by subset mask (bit m <=> vertex m). n <= 6.
inline std::uint64_t coverage_bits(const std::vector<SubsetMask>& covered) {
  std::uint64_t bits = 0;
  for (SubsetMask m : covered) bits |= std::uint64_t{1} << m;
  return bits;
}

inline std::vector<SubsetMask> coverage_masks(const Hyperplane& h) {
  std::vector<SubsetMask> out;
  for (const auto& p : covered_points(h)) out.push_back(p.mask());
  return out;
}

struct PlaneCatalog {
  int dimension = 0;
  CatalogKind kind = CatalogKind::Weight1;
  std::vector<Hyperplane> planes;
  /// Canonically ordered covered vertices per plane; empty when built without coverage.
  std::vector<std::vector<SubsetMask>> coverage;

  std::size_t size() const noexcept { return planes.size(); }
  bool has_coverage() const noexcept { return coverage.size() == planes.size(); }

  void compute_coverage() {
    coverage.clear();
    coverage.reserve(planes.size());
    for (const auto& h : planes) coverage.push_back(coverage_masks(h));
  }

  friend bool operator==(const PlaneCatalog& a, const PlaneCatalog& b) {
    return a.dimension == b.dimension && a.kind == b.kind && a.planes == b.planes;
  }
};

/// True when `a` is a strict subset of `b`; both canonically sorted.
inline bool strict_subset(const std::vector<SubsetMask>& a, const std::vector<SubsetMask>& b) {
  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end(), canonical_less);
}

/// Throws CorruptCatalog if any catalog invariant fails.
inline void validate_catalog(const PlaneCatalog& cat) {
  auto corrupt = [](const std::string& why) { throw Error(ErrorKind::CorruptCatalog, why); };
  for (const auto& h : cat.planes)
    if (h.dimension() != cat.dimension) corrupt("plane " + h.to_string() + " has the wrong dimension");
  std::vector<Hyperplane> sorted = cat.planes;
  std::sort(sorted.begin(), sorted.end());
  if (auto it = std::adjacent_find(sorted.begin(), sorted.end()); it != sorted.end())
    corrupt("duplicate plane " + it->to_string());
  if (cat.kind == CatalogKind::Weight1) {
    for (const auto& h : cat.planes)
      if (!classify_weight1(h).is_weight1) corrupt("plane " + h.to_string() + " is not weight-1");
    return;
  }
  std::vector<std::vector<SubsetMask>> cov;
  if (cat.has_coverage()) {
    cov = cat.coverage;
  } else {
    for (const auto& h : cat.planes) cov.push_back(coverage_masks(h));
  }
  for (std::size_t i = 0; i < cov.size(); ++i)
    for (std::size_t j = 0; j < cov.size(); ++j)
      if (i != j && strict_subset(cov[i], cov[j]))
        corrupt("plane " + cat.planes[i].to_string() + " is dominated by " + cat.planes[j].to_string());
}

inline PlaneCatalog enumerate_weight1(int n) {
  PlaneCatalog cat;
  cat.dimension = n;
  cat.kind = CatalogKind::Weight1;
  for_each_weight1(n, [&](const std::vector<long>& c) { cat.planes.push_back(Hyperplane::from_ints(c)); });
  std::sort(cat.planes.begin(), cat.planes.end());
  if (n <= kEagerCoverageDimension) cat.compute_coverage();
  return cat;
}

struct MaximalOptions {
  bool allow_override = false;  ///< permits n = 6
  unsigned jobs = 1;
  /// Called with (finished, total) top-level branches.
  std::function<void(std::size_t, std::size_t)> progress;
};

namespace detail {

/// Plane key: {D, a_1, ..., a_n} with c_i = a_i / D, D > 0, gcd = 1.
using PlaneKey = std::vector<std::int64_t>;

struct PlaneKeyHash {
  std::size_t operator()(const PlaneKey& k) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : k) h = (h ^ static_cast<std::uint64_t>(v)) * 1099511628211ull;
    return static_cast<std::size_t>(h);
  }
};

/// Depth-first search over increasing n-subsets of nonzero vertices, keeping the chosen
/// rows in fraction-free echelon form so that dependent prefixes are cut immediately.
class MaximalSearch {
 public:
  explicit MaximalSearch(int n) : n_(n), rows_(static_cast<std::size_t>(n)), pivots_(static_cast<std::size_t>(n)) {}

  void run_branch(SubsetMask first, std::unordered_set<PlaneKey, PlaneKeyHash>& out) {
    out_ = &out;
    push_and_recurse(0, first);
  }

 private:
  // Row layout: n coefficient columns followed by the right-hand side (always 1 before reduction).
  using Row = std::vector<std::int64_t>;

  static void normalize(Row& r) {
    std::int64_t g = 0;
    for (auto v : r) g = std::gcd(g, v < 0 ? -v : v);
    if (g > 1)
      for (auto& v : r) v /= g;
  }

  bool reduce(Row& r, int depth) const {
    for (int d = 0; d < depth; ++d) {
      const Row& p = rows_[static_cast<std::size_t>(d)];
      int col = pivots_[static_cast<std::size_t>(d)];
      std::int64_t f = r[static_cast<std::size_t>(col)];
      if (f == 0) continue;
      std::int64_t pv = p[static_cast<std::size_t>(col)];
      for (std::size_t j = 0; j < r.size(); ++j) r[j] = r[j] * pv - f * p[j];
      normalize(r);
    }
    return std::any_of(r.begin(), r.begin() + n_, [](std::int64_t v) { return v != 0; });
  }

  void push_and_recurse(int depth, SubsetMask point) {
    Row r(static_cast<std::size_t>(n_) + 1, 0);
    for (int i = 0; i < n_; ++i) r[static_cast<std::size_t>(i)] = (point >> i) & 1u;
    r[static_cast<std::size_t>(n_)] = 1;
    if (!reduce(r, depth)) return;
    int col = 0;
    while (r[static_cast<std::size_t>(col)] == 0) ++col;
    rows_[static_cast<std::size_t>(depth)] = std::move(r);
    pivots_[static_cast<std::size_t>(depth)] = col;
    if (depth + 1 == n_) {
      emit();
      return;
    }
    const SubsetMask end = SubsetMask{1} << n_;
    for (SubsetMask next = point + 1; next < end; ++next) push_and_recurse(depth + 1, next);
  }

  void emit() {
    // Back substitution on the echelon rows in exact int64 fractions.
    std::vector<std::int64_t> num(static_cast<std::size_t>(n_), 0);
    std::int64_t den = 1;  // common denominator of the solved coordinates so far
    for (int d = n_ - 1; d >= 0; --d) {
      const Row& r = rows_[static_cast<std::size_t>(d)];
      int col = pivots_[static_cast<std::size_t>(d)];
      // r[col] * c_col = rhs - sum_{j != col} r[j] c_j, with c_j = num[j] / den.
      __int128 rhs = static_cast<__int128>(r[static_cast<std::size_t>(n_)]) * den;
      for (int j = 0; j < n_; ++j)
        if (j != col) rhs -= static_cast<__int128>(r[static_cast<std::size_t>(j)]) * num[static_cast<std::size_t>(j)];
      // c_col = rhs / (den * r[col]); rescale everything to the new denominator.
      __int128 pv = r[static_cast<std::size_t>(col)];
      __int128 new_den = static_cast<__int128>(den) * pv;
      for (auto& v : num) v = static_cast<std::int64_t>(static_cast<__int128>(v) * pv);
      num[static_cast<std::size_t>(col)] = static_cast<std::int64_t>(rhs);
      if (new_den < 0) {
        new_den = -new_den;
        for (auto& v : num) v = -v;
      }
      den = static_cast<std::int64_t>(new_den);
      std::int64_t g = den;
      for (auto v : num) g = std::gcd(g, v < 0 ? -v : v);
      if (g > 1) {
        den /= g;
        for (auto& v : num) v /= g;
      }
    }
    PlaneKey key;
    key.reserve(static_cast<std::size_t>(n_) + 1);
    key.push_back(den);
    key.insert(key.end(), num.begin(), num.end());
    out_->insert(std::move(key));
  }

  int n_;
  std::vector<Row> rows_;
  std::vector<int> pivots_;
  std::unordered_set<PlaneKey, PlaneKeyHash>* out_ = nullptr;
};

inline Hyperplane key_to_plane(const PlaneKey& key) {
  std::vector<Rational> c;
  for (std::size_t i = 1; i < key.size(); ++i) {
    Rational q(static_cast<long>(key[i]), static_cast<unsigned long>(key[0]));
    q.canonicalize();
    c.push_back(q);
  }
  return Hyperplane(std::move(c));
}

inline std::vector<SubsetMask> key_coverage(const PlaneKey& key, int n) {
  std::vector<SubsetMask> out;
  for (SubsetMask m = 1; m < (SubsetMask{1} << n); ++m) {
    std::int64_t s = 0;
    for (int i = 0; i < n; ++i)
      if (m >> i & 1u) s += key[static_cast<std::size_t>(i) + 1];
    if (s == key[0]) out.push_back(m);
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

}  // namespace detail

/// Every origin-avoiding plane whose vertex set is not strictly contained in another's.
inline PlaneCatalog enumerate_maximal(int n, const MaximalOptions& opts = {}) {
  const int cap = opts.allow_override ? kMaxMaximalDimensionOverride : kMaxMaximalDimension;
  if (n < 1 || n > cap)
    throw Error(ErrorKind::CapExceeded, "maximal enumeration is capped at 1 <= n <= " + std::to_string(cap) +
                                            (opts.allow_override ? "" : " (n = 6 needs the override)"));
  const SubsetMask end = SubsetMask{1} << n;
  const std::size_t branches = end - 1;
  std::vector<std::unordered_set<detail::PlaneKey, detail::PlaneKeyHash>> found(std::max(1u, opts.jobs));
  std::atomic<std::size_t> done{0};
  auto work = [&](unsigned worker, unsigned workers) {
    detail::MaximalSearch search(n);
    for (SubsetMask first = 1 + worker; first < end; first += workers) {
      search.run_branch(first, found[worker]);
      std::size_t d = ++done;
      if (opts.progress && workers == 1) opts.progress(d, branches);
    }
  };
  const unsigned jobs = static_cast<unsigned>(found.size());
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w, jobs);
    for (auto& t : pool) t.join();
    if (opts.progress) opts.progress(branches, branches);
  }
  for (std::size_t w = 1; w < found.size(); ++w) {
    found[0].merge(found[w]);
    found[w].clear();
  }

  struct Candidate {
    Hyperplane plane;
    std::vector<SubsetMask> covered;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(found[0].size());
  for (const auto& key : found[0]) candidates.push_back({detail::key_to_plane(key), detail::key_coverage(key, n)});
  found[0].clear();

  // Two distinct planes sharing a spanning vertex set would mean a broken solve.
  {
    std::vector<const std::vector<SubsetMask>*> sets;
    for (const auto& c : candidates) sets.push_back(&c.covered);
    std::sort(sets.begin(), sets.end(), [](auto* a, auto* b) { return *a < *b; });
    for (std::size_t i = 1; i < sets.size(); ++i)
      if (*sets[i] == *sets[i - 1] && static_cast<int>(sets[i]->size()) >= n)
        throw std::logic_error("distinct planes share a covered set of size >= n");
  }

  // Drop dominated planes: scan by decreasing size against the planes already kept.
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].covered.size() > candidates[b].covered.size();
  });
  std::vector<std::size_t> kept;
  if (n <= 6) {
    std::vector<std::uint64_t> kept_bits;
    for (std::size_t idx : order) {
      std::uint64_t bits = coverage_bits(candidates[idx].covered);
      bool dominated = std::any_of(kept_bits.begin(), kept_bits.end(),
                                   [&](std::uint64_t k) { return (bits & k) == bits && bits != k; });
      if (!dominated) {
        kept.push_back(idx);
        kept_bits.push_back(bits);
      }
    }
  }

  PlaneCatalog cat;
  cat.dimension = n;
  cat.kind = CatalogKind::Maximal;
  std::sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].plane < candidates[b].plane;
  });
  for (std::size_t idx : kept) {
    cat.planes.push_back(std::move(candidates[idx].plane));
    cat.coverage.push_back(std::move(candidates[idx].covered));
  }
  return cat;
}

// ---------------------------------------------------------------------------
// Catalog files

inline std::string catalog_header(int n, CatalogKind kind) {
  return "# cube-cover catalog v1 n=" + std::to_string(n) + " kind=" + to_string(kind);
}

inline void write_catalog(std::ostream& out, const PlaneCatalog& cat) {
  out << catalog_header(cat.dimension, cat.kind) << '\n';
  for (const auto& h : cat.planes) out << h.to_string() << '\n';
}

inline void save_catalog(const PlaneCatalog& cat, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  write_catalog(out, cat);
  if (!out) throw Error(ErrorKind::InvalidInput, "write failed for " + path);
}

inline PlaneCatalog read_catalog(const std::string& text) {
  if (text.empty() || text.back() != '\n') {
    std::size_t lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) + 1;
    throw ParseError(lines, "missing trailing newline");
  }
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  PlaneCatalog cat;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      const std::string prefix = "# cube-cover catalog v1 n=";
      if (line.rfind(prefix, 0) != 0) throw ParseError(lineno, "expected catalog header");
      std::istringstream hs(line.substr(prefix.size()));
      std::string kind_tok;
      if (!(hs >> cat.dimension >> kind_tok) || kind_tok.rfind("kind=", 0) != 0)
        throw ParseError(lineno, "malformed catalog header");
      if (cat.dimension < 1 || cat.dimension > kMaxSubsetDimension)
        throw ParseError(lineno, "dimension out of range");
      try {
        cat.kind = parse_catalog_kind(kind_tok.substr(5));
      } catch (const Error&) {
        throw ParseError(lineno, "unknown catalog kind");
      }
      have_header = true;
      continue;
    }
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto coeffs = parse_rational_list(line, lineno);
    if (static_cast<int>(coeffs.size()) != cat.dimension)
      throw ParseError(lineno, "expected " + std::to_string(cat.dimension) + " coefficients, got " +
                                   std::to_string(coeffs.size()));
    cat.planes.emplace_back(std::move(coeffs));
  }
  if (!have_header) throw ParseError(1, "empty catalog file");
  validate_catalog(cat);
  if (cat.kind == CatalogKind::Maximal || cat.dimension <= kEagerCoverageDimension) cat.compute_coverage();
  return cat;
}

inline PlaneCatalog load_catalog(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_catalog(buf.str());
}

}  // namespace cubecover
