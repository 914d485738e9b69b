#pragma once

// Almost k-cover instances: verification, exact LP relaxation and branch-and-bound.
//
// Variables are plane multiplicities x_h over a catalog; every nonzero vertex S gives the
// row sum_{h covers S} x_h >= k. The objective sum x_h is integral on integral points, so
// a node whose LP bound rounds up to the incumbent can be pruned.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "cubecover/bounds.hpp"
#include "cubecover/catalog.hpp"
#include "cubecover/core.hpp"
#include "cubecover/fraction.hpp"
#include "cubecover/simplex.hpp"

namespace cubecover {

// ---------------------------------------------------------------------------
// Explicit covers (plane lists with multiplicities)

struct CoverEntry {
  Hyperplane plane;
  long multiplicity = 1;
};

using CoverList = std::vector<CoverEntry>;

/// Cover file: `#` starts a comment, one plane per line as n rationals, optional `x <m>`.
/// `dimension` 0 infers n from the first plane.
inline CoverList read_cover(std::istream& in, int dimension = 0) {
  CoverList out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ts(line);
    std::vector<std::string> tokens;
    for (std::string tok; ts >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    long mult = 1;
    if (tokens.size() >= 2 && tokens[tokens.size() - 2] == "x") {
      const std::string& m = tokens.back();
      if (m.empty() || m.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(lineno, "multiplicity must be a nonnegative integer");
      try {
        mult = std::stol(m);
      } catch (const std::exception&) {
        throw ParseError(lineno, "multiplicity out of range");
      }
      tokens.resize(tokens.size() - 2);
    }
    std::vector<Rational> coeffs;
    for (const auto& t : tokens) coeffs.push_back(parse_rational(t, lineno));
    if (dimension == 0) dimension = static_cast<int>(coeffs.size());
    if (static_cast<int>(coeffs.size()) != dimension)
      throw ParseError(lineno, "expected " + std::to_string(dimension) + " coefficients, got " +
                                   std::to_string(coeffs.size()));
    out.push_back({Hyperplane(std::move(coeffs)), mult});
  }
  return out;
}

inline CoverList load_cover(const std::string& path, int dimension = 0) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
  return read_cover(in, dimension);
}

inline void write_cover(std::ostream& out, const CoverList& cover) {
  for (const auto& e : cover) {
    out << e.plane.to_string();
    if (e.multiplicity != 1) out << " x " << e.multiplicity;
    out << '\n';
  }
}

inline long total_planes(const CoverList& cover) {
  long t = 0;
  for (const auto& e : cover) t += e.multiplicity;
  return t;
}

struct CoverVerdict {
  bool pass = false;
  int dimension = 0;
  long k = 0;
  long total = 0;
  long min_coverage = 0;
  long max_coverage = 0;
  std::vector<SubsetMask> points;  ///< canonical order
  std::vector<long> coverage;      ///< per point
  /// coverage value -> number of points with that coverage
  std::map<long, long> histogram() const {
    std::map<long, long> h;
    for (long c : coverage) ++h[c];
    return h;
  }
};

/// Pass iff every nonzero vertex lies on at least k planes (counted with multiplicity).
/// The origin is never covered since every plane has right-hand side 1.
inline CoverVerdict verify_cover(int n, long k, const CoverList& cover) {
  check_dimension(n);
  CoverVerdict v;
  v.dimension = n;
  v.k = k;
  v.points = canonical_subsets(n);
  std::vector<long> by_mask(std::size_t{1} << n, 0);
  for (const auto& e : cover) {
    if (e.plane.dimension() != n) throw Error(ErrorKind::DimensionMismatch, "cover plane has the wrong dimension");
    if (e.multiplicity < 0) throw Error(ErrorKind::InvalidInput, "negative multiplicity");
    v.total += e.multiplicity;
    for (const auto& p : covered_points(e.plane)) by_mask[p.mask()] += e.multiplicity;
  }
  v.coverage.reserve(v.points.size());
  for (SubsetMask m : v.points) v.coverage.push_back(by_mask[m]);
  v.min_coverage = *std::min_element(v.coverage.begin(), v.coverage.end());
  v.max_coverage = *std::max_element(v.coverage.begin(), v.coverage.end());
  v.pass = v.min_coverage >= k;
  return v;
}

/// Both sides of  |H| - k H_n = sum_S (cov(S) - k) w(S) + sum_h (1 - w(h)) x_h.
struct CoverAccounting {
  Rational size_minus_bound;  ///< |H| - k H_n
  Rational over_coverage;     ///< sum_S (cov(S) - k) w(S)
  Rational weight_deficit;    ///< sum_h (1 - w(h)) x_h
  bool balanced() const { return size_minus_bound == over_coverage + weight_deficit; }
};

inline CoverAccounting cover_accounting(int n, long k, const CoverList& cover) {
  CoverVerdict v = verify_cover(n, k, cover);
  CoverAccounting a;
  a.size_minus_bound = Rational(v.total) - harmonic(n).value * k;
  for (std::size_t i = 0; i < v.points.size(); ++i)
    a.over_coverage += Rational(v.coverage[i] - k) * point_weight(n, popcount(v.points[i]));
  for (const auto& e : cover) a.weight_deficit += stability_gap(e.plane) * e.multiplicity;
  return a;
}

// ---------------------------------------------------------------------------
// Instances and solutions

struct CoverInstance {
  int dimension = 0;
  long k = 0;
  std::shared_ptr<const PlaneCatalog> catalog;
  std::vector<SubsetMask> points;          ///< canonical order
  std::vector<std::vector<int>> rows;      ///< catalog indices covering each point

  std::size_t num_vars() const { return catalog ? catalog->size() : 0; }
};

inline CoverInstance build_instance(int n, long k, std::shared_ptr<const PlaneCatalog> catalog) {
  if (!catalog) throw Error(ErrorKind::InvalidInput, "missing catalog");
  if (catalog->dimension != n) throw Error(ErrorKind::DimensionMismatch, "catalog dimension differs from n");
  if (k < 0) throw Error(ErrorKind::InvalidInput, "k must be nonnegative");
  CoverInstance inst;
  inst.dimension = n;
  inst.k = k;
  inst.catalog = catalog;
  inst.points = canonical_subsets(n);
  std::vector<int> row_of(std::size_t{1} << n, -1);
  for (std::size_t i = 0; i < inst.points.size(); ++i) row_of[inst.points[i]] = static_cast<int>(i);
  inst.rows.resize(inst.points.size());
  for (std::size_t h = 0; h < catalog->size(); ++h) {
    const auto cov = catalog->has_coverage() ? catalog->coverage[h] : coverage_masks(catalog->planes[h]);
    for (SubsetMask m : cov) inst.rows[static_cast<std::size_t>(row_of[m])].push_back(static_cast<int>(h));
  }
  return inst;
}

inline CoverInstance build_instance(int n, long k, const PlaneCatalog& catalog) {
  return build_instance(n, k, std::make_shared<const PlaneCatalog>(catalog));
}

struct CoverSolution {
  std::vector<long> multiplicity;  ///< per catalog plane
  long total = 0;

  CoverList to_cover(const PlaneCatalog& cat) const {
    CoverList out;
    for (std::size_t h = 0; h < multiplicity.size(); ++h)
      if (multiplicity[h] > 0) out.push_back({cat.planes[h], multiplicity[h]});
    return out;
  }
};

inline CoverVerdict verify_cover(const CoverInstance& inst, const CoverSolution& sol) {
  return verify_cover(inst.dimension, inst.k, sol.to_cover(*inst.catalog));
}

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational objective;
  std::vector<Rational> x;
  std::uint64_t pivots = 0;
};

/// Field used inside the LP; results are handed out as Rational.
using LpField = Fraction;

inline std::vector<Rational> to_rationals(const std::vector<LpField>& v) {
  std::vector<Rational> out;
  out.reserve(v.size());
  for (const auto& f : v) out.push_back(f.to_mpq());
  return out;
}

inline LinearProgram<LpField> cover_program(const CoverInstance& inst) {
  LinearProgram<LpField> lp;
  lp.num_vars = static_cast<int>(inst.num_vars());
  lp.objective.assign(inst.num_vars(), LpField(1));
  for (const auto& row : inst.rows) {
    LinearRow<LpField> r;
    for (int h : row) r.terms.emplace_back(h, LpField(1));
    r.sense = RowSense::GreaterEqual;
    r.rhs = LpField(inst.k);
    lp.rows.push_back(std::move(r));
  }
  return lp;
}

inline bool has_empty_row(const CoverInstance& inst) {
  if (inst.k <= 0) return false;
  return std::any_of(inst.rows.begin(), inst.rows.end(), [](const auto& r) { return r.empty(); });
}

/// min sum x_h  s.t.  coverage >= k, x >= 0, solved exactly.
inline LpSolution lp_relax(const CoverInstance& inst) {
  LpSolution out;
  if (has_empty_row(inst)) return out;
  Tableau<LpField> t(cover_program(inst));
  out.status = t.solve();
  out.pivots = t.pivots();
  if (out.status == LpStatus::Optimal) {
    out.objective = t.value().to_mpq();
    out.x = to_rationals(t.primal());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Branch and bound

struct SearchBudget {
  std::uint64_t max_nodes = 1'000'000;
  double max_seconds = 600.0;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t lp_pivots = 0;
  double wall_ms = 0.0;
};

enum class IlpStatus { Optimal, Feasible, Infeasible, BudgetExceeded };

inline const char* to_string(IlpStatus s) {
  switch (s) {
    case IlpStatus::Optimal: return "Optimal";
    case IlpStatus::Feasible: return "Feasible";
    case IlpStatus::Infeasible: return "Infeasible";
    case IlpStatus::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

struct IlpResult {
  IlpStatus status = IlpStatus::Infeasible;
  std::optional<CoverSolution> solution;  ///< optimum, witness, or best incumbent
  Integer lower_bound;                    ///< proven lower bound on the optimum (when not infeasible)
  SearchStats stats;
};

namespace detail {

struct BranchRow {
  int var;
  bool lower;  ///< true: x_var >= value, false: x_var <= value
  long value;
};

struct Node {
  std::vector<BranchRow> branches;
  Rational bound;
  std::size_t depth = 0;
  std::uint64_t id = 0;
  std::shared_ptr<Tableau<LpField>> tableau;  ///< may be dropped to save memory
};

struct NodeOrder {
  // priority_queue pops the largest: invert for best-first (low bound, deep, old).
  bool operator()(const std::shared_ptr<Node>& a, const std::shared_ptr<Node>& b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    if (a->depth != b->depth) return a->depth < b->depth;
    return a->id > b->id;
  }
};

inline LinearRow<LpField> to_row(const BranchRow& b) {
  LinearRow<LpField> r;
  r.terms.emplace_back(b.var, LpField(1));
  r.sense = b.lower ? RowSense::GreaterEqual : RowSense::LessEqual;
  r.rhs = LpField(b.value);
  return r;
}

/// Tableau cells kept alive by open nodes; beyond this, nodes are rebuilt from the root.
inline constexpr std::size_t kCachedCells = 12'000'000;

class BranchAndBound {
 public:
  BranchAndBound(const CoverInstance& inst, std::optional<long> exact_size, const SearchBudget& budget)
      : inst_(inst), exact_size_(exact_size), budget_(budget) {}

  IlpResult run() {
    const auto start = std::chrono::steady_clock::now();
    IlpResult result;
    auto finish = [&](IlpStatus s) {
      result.status = s;
      result.stats = stats_;
      result.stats.wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      return result;
    };
    if (has_empty_row(inst_)) return finish(IlpStatus::Infeasible);

    LinearProgram<LpField> lp = cover_program(inst_);
    if (exact_size_) {
      LinearRow<LpField> size;
      for (std::size_t h = 0; h < inst_.num_vars(); ++h) size.terms.emplace_back(static_cast<int>(h), LpField(1));
      size.sense = RowSense::Equal;
      size.rhs = LpField(*exact_size_);
      lp.rows.push_back(std::move(size));
    }
    root_ = std::make_shared<Tableau<LpField>>(lp);
    root_->solve();
    stats_.lp_pivots += root_->pivots();
    ++stats_.nodes;
    if (root_->status() != LpStatus::Optimal) return finish(IlpStatus::Infeasible);

    std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>, NodeOrder> open;
    auto root_node = std::make_shared<Node>();
    root_node->bound = root_->value().to_mpq();
    root_node->tableau = root_;
    root_node->id = next_id_++;
    open.push(root_node);
    cached_ = root_->cells();

    while (!open.empty()) {
      auto node = open.top();
      if (incumbent_ && Rational(ceil(node->bound)) >= incumbent_->total) {
        // Best-first: every remaining node is at least as bad.
        open = {};
        break;
      }
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (stats_.nodes >= budget_.max_nodes || elapsed >= budget_.max_seconds) {
        result.lower_bound = ceil(node->bound);
        result.solution = incumbent_;
        return finish(IlpStatus::BudgetExceeded);
      }
      open.pop();
      auto tab = materialize(*node);
      if (node->tableau) cached_ -= node->tableau->cells();
      node->tableau.reset();
      std::vector<Rational> x = to_rationals(tab->primal());

      int branch_var = -1;
      Rational best_frac = -1;
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (is_integer(x[j])) continue;
        Rational f = x[j] - Rational(floor(x[j]));
        Rational closeness = f < Rational(1, 2) ? f : Rational(1) - f;
        if (closeness > best_frac) {
          best_frac = closeness;
          branch_var = static_cast<int>(j);
        }
      }
      if (branch_var < 0) {
        consider_incumbent(x);
        if (exact_size_) {
          result.solution = incumbent_;
          result.lower_bound = incumbent_->total;
          return finish(IlpStatus::Feasible);
        }
        continue;
      }
      if (!exact_size_) round_up_incumbent(x);

      const Rational& v = x[static_cast<std::size_t>(branch_var)];
      for (bool up : {true, false}) {
        auto child = std::make_shared<Node>();
        child->branches = node->branches;
        child->branches.push_back({branch_var, up, up ? ceil(v).get_si() : floor(v).get_si()});
        child->depth = node->depth + 1;
        child->id = next_id_++;
        auto ctab = std::make_shared<Tableau<LpField>>(*tab);
        const std::uint64_t before = ctab->pivots();
        ctab->add_row_and_reoptimize(to_row(child->branches.back()));
        stats_.lp_pivots += ctab->pivots() - before;
        ++stats_.nodes;
        if (ctab->status() != LpStatus::Optimal) continue;
        child->bound = ctab->value().to_mpq();
        if (incumbent_ && Rational(ceil(child->bound)) >= incumbent_->total) continue;
        if (cached_ + ctab->cells() <= kCachedCells) {
          cached_ += ctab->cells();
          child->tableau = std::move(ctab);
        }
        open.push(std::move(child));
      }
    }
    if (!incumbent_) return finish(IlpStatus::Infeasible);
    result.solution = incumbent_;
    result.lower_bound = incumbent_->total;
    return finish(exact_size_ ? IlpStatus::Feasible : IlpStatus::Optimal);
  }

 private:
  std::shared_ptr<Tableau<LpField>> materialize(const Node& node) {
    if (node.tableau) return node.tableau;
    auto tab = std::make_shared<Tableau<LpField>>(*root_);
    const std::uint64_t before = tab->pivots();
    for (const auto& b : node.branches) tab->add_row_and_reoptimize(to_row(b));
    stats_.lp_pivots += tab->pivots() - before;
    return tab;
  }

  void consider_incumbent(const std::vector<Rational>& x) {
    CoverSolution s;
    for (const auto& v : x) {
      s.multiplicity.push_back(v.get_num().get_si());
      s.total += s.multiplicity.back();
    }
    if (!incumbent_ || s.total < incumbent_->total) incumbent_ = std::move(s);
  }

  /// Rounding every multiplicity up keeps every coverage row satisfied.
  void round_up_incumbent(const std::vector<Rational>& x) {
    CoverSolution s;
    for (const auto& v : x) {
      s.multiplicity.push_back(ceil(v).get_si());
      s.total += s.multiplicity.back();
    }
    if (!incumbent_ || s.total < incumbent_->total) incumbent_ = std::move(s);
  }

  const CoverInstance& inst_;
  std::optional<long> exact_size_;
  SearchBudget budget_;
  SearchStats stats_;
  std::shared_ptr<Tableau<LpField>> root_;
  std::optional<CoverSolution> incumbent_;
  std::uint64_t next_id_ = 0;
  std::size_t cached_ = 0;
};

}  // namespace detail

/// Optimal integer cover over the instance's catalog. Branches on the most fractional
/// variable (lowest index on ties), ceiling child first; nodes are expanded best-first by LP
/// bound, then depth (deeper first), then creation order.
inline IlpResult ilp_solve(const CoverInstance& inst, const SearchBudget& budget = {}) {
  return detail::BranchAndBound(inst, std::nullopt, budget).run();
}

/// Decides whether a cover with exactly m planes (counted with multiplicity) exists.
inline IlpResult feasibility_at_size(const CoverInstance& inst, long m, const SearchBudget& budget = {}) {
  if (m < 0) throw Error(ErrorKind::InvalidInput, "size must be nonnegative");
  return detail::BranchAndBound(inst, m, budget).run();
}

// ---------------------------------------------------------------------------
// f(n, k)

struct Certificate {
  Integer lp_bound;            ///< ceil(k H_n)
  Integer lower_bound;         ///< best proven lower bound on f(n, k)
  bool weight1_forced = false; ///< a cover of size ceil(k H_n) would use weight-1 planes only
  bool exact = false;          ///< value == f(n, k)
  std::string reason;
};

struct FResult {
  IlpResult search;
  std::optional<long> value;  ///< best cover size found (an upper bound on f)
  Certificate certificate;
};

/// Minimum cover size over the chosen plane space. Maximal planes suffice for f(n, k), so
/// an Optimal result there is exact. Over weight-1 planes the optimum is only an upper bound
/// on f(n, k), exact when it meets ceil(k H_n) (or exceeds it by one while a size-ceil(k H_n)
/// cover is forced to be all weight-1).
inline FResult compute_f(int n, long k, const PlaneCatalog& catalog, const SearchBudget& budget = {}) {
  FResult out;
  CoverInstance inst = build_instance(n, k, catalog);
  out.search = ilp_solve(inst, budget);
  BoundReport bounds = improved_lower_bound(n, Integer(k));
  Certificate& c = out.certificate;
  c.lp_bound = bounds.lp_bound;
  c.lower_bound = bounds.final_lower;
  c.weight1_forced = bounds.weight1_forced;
  if (out.search.solution) out.value = out.search.solution->total;
  if (out.search.status == IlpStatus::Optimal) {
    const long v = *out.value;
    if (catalog.kind == CatalogKind::Maximal) {
      c.exact = true;
      c.lower_bound = v;
      c.reason = "optimal over maximal planes";
    } else if (Integer(v) == bounds.final_lower) {
      c.exact = true;
      c.lower_bound = v;
      c.reason = bounds.improved ? "matches improved lower bound" : "matches LP lower bound";
    } else if (bounds.weight1_forced && Integer(v) == bounds.lp_bound + 1) {
      c.exact = true;
      c.lower_bound = v;
      c.reason = "no weight-1 cover of size ceil(kH_n), and such a cover would have to be weight-1";
    } else {
      c.reason = "weight-1 optimum is an upper bound only";
    }
  } else if (out.search.status == IlpStatus::BudgetExceeded) {
    if (out.search.lower_bound > c.lower_bound && catalog.kind == CatalogKind::Maximal)
      c.lower_bound = out.search.lower_bound;
    c.reason = "budget exceeded";
  } else {
    c.reason = "no cover in this plane space";
  }
  return out;
}

}  // namespace cubecover
