#pragma once

// Dense-tableau primal simplex over an exact ordered field, two phases.
// Also supports appending a constraint to an optimal tableau and restoring feasibility
// with the dual simplex, which the branch-and-bound uses for warm starts.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cubecover {

enum class RowSense { GreaterEqual, LessEqual, Equal };

template <class Field>
struct LinearRow {
  std::vector<std::pair<int, Field>> terms;  ///< (variable, coefficient)
  RowSense sense = RowSense::GreaterEqual;
  Field rhs = Field(0);
};

/// minimize objective . x  subject to rows, x >= 0.
template <class Field>
struct LinearProgram {
  int num_vars = 0;
  std::vector<Field> objective;
  std::vector<LinearRow<Field>> rows;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

/// Guard against runaway pivoting; Bland's rule terminates far below this on our sizes.
inline constexpr std::uint64_t kPivotSanityCap = 5'000'000;

enum class PricingRule {
  Bland,               ///< smallest eligible index, always
  DantzigWithBland,    ///< steepest reduced cost / most infeasible row; Bland during degenerate runs
};

/// Consecutive degenerate pivots after which DantzigWithBland falls back to Bland's rule.
inline constexpr int kDegenerateRunLimit = 50;

template <class Field>
class Tableau {
 public:
  explicit Tableau(const LinearProgram<Field>& lp, PricingRule rule = PricingRule::DantzigWithBland)
      : num_vars_(lp.num_vars), cost_(lp.objective), rule_(rule) {
    cost_.resize(static_cast<std::size_t>(num_vars_), Field(0));
    for (const auto& r : lp.rows) append_structural(r);
  }

  LpStatus solve() {
    status_ = two_phase();
    return status_;
  }

  /// Adds `row` to an optimal tableau and re-optimises with the dual simplex.
  LpStatus add_row_and_reoptimize(const LinearRow<Field>& row) {
    if (status_ != LpStatus::Optimal) throw std::logic_error("warm start needs an optimal tableau");
    // Express the new row as  a.x + s = rhs  with a slack s >= 0 (negate >= rows).
    Field sign = row.sense == RowSense::GreaterEqual ? Field(-1) : Field(1);
    if (row.sense == RowSense::Equal) {
      // Equality as two inequalities.
      LinearRow<Field> le = row, ge = row;
      le.sense = RowSense::LessEqual;
      ge.sense = RowSense::GreaterEqual;
      if (add_row_and_reoptimize(le) != LpStatus::Optimal) return status_;
      return add_row_and_reoptimize(ge);
    }
    const int slack = add_column();
    std::vector<Field> t(static_cast<std::size_t>(width()), Field(0));
    for (const auto& [j, a] : row.terms) t[static_cast<std::size_t>(j)] += sign * a;
    t[static_cast<std::size_t>(slack)] = Field(1);
    Field b = sign * row.rhs;
    // Eliminate basic columns from the new row.
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Field f = t[static_cast<std::size_t>(basis_[i])];
      if (f == 0) continue;
      for (int j : nonzeros(rows_[i])) t[static_cast<std::size_t>(j)] -= f * rows_[i][static_cast<std::size_t>(j)];
      b -= f * rhs_[i];
    }
    rows_.push_back(std::move(t));
    rhs_.push_back(std::move(b));
    basis_.push_back(slack);
    status_ = dual_simplex();
    return status_;
  }

  LpStatus status() const noexcept { return status_; }
  std::uint64_t pivots() const noexcept { return pivots_; }
  std::size_t cells() const noexcept { return rows_.size() * col_kind_.size(); }

  /// Values of the structural variables.
  std::vector<Field> primal() const {
    std::vector<Field> x(static_cast<std::size_t>(num_vars_), Field(0));
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (basis_[i] < num_vars_) x[static_cast<std::size_t>(basis_[i])] = rhs_[i];
    return x;
  }

 private:
  int width() const { return static_cast<int>(col_kind_.size()); }

  bool use_bland() const { return rule_ == PricingRule::Bland || degenerate_run_ >= kDegenerateRunLimit; }

  enum class ColumnKind : std::uint8_t { Structural, Slack, Artificial };

  int add_column(ColumnKind kind = ColumnKind::Slack) {
    for (auto& r : rows_) r.emplace_back(0);
    col_kind_.push_back(kind);
    reduced_.emplace_back(0);
    return width() - 1;
  }

  void append_structural(const LinearRow<Field>& r) {
    if (col_kind_.empty()) {
      col_kind_.assign(static_cast<std::size_t>(num_vars_), ColumnKind::Structural);
      reduced_.assign(static_cast<std::size_t>(num_vars_), Field(0));
    }
    pending_.push_back(r);
  }

  std::vector<int> nonzeros(const std::vector<Field>& row) const {
    std::vector<int> nz;
    for (int j = 0; j < static_cast<int>(row.size()); ++j)
      if (row[static_cast<std::size_t>(j)] != 0) nz.push_back(j);
    return nz;
  }

  void pivot(std::size_t r, int col) {
    if (++pivots_ > kPivotSanityCap) throw std::logic_error("simplex pivot sanity cap exceeded");
    auto& prow = rows_[r];
    const Field inv = Field(1) / prow[static_cast<std::size_t>(col)];
    std::vector<int> nz = nonzeros(prow);
    for (int j : nz) prow[static_cast<std::size_t>(j)] *= inv;
    rhs_[r] *= inv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == r) continue;
      const Field f = rows_[i][static_cast<std::size_t>(col)];
      if (f == 0) continue;
      for (int j : nz) rows_[i][static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
      rhs_[i] -= f * rhs_[r];
    }
    const Field f = reduced_[static_cast<std::size_t>(col)];
    if (f != 0) {
      for (int j : nz) reduced_[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
      objective_ -= f * rhs_[r];
    }
    basis_[r] = col;
  }

  /// Primal simplex on the current reduced costs (rule_ picks the entering column).
  LpStatus primal_loop(bool allow_artificial) {
    while (true) {
      int enter = -1;
      const bool bland = use_bland();
      for (int j = 0; j < width(); ++j) {
        if (!allow_artificial && col_kind_[static_cast<std::size_t>(j)] == ColumnKind::Artificial) continue;
        const Field& d = reduced_[static_cast<std::size_t>(j)];
        if (!(d < 0)) continue;
        if (enter < 0 || (!bland && d < reduced_[static_cast<std::size_t>(enter)])) enter = j;
        if (bland) break;
      }
      if (enter < 0) return LpStatus::Optimal;
      std::optional<std::size_t> leave;
      Field best_ratio;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Field& a = rows_[i][static_cast<std::size_t>(enter)];
        if (!(a > 0)) continue;
        Field ratio = rhs_[i] / a;
        if (!leave || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (!leave) return LpStatus::Unbounded;
      degenerate_run_ = best_ratio == 0 ? degenerate_run_ + 1 : 0;
      pivot(*leave, enter);
    }
  }

  /// Dual simplex from a dual-feasible basis. Under DantzigWithBland the leaving row is the
  /// most infeasible one and ratio ties are broken lexicographically (costs perturbed by
  /// eps^rank, ranks fixed at entry with the current nonbasic columns first), which cannot
  /// cycle. Under Bland both choices take the smallest index.
  LpStatus dual_simplex() {
    std::vector<int> rank;
    if (rule_ != PricingRule::Bland) rank = perturbation_ranks();
    while (true) {
      std::optional<std::size_t> leave;
      const bool bland = rule_ == PricingRule::Bland;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (!(rhs_[i] < 0)) continue;
        if (!leave || (bland ? basis_[i] < basis_[*leave] : rhs_[i] < rhs_[*leave])) leave = i;
      }
      if (!leave) return LpStatus::Optimal;
      const auto& row = rows_[*leave];
      int enter = -1;
      Field best_ratio;
      std::vector<int> ties;
      for (int j = 0; j < width(); ++j) {
        if (col_kind_[static_cast<std::size_t>(j)] == ColumnKind::Artificial) continue;
        const Field& a = row[static_cast<std::size_t>(j)];
        if (!(a < 0)) continue;
        Field ratio = reduced_[static_cast<std::size_t>(j)] / -a;
        if (enter < 0 || ratio < best_ratio) {
          enter = j;
          best_ratio = std::move(ratio);
          ties.assign(1, j);
        } else if (ratio == best_ratio) {
          ties.push_back(j);
        }
      }
      if (enter < 0) return LpStatus::Infeasible;
      if (!bland && ties.size() > 1) enter = lex_min_column(*leave, ties, rank);
      pivot(*leave, enter);
    }
  }

  std::vector<int> perturbation_ranks() const {
    std::vector<char> basic(static_cast<std::size_t>(width()), 0);
    for (int b : basis_) basic[static_cast<std::size_t>(b)] = 1;
    std::vector<int> rank(static_cast<std::size_t>(width()));
    int next = 0;
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < width(); ++j)
        if (basic[static_cast<std::size_t>(j)] == pass) rank[static_cast<std::size_t>(j)] = next++;
    return rank;
  }

  /// Perturbed ratio of column j on leaving row r as (rank, coefficient) pairs sorted by rank.
  std::vector<std::pair<int, Field>> perturbed_ratio(std::size_t r, int j, const std::vector<int>& rank) const {
    const Field& a = rows_[r][static_cast<std::size_t>(j)];
    std::vector<std::pair<int, Field>> v;
    v.emplace_back(rank[static_cast<std::size_t>(j)], Field(-1) / a);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Field& alpha = rows_[i][static_cast<std::size_t>(j)];
      if (alpha != 0) v.emplace_back(rank[static_cast<std::size_t>(basis_[i])], alpha / a);
    }
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return v;
  }

  int lex_min_column(std::size_t r, const std::vector<int>& ties, const std::vector<int>& rank) const {
    int best = ties.front();
    auto best_v = perturbed_ratio(r, best, rank);
    for (std::size_t t = 1; t < ties.size(); ++t) {
      auto v = perturbed_ratio(r, ties[t], rank);
      if (lex_less(v, best_v)) {
        best = ties[t];
        best_v = std::move(v);
      }
    }
    return best;
  }

  static bool lex_less(const std::vector<std::pair<int, Field>>& x, const std::vector<std::pair<int, Field>>& y) {
    std::size_t i = 0, k = 0;
    const Field zero(0);
    while (i < x.size() || k < y.size()) {
      const int rx = i < x.size() ? x[i].first : std::numeric_limits<int>::max();
      const int ry = k < y.size() ? y[k].first : std::numeric_limits<int>::max();
      const int rnk = std::min(rx, ry);
      const Field& vx = rx == rnk ? x[i].second : zero;
      const Field& vy = ry == rnk ? y[k].second : zero;
      if (vx != vy) return vx < vy;
      if (rx == rnk) ++i;
      if (ry == rnk) ++k;
    }
    return false;
  }

  LpStatus two_phase() {
    // Build rows: normalise rhs >= 0, add slack/surplus and artificials.
    std::vector<LinearRow<Field>> rows = std::move(pending_);
    pending_.clear();
    if (col_kind_.empty()) {
      col_kind_.assign(static_cast<std::size_t>(num_vars_), ColumnKind::Structural);
      reduced_.assign(static_cast<std::size_t>(num_vars_), Field(0));
    }
    for (auto& r : rows) {
      if (r.rhs < 0) {
        r.rhs = -r.rhs;
        for (auto& t : r.terms) t.second = -t.second;
        if (r.sense == RowSense::GreaterEqual)
          r.sense = RowSense::LessEqual;
        else if (r.sense == RowSense::LessEqual)
          r.sense = RowSense::GreaterEqual;
      }
    }
    std::vector<int> slack_of(rows.size(), -1), art_of(rows.size(), -1);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].sense != RowSense::Equal) slack_of[i] = add_column(ColumnKind::Slack);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].sense != RowSense::LessEqual) art_of[i] = add_column(ColumnKind::Artificial);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::vector<Field> t(static_cast<std::size_t>(width()), Field(0));
      for (const auto& [j, a] : rows[i].terms) t[static_cast<std::size_t>(j)] += a;
      if (slack_of[i] >= 0)
        t[static_cast<std::size_t>(slack_of[i])] = rows[i].sense == RowSense::LessEqual ? Field(1) : Field(-1);
      if (art_of[i] >= 0) t[static_cast<std::size_t>(art_of[i])] = Field(1);
      rows_.push_back(std::move(t));
      rhs_.push_back(rows[i].rhs);
      basis_.push_back(art_of[i] >= 0 ? art_of[i] : slack_of[i]);
    }

    // Phase 1: minimise the sum of artificials.
    std::fill(reduced_.begin(), reduced_.end(), Field(0));
    objective_ = Field(0);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (col_kind_[static_cast<std::size_t>(basis_[i])] != ColumnKind::Artificial) continue;
      for (int j = 0; j < width(); ++j)
        if (col_kind_[static_cast<std::size_t>(j)] != ColumnKind::Artificial)
          reduced_[static_cast<std::size_t>(j)] -= rows_[i][static_cast<std::size_t>(j)];
      objective_ -= rhs_[i];
    }
    // objective_ tracks -(phase-1 value).
    primal_loop(true);
    if (objective_ != 0) return LpStatus::Infeasible;

    // Drive remaining (zero-valued) artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < rows_.size();) {
      if (col_kind_[static_cast<std::size_t>(basis_[i])] != ColumnKind::Artificial) {
        ++i;
        continue;
      }
      int col = -1;
      for (int j = 0; j < width() && col < 0; ++j)
        if (col_kind_[static_cast<std::size_t>(j)] != ColumnKind::Artificial && rows_[i][static_cast<std::size_t>(j)] != 0)
          col = j;
      if (col >= 0) {
        pivot(i, col);
        ++i;
      } else {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
    // Artificials are the trailing columns and none is basic any more: drop them.
    std::size_t keep = col_kind_.size();
    while (keep > 0 && col_kind_[keep - 1] == ColumnKind::Artificial) --keep;
    for (auto& r : rows_) r.resize(keep);
    col_kind_.resize(keep);
    reduced_.resize(keep);

    // Phase 2 reduced costs d_j = c_j - c_B B^-1 A_j; objective_ tracks -(c_B x_B).
    std::fill(reduced_.begin(), reduced_.end(), Field(0));
    for (int j = 0; j < num_vars_; ++j) reduced_[static_cast<std::size_t>(j)] = cost_[static_cast<std::size_t>(j)];
    objective_ = Field(0);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      int b = basis_[i];
      if (b >= num_vars_) continue;
      const Field& cb = cost_[static_cast<std::size_t>(b)];
      if (cb == 0) continue;
      for (int j : nonzeros(rows_[i])) reduced_[static_cast<std::size_t>(j)] -= cb * rows_[i][static_cast<std::size_t>(j)];
      objective_ -= cb * rhs_[i];
    }
    LpStatus s = primal_loop(false);
    return s;
  }

 public:
  /// Optimal objective value (the internal row tracks its negation).
  Field value() const { return -objective_; }

 private:
  int num_vars_;
  std::vector<Field> cost_;
  std::vector<LinearRow<Field>> pending_;
  std::vector<std::vector<Field>> rows_;
  std::vector<Field> rhs_;
  std::vector<int> basis_;
  std::vector<ColumnKind> col_kind_;
  std::vector<Field> reduced_;
  Field objective_ = Field(0);
  LpStatus status_ = LpStatus::Infeasible;
  std::uint64_t pivots_ = 0;
  PricingRule rule_;
  int degenerate_run_ = 0;
};

}  // namespace cubecover
