#include "dispatchkit/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dispatchkit {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-8;

class Tableau {
 public:
  // Columns: [0, n) original vars, then one slack/surplus per inequality
  // row, then one artificial per >=/== row. Rows are pre-normalized to
  // nonnegative rhs.
  explicit Tableau(const LinearProgram& lp) : n_(lp.num_vars), m_(static_cast<int>(lp.rows.size())) {
    flipped_.assign(m_, false);
    std::vector<int> sense(m_);  // 0 <=, 1 >=, 2 ==
    for (int i = 0; i < m_; ++i) {
      const auto& row = lp.rows[i];
      double rhs = row.rhs;
      bool flip = rhs < 0.0;
      flipped_[i] = flip;
      if (row.sense == RowSense::kEq)
        sense[i] = 2;
      else
        sense[i] = flip ? 1 : 0;
    }
    int cols = n_;
    slack_col_.assign(m_, -1);
    art_col_.assign(m_, -1);
    for (int i = 0; i < m_; ++i)
      if (sense[i] != 2) slack_col_[i] = cols++;
    for (int i = 0; i < m_; ++i)
      if (sense[i] != 0) art_col_[i] = cols++;
    cols_ = cols;
    first_art_ = cols_;
    for (int i = 0; i < m_; ++i)
      if (art_col_[i] >= 0 && art_col_[i] < first_art_) first_art_ = art_col_[i];

    a_.assign(static_cast<std::size_t>(m_) * cols_, 0.0);
    b_.assign(m_, 0.0);
    basis_.assign(m_, -1);
    for (int i = 0; i < m_; ++i) {
      const auto& row = lp.rows[i];
      const double sign = flipped_[i] ? -1.0 : 1.0;
      for (int j = 0; j < n_; ++j) at(i, j) = sign * row.coeffs[j];
      b_[i] = sign * row.rhs;
      if (slack_col_[i] >= 0) at(i, slack_col_[i]) = (sense[i] == 1) ? -1.0 : 1.0;
      if (art_col_[i] >= 0) at(i, art_col_[i]) = 1.0;
      basis_[i] = (sense[i] == 0) ? slack_col_[i] : art_col_[i];
    }
  }

  // Returns false when the iteration limit trips (numerical trouble).
  bool run_phase(const std::vector<double>& costs, bool bar_artificials, bool* unbounded) {
    // zc_[j] = z_j - c_j; optimal (max) when all zc >= -tol.
    zc_.assign(cols_, 0.0);
    obj_ = 0.0;
    for (int j = 0; j < cols_; ++j) {
      double z = 0.0;
      for (int i = 0; i < m_; ++i) z += costs[basis_[i]] * at(i, j);
      zc_[j] = z - costs[j];
    }
    for (int i = 0; i < m_; ++i) obj_ += costs[basis_[i]] * b_[i];
    *unbounded = false;

    const long max_iters = 200000L + 200L * (m_ + cols_);
    for (long iter = 0; iter < max_iters; ++iter) {
      int enter = -1;
      for (int j = 0; j < cols_; ++j) {
        if (bar_artificials && is_artificial(j)) continue;
        if (zc_[j] < -kPivotTol) {
          enter = j;  // Bland: smallest index
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        // Rows still carrying a basic artificial after phase 1 are
        // redundant; leave them pinned.
        if (bar_artificials && is_artificial(basis_[i])) continue;
        const double a = at(i, enter);
        if (a > kPivotTol) {
          const double ratio = b_[i] / a;
          if (ratio < best_ratio - kPivotTol ||
              (ratio < best_ratio + kPivotTol && (leave < 0 || basis_[i] < basis_[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) {
        *unbounded = true;
        return true;
      }
      pivot(leave, enter);
    }
    return false;
  }

  void pivot(int row, int col) {
    const double p = at(row, col);
    const double inv = 1.0 / p;
    for (int j = 0; j < cols_; ++j) at(row, j) *= inv;
    b_[row] *= inv;
    at(row, col) = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j < cols_; ++j) at(i, j) -= f * at(row, j);
      at(i, col) = 0.0;
      b_[i] -= f * b_[row];
      if (b_[i] < 0.0 && b_[i] > -kPivotTol) b_[i] = 0.0;
    }
    const double f = zc_[col];
    if (f != 0.0) {
      for (int j = 0; j < cols_; ++j) zc_[j] -= f * at(row, j);
      zc_[col] = 0.0;
      obj_ -= f * b_[row];  // entering with zc < 0 raises the objective
    }
    basis_[row] = col;
  }

  // After phase 1, pivot still-basic artificials out on any usable column;
  // rows that cannot be cleared are redundant and stay pinned at zero.
  void expel_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (int j = 0; j < first_art_; ++j) {
        if (std::abs(at(i, j)) > 1e-7) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  // Artificial columns are laid out after every slack/surplus column.
  bool is_artificial(int col) const { return col >= first_art_; }

  double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  int n_, m_, cols_ = 0, first_art_ = 0;
  std::vector<double> a_, b_, zc_;
  std::vector<int> basis_, slack_col_, art_col_;
  std::vector<bool> flipped_;
  double obj_ = 0.0;
};

}  // namespace

LpSolution lp_solve(const LinearProgram& lp) {
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());
  if (static_cast<int>(lp.objective.size()) != n) throw std::invalid_argument("lp_solve: objective size mismatch");
  for (const auto& row : lp.rows)
    if (static_cast<int>(row.coeffs.size()) != n) throw std::invalid_argument("lp_solve: row size mismatch");
  for (double c : lp.objective)
    if (!std::isfinite(c)) throw std::invalid_argument("lp_solve: non-finite objective entry");
  for (const auto& row : lp.rows) {
    if (!std::isfinite(row.rhs)) throw std::invalid_argument("lp_solve: non-finite rhs");
    for (double c : row.coeffs)
      if (!std::isfinite(c)) throw std::invalid_argument("lp_solve: non-finite coefficient");
  }

  LpSolution out;
  if (m == 0) {
    for (double c : lp.objective) {
      if (c > kPivotTol) {
        out.status = LpStatus::kUnbounded;
        return out;
      }
    }
    out.status = LpStatus::kOptimal;
    out.primal.assign(n, 0.0);
    out.objective = 0.0;
    return out;
  }

  Tableau t(lp);

  bool has_artificials = false;
  for (int i = 0; i < m; ++i) has_artificials |= t.art_col_[i] >= 0;
  bool unbounded = false;
  if (has_artificials) {
    std::vector<double> phase1(t.cols_, 0.0);
    for (int i = 0; i < m; ++i)
      if (t.art_col_[i] >= 0) phase1[t.art_col_[i]] = -1.0;
    if (!t.run_phase(phase1, false, &unbounded)) return out;
    if (t.obj_ < -kFeasTol) {
      out.status = LpStatus::kInfeasible;
      return out;
    }
    t.expel_artificials();
  }

  std::vector<double> phase2(t.cols_, 0.0);
  for (int j = 0; j < n; ++j) phase2[j] = lp.objective[j];
  if (!t.run_phase(phase2, true, &unbounded)) return out;
  if (unbounded) {
    out.status = LpStatus::kUnbounded;
    return out;
  }

  out.primal.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (t.basis_[i] < n) out.primal[t.basis_[i]] = t.b_[i];
  out.objective = 0.0;
  for (int j = 0; j < n; ++j) out.objective += lp.objective[j] * out.primal[j];

  // Dual of row i is z at the column that started as +e_i (slack for <=
  // rows, artificial for >=/== rows); sign-flipped rows flip back.
  out.duals.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const int idcol = (t.art_col_[i] >= 0) ? t.art_col_[i] : t.slack_col_[i];
    double y = t.zc_[idcol];
    if (t.flipped_[i]) y = -y;
    out.duals[i] = y;
  }

  // Verify before reporting optimal.
  double max_residual = 0.0;
  for (int i = 0; i < m; ++i) {
    double lhs = 0.0;
    for (int j = 0; j < n; ++j) lhs += lp.rows[i].coeffs[j] * out.primal[j];
    const double slack = lp.rows[i].rhs - lhs;
    max_residual = std::max(max_residual, lp.rows[i].sense == RowSense::kEq ? std::abs(slack) : -slack);
  }
  for (double x : out.primal) max_residual = std::max(max_residual, -x);
  double dual_obj = 0.0;
  for (int i = 0; i < m; ++i) dual_obj += out.duals[i] * lp.rows[i].rhs;
  const double gap = std::abs(out.objective - dual_obj);
  if (max_residual > kFeasTol || gap > 1e-6 * (1.0 + std::abs(out.objective))) {
    out.status = LpStatus::kNumericalFailure;
    return out;
  }
  out.status = LpStatus::kOptimal;
  return out;
}

}  // namespace dispatchkit
