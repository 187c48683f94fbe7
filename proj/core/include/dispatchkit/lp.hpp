#pragma once

#include <vector>

namespace dispatchkit {

enum class RowSense { kLe, kEq };

/// maximize c.x subject to row constraints, x >= 0. Dense storage;
/// intended for small instances (a few thousand variables at most).
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  struct Row {
    std::vector<double> coeffs;
    RowSense sense = RowSense::kLe;
    double rhs = 0.0;
  };
  std::vector<Row> rows;

  void add_row(std::vector<double> coeffs, RowSense sense, double rhs) {
    rows.push_back({std::move(coeffs), sense, rhs});
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

struct LpSolution {
  LpStatus status = LpStatus::kNumericalFailure;
  std::vector<double> primal;
  std::vector<double> duals;  // one per row; >= 0 for <= rows, free for = rows
  double objective = 0.0;
};

/// Two-phase primal simplex with Bland's rule (deterministic, anti-cycling).
/// Optimal solutions carry exact-to-roundoff duals; primal feasibility and
/// the duality gap are verified before reporting kOptimal.
LpSolution lp_solve(const LinearProgram& lp);

}  // namespace dispatchkit
