#ifndef GASNET_SOLVER_H_
#define GASNET_SOLVER_H_

#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace gasnet {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Sparse linear equality: sum(coef * x[var]) == rhs.
struct LinearRow {
  std::vector<std::pair<std::size_t, double>> terms;
  double rhs = 0;
};

enum class Sense { kMinimize, kMaximize };

// Optimize objective.x subject to equalities and lower <= x <= upper.
// Lower bounds must be finite; upper bounds may be kInf.
struct LinearProgram {
  Sense sense = Sense::kMinimize;
  std::vector<double> objective;
  std::vector<LinearRow> equalities;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t variable_count() const { return objective.size(); }
  // Throws InputError when bounds or indices are malformed.
  void validate() const;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* solve_status_name(SolveStatus status);

struct LpResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0;
  std::size_t iterations = 0;
};

// Dense two-phase primal simplex. Entering column by most negative reduced
// cost with lowest-index ties, switching to Bland's rule after a run of
// degenerate pivots; ratio-test ties go to the lowest basic variable index.
// The final basic solution is recomputed from the original data.
LpResult solve_lp(const LinearProgram& problem, double tol = 1e-9);

// weight * (x[a] - x[b])^2, or weight * x[a]^2 when b is empty.
struct SquaredDifference {
  std::size_t a = 0;
  std::optional<std::size_t> b;
  double weight = 1.0;
};

// Minimize sum of squared differences + linear.x over the same constraint
// shape as LinearProgram (the LP's objective and sense are unused). The
// quadratic part is PSD by construction.
struct QuadraticProgram {
  std::vector<SquaredDifference> squared_differences;
  std::vector<double> linear;
  std::vector<LinearRow> equalities;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t variable_count() const { return lower.size(); }
  void validate() const;
  double evaluate(const std::vector<double>& x) const;
};

struct QpResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0;
  // Max of primal infeasibility, stationarity residual and multiplier sign
  // violation at the returned point.
  double kkt_residual = 0;
  std::size_t iterations = 0;
};

// Primal active-set method started from a simplex vertex. Subproblems are
// solved in an orthonormal null space of the free equality columns; zero
// curvature directions are followed to the nearest bound.
QpResult solve_qp(const QuadraticProgram& problem, double tol = 1e-9);

// KKT residual of `x` for `problem`, with equality multipliers fitted by
// least squares. Exposed for tests and diagnostics.
double qp_kkt_residual(const QuadraticProgram& problem, const std::vector<double>& x,
                       double bound_tol = 1e-9);

}  // namespace gasnet

#endif  // GASNET_SOLVER_H_
