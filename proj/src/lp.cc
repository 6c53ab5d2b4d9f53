#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "gasnet/network.h"
#include "gasnet/solver.h"

namespace gasnet {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kCostTol = 1e-10;
constexpr double kRatioTieTol = 1e-12;
constexpr std::size_t kDegenerateRunBeforeBland = 50;

void validate_shape(std::size_t nv, const std::vector<LinearRow>& rows,
                    const std::vector<double>& lower, const std::vector<double>& upper) {
  if (lower.size() != nv || upper.size() != nv) {
    throw InputError("bound vectors must have one entry per variable");
  }
  for (std::size_t k = 0; k < nv; ++k) {
    if (!std::isfinite(lower[k])) throw InputError("lower bounds must be finite");
    if (std::isnan(upper[k]) || upper[k] < lower[k]) {
      throw InputError("variable " + std::to_string(k) + " has upper < lower");
    }
  }
  for (const auto& row : rows) {
    if (!std::isfinite(row.rhs)) throw InputError("constraint rhs must be finite");
    for (const auto& [var, coef] : row.terms) {
      if (var >= nv) throw InputError("constraint references unknown variable");
      if (!std::isfinite(coef)) throw InputError("constraint coefficient must be finite");
    }
  }
}

// Standard form min c.y, A y = b, y >= 0 over shifted structural variables
// y = x - lower, one slack per finite upper bound and one artificial per
// original equality row.
class Tableau {
 public:
  Tableau(const LinearProgram& lp) : lp_(lp) {
    const std::size_t nv = lp.variable_count();
    column_of_.assign(nv, kNone);
    for (std::size_t k = 0; k < nv; ++k) {
      if (lp.upper[k] > lp.lower[k]) {
        column_of_[k] = structural_.size();
        structural_.push_back(k);
      }
    }
    for (std::size_t k : structural_) {
      if (std::isfinite(lp.upper[k])) bounded_.push_back(k);
    }
    ns_ = structural_.size();
    nb_ = bounded_.size();
    ne_ = lp.equalities.size();
    rows_ = ne_ + nb_;
    cols_ = ns_ + nb_ + ne_;

    a_.assign(rows_, std::vector<double>(cols_ + 1, 0.0));
    for (std::size_t r = 0; r < ne_; ++r) {
      const auto& row = lp.equalities[r];
      double rhs = row.rhs;
      for (const auto& [var, coef] : row.terms) {
        rhs -= coef * lp.lower[var];
        if (column_of_[var] != kNone) a_[r][column_of_[var]] += coef;
      }
      if (rhs < 0) {
        for (double& v : a_[r]) v = -v;
        rhs = -rhs;
      }
      a_[r][cols_] = rhs;
      a_[r][ns_ + nb_ + r] = 1.0;
    }
    for (std::size_t q = 0; q < nb_; ++q) {
      const std::size_t k = bounded_[q];
      auto& row = a_[ne_ + q];
      row[column_of_[k]] = 1.0;
      row[ns_ + q] = 1.0;
      row[cols_] = lp.upper[k] - lp.lower[k];
    }
    original_ = a_;
    basis_.resize(rows_);
    for (std::size_t r = 0; r < ne_; ++r) basis_[r] = ns_ + nb_ + r;
    for (std::size_t q = 0; q < nb_; ++q) basis_[ne_ + q] = ns_ + q;
    active_.assign(rows_, true);
  }

  LpResult solve(double tol) {
    LpResult result;
    const std::size_t cap = 50000 + 200 * (rows_ + cols_);

    // Phase 1: minimize the sum of artificials.
    std::vector<double> cost(cols_, 0.0);
    for (std::size_t r = 0; r < ne_; ++r) cost[ns_ + nb_ + r] = 1.0;
    auto status = run(cost, /*allow_artificial=*/true, cap, result.iterations);
    if (status == SolveStatus::kIterationLimit) {
      result.status = status;
      return result;
    }
    double infeasibility = 0;
    double scale = 1.0;
    for (std::size_t r = 0; r < ne_; ++r) scale = std::max(scale, std::abs(original_[r][cols_]));
    for (std::size_t r = 0; r < rows_; ++r) {
      if (is_artificial(basis_[r])) infeasibility += std::max(0.0, a_[r][cols_]);
    }
    if (infeasibility > tol * scale) {
      result.status = SolveStatus::kInfeasible;
      return result;
    }
    drive_out_artificials();

    // Phase 2.
    std::fill(cost.begin(), cost.end(), 0.0);
    const double sign = lp_.sense == Sense::kMaximize ? -1.0 : 1.0;
    for (std::size_t c = 0; c < ns_; ++c) cost[c] = sign * lp_.objective[structural_[c]];
    status = run(cost, /*allow_artificial=*/false, cap, result.iterations);
    if (status != SolveStatus::kOptimal) {
      result.status = status;
      return result;
    }

    result.x = extract();
    result.status = SolveStatus::kOptimal;
    for (std::size_t k = 0; k < result.x.size(); ++k) {
      result.objective += lp_.objective[k] * result.x[k];
    }
    return result;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  bool is_artificial(std::size_t c) const { return c >= ns_ + nb_; }

  void pivot(std::size_t pr, std::size_t pc) {
    auto& prow = a_[pr];
    const double inv = 1.0 / prow[pc];
    for (double& v : prow) v *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr || !active_[r]) continue;
      const double f = a_[r][pc];
      if (f == 0.0) continue;
      auto& row = a_[r];
      for (std::size_t c = 0; c <= cols_; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  SolveStatus run(const std::vector<double>& cost, bool allow_artificial, std::size_t cap,
                  std::size_t& iterations) {
    std::vector<bool> is_basic(cols_, false);
    std::size_t degenerate_run = 0;
    bool bland = false;
    for (;;) {
      std::fill(is_basic.begin(), is_basic.end(), false);
      for (std::size_t r = 0; r < rows_; ++r) {
        if (active_[r]) is_basic[basis_[r]] = true;
      }
      // Reduced costs d_j = c_j - c_B B^-1 A_j.
      std::size_t entering = kNone;
      double best = -kCostTol;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (is_basic[c] || (!allow_artificial && is_artificial(c))) continue;
        double d = cost[c];
        for (std::size_t r = 0; r < rows_; ++r) {
          if (active_[r]) d -= cost[basis_[r]] * a_[r][c];
        }
        if (bland) {
          if (d < -kCostTol) {
            entering = c;
            break;
          }
        } else if (d < best) {
          best = d;
          entering = c;
        }
      }
      if (entering == kNone) return SolveStatus::kOptimal;
      if (++iterations > cap) return SolveStatus::kIterationLimit;

      std::size_t leaving = kNone;
      double best_ratio = kInf;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (!active_[r]) continue;
        const double coef = a_[r][entering];
        if (coef <= kPivotTol) continue;
        const double ratio = std::max(0.0, a_[r][cols_]) / coef;
        if (ratio < best_ratio - kRatioTieTol ||
            (ratio <= best_ratio + kRatioTieTol && basis_[r] < basis_[leaving])) {
          best_ratio = ratio;
          leaving = r;
        }
      }
      if (leaving == kNone) return SolveStatus::kUnbounded;
      if (best_ratio <= kRatioTieTol) {
        if (++degenerate_run >= kDegenerateRunBeforeBland) bland = true;
      } else {
        degenerate_run = 0;
      }
      pivot(leaving, entering);
    }
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < rows_; ++r) {
      if (!active_[r] || !is_artificial(basis_[r])) continue;
      std::size_t col = kNone;
      for (std::size_t c = 0; c < ns_ + nb_; ++c) {
        if (std::abs(a_[r][c]) > 1e-9) {
          col = c;
          break;
        }
      }
      if (col == kNone) {
        active_[r] = false;  // redundant row
      } else {
        pivot(r, col);
      }
    }
  }

  // Recompute the basic solution from the original rows and clamp to bounds.
  std::vector<double> extract() const {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (active_[r]) rows.push_back(r);
    }
    const auto k = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd basis_matrix(k, k);
    Eigen::VectorXd rhs(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      rhs(i) = original_[rows[i]][cols_];
      for (Eigen::Index j = 0; j < k; ++j) {
        basis_matrix(i, j) = original_[rows[i]][basis_[rows[j]]];
      }
    }
    std::vector<double> column_value(cols_, 0.0);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_matrix);
    if (k > 0 && lu.isInvertible()) {
      Eigen::VectorXd xb = lu.solve(rhs);
      for (Eigen::Index j = 0; j < k; ++j) column_value[basis_[rows[j]]] = xb(j);
    } else {
      for (std::size_t r : rows) column_value[basis_[r]] = a_[r][cols_];
    }
    std::vector<double> x(lp_.lower);
    for (std::size_t c = 0; c < ns_; ++c) {
      const std::size_t var = structural_[c];
      x[var] = std::clamp(lp_.lower[var] + column_value[c], lp_.lower[var], lp_.upper[var]);
    }
    return x;
  }

  const LinearProgram& lp_;
  std::vector<std::size_t> column_of_;
  std::vector<std::size_t> structural_;
  std::vector<std::size_t> bounded_;
  std::size_t ns_ = 0, nb_ = 0, ne_ = 0, rows_ = 0, cols_ = 0;
  std::vector<std::vector<double>> a_;
  std::vector<std::vector<double>> original_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
};

}  // namespace

void LinearProgram::validate() const {
  validate_shape(variable_count(), equalities, lower, upper);
  for (double c : objective) {
    if (!std::isfinite(c)) throw InputError("objective coefficients must be finite");
  }
}

const char* solve_status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kIterationLimit: return "iteration limit";
  }
  return "?";
}

LpResult solve_lp(const LinearProgram& problem, double tol) {
  problem.validate();
  Tableau tableau(problem);
  return tableau.solve(tol);
}

void QuadraticProgram::validate() const {
  const std::size_t nv = variable_count();
  validate_shape(nv, equalities, lower, upper);
  if (!linear.empty() && linear.size() != nv) {
    throw InputError("linear term must be empty or have one entry per variable");
  }
  for (const auto& term : squared_differences) {
    if (term.a >= nv || (term.b && *term.b >= nv)) {
      throw InputError("quadratic term references unknown variable");
    }
    if (!(term.weight >= 0) || !std::isfinite(term.weight)) {
      throw InputError("quadratic weights must be finite and nonnegative");
    }
  }
}

}  // namespace gasnet
