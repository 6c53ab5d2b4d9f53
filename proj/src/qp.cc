#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "gasnet/network.h"
#include "gasnet/solver.h"

namespace gasnet {

namespace {

enum class Bound : unsigned char { kFree, kLower, kUpper };

struct Dense {
  Eigen::MatrixXd hessian;  // objective = 0.5 x'Hx + g'x
  Eigen::VectorXd gradient_offset;
  Eigen::MatrixXd eq;
  Eigen::VectorXd rhs;
};

Dense densify(const QuadraticProgram& qp) {
  const auto nv = static_cast<Eigen::Index>(qp.variable_count());
  const auto p = static_cast<Eigen::Index>(qp.equalities.size());
  Dense d{Eigen::MatrixXd::Zero(nv, nv), Eigen::VectorXd::Zero(nv),
          Eigen::MatrixXd::Zero(p, nv), Eigen::VectorXd::Zero(p)};
  for (const auto& t : qp.squared_differences) {
    const auto a = static_cast<Eigen::Index>(t.a);
    d.hessian(a, a) += 2 * t.weight;
    if (t.b) {
      const auto b = static_cast<Eigen::Index>(*t.b);
      d.hessian(b, b) += 2 * t.weight;
      d.hessian(a, b) -= 2 * t.weight;
      d.hessian(b, a) -= 2 * t.weight;
    }
  }
  for (Eigen::Index k = 0; k < nv && !qp.linear.empty(); ++k) {
    d.gradient_offset(k) = qp.linear[static_cast<std::size_t>(k)];
  }
  for (Eigen::Index r = 0; r < p; ++r) {
    const auto& row = qp.equalities[static_cast<std::size_t>(r)];
    for (const auto& [var, coef] : row.terms) d.eq(r, static_cast<Eigen::Index>(var)) += coef;
    d.rhs(r) = row.rhs;
  }
  return d;
}

std::vector<Eigen::Index> indices_where(const std::vector<Bound>& state, bool free) {
  std::vector<Eigen::Index> out;
  for (std::size_t k = 0; k < state.size(); ++k) {
    if ((state[k] == Bound::kFree) == free) out.push_back(static_cast<Eigen::Index>(k));
  }
  return out;
}

Eigen::MatrixXd columns(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& idx) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(idx[j]);
  return out;
}

// Orthonormal basis of the null space of `a` (rows x cols).
Eigen::MatrixXd null_space(const Eigen::MatrixXd& a) {
  const Eigen::Index cols = a.cols();
  if (cols == 0) return Eigen::MatrixXd(0, 0);
  if (a.rows() == 0) return Eigen::MatrixXd::Identity(cols, cols);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.transpose());
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(cols, cols);
  return q.rightCols(cols - rank);
}

struct Multipliers {
  Eigen::VectorXd mu;  // bound multipliers, grad - A'y
  double worst = 0;    // largest sign or stationarity violation
};

double violation(Bound b, double mu) {
  switch (b) {
    case Bound::kFree: return std::abs(mu);
    case Bound::kLower: return -mu;
    case Bound::kUpper: return mu;
  }
  return 0;
}

// Equality multipliers y for mu = grad - A'y, chosen by an L1 fit: each
// variable k gets a violation v_k >= 0 with |mu_k| <= v_k when free,
// mu_k >= -v_k at a lower bound and mu_k <= v_k at an upper bound. Free
// violations weigh much more, since stationarity on the free set is what a
// zero step already guarantees. Least squares on the free columns alone
// leaves y undetermined at degenerate vertices.
Multipliers fit_multipliers(const Dense& d, const Eigen::VectorXd& grad,
                            const std::vector<Bound>& state, const QuadraticProgram& problem) {
  constexpr double kFreeWeight = 1e3;
  const auto p = static_cast<std::size_t>(d.eq.rows());
  const std::size_t nv = state.size();
  LinearProgram lp;
  lp.sense = Sense::kMinimize;
  lp.objective.assign(2 * p, 0.0);
  std::vector<std::pair<std::size_t, double>> rows;  // (violation variable, sign)
  std::vector<std::size_t> owner;                     // variable k of each row
  for (std::size_t k = 0; k < nv; ++k) {
    if (problem.upper[k] <= problem.lower[k]) continue;
    const std::size_t v = lp.objective.size();
    lp.objective.push_back(state[k] == Bound::kFree ? kFreeWeight : 1.0);
    if (state[k] != Bound::kUpper) {
      rows.emplace_back(v, 1.0);
      owner.push_back(k);
    }
    if (state[k] != Bound::kLower) {
      rows.emplace_back(v, -1.0);
      owner.push_back(k);
    }
  }
  const std::size_t first_slack = lp.objective.size();
  lp.objective.resize(first_slack + rows.size(), 0.0);
  lp.lower.assign(lp.objective.size(), 0.0);
  lp.upper.assign(lp.objective.size(), kInf);
  // sign * (A'y - grad)_k - v_k + s = 0
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto [v, sign] = rows[r];
    const auto kk = static_cast<Eigen::Index>(owner[r]);
    LinearRow row;
    for (std::size_t e = 0; e < p; ++e) {
      const double a = d.eq(static_cast<Eigen::Index>(e), kk);
      if (a == 0) continue;
      row.terms.emplace_back(e, sign * a);
      row.terms.emplace_back(p + e, -sign * a);
    }
    row.terms.emplace_back(v, -1.0);
    row.terms.emplace_back(first_slack + r, 1.0);
    row.rhs = sign * grad(kk);
    lp.equalities.push_back(std::move(row));
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  const LpResult fit = solve_lp(lp);
  if (fit.status == SolveStatus::kOptimal) {
    for (std::size_t e = 0; e < p; ++e) y(static_cast<Eigen::Index>(e)) = fit.x[e] - fit.x[p + e];
  }
  Multipliers out;
  out.mu = grad - d.eq.transpose() * y;
  for (std::size_t k = 0; k < nv; ++k) {
    if (problem.upper[k] <= problem.lower[k]) continue;
    out.worst = std::max(out.worst, violation(state[k], out.mu(static_cast<Eigen::Index>(k))));
  }
  return out;
}

}  // namespace

double QuadraticProgram::evaluate(const std::vector<double>& x) const {
  double v = 0;
  for (const auto& t : squared_differences) {
    const double diff = x[t.a] - (t.b ? x[*t.b] : 0.0);
    v += t.weight * diff * diff;
  }
  for (std::size_t k = 0; k < linear.size(); ++k) v += linear[k] * x[k];
  return v;
}

double qp_kkt_residual(const QuadraticProgram& problem, const std::vector<double>& x,
                       double bound_tol) {
  const Dense d = densify(problem);
  const auto nv = static_cast<Eigen::Index>(x.size());
  Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), nv);
  double worst = d.eq.rows() > 0 ? (d.eq * xv - d.rhs).cwiseAbs().maxCoeff() : 0.0;
  std::vector<Bound> state(x.size(), Bound::kFree);
  for (std::size_t k = 0; k < x.size(); ++k) {
    worst = std::max({worst, problem.lower[k] - x[k], x[k] - problem.upper[k]});
    if (x[k] <= problem.lower[k] + bound_tol) {
      state[k] = Bound::kLower;
    } else if (x[k] >= problem.upper[k] - bound_tol) {
      state[k] = Bound::kUpper;
    }
  }
  const Eigen::VectorXd grad = d.hessian * xv + d.gradient_offset;
  return std::max(worst, fit_multipliers(d, grad, state, problem).worst);
}

QpResult solve_qp(const QuadraticProgram& problem, double tol) {
  problem.validate();
  QpResult result;
  const std::size_t nv = problem.variable_count();

  LinearProgram phase1;
  phase1.objective.assign(nv, 0.0);
  phase1.equalities = problem.equalities;
  phase1.lower = problem.lower;
  phase1.upper = problem.upper;
  const LpResult start = solve_lp(phase1, tol);
  if (start.status != SolveStatus::kOptimal) {
    result.status = start.status == SolveStatus::kUnbounded ? SolveStatus::kIterationLimit
                                                            : start.status;
    return result;
  }

  const Dense d = densify(problem);
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(start.x.data(),
                                                        static_cast<Eigen::Index>(nv));
  std::vector<Bound> state(nv, Bound::kFree);
  for (std::size_t k = 0; k < nv; ++k) {
    if (x(static_cast<Eigen::Index>(k)) <= problem.lower[k]) {
      state[k] = Bound::kLower;
    } else if (x(static_cast<Eigen::Index>(k)) >= problem.upper[k]) {
      state[k] = Bound::kUpper;
    }
  }

  double scale = 1.0;
  for (std::size_t k = 0; k < nv; ++k) {
    scale = std::max(scale, std::abs(problem.lower[k]));
    if (std::isfinite(problem.upper[k])) scale = std::max(scale, std::abs(problem.upper[k]));
  }
  const double step_tol = 1e-13 * scale;
  const double h_max = d.hessian.size() > 0 ? d.hessian.cwiseAbs().maxCoeff() : 0.0;
  const double mult_tol = 1e-10 * scale * std::max(1.0, h_max);
  const std::size_t cap = 200 + 20 * (nv + static_cast<std::size_t>(d.eq.rows()));

  for (;;) {
    if (++result.iterations > cap) {
      result.status = SolveStatus::kIterationLimit;
      break;
    }
    const Eigen::VectorXd grad = d.hessian * x + d.gradient_offset;
    const auto free_idx = indices_where(state, true);
    const Eigen::MatrixXd z = null_space(columns(d.eq, free_idx));

    Eigen::VectorXd step_free = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(free_idx.size()));
    bool newton = true;
    if (z.cols() > 0) {
      Eigen::MatrixXd hff(static_cast<Eigen::Index>(free_idx.size()),
                          static_cast<Eigen::Index>(free_idx.size()));
      Eigen::VectorXd gf(static_cast<Eigen::Index>(free_idx.size()));
      for (std::size_t i = 0; i < free_idx.size(); ++i) {
        gf(static_cast<Eigen::Index>(i)) = grad(free_idx[i]);
        for (std::size_t j = 0; j < free_idx.size(); ++j) {
          hff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              d.hessian(free_idx[i], free_idx[j]);
        }
      }
      const Eigen::MatrixXd hz = z.transpose() * hff * z;
      const Eigen::VectorXd gz = z.transpose() * gf;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hz);
      const Eigen::VectorXd& lam = eig.eigenvalues();
      const Eigen::MatrixXd& u = eig.eigenvectors();
      const Eigen::VectorXd c = u.transpose() * gz;
      const double curvature_floor = 1e-10 * std::max(1.0, lam.cwiseAbs().maxCoeff());
      const double slope_floor = 1e-12 * std::max(1.0, gf.cwiseAbs().maxCoeff());
      Eigen::VectorXd flat = Eigen::VectorXd::Zero(lam.size());
      Eigen::VectorXd curved = Eigen::VectorXd::Zero(lam.size());
      for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) > curvature_floor) {
          curved(i) = -c(i) / lam(i);
        } else if (std::abs(c(i)) > slope_floor) {
          flat(i) = -c(i);
          newton = false;
        }
      }
      step_free = z * u * (newton ? curved : flat);
    }

    if (step_free.size() == 0 || step_free.cwiseAbs().maxCoeff() <= step_tol) {
      const Multipliers fit = fit_multipliers(d, grad, state, problem);
      std::size_t release = nv;
      double worst = mult_tol;
      for (std::size_t k = 0; k < nv; ++k) {
        if (state[k] == Bound::kFree || problem.upper[k] <= problem.lower[k]) continue;
        const double v = violation(state[k], fit.mu(static_cast<Eigen::Index>(k)));
        if (v > worst) {
          worst = v;
          release = k;
        }
      }
      if (release == nv) {
        result.status = SolveStatus::kOptimal;
        break;
      }
      state[release] = Bound::kFree;
      continue;
    }

    double alpha = newton ? 1.0 : kInf;
    std::size_t blocking = nv;
    Bound blocking_side = Bound::kFree;
    for (std::size_t i = 0; i < free_idx.size(); ++i) {
      const auto k = static_cast<std::size_t>(free_idx[i]);
      const double dk = step_free(static_cast<Eigen::Index>(i));
      const double xk = x(free_idx[i]);
      double limit = kInf;
      Bound side = Bound::kFree;
      if (dk < -step_tol) {
        limit = std::max(0.0, xk - problem.lower[k]) / -dk;
        side = Bound::kLower;
      } else if (dk > step_tol && std::isfinite(problem.upper[k])) {
        limit = std::max(0.0, problem.upper[k] - xk) / dk;
        side = Bound::kUpper;
      }
      if (limit < alpha) {
        alpha = limit;
        blocking = k;
        blocking_side = side;
      }
    }
    if (!std::isfinite(alpha)) {
      result.status = SolveStatus::kUnbounded;
      break;
    }
    for (std::size_t i = 0; i < free_idx.size(); ++i) {
      x(free_idx[i]) += alpha * step_free(static_cast<Eigen::Index>(i));
    }
    if (blocking != nv) {
      state[blocking] = blocking_side;
      x(static_cast<Eigen::Index>(blocking)) =
          blocking_side == Bound::kLower ? problem.lower[blocking] : problem.upper[blocking];
    }
  }

  result.x.assign(x.data(), x.data() + x.size());
  for (std::size_t k = 0; k < nv; ++k) {
    result.x[k] = std::clamp(result.x[k], problem.lower[k], problem.upper[k]);
  }
  result.objective = problem.evaluate(result.x);
  result.kkt_residual = qp_kkt_residual(problem, result.x, tol);
  return result;
}

}  // namespace gasnet
