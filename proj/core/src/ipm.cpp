#include "symcone/ipm.hpp"

#include <cmath>
#include <sstream>

#include "symcone/errors.hpp"
#include "symcone/jordan.hpp"

namespace symcone {

Eigen::VectorXd ConicProblem::project_l(const Eigen::VectorXd& v) const {
  return l * (l.transpose() * cone.metric().cwiseProduct(v));
}

Eigen::VectorXd ConicProblem::project_l_perp(const Eigen::VectorXd& v) const {
  return v - project_l(v);
}

ConicProblem build_problem(const Algebra& cone, const SelfScaledBarrier& barrier,
                           const Eigen::MatrixXd& l_columns, const Element& x0, const Element& s0) {
  if (barrier.cone() != cone) {
    throw DimensionError("barrier cone " + barrier.cone().to_string() + " differs from problem cone " +
                         cone.to_string());
  }
  const int n = cone.dim();
  if (l_columns.rows() != n) {
    std::ostringstream msg;
    msg << "L has " << l_columns.rows() << " rows, cone dimension is " << n;
    throw DimensionError(msg.str());
  }
  if (x0.algebra != cone || s0.algebra != cone) {
    throw DimensionError("x0 and s0 must be elements of " + cone.to_string());
  }
  if (membership(x0) != Membership::Interior) throw InputError("x0 not interior");
  if (membership(s0) != Membership::Interior) throw InputError("s0 not interior");

  const Eigen::VectorXd root = cone.metric().cwiseSqrt();
  const auto k = l_columns.cols();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, k);
  if (k > 0) {
    if (k > n) throw InputError("L has more columns than the cone dimension");
    const Eigen::MatrixXd scaled = root.asDiagonal() * l_columns;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const double lead = std::abs(r(0, 0));
    for (Eigen::Index i = 0; i < k; ++i) {
      if (!(std::abs(r(i, i)) > 1e-10 * lead)) {
        throw InputError("L columns are linearly dependent");
      }
    }
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
    l = root.cwiseInverse().asDiagonal() * q;
  }
  return ConicProblem{cone, barrier, std::move(l), x0, s0};
}

IterateState make_state(const ConicProblem& p, const Element& x, const Element& s, int iteration) {
  IterateState st{x, s};
  st.iteration = iteration;
  st.complementarity = inner(x, s);
  st.mu = st.complementarity / p.barrier.nu();
  const Element dx(p.cone, p.project_l_perp(x.coords - p.x0.coords));
  const Element ds(p.cone, p.project_l(s.coords - p.s0.coords));
  st.primal_residual = norm(dx) / (1.0 + norm(p.x0));
  st.dual_residual = norm(ds) / (1.0 + norm(p.s0));
  return st;
}

Direction nt_direction(const ConicProblem& p, const IterateState& st, double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw InputError("centering parameter must lie in [0, 1]");
  const SelfScaledBarrier& b = p.barrier;
  Element w = b.scaling_point(st.x, st.s);
  const LinearOperator hw = b.hessian(w);
  const Eigen::VectorXd r = sigma * st.mu * (-b.gradient(st.x).coords) - st.s.coords;
  const Eigen::VectorXd& g = p.cone.metric();

  Eigen::VectorXd dx = Eigen::VectorXd::Zero(p.cone.dim());
  if (p.l.cols() > 0) {
    const Eigen::MatrixXd lg = p.l.transpose() * g.asDiagonal();
    Eigen::MatrixXd reduced = lg * hw * p.l;
    reduced = 0.5 * (reduced + reduced.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(reduced);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("reduced Newton system is not positive definite");
    }
    dx = p.l * llt.solve(lg * r);
  }
  const Eigen::VectorXd ds = p.project_l_perp(r - hw * dx);
  return {Element(p.cone, dx), Element(p.cone, ds), std::move(w)};
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::IterationLimit: return "iteration_limit";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "numerical_failure";
}

SolveStatus solve_status_from_string(const std::string& text) {
  if (text == "optimal") return SolveStatus::Optimal;
  if (text == "iteration_limit") return SolveStatus::IterationLimit;
  if (text == "numerical_failure") return SolveStatus::NumericalFailure;
  throw InputError("unknown solve status '" + text + "'");
}

Solution solve(const ConicProblem& p, const SolveOptions& opt) {
  if (!(opt.step_frac > 0.0 && opt.step_frac < 1.0)) {
    throw InputError("step_frac must lie in (0, 1)");
  }
  const double gap_target = opt.gap_tol * (1.0 + std::abs(inner(p.x0, p.s0)));
  Element x = p.x0;
  Element s = p.s0;
  Solution sol{x, s};

  auto finish = [&](SolveStatus status, std::string message, const IterateState& st) {
    sol.x = st.x;
    sol.s = st.s;
    sol.objective = inner(st.x, p.s0);
    sol.dual_objective = inner(p.x0, p.s0) - inner(p.x0, st.s);
    sol.gap = st.complementarity;
    sol.primal_residual = st.primal_residual;
    sol.dual_residual = st.dual_residual;
    sol.status = status;
    sol.message = std::move(message);
    return sol;
  };

  for (int iter = 0;; ++iter) {
    const IterateState st = make_state(p, x, s, iter);
    sol.iterations = iter;
    if (st.complementarity <= gap_target && st.primal_residual <= opt.feas_tol &&
        st.dual_residual <= opt.feas_tol) {
      return finish(SolveStatus::Optimal, "converged", st);
    }
    if (iter >= opt.max_iter) return finish(SolveStatus::IterationLimit, "iteration limit", st);

    IterationRecord rec;
    rec.iteration = iter;
    rec.mu = st.mu;
    rec.gap = st.complementarity;
    Direction d{x, s, x};
    try {
      d = nt_direction(p, st, opt.sigma);
    } catch (const std::exception& err) {
      return finish(SolveStatus::NumericalFailure, err.what(), st);
    }
    const double reach = std::min(max_step_to_boundary(x, d.dx), max_step_to_boundary(s, d.ds));
    const double alpha = std::min(1.0, opt.step_frac * reach);
    if (!(alpha > 1e-14)) return finish(SolveStatus::NumericalFailure, "step length collapsed", st);

    const Element xn = x + alpha * d.dx;
    const Element sn = s + alpha * d.ds;
    if (!is_interior(xn) || !is_interior(sn)) {
      return finish(SolveStatus::NumericalFailure, "iterate left the interior", st);
    }
    const double ndx = norm(d.dx), nds = norm(d.ds);
    rec.alpha = alpha;
    rec.orthogonality = (ndx > 0.0 && nds > 0.0) ? std::abs(inner(d.dx, d.ds)) / (ndx * nds) : 0.0;
    rec.gap_identity =
        std::abs(inner(xn, sn) - (1.0 - alpha * (1.0 - opt.sigma)) * st.complementarity) /
        st.complementarity;
    rec.scaling_residual =
        (p.barrier.hessian(d.w) * x.coords - s.coords).norm() / s.coords.norm();
    sol.history.push_back(rec);
    x = xn;
    s = sn;
  }
}

}  // namespace symcone
