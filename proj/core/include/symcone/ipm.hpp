#pragma once

#include <string>
#include <vector>

#include "symcone/barrier.hpp"

namespace symcone {

/// The pair  min <x, s0> over x in (L + x0) ∩ K  and  s in (L^perp + s0) ∩ K.
/// Orthogonality is with respect to the trace inner product.
struct ConicProblem {
  Algebra cone;
  SelfScaledBarrier barrier;
  Eigen::MatrixXd l;  // trace-orthonormal columns
  Element x0;
  Element s0;

  Eigen::VectorXd project_l(const Eigen::VectorXd& v) const;
  Eigen::VectorXd project_l_perp(const Eigen::VectorXd& v) const;
};

/// Orthonormalizes the columns of `l_columns` under the trace form. Throws
/// InputError when x0 or s0 is not interior or the columns are dependent
/// (relative pivot below 1e-10), DimensionError on shape mismatch.
ConicProblem build_problem(const Algebra& cone, const SelfScaledBarrier& barrier,
                           const Eigen::MatrixXd& l_columns, const Element& x0, const Element& s0);

struct IterateState {
  Element x;
  Element s;
  double mu = 0.0;
  int iteration = 0;
  double primal_residual = 0.0;  // distance of x - x0 from L, relative
  double dual_residual = 0.0;    // distance of s - s0 from L^perp, relative
  double complementarity = 0.0;  // <x, s>
};

IterateState make_state(const ConicProblem& problem, const Element& x, const Element& s,
                        int iteration);

struct Direction {
  Element dx;
  Element ds;
  Element w;  // scaling point used
};

/// Solves F''(w) dx + ds = sigma mu (-F'(x)) - s with dx in L and ds in L^perp.
/// Throws NumericalError if the reduced system is not positive definite.
Direction nt_direction(const ConicProblem& problem, const IterateState& state, double sigma);

struct SolveOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-9;
  int max_iter = 200;
  double sigma = 0.1;
  double step_frac = 0.9;
};

enum class SolveStatus { Optimal, IterationLimit, NumericalFailure };

std::string to_string(SolveStatus status);
SolveStatus solve_status_from_string(const std::string& text);

struct IterationRecord {
  int iteration = 0;
  double mu = 0.0;
  double gap = 0.0;
  double alpha = 0.0;
  double orthogonality = 0.0;     // |<dx, ds>| / (||dx|| ||ds||)
  double gap_identity = 0.0;      // relative defect of <x+, s+> = (1 - alpha (1 - sigma)) <x, s>
  double scaling_residual = 0.0;  // ||F''(w) x - s|| / ||s||
};

struct Solution {
  Solution(Element x_, Element s_) : x(std::move(x_)), s(std::move(s_)) {}

  Element x;
  Element s;
  double objective = 0.0;       // <x, s0>
  double dual_objective = 0.0;  // <x0, s0> - <x0, s>
  double gap = 0.0;             // <x, s>
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::IterationLimit;
  std::string message;
  std::vector<IterationRecord> history;
};

Solution solve(const ConicProblem& problem, const SolveOptions& options = {});

}  // namespace symcone
