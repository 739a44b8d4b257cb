#pragma once

#include <vector>

#include "symcone/algebra.hpp"
#include "symcone/jordan.hpp"

namespace symcone {

/// The point e with F''(e) = I together with -F'(e).
struct FUnitPair {
  Element e;
  Element e_inv;
};

/// F(x) = c0 - sum_i c_i ln det_i(x_i) over the irreducible blocks of the cone,
/// with every c_i >= 1. The parameter is nu = sum_i c_i r_i.
///
/// Derivatives are taken with respect to the trace inner product, so on each
/// block the gradient is -c_i x_i^{-1} and the Hessian is c_i P(x_i)^{-1}.
class SelfScaledBarrier {
 public:
  /// `weights` holds either one entry per irreducible block, one entry per
  /// leaf of the descriptor (repeated over that leaf's blocks), or a single
  /// entry used for every block. Throws InputError for weights below 1.
  SelfScaledBarrier(Algebra cone, std::vector<double> weights, double offset = 0.0);

  /// Every weight 1, offset 0: the standard -ln det barrier.
  static SelfScaledBarrier standard(Algebra cone);

  const Algebra& cone() const { return cone_; }
  /// One weight per irreducible block.
  const std::vector<double>& weights() const { return weights_; }
  double offset() const { return offset_; }
  double nu() const { return nu_; }

  double value(const Element& x) const;
  Element gradient(const Element& x) const;
  LinearOperator hessian(const Element& x) const;
  LinearOperator hessian_inverse(const Element& x) const;

  /// Conjugate sup_x { -<x, s> - F(x) }, evaluated in closed form.
  double dual_value(const Element& s) const;
  Element dual_gradient(const Element& s) const;
  LinearOperator dual_hessian(const Element& s) const;

  /// The unique interior w with hessian(w) x = s (Nesterov-Todd point).
  Element scaling_point(const Element& x, const Element& s) const;

  FUnitPair f_unit() const;

 private:
  struct LeafTerm {
    Algebra algebra;
    LeafInfo info;
    Eigen::VectorXd weights;  // per coordinate for orthant leaves, size 1 otherwise
  };

  void require_interior(const Element& x, const char* what) const;
  Eigen::VectorXd leaf_segment(const Element& x, const LeafTerm& term) const;

  Algebra cone_;
  std::vector<double> weights_;
  double offset_ = 0.0;
  double nu_ = 0.0;
  std::vector<LeafTerm> terms_;
};

/// ln phi_K(x) up to one additive constant per irreducible block, normalized
/// so the constant is zero: sum_i -(n_i / r_i) ln det_i(x_i).
double characteristic_function_log(const Algebra& cone, const Element& x);

}  // namespace symcone
