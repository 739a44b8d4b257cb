#pragma once

#include <cstdint>
#include <vector>

#include "symcone/barrier.hpp"
#include "symcone/verification.hpp"

namespace symcone {

/// A = Q(u) H with u interior and H an orthogonal automorphism fixing the identity.
struct PolarDecomposition {
  Element u;
  LinearOperator h;
  double residual = 0.0;
};

/// Q(u) = P(u). Throws DomainError unless u is interior.
LinearOperator quad_automorphism(const Element& u);

/// A random element of the identity component of the stabilizer of the
/// identity: identity on orthant blocks, 1 (+) R on Lorentz blocks,
/// X -> O X O^T on SymPSD blocks and identity on custom blocks.
LinearOperator orthogonal_automorphism_sample(const Algebra& cone, std::uint64_t seed);

/// 1 (+) r acting on Lorentz(n) coordinates; r is n x n.
LinearOperator lorentz_rotation_operator(const Eigen::MatrixXd& r);

/// X -> O X O^T in svec coordinates.
LinearOperator congruence_operator(const Eigen::MatrixXd& o);

/// True when every one of `samples` random interior points is mapped into the cone.
bool maps_cone_into_itself(const Algebra& cone, const LinearOperator& a, int samples,
                           std::uint64_t seed);

/// Throws InputError if A fails the sampled automorphism check or A f is not interior.
PolarDecomposition polar_decompose(const LinearOperator& a, const Algebra& cone,
                                   std::uint64_t seed = 0);

/// One record, tag "isotropy": |F(Hx) - F(x)| <= tol (1 + |F(x)|) on sampled x.
VerificationReport isotropy_check(const SelfScaledBarrier& barrier, const LinearOperator& h,
                                  int trials, std::uint64_t seed, double tol = 1e-8);

struct FrameRestriction {
  double measured = 0.0;   // F(sum alpha_i e_i) - c0
  double predicted = 0.0;  // -(nu / r) sum ln alpha_i
};

/// The frame comes from the spectral decomposition of a seeded random interior
/// point. Requires an irreducible cone and rank-many positive alphas.
FrameRestriction frame_restriction_check(const SelfScaledBarrier& barrier,
                                         const std::vector<double>& alphas,
                                         std::uint64_t frame_seed);

/// H = P(p^{-1}) P(u) P(v) with p = (P(u) v^2)^{1/2}: a product of quadratic
/// representations that is orthogonal and fixes the identity.
struct QuadraticProduct {
  LinearOperator h;
  std::vector<Element> factors;  // p^{-1}, u, v
};

QuadraticProduct orthogonal_from_quadratic_product(const Element& u, const Element& v);

}  // namespace symcone
