#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "symcone/algebra.hpp"

namespace symcone {

/// Dense dim x dim matrix acting on coordinates.
using LinearOperator = Eigen::MatrixXd;

/// Eigenvalues sorted descending with a Jordan frame of primitive idempotents.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  std::vector<Element> frame;

  /// sum_i f(lambda_i) e_i
  Element reconstruct(const std::function<double(double)>& f) const;
  Element reconstruct() const;
};

enum class Membership { Interior, Boundary, Exterior };

inline constexpr double kInteriorTol = 1e-9;
inline constexpr double kIdentityTol = 1e-8;

Element jordan_product(const Element& a, const Element& b);

/// Matrix of the multiplication operator L(x): y -> x o y.
LinearOperator multiplication_operator(const Element& x);

/// P(x) = 2 L(x)^2 - L(x^2). Block diagonal over the leaves.
LinearOperator quadratic_representation(const Element& x);

/// Trace-form inner product tr(a o b).
double inner(const Element& a, const Element& b);
double norm(const Element& x);
double trace(const Element& x);

SpectralDecomposition spectral_decompose(const Element& x);
Eigen::VectorXd eigenvalues(const Element& x);
double min_eigenvalue(const Element& x);

double determinant(const Element& x);
/// sum_i ln lambda_i; throws DomainError unless every lambda_i > 0.
double log_determinant(const Element& x);

/// Spectral calculus: sum_i f(lambda_i) e_i.
Element apply_spectral(const Element& x, const std::function<double(double)>& f);

Element inverse(const Element& x);
Element sqrt(const Element& x);
/// x^t for interior x (any real t) or for integer t >= 0.
Element scale_power(const Element& x, double t);
Element exp(const Element& x);

Membership membership(const Element& x, double tol = kInteriorTol);
/// Strict positivity of the spectrum: every lambda_i > 0.
bool is_interior(const Element& x);

/// Largest alpha with x + alpha * dx in the closed cone (infinity when dx
/// keeps the iterate inside for every alpha >= 0). x must be interior.
double max_step_to_boundary(const Element& x, const Element& dx);

/// Matrix of y -> adjoint(A) y under the trace form.
LinearOperator adjoint(const Algebra& algebra, const LinearOperator& a);

/// Lower-level svec helpers for the SymPSD family.
namespace svec {
int size(int k);
Eigen::VectorXd pack(const Eigen::MatrixXd& m);
Eigen::MatrixXd unpack(const Eigen::VectorXd& v, int k);
/// Order k of a packed vector of length k(k+1)/2; throws on bad length.
int order(int packed_length);
}  // namespace svec

}  // namespace symcone
