#include "symcone/sampling.hpp"

#include "symcone/jordan.hpp"

namespace symcone {

Eigen::VectorXd random_gaussian(int n, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

Element random_element(const Algebra& algebra, Rng& rng) {
  return Element(algebra, random_gaussian(algebra.dim(), rng));
}

Element random_interior(const Algebra& algebra, Rng& rng, double spread) {
  return exp(spread * random_element(algebra, rng));
}

Eigen::MatrixXd random_orthogonal(int n, Rng& rng, bool proper) {
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j) g.col(j) = random_gaussian(n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  if (proper && q.determinant() < 0.0) q.col(0) *= -1.0;
  return q;
}

}  // namespace symcone
