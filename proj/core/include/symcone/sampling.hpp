#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

#include "symcone/algebra.hpp"

namespace symcone {

using Rng = std::mt19937_64;

/// Standard normal coordinates.
Element random_element(const Algebra& algebra, Rng& rng);

/// exp(spread * g) for a random element g; every eigenvalue is positive and
/// the frame is uniformly scrambled within each leaf.
Element random_interior(const Algebra& algebra, Rng& rng, double spread = 0.5);

/// Haar-distributed orthogonal matrix; `proper` forces determinant +1.
Eigen::MatrixXd random_orthogonal(int n, Rng& rng, bool proper = true);

Eigen::VectorXd random_gaussian(int n, Rng& rng);

}  // namespace symcone
